import { ChildProcessWithoutNullStreams, spawn } from "node:child_process";

type Json = Record<string, unknown>;

/** Minimal JSON-RPC client over a child process's stdio, LSP framing. */
export class ServerProcess {
  private proc: ChildProcessWithoutNullStreams;
  private buffer = Buffer.alloc(0);
  private queue: Json[] = [];
  private waiters: Array<(msg: Json) => void> = [];
  private nextId = 1;
  readonly exited: Promise<number | null>;

  constructor(command: string, args: string[]) {
    this.proc = spawn(command, args, { stdio: ["pipe", "pipe", "pipe"] });
    this.proc.stdout.on("data", (chunk: Buffer) => this.feed(chunk));
    this.exited = new Promise((resolve) => {
      this.proc.on("exit", (code) => resolve(code));
    });
  }

  private feed(chunk: Buffer): void {
    this.buffer = Buffer.concat([this.buffer, chunk]);
    for (;;) {
      const headerEnd = this.buffer.indexOf("\r\n\r\n");
      if (headerEnd < 0) {
        return;
      }
      const header = this.buffer.subarray(0, headerEnd).toString("ascii");
      const match = /Content-Length: *(\d+)/i.exec(header);
      if (!match) {
        throw new Error(`frame without Content-Length: ${header}`);
      }
      const length = Number(match[1]);
      const start = headerEnd + 4;
      if (this.buffer.length < start + length) {
        return;
      }
      const body = this.buffer.subarray(start, start + length).toString("utf8");
      this.buffer = this.buffer.subarray(start + length);
      const msg = JSON.parse(body) as Json;
      const waiter = this.waiters.shift();
      if (waiter) {
        waiter(msg);
      } else {
        this.queue.push(msg);
      }
    }
  }

  private nextMessage(timeoutMs: number): Promise<Json> {
    const queued = this.queue.shift();
    if (queued !== undefined) {
      return Promise.resolve(queued);
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error(`no server message within ${timeoutMs} ms`)),
        timeoutMs,
      );
      this.waiters.push((msg) => {
        clearTimeout(timer);
        resolve(msg);
      });
    });
  }

  private send(msg: Json): void {
    const body = Buffer.from(JSON.stringify({ jsonrpc: "2.0", ...msg }), "utf8");
    this.proc.stdin.write(`Content-Length: ${body.length}\r\n\r\n`);
    this.proc.stdin.write(body);
  }

  notify(method: string, params?: unknown): void {
    this.send({ method, params });
  }

  /** Send a request and await its response; unrelated messages are kept. */
  async request(method: string, params?: unknown, timeoutMs = 5000): Promise<any> {
    const id = this.nextId++;
    this.send({ id, method, params });
    const skipped: Json[] = [];
    for (;;) {
      const msg = await this.nextMessage(timeoutMs);
      if (msg.id === id) {
        this.queue.unshift(...skipped);
        if (msg.error) {
          throw new Error(`${method} failed: ${JSON.stringify(msg.error)}`);
        }
        return msg.result;
      }
      skipped.push(msg);
    }
  }

  /** Await the next notification with the given method, dropping others. */
  async waitForNotification(method: string, timeoutMs = 5000): Promise<any> {
    for (;;) {
      const msg = await this.nextMessage(timeoutMs);
      if (msg.method === method) {
        return msg.params;
      }
    }
  }

  kill(): void {
    this.proc.kill();
  }
}
