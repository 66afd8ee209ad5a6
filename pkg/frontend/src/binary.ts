import { accessSync, constants, statSync } from "node:fs";
import { delimiter, isAbsolute, join } from "node:path";

export const DEFAULT_COMMAND = "datadesc";

function runnable(file: string): boolean {
  try {
    accessSync(file, constants.X_OK);
    return statSync(file).isFile();
  } catch {
    return false;
  }
}

/**
 * Resolve the language-server executable. A configured path containing a
 * separator is taken literally; a bare name is searched on PATH. Returns
 * undefined when nothing runnable was found, so the caller can show a
 * proper message instead of spawning into an ENOENT.
 */
export function resolveServerCommand(
  configured: string | undefined,
  envPath: string | undefined,
): string | undefined {
  const wanted = configured?.trim() || DEFAULT_COMMAND;
  if (isAbsolute(wanted) || wanted.includes("/")) {
    return runnable(wanted) ? wanted : undefined;
  }
  for (const dir of (envPath ?? "").split(delimiter)) {
    if (!dir) {
      continue;
    }
    const candidate = join(dir, wanted);
    if (runnable(candidate)) {
      return candidate;
    }
  }
  return undefined;
}
