import { ExtensionContext, window, workspace } from "vscode";
import {
  LanguageClient,
  LanguageClientOptions,
  ServerOptions,
} from "vscode-languageclient/node";
import { DEFAULT_COMMAND, resolveServerCommand } from "./binary";

let client: LanguageClient | undefined;

export async function activate(context: ExtensionContext) {
  const configured = workspace
    .getConfiguration("datadesc")
    .get<string>("server.path");
  const command = resolveServerCommand(configured, process.env.PATH);
  if (!command) {
    window.showErrorMessage(
      `DataDesc: language server executable '${configured || DEFAULT_COMMAND}' not found. ` +
        "Install the datadesc package or point datadesc.server.path at it.",
    );
    return; // no client — the extension stays inactive
  }

  const serverOptions: ServerOptions = { command, args: ["lsp"] };
  const clientOptions: LanguageClientOptions = {
    documentSelector: [{ scheme: "file", language: "datadesc" }],
    outputChannelName: "DataDesc",
  };
  client = new LanguageClient("datadesc", "DataDesc", serverOptions, clientOptions);
  try {
    await client.start();
  } catch (err) {
    window.showErrorMessage(`DataDesc: language server failed to start: ${err}`);
    client = undefined;
    return;
  }
  context.subscriptions.push(client);
}

export function deactivate(): Thenable<void> | undefined {
  return client?.stop();
}
