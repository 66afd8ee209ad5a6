"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.activate = activate;
exports.deactivate = deactivate;
const vscode_1 = require("vscode");
const node_1 = require("vscode-languageclient/node");
const binary_1 = require("./binary");
let client;
async function activate(context) {
    const configured = vscode_1.workspace
        .getConfiguration("datadesc")
        .get("server.path");
    const command = (0, binary_1.resolveServerCommand)(configured, process.env.PATH);
    if (!command) {
        vscode_1.window.showErrorMessage(`DataDesc: language server executable '${configured || binary_1.DEFAULT_COMMAND}' not found. ` +
            "Install the datadesc package or point datadesc.server.path at it.");
        return; // no client — the extension stays inactive
    }
    const serverOptions = { command, args: ["lsp"] };
    const clientOptions = {
        documentSelector: [{ scheme: "file", language: "datadesc" }],
        outputChannelName: "DataDesc",
    };
    client = new node_1.LanguageClient("datadesc", "DataDesc", serverOptions, clientOptions);
    try {
        await client.start();
    }
    catch (err) {
        vscode_1.window.showErrorMessage(`DataDesc: language server failed to start: ${err}`);
        client = undefined;
        return;
    }
    context.subscriptions.push(client);
}
function deactivate() {
    return client?.stop();
}
//# sourceMappingURL=extension.js.map