"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.DEFAULT_COMMAND = void 0;
exports.resolveServerCommand = resolveServerCommand;
const node_fs_1 = require("node:fs");
const node_path_1 = require("node:path");
exports.DEFAULT_COMMAND = "datadesc";
function runnable(file) {
    try {
        (0, node_fs_1.accessSync)(file, node_fs_1.constants.X_OK);
        return (0, node_fs_1.statSync)(file).isFile();
    }
    catch {
        return false;
    }
}
/**
 * Resolve the language-server executable. A configured path containing a
 * separator is taken literally; a bare name is searched on PATH. Returns
 * undefined when nothing runnable was found, so the caller can show a
 * proper message instead of spawning into an ENOENT.
 */
function resolveServerCommand(configured, envPath) {
    const wanted = configured?.trim() || exports.DEFAULT_COMMAND;
    if ((0, node_path_1.isAbsolute)(wanted) || wanted.includes("/")) {
        return runnable(wanted) ? wanted : undefined;
    }
    for (const dir of (envPath ?? "").split(node_path_1.delimiter)) {
        if (!dir) {
            continue;
        }
        const candidate = (0, node_path_1.join)(dir, wanted);
        if (runnable(candidate)) {
            return candidate;
        }
    }
    return undefined;
}
//# sourceMappingURL=binary.js.map