"""Language server (LSP over stdio) for `.ddesc` documents.

Full-document analysis on every change, so published diagnostics are
exactly what `parse` + `build_model` + `validate` produce in batch mode.
Completion, hover, and go-to-definition work from the lenient syntax
tree, which survives documents that are mid-edit.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, BinaryIO, Callable, Iterator

from .diagnostics import Diagnostic, Severity, SourceSpan
from .model.build import Analysis, analyze_source
from .syntax import keywords
from .syntax.parser import (
    APPLICATIONS_KEYS,
    ATTR_STAT_KEYS,
    ATTRIBUTE_KEYS,
    AUTHORING_KEYS,
    COMPOSITION_KEYS,
    DESCRIPTION_KEYS,
    FUNDER_FIELD_KEYS,
    GATHERING_KEYS,
    INSTANCE_KEYS,
    INSTANCE_STAT_KEYS,
    ISSUE_KEYS,
    LABELING_KEYS,
    METADATA_KEYS,
    PROVENANCE_KEYS,
    QUALITY_METRIC_KEYS,
    SOCIAL_KEYS,
    SOURCE_KEYS,
    TEAM_KEYS,
)
from .syntax.tree import Leaf, Node, SyntaxTree

_IDENT_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEY_PREFIX_RE = re.compile(r"^\s*([A-Za-z][A-Za-z -]*?)\s*:\s*([A-Za-z0-9_.]*)$")

_KIND_VALUE = 12      # CompletionItemKind.Value
_KIND_KEYWORD = 14    # CompletionItemKind.Keyword
_KIND_SNIPPET = 15    # CompletionItemKind.Snippet
_KIND_REFERENCE = 18  # CompletionItemKind.Reference

_METADATA_TEMPLATE = (
    "Metadata:\n"
    '  Title: ""\n'
    "  Version: v0001\n"
)

_SECTION_TEMPLATES = {
    "Metadata": _METADATA_TEMPLATE,
    "Composition": "Composition:\n  DataInstances:\n",
    "DataProvenance": "Data Provenance:\n",
    "SocialConcerns": "Social Concerns:\n",
}

_DECL_LABELS = {
    "Instance": "data instance",
    "Attribute": "attribute",
    "GatheringProcess": "gathering process",
    "LabelingProcess": "labeling process",
    "SocialIssue": "social issue",
    "Source": "data source",
}

# Node kinds that open a keyword block, with the keys valid inside.
_BLOCK_KEYS: dict[str, set[str]] = {
    "Metadata": METADATA_KEYS,
    "Applications": APPLICATIONS_KEYS,
    "Authoring": AUTHORING_KEYS,
    "Funder": FUNDER_FIELD_KEYS,
    "Composition": COMPOSITION_KEYS,
    "Instance": INSTANCE_KEYS,
    "Attribute": ATTRIBUTE_KEYS,
    "AttrStatistics": ATTR_STAT_KEYS,
    "InstanceStatistics": INSTANCE_STAT_KEYS,
    "QualityMetrics": QUALITY_METRIC_KEYS,
    "DataProvenance": PROVENANCE_KEYS,
    "GatheringProcess": GATHERING_KEYS,
    "LabelingProcess": LABELING_KEYS,
    "Source": SOURCE_KEYS,
    "LabelingTeam": TEAM_KEYS,
    "SocialConcerns": SOCIAL_KEYS,
    "SocialIssue": ISSUE_KEYS,
}


# --------------------------------------------------------------------------
# positions (LSP is 0-based with UTF-16 columns; spans are 1-based code points)


def _utf16_len(text: str) -> int:
    return sum(2 if ord(ch) > 0xFFFF else 1 for ch in text)


def _to_lsp_pos(lines: list[str], line: int, col: int) -> dict[str, int]:
    idx = line - 1
    text = lines[idx] if 0 <= idx < len(lines) else ""
    return {"line": idx, "character": _utf16_len(text[: col - 1])}


def _span_to_range(lines: list[str], span: SourceSpan) -> dict[str, Any]:
    return {
        "start": _to_lsp_pos(lines, span.start_line, span.start_col),
        "end": _to_lsp_pos(lines, span.end_line, span.end_col),
    }


def _from_lsp_pos(lines: list[str], pos: dict[str, Any]) -> tuple[int, int]:
    idx = int(pos.get("line", 0))
    target = int(pos.get("character", 0))
    text = lines[idx] if 0 <= idx < len(lines) else ""
    units = 0
    for i, ch in enumerate(text):
        if units >= target:
            return idx + 1, i + 1
        units += 2 if ord(ch) > 0xFFFF else 1
    return idx + 1, len(text) + 1


def _contains(span: SourceSpan, line: int, col: int) -> bool:
    return ((span.start_line, span.start_col) <= (line, col)
            < (span.end_line, span.end_col))


def _starts_before(span: SourceSpan, line: int, col: int) -> bool:
    return (span.start_line, span.start_col) <= (line, col)


# --------------------------------------------------------------------------
# tree lookups


def _walk_nodes(node: Node) -> Iterator[Node]:
    yield node
    for child in node.children:
        if isinstance(child, Node):
            yield from _walk_nodes(child)


def _decl_name_leaf(node: Node) -> Leaf | None:
    for child in node.children:
        if isinstance(child, Leaf) and child.kind == "Ident":
            return child
    return None


@dataclass
class DocNames:
    instances: dict[str, Leaf] = field(default_factory=dict)
    attributes: dict[str, Leaf] = field(default_factory=dict)   # qualified
    bare_attrs: dict[str, list[str]] = field(default_factory=dict)
    gathering: dict[str, Leaf] = field(default_factory=dict)
    labeling: dict[str, Leaf] = field(default_factory=dict)
    issues: dict[str, Leaf] = field(default_factory=dict)


def collect_names(tree: SyntaxTree) -> DocNames:
    names = DocNames()
    for node in _walk_nodes(tree.root):
        leaf = None
        if node.kind in ("Instance", "GatheringProcess", "LabelingProcess",
                         "SocialIssue"):
            leaf = _decl_name_leaf(node)
        if leaf is None:
            continue
        if node.kind == "Instance":
            names.instances.setdefault(leaf.text, leaf)
            for attr in _walk_nodes(node):
                if attr.kind != "Attribute":
                    continue
                attr_leaf = _decl_name_leaf(attr)
                if attr_leaf is None:
                    continue
                qualified = f"{leaf.text}.{attr_leaf.text}"
                names.attributes.setdefault(qualified, attr_leaf)
                names.bare_attrs.setdefault(attr_leaf.text, []).append(qualified)
        elif node.kind == "GatheringProcess":
            names.gathering.setdefault(leaf.text, leaf)
        elif node.kind == "LabelingProcess":
            names.labeling.setdefault(leaf.text, leaf)
        else:
            names.issues.setdefault(leaf.text, leaf)
    return names


def _leaf_path_at(tree: SyntaxTree, line: int, col: int
                  ) -> tuple[Leaf, list[Node]] | None:
    """Leaf covering the position, with its chain of enclosing nodes."""

    def search(node: Node, path: list[Node]) -> tuple[Leaf, list[Node]] | None:
        path = path + [node]
        for child in node.children:
            if isinstance(child, Leaf):
                if _contains(child.span, line, col):
                    return child, path
            elif _contains(child.span, line, col):
                found = search(child, path)
                if found is not None:
                    return found
        return None

    return search(tree.root, [])


def _path_before(tree: SyntaxTree, line: int, col: int) -> list[Node]:
    """Enclosing nodes of the last leaf at or before the position."""
    best: Leaf | None = None
    best_path: list[Node] = []

    def search(node: Node, path: list[Node]) -> None:
        nonlocal best, best_path
        path = path + [node]
        for child in node.children:
            if isinstance(child, Leaf):
                if _starts_before(child.span, line, col):
                    best, best_path = child, path
            elif _starts_before(child.span, line, col):
                search(child, path)

    search(tree.root, [])
    return best_path


# --------------------------------------------------------------------------
# documents


@dataclass
class Document:
    uri: str
    text: str
    version: int
    lines: list[str] = field(default_factory=list)
    analysis: Analysis | None = None
    names: DocNames = field(default_factory=DocNames)

    def refresh(self) -> None:
        self.lines = self.text.split("\n")
        self.analysis = analyze_source(self.text)
        self.names = collect_names(self.analysis.tree)

    @property
    def tree(self) -> SyntaxTree:
        assert self.analysis is not None
        return self.analysis.tree

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return list(self.analysis.diagnostics) if self.analysis else []


# --------------------------------------------------------------------------
# feature implementations (pure, unit-testable)


def publish_payload(doc: Document) -> dict[str, Any]:
    return {
        "uri": doc.uri,
        "version": doc.version,
        "diagnostics": [
            {
                "range": _span_to_range(doc.lines, d.span),
                "severity": 1 if d.severity is Severity.ERROR else 2,
                "code": d.code,
                "source": "datadesc",
                "message": d.message,
            }
            for d in doc.diagnostics
        ],
    }


def _item(label: str, kind: int, insert: str | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {"label": label, "kind": kind}
    if insert is not None:
        out["insertText"] = insert
    return out


def _filtered(names: list[str], fragment: str, kind: int) -> list[dict[str, Any]]:
    frag = fragment.lower()
    return [_item(n, kind) for n in sorted(names)
            if not frag or n.lower().startswith(frag)]


def _type_values(path: list[Node]) -> list[str]:
    kinds = [node.kind for node in reversed(path)]  # innermost first
    for kind in kinds:
        if kind == "LabelingTeam":
            return ["Crowdsourcing", "External", "Internal"]
        if kind in ("GatheringProcess", "LabelingProcess"):
            return []  # process type is free text
        if kind == "Funder":
            return ["mixed", "private", "public"]
        if kind == "Instance":
            return ["Linked-Data", "Record-Data", "Time-Series"]
    return []


def _block_completions(path: list[Node]) -> list[dict[str, Any]]:
    for i in range(len(path) - 1, -1, -1):
        node = path[i]
        if node.kind == "Description" and (i == 0 or path[i - 1].kind != "Metadata"):
            continue  # instance/attribute Description: is a plain property
        if node.kind == "Description":
            keys = DESCRIPTION_KEYS
        elif node.kind in _BLOCK_KEYS:
            keys = _BLOCK_KEYS[node.kind]
        else:
            continue
        items = []
        for canon in keys:
            surface = keywords.SURFACES[canon]
            items.append(_item(surface, _KIND_KEYWORD, surface + " "))
        return sorted(items, key=lambda it: it["label"])
    return _section_completions(path[0] if path else None)


def _section_completions(root: Node | None) -> list[dict[str, Any]]:
    present = {child.kind for child in root.children} if root else set()
    items = []
    for canon in keywords.SECTION_CANONS:
        if canon in present:
            continue
        items.append(_item(keywords.SURFACES[canon], _KIND_SNIPPET,
                           _SECTION_TEMPLATES[canon]))
    return sorted(items, key=lambda it: it["label"])


def completion_items(doc: Document, line: int, col: int) -> list[dict[str, Any]]:
    line_text = doc.lines[line - 1] if 0 < line <= len(doc.lines) else ""
    prefix = line_text[: col - 1]
    m = _KEY_PREFIX_RE.match(prefix)
    if m is not None:
        key = " ".join(m.group(1).split()).lower()
        fragment = m.group(2)
        names = doc.names
        if key in ("labelling process", "labeling process"):
            return _filtered(list(names.labeling), fragment, _KIND_REFERENCE)
        if key in ("labels", "related attributes"):
            return _filtered(list(names.attributes), fragment, _KIND_REFERENCE)
        if key == "social issues":
            return _filtered(list(names.issues), fragment, _KIND_REFERENCE)
        if key == "oftype":
            return _filtered(["Categorical", "Numerical"], fragment, _KIND_VALUE)
        if key in ("issuetype", "issue type"):
            return _filtered(["Bias", "Privacy"], fragment, _KIND_VALUE)
        if key == "type":
            path = _path_before(doc.tree, line, col)
            return _filtered(_type_values(path), fragment, _KIND_VALUE)
        return []
    path = _path_before(doc.tree, line, col)
    return _block_completions(path)


def _resolve_attr(names: DocNames, ref: str) -> Leaf | None:
    if "." in ref:
        return names.attributes.get(ref)
    owners = names.bare_attrs.get(ref, [])
    if len(owners) == 1:
        return names.attributes[owners[0]]
    return None


def _reference_target(doc: Document, leaf: Leaf, path: list[Node]
                      ) -> Leaf | None:
    parent = path[-1] if path else None
    if parent is None:
        return None
    names = doc.names
    if leaf.kind in ("Ident", "QualName"):
        if parent.kind == "LabelingProcessRef":
            return names.labeling.get(leaf.text)
        if parent.kind in ("Labels", "RelatedAttributes"):
            return _resolve_attr(names, leaf.text)
        if parent.kind == "SocialIssues":
            return names.issues.get(leaf.text)
        if parent.kind == "ConsistencyRule":
            if parent.value_leaves() and parent.value_leaves()[0] is leaf:
                return names.instances.get(leaf.text)
            return None
        if parent.kind == "PairCorrelation":
            for node in reversed(path):
                if node.kind == "Instance":
                    owner = _decl_name_leaf(node)
                    if owner is not None:
                        return names.attributes.get(f"{owner.text}.{leaf.text}")
            return None
    return None


def definition_at(doc: Document, line: int, col: int) -> SourceSpan | None:
    found = _leaf_path_at(doc.tree, line, col)
    if found is None:
        return None
    leaf, path = found
    if leaf.kind == "Expr" and path and path[-1].kind == "ConsistencyRule":
        context_leaves = path[-1].value_leaves()
        if not context_leaves:
            return None
        text = doc.lines[line - 1] if 0 < line <= len(doc.lines) else ""
        for m in _IDENT_WORD_RE.finditer(text):
            if m.start() < col <= m.end():
                target = doc.names.attributes.get(
                    f"{context_leaves[0].text}.{m.group(0)}")
                return target.span if target is not None else None
        return None
    target = _reference_target(doc, leaf, path)
    return target.span if target is not None else None


def hover_at(doc: Document, line: int, col: int) -> str | None:
    found = _leaf_path_at(doc.tree, line, col)
    if found is None:
        return None
    leaf, path = found
    parent = path[-1] if path else None
    if leaf.kind == "Keyword":
        surface = keywords.SURFACES.get(str(leaf.value), leaf.text)
        return f"keyword `{surface}`"
    target = _reference_target(doc, leaf, path)
    if target is not None and parent is not None:
        category = {
            "LabelingProcessRef": "labeling process",
            "Labels": "attribute",
            "RelatedAttributes": "attribute",
            "SocialIssues": "social issue",
            "ConsistencyRule": "data instance",
            "PairCorrelation": "attribute",
        }.get(parent.kind, "element")
        return f"**{leaf.text}** — {category}"
    if parent is not None and parent.kind in _DECL_LABELS \
            and _decl_name_leaf(parent) is leaf:
        return f"**{leaf.text}** — {_DECL_LABELS[parent.kind]}"
    return None


# --------------------------------------------------------------------------
# the server


class LanguageServer:
    def __init__(self, reader: BinaryIO, writer: BinaryIO):
        self.reader = reader
        self.writer = writer
        self.documents: dict[str, Document] = {}
        self._saw_shutdown = False
        self._handlers: dict[str, Callable[[dict[str, Any]], Any]] = {
            "initialize": self._on_initialize,
            "initialized": lambda params: None,
            "shutdown": self._on_shutdown,
            "textDocument/didOpen": self._on_did_open,
            "textDocument/didChange": self._on_did_change,
            "textDocument/didClose": self._on_did_close,
            "textDocument/didSave": lambda params: None,
            "textDocument/completion": self._on_completion,
            "textDocument/hover": self._on_hover,
            "textDocument/definition": self._on_definition,
        }

    # -- transport -------------------------------------------------------

    def _read_message(self) -> dict[str, Any] | None:
        length: int | None = None
        while True:
            header = self.reader.readline()
            if not header:
                return None
            header = header.strip()
            if not header:
                break
            if header.lower().startswith(b"content-length:"):
                length = int(header.split(b":", 1)[1])
        if length is None:
            return None
        body = b""
        while len(body) < length:
            chunk = self.reader.read(length - len(body))
            if not chunk:
                return None
            body += chunk
        return json.loads(body.decode("utf-8"))

    def _send(self, payload: dict[str, Any]) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.writer.write(
            b"Content-Length: " + str(len(body)).encode("ascii") + b"\r\n\r\n" + body
        )
        self.writer.flush()

    def _respond(self, msg_id: Any, result: Any) -> None:
        self._send({"jsonrpc": "2.0", "id": msg_id, "result": result})

    def _respond_error(self, msg_id: Any, code: int, message: str) -> None:
        self._send({"jsonrpc": "2.0", "id": msg_id,
                    "error": {"code": code, "message": message}})

    def _notify(self, method: str, params: dict[str, Any]) -> None:
        self._send({"jsonrpc": "2.0", "method": method, "params": params})

    # -- main loop ---------------------------------------------------------

    def serve_forever(self) -> int:
        while True:
            message = self._read_message()
            if message is None:
                return 1
            if message.get("method") == "exit":
                return 0 if self._saw_shutdown else 1
            self._dispatch(message)

    def _dispatch(self, message: dict[str, Any]) -> None:
        method = message.get("method")
        msg_id = message.get("id")
        if method is None:
            return  # response to a server-initiated request; none are sent
        handler = self._handlers.get(method)
        if handler is None:
            if msg_id is not None:
                self._respond_error(msg_id, -32601, f"method not found: {method}")
            return
        try:
            result = handler(message.get("params") or {})
        except Exception as exc:  # never let one request kill the server
            if msg_id is not None:
                self._respond_error(msg_id, -32603,
                                    f"{type(exc).__name__}: {exc}")
            return
        if msg_id is not None:
            self._respond(msg_id, result)

    # -- lifecycle ---------------------------------------------------------

    def _on_initialize(self, params: dict[str, Any]) -> dict[str, Any]:
        from . import __version__

        return {
            "capabilities": {
                "textDocumentSync": {"openClose": True, "change": 1},
                "completionProvider": {"triggerCharacters": [":", " ", "."]},
                "hoverProvider": True,
                "definitionProvider": True,
            },
            "serverInfo": {"name": "datadesc", "version": __version__},
        }

    def _on_shutdown(self, params: dict[str, Any]) -> None:
        self._saw_shutdown = True
        return None

    # -- document sync -----------------------------------------------------

    def _on_did_open(self, params: dict[str, Any]) -> None:
        td = params["textDocument"]
        doc = Document(uri=td["uri"], text=td.get("text", ""),
                       version=int(td.get("version", 0)))
        doc.refresh()
        self.documents[doc.uri] = doc
        self._notify("textDocument/publishDiagnostics", publish_payload(doc))

    def _on_did_change(self, params: dict[str, Any]) -> None:
        td = params["textDocument"]
        doc = self.documents.get(td["uri"])
        if doc is None:
            return
        version = int(td.get("version", 0))
        if version <= doc.version:
            return  # stale update
        changes = params.get("contentChanges") or []
        if not changes:
            return
        doc.text = changes[-1].get("text", "")
        doc.version = version
        doc.refresh()
        self._notify("textDocument/publishDiagnostics", publish_payload(doc))

    def _on_did_close(self, params: dict[str, Any]) -> None:
        uri = params["textDocument"]["uri"]
        if uri in self.documents:
            del self.documents[uri]
            self._notify("textDocument/publishDiagnostics",
                         {"uri": uri, "diagnostics": []})

    # -- language features ---------------------------------------------------

    def _doc_and_position(self, params: dict[str, Any]
                          ) -> tuple[Document, int, int] | None:
        doc = self.documents.get(params["textDocument"]["uri"])
        if doc is None:
            return None
        line, col = _from_lsp_pos(doc.lines, params.get("position", {}))
        return doc, line, col

    def _on_completion(self, params: dict[str, Any]) -> list[dict[str, Any]]:
        found = self._doc_and_position(params)
        if found is None:
            return []
        doc, line, col = found
        return completion_items(doc, line, col)

    def _on_hover(self, params: dict[str, Any]) -> dict[str, Any] | None:
        found = self._doc_and_position(params)
        if found is None:
            return None
        doc, line, col = found
        text = hover_at(doc, line, col)
        if text is None:
            return None
        return {"contents": {"kind": "markdown", "value": text}}

    def _on_definition(self, params: dict[str, Any]) -> dict[str, Any] | None:
        found = self._doc_and_position(params)
        if found is None:
            return None
        doc, line, col = found
        span = definition_at(doc, line, col)
        if span is None:
            return None
        return {"uri": doc.uri, "range": _span_to_range(doc.lines, span)}


def serve_stdio() -> int:
    import sys

    server = LanguageServer(sys.stdin.buffer, sys.stdout.buffer)
    return server.serve_forever()
