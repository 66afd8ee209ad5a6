"""Character-level scanner driven by the parser.

There is no fixed token stream: several value shapes (free phrases,
rule expressions) extend to the end of the line, so the parser asks the
scanner for exactly the shape it expects next. `//` starts a comment
that runs to the end of the line. Positions are 1-based.
"""

from __future__ import annotations

import datetime as _dt
import re
from dataclasses import dataclass

from ..diagnostics import SourceSpan
from .keywords import COMPILED

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"\d+")
_NUMBER_RE = re.compile(r"[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_DATE_RE = re.compile(r"\d{2}-\d{2}-\d{4}")
_FREE_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:[ \t]+[A-Za-z_][A-Za-z0-9_]*)*[ \t]*:")
_BOUNDARY_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.")


class ScanError(Exception):
    def __init__(self, code: str, message: str, span: SourceSpan):
        super().__init__(message)
        self.code = code
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Mark:
    pos: int
    line: int
    col: int


class Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    # -- position bookkeeping -------------------------------------------

    def mark(self) -> Mark:
        return Mark(self.pos, self.line, self.col)

    def rewind(self, mark: Mark) -> None:
        self.pos, self.line, self.col = mark.pos, mark.line, mark.col

    def _advance_to(self, new_pos: int) -> None:
        for ch in self.text[self.pos:new_pos]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos = new_pos

    def span_from(self, mark: Mark) -> SourceSpan:
        return SourceSpan(mark.line, mark.col, self.line, self.col)

    def point_span(self) -> SourceSpan:
        return SourceSpan(self.line, self.col, self.line, self.col + 1)

    @property
    def at_eof(self) -> bool:
        return self.pos >= len(self.text)

    def _peek_char(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    # -- trivia -----------------------------------------------------------

    def skip_trivia(self, *, newlines: bool = True) -> None:
        """Skip spaces, tabs, carriage returns, comments, and optionally newlines."""
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r":
                self._advance_to(self.pos + 1)
            elif ch == "\n" and newlines:
                self._advance_to(self.pos + 1)
            elif self.text.startswith("//", self.pos):
                end = self.text.find("\n", self.pos)
                self._advance_to(len(self.text) if end < 0 else end)
            else:
                return

    def at_line_end(self) -> bool:
        self.skip_trivia(newlines=False)
        return self.at_eof or self._peek_char() == "\n"

    def skip_to_eol(self) -> None:
        end = self.text.find("\n", self.pos)
        self._advance_to(len(self.text) if end < 0 else end)

    # -- keywords ---------------------------------------------------------

    def peek_keyword(self, allowed: set[str] | None = None) -> tuple[str, re.Match[str]] | None:
        """Longest keyword whose canon is in `allowed` (or any) at this position."""
        self.skip_trivia()
        for kw, pattern in COMPILED:
            if allowed is not None and kw.canon not in allowed:
                continue
            m = pattern.match(self.text, self.pos)
            if m:
                return kw.canon, m
        return None

    def take_keyword(self, allowed: set[str] | None = None) -> tuple[str, str, SourceSpan] | None:
        found = self.peek_keyword(allowed)
        if found is None:
            return None
        canon, m = found
        start = self.mark()
        self._advance_to(m.end())
        return canon, m.group(), self.span_from(start)

    def peek_free_key(self) -> bool:
        """True when an `Ident [Ident…]:` line (demographic pair) starts here."""
        self.skip_trivia()
        return _FREE_KEY_RE.match(self.text, self.pos) is not None

    def take_free_key(self) -> tuple[str, str, SourceSpan]:
        self.skip_trivia()
        m = _FREE_KEY_RE.match(self.text, self.pos)
        if m is None:
            raise ScanError("E001", "expected a demographic key", self.point_span())
        start = self.mark()
        self._advance_to(m.end())
        key = re.sub(r"[ \t]+", " ", m.group()[:-1].strip())
        return key, m.group(), self.span_from(start)

    # -- value shapes -------------------------------------------------------

    def _boundary_ok(self) -> bool:
        return self._peek_char() not in _BOUNDARY_CHARS

    def take_punct(self, text: str) -> tuple[str, SourceSpan]:
        self.skip_trivia(newlines=False)
        if not self.text.startswith(text, self.pos):
            raise ScanError("E001", f"expected {text!r}", self.point_span())
        start = self.mark()
        self._advance_to(self.pos + len(text))
        return text, self.span_from(start)

    def try_punct(self, text: str) -> tuple[str, SourceSpan] | None:
        self.skip_trivia(newlines=False)
        if self.text.startswith(text, self.pos):
            start = self.mark()
            self._advance_to(self.pos + len(text))
            return text, self.span_from(start)
        return None

    def take_string(self) -> tuple[str, str, SourceSpan]:
        """Double-quoted string with \\\" \\\\ \\n \\t escapes; E002 if unterminated."""
        self.skip_trivia()
        if self._peek_char() != '"':
            raise ScanError("E001", "expected a double-quoted string", self.point_span())
        start = self.mark()
        i = self.pos + 1
        out: list[str] = []
        while i < len(self.text):
            ch = self.text[i]
            if ch == "\n":
                break
            if ch == "\\" and i + 1 < len(self.text):
                nxt = self.text[i + 1]
                out.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
                i += 2
                continue
            if ch == '"':
                self._advance_to(i + 1)
                raw = self.text[start.pos:self.pos]
                return "".join(out), raw, self.span_from(start)
            out.append(ch)
            i += 1
        self._advance_to(i)
        raise ScanError("E002", "unterminated string literal", self.span_from(start))

    def take_ident(self, what: str = "identifier") -> tuple[str, SourceSpan]:
        self.skip_trivia()
        m = _IDENT_RE.match(self.text, self.pos)
        if m is None:
            raise ScanError("E001", f"expected {what}", self.point_span())
        start = self.mark()
        self._advance_to(m.end())
        return m.group(), self.span_from(start)

    def take_qualname(self) -> tuple[str, SourceSpan]:
        self.skip_trivia()
        start = self.mark()
        m = _IDENT_RE.match(self.text, self.pos)
        if m is None:
            raise ScanError("E001", "expected reference name", self.point_span())
        self._advance_to(m.end())
        parts = [m.group()]
        while self._peek_char() == ".":
            self._advance_to(self.pos + 1)
            m = _IDENT_RE.match(self.text, self.pos)
            if m is None:
                raise ScanError("E001", "expected identifier after '.'", self.point_span())
            self._advance_to(m.end())
            parts.append(m.group())
        return ".".join(parts), self.span_from(start)

    def take_int(self, what: str = "integer") -> tuple[int, str, SourceSpan]:
        self.skip_trivia()
        start = self.mark()
        m = _INT_RE.match(self.text, self.pos)
        if m is None:
            raise ScanError("E003", f"malformed {what}: expected digits", self.point_span())
        self._advance_to(m.end())
        if not self._boundary_ok() or self._peek_char() in ".%":
            self.skip_to_eol()
            raise ScanError("E003", f"malformed {what}", self.span_from(start))
        return int(m.group()), m.group(), self.span_from(start)

    def take_number(self, what: str = "number") -> tuple[float, str, SourceSpan]:
        self.skip_trivia()
        start = self.mark()
        m = _NUMBER_RE.match(self.text, self.pos)
        if m is None:
            raise ScanError("E003", f"malformed {what}: expected a numeric literal",
                            self.point_span())
        self._advance_to(m.end())
        if not self._boundary_ok():
            self.skip_to_eol()
            raise ScanError("E003", f"malformed {what}", self.span_from(start))
        return float(m.group()), m.group(), self.span_from(start)

    def take_percent_or_number(self) -> tuple[float, str, bool, SourceSpan]:
        """`12`, `12.5`, or `12.5%` — returns (value, raw, had_percent, span)."""
        self.skip_trivia()
        start = self.mark()
        m = _NUMBER_RE.match(self.text, self.pos)
        if m is None:
            raise ScanError("E003", "malformed percentage: expected a numeric literal",
                            self.point_span())
        self._advance_to(m.end())
        had_percent = False
        if self._peek_char() == "%":
            self._advance_to(self.pos + 1)
            had_percent = True
        if not self._boundary_ok() or self._peek_char() == "%":
            self.skip_to_eol()
            raise ScanError("E003", "malformed percentage", self.span_from(start))
        raw = self.text[start.pos:self.pos]
        return float(m.group()), raw, had_percent, self.span_from(start)

    def take_date(self) -> tuple[_dt.date, str, SourceSpan]:
        self.skip_trivia()
        start = self.mark()
        m = _DATE_RE.match(self.text, self.pos)
        if m is None:
            self.skip_to_eol()
            raise ScanError("E003", "malformed date: expected DD-MM-YYYY",
                            self.span_from(start) if self.pos > start.pos else self.point_span())
        self._advance_to(m.end())
        if not self._boundary_ok() or self._peek_char() == "-":
            self.skip_to_eol()
            raise ScanError("E003", "malformed date: expected DD-MM-YYYY", self.span_from(start))
        day, month, year = (int(p) for p in m.group().split("-"))
        try:
            value = _dt.date(year, month, day)
        except ValueError:
            raise ScanError("E003", f"malformed date: {m.group()} is not a real date",
                            self.span_from(start)) from None
        return value, m.group(), self.span_from(start)

    def capture_phrase(self, *, stop_at_comma: bool = False) -> tuple[str, str, bool, SourceSpan] | None:
        """Free text to end of line / comment / (optionally) comma.

        A phrase that opens with `"` is read as a string literal instead,
        so values containing commas or quotes have an exact spelling.
        Returns (cooked, raw, was_quoted, span); None when the rest of the
        line is empty.
        """
        self.skip_trivia(newlines=False)
        if self.at_eof or self._peek_char() == "\n":
            return None
        if self._peek_char() == '"':
            value, raw, span = self.take_string()
            return value, raw, True, span
        start = self.mark()
        i = self.pos
        while i < len(self.text):
            ch = self.text[i]
            if ch == "\n" or (stop_at_comma and ch == ",") \
                    or self.text.startswith("//", i):
                break
            i += 1
        raw = self.text[self.pos:i]
        trimmed = raw.rstrip(" \t\r")
        if not trimmed:
            return None
        self._advance_to(self.pos + len(trimmed))
        return trimmed, trimmed, False, self.span_from(start)

    def capture_to_eol(self) -> tuple[str, SourceSpan]:
        """Raw text to end of line (rule expressions); may be empty."""
        self.skip_trivia(newlines=False)
        start = self.mark()
        i = self.pos
        while i < len(self.text) and self.text[i] != "\n" \
                and not self.text.startswith("//", i):
            i += 1
        raw = self.text[self.pos:i].rstrip(" \t\r")
        self._advance_to(self.pos + len(raw))
        return raw, self.span_from(start)

    # -- recovery ---------------------------------------------------------

    def skip_to_next_section(self, section_canons: tuple[str, ...]) -> None:
        """Advance past the current character to the next section keyword
        that starts a line (panic-mode recovery)."""
        allowed = set(section_canons)
        if not self.at_eof:
            self._advance_to(self.pos + 1)
        while not self.at_eof:
            if self.col == 1:
                probe = self.mark()
                self.skip_trivia(newlines=False)
                found = self.peek_keyword(allowed)
                self.rewind(probe)
                if found is not None:
                    return
            nl = self.text.find("\n", self.pos)
            if nl < 0:
                self._advance_to(len(self.text))
                return
            self._advance_to(nl + 1)
