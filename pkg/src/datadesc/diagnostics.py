"""Source spans, diagnostic records, and the shared code table.

Every tool in the package reports problems the same way: a `Diagnostic`
with a stable code (E### for errors, W### for warnings), a message, and
a `SourceSpan` pointing into the originating text (1-based lines and
columns, end-exclusive on the column).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


# Short labels for every diagnostic code this package can emit.
CODE_TABLE: dict[str, str] = {
    "E001": "unexpected token",
    "E002": "unterminated string literal",
    "E003": "malformed literal",
    "E010": "unresolved reference",
    "E011": "duplicate name in scope",
    "E012": "reference to wrong category",
    "E013": "label link mismatch",
    "E014": "invalid enumeration value",
    "E020": "percentage out of range",
    "E021": "distribution sum above 100",
    "E022": "statistic not applicable to attribute type",
    "E023": "correlation value out of range",
    "E024": "grant id without grantor",
    "E025": "empty mandatory text",
    "E026": "duplicate tag",
    "E030": "unknown attribute in rule expression",
    "E031": "rule expression type mismatch",
    "E032": "consistency rule violated by data",
    "E040": "ragged row",
    "E041": "duplicate header",
    "E042": "empty file",
    "E043": "correlation requires numeric columns",
    "E044": "correlation undefined (zero variance)",
    "E050": "unknown query field",
    "E051": "malformed query clause",
    "W020": "distribution sum below 100",
    "W021": "instance declares no attributes",
    "W030": "declared statistic differs from data",
}


@dataclass(frozen=True, order=True)
class SourceSpan:
    """Region of source text; 1-based, start <= end in document order."""

    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.end_line, self.end_col) < (self.start_line, self.start_col):
            raise ValueError(f"span ends before it starts: {self}")

    def to_json_dict(self) -> dict[str, int]:
        return {
            "start_line": self.start_line,
            "start_col": self.start_col,
            "end_line": self.end_line,
            "end_col": self.end_col,
        }


POINT_SPAN = SourceSpan(1, 1, 1, 1)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: SourceSpan

    def __post_init__(self) -> None:
        if len(self.code) != 4 or self.code[0] not in "EW" or not self.code[1:].isdigit():
            raise ValueError(f"bad diagnostic code {self.code!r}")

    @property
    def severity(self) -> Severity:
        return Severity.ERROR if self.code.startswith("E") else Severity.WARNING

    def format_line(self, filename: str, color: bool = False) -> str:
        """Render `FILE:LINE:COL: CODE severity: message`."""
        sev = self.severity.value
        if color:
            tint = "\x1b[31m" if self.severity is Severity.ERROR else "\x1b[33m"
            sev = f"{tint}{sev}\x1b[0m"
        s = self.span
        return f"{filename}:{s.start_line}:{s.start_col}: {self.code} {sev}: {self.message}"

    def to_json_dict(self) -> dict[str, object]:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "message": self.message,
            "span": self.span.to_json_dict(),
        }


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diags)


def sort_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=lambda d: (d.span, d.code))


def diagnostics_to_json(diags: list[Diagnostic]) -> str:
    return json.dumps([d.to_json_dict() for d in diags], indent=2)
