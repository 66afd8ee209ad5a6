"""In-memory tabular data: the carrier type between CSV ingestion and the
rule engine / statistics checks.

A cell is either a number (float), a piece of text (str), or missing
(None). Column type is inferred per column: numeric iff it has at least
one non-missing cell and every non-missing cell is a number.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Cell = float | str | None


@dataclass
class Column:
    name: str
    cells: list[Cell] = field(default_factory=list)

    @property
    def non_missing(self) -> list[float | str]:
        return [c for c in self.cells if c is not None]

    @property
    def is_numeric(self) -> bool:
        values = self.non_missing
        return bool(values) and all(isinstance(v, float) for v in values)


@dataclass
class Table:
    name: str
    columns: list[Column] = field(default_factory=list)

    @property
    def row_count(self) -> int:
        return len(self.columns[0].cells) if self.columns else 0

    def column(self, name: str) -> Column | None:
        for col in self.columns:
            if col.name == name:
                return col
        return None

    def row(self, index: int) -> dict[str, Cell]:
        return {col.name: col.cells[index] for col in self.columns}
