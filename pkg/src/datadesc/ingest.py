"""CSV ingestion and data profiling.

Loads tabular data into :class:`~datadesc.tables.Table`, computes the
per-attribute statistics (mode, mean, median, population standard
deviation, categorical distribution, completeness, sparsity) and Pearson
pair correlations, and scaffolds a description skeleton from raw data.

Conventions (documented because the literature leaves them open):
population standard deviation (divide by N); mode ties broken towards
the smallest value; percentages rounded half-up to 2 decimal places.
"""

from __future__ import annotations

import csv
import io
import math
import re
import statistics as pystats
from collections import Counter

from .diagnostics import Diagnostic, SourceSpan
from .model.types import (
    Attribute,
    AttributeStatistics,
    AttrType,
    Composition,
    DataInstance,
    DatasetDescription,
    InstanceType,
    Metadata,
    default_unique_id,
)
from .tables import Cell, Column, Table

_NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")

_safe_ident_re = re.compile(r"[^A-Za-z0-9_]")


class IngestError(Exception):
    """Raised for malformed input data; carries the diagnostic."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _error(code: str, message: str, line: int = 1, col: int = 1) -> IngestError:
    span = SourceSpan(line, col, line, col)
    return IngestError(Diagnostic(code=code, message=message, span=span))


def round_pct(value: float) -> float:
    """Round a percentage half-up to 2 decimals (66.666… → 66.67)."""
    from decimal import ROUND_HALF_UP, Decimal

    return float(Decimal(str(value)).quantize(Decimal("0.01"), ROUND_HALF_UP))


def _parse_cell(raw: str) -> Cell:
    if raw == "":
        return None
    if _NUMBER_RE.fullmatch(raw):
        return float(raw)
    return raw


def load_table(data: bytes | str, fmt: str = "CSV", *, name: str = "table") -> Table:
    """Parse CSV bytes (UTF-8, header row mandatory) into a Table.

    Cells that fully match a decimal literal become numbers, empty cells
    become missing, everything else stays text.
    """
    if fmt.upper() != "CSV":
        raise ValueError(f"unsupported table format: {fmt!r}")
    text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    if not text.strip():
        raise _error("E042", "empty file: expected a header row")

    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    seen: dict[str, int] = {}
    for i, col_name in enumerate(header):
        if col_name in seen:
            raise _error("E041", f"duplicate header {col_name!r}", 1, i + 1)
        seen[col_name] = i

    columns = [Column(name=col_name) for col_name in header]
    for row in reader:
        if not row:
            continue  # blank line
        if len(row) != len(header):
            raise _error(
                "E040",
                f"row has {len(row)} cells, expected {len(header)}",
                reader.line_num,
            )
        for col, raw in zip(columns, row):
            col.cells.append(_parse_cell(raw))
    return Table(name=name, columns=columns)


def _cell_text(cell: float | str) -> str:
    if isinstance(cell, float):
        if cell.is_integer():
            return str(int(cell))
        return repr(cell)
    return cell


def profile_attribute(column: Column) -> AttributeStatistics:
    """Compute the statistics block for one column.

    Numeric columns get mode/mean/median/std_dev; text columns get
    mode/categorical_distribution. Every non-empty column gets
    completeness and sparsity. All-missing columns report only
    completeness 0.
    """
    stats = AttributeStatistics()
    total = len(column.cells)
    values = column.non_missing
    if total == 0:
        return stats
    stats.completeness_pct = round_pct(100.0 * len(values) / total)
    if not values:
        return stats

    stats.sparsity_count = sum(
        1 for c in column.cells if isinstance(c, float) and c == 0.0
    )
    counts = Counter(values)
    top = max(counts.values())
    candidates = [v for v, n in counts.items() if n == top]
    if column.is_numeric:
        stats.mode = min(candidates)
        stats.mean = pystats.fmean(values)
        stats.median = float(pystats.median(values))
        stats.std_dev = pystats.pstdev(values)
    else:
        stats.mode = _cell_text(min(candidates, key=_cell_text))
        stats.categorical_distribution = {
            _cell_text(v): round_pct(100.0 * n / len(values))
            for v, n in sorted(counts.items(), key=lambda item: _cell_text(item[0]))
        }
    return stats


def compute_pair_correlation(x: Column, y: Column) -> float:
    """Pearson correlation over rows where both cells are present."""
    for col in (x, y):
        if not col.is_numeric:
            raise _error("E043", f"column {col.name!r} is not numeric")
    pairs = [
        (a, b)
        for a, b in zip(x.cells, y.cells)
        if a is not None and b is not None
    ]
    if len(pairs) < 2:
        raise _error(
            "E044",
            f"correlation of {x.name!r} and {y.name!r} undefined: "
            f"fewer than 2 paired values",
        )
    mean_x = pystats.fmean(a for a, _ in pairs)
    mean_y = pystats.fmean(b for _, b in pairs)
    sxx = sum((a - mean_x) ** 2 for a, _ in pairs)
    syy = sum((b - mean_y) ** 2 for _, b in pairs)
    if sxx == 0.0 or syy == 0.0:
        flat = x.name if sxx == 0.0 else y.name
        raise _error("E044", f"column {flat!r} has zero variance")
    sxy = sum((a - mean_x) * (b - mean_y) for a, b in pairs)
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _safe_ident(raw: str, fallback: str) -> str:
    name = _safe_ident_re.sub("_", raw) or fallback
    if not (name[0].isalpha() or name[0] == "_"):
        name = "_" + name
    return name


def _stats_or_none(stats: AttributeStatistics) -> AttributeStatistics | None:
    fields = (
        stats.mode,
        stats.mean,
        stats.median,
        stats.std_dev,
        stats.categorical_distribution,
        stats.completeness_pct,
        stats.sparsity_count,
    )
    return stats if any(f is not None for f in fields) else None


def scaffold_description(table: Table, title: str) -> DatasetDescription:
    """Build a minimal description model for a table: metadata with the
    given title at version v0001, one record-data instance sized to the
    table, one profiled attribute per column."""
    version = "v0001"
    metadata = Metadata(
        unique_id=default_unique_id(title, version),
        title=title,
        version=version,
    )
    attributes = []
    used: set[str] = set()
    for column in table.columns:
        name = _safe_ident(column.name, "attribute")
        base, n = name, 2
        while name in used:
            name = f"{base}_{n}"
            n += 1
        used.add(name)
        attributes.append(
            Attribute(
                name=name,
                attr_type=AttrType.NUMERICAL if column.is_numeric else AttrType.CATEGORICAL,
                statistics=_stats_or_none(profile_attribute(column)),
            )
        )
    instance = DataInstance(
        name=_safe_ident(table.name, "data"),
        instance_type=InstanceType.RECORD_DATA,
        size=table.row_count,
        attributes=attributes,
    )
    return DatasetDescription(
        metadata=metadata,
        composition=Composition(instances=[instance]),
    )
