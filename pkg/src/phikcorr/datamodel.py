"""Typed columns, interval binning and contingency table construction."""
import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

MISSING_TOKENS = frozenset({"", "na", "nan", "null", "none"})


class VariableKind(enum.Enum):
    INTERVAL = "interval"
    ORDINAL = "ordinal"
    CATEGORICAL = "categorical"


def is_missing(cell) -> bool:
    if cell is None:
        return True
    if isinstance(cell, float) and math.isnan(cell):
        return True
    if isinstance(cell, str) and cell.strip().lower() in MISSING_TOKENS:
        return True
    return False


def _parse_real(cell) -> Optional[float]:
    try:
        value = float(cell)
    except (TypeError, ValueError):
        return None
    return value if math.isfinite(value) else None


def infer_kind(column_cells: Sequence) -> VariableKind:
    """Interval if every non-missing cell parses as a finite real, else categorical.

    Ordinal is never inferred; it has to be requested with an explicit order.
    """
    present = [c for c in column_cells if not is_missing(c)]
    if not present:
        raise ValueError("empty column")
    if all(_parse_real(c) is not None for c in present):
        return VariableKind.INTERVAL
    return VariableKind.CATEGORICAL


@dataclass(frozen=True)
class Column:
    """One variable: interval cells are floats, others strings; ``None`` is missing."""

    name: str
    kind: VariableKind
    values: tuple
    order: Optional[tuple] = None

    def __post_init__(self):
        if self.kind is VariableKind.ORDINAL:
            if not self.order:
                raise ValueError(f"ordinal column {self.name!r} needs an explicit category order")
            unknown = {v for v in self.values if v is not None} - set(self.order)
            if unknown:
                raise ValueError(
                    f"ordinal column {self.name!r} has values outside its order: {sorted(unknown)}"
                )

    @classmethod
    def from_cells(cls, name, cells, kind=None, order=None):
        """Build a column from raw cells, normalising missing entries to ``None``."""
        if order is not None:
            kind = VariableKind.ORDINAL
        if kind is None:
            kind = infer_kind(cells)
        if kind is VariableKind.INTERVAL:
            values = []
            for c in cells:
                if is_missing(c):
                    values.append(None)
                    continue
                v = _parse_real(c)
                if v is None:
                    raise ValueError(f"column {name!r}: cannot parse {c!r} as a finite number")
                values.append(v)
        else:
            values = [None if is_missing(c) else str(c) for c in cells]
        return cls(name, kind, tuple(values), tuple(order) if order is not None else None)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class BinningSpec:
    n_bins: int
    edges: tuple

    def __post_init__(self):
        if self.n_bins < 1 or len(self.edges) != self.n_bins + 1:
            raise ValueError("edges must have n_bins + 1 entries")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("bin edges must be strictly ascending")

    def assign(self, values) -> np.ndarray:
        """Bin index per value; right-open bins, last bin right-closed, -1 for missing
        or out-of-range values."""
        v = np.asarray(values, dtype=float)
        edges = np.asarray(self.edges)
        idx = np.searchsorted(edges, v, side="right") - 1
        idx = np.where(v == edges[-1], self.n_bins - 1, idx)
        bad = ~np.isfinite(v) | (v < edges[0]) | (v > edges[-1])
        return np.where(bad, -1, idx).astype(np.int64)

    def labels(self) -> tuple:
        e = self.edges
        out = [f"[{e[i]:.6g}, {e[i + 1]:.6g})" for i in range(self.n_bins - 1)]
        out.append(f"[{e[-2]:.6g}, {e[-1]:.6g}]")
        return tuple(out)


def bin_interval(values, n_bins: int):
    """Uniform binning between the observed minimum and maximum.

    ``values`` may hold ``None``/NaN for missing cells; those get label -1.
    An all-equal column collapses to a single bin.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    v = np.array([np.nan if c is None else c for c in values], dtype=float)
    present = v[np.isfinite(v)]
    if present.size == 0:
        raise ValueError("empty column")
    lo, hi = float(present.min()), float(present.max())
    if lo == hi:
        spec = BinningSpec(1, (lo - 0.5, hi + 0.5))
    else:
        spec = BinningSpec(n_bins, tuple(np.linspace(lo, hi, n_bins + 1)))
    return spec.assign(v), spec


@dataclass(frozen=True)
class Discretized:
    """Integer codes per record (-1 = missing) over an ordered set of levels."""

    name: str
    codes: np.ndarray = field(repr=False)
    levels: tuple
    binning: Optional[BinningSpec] = None


def discretize(column: Column, n_bins: int = 10) -> Discretized:
    if column.kind is VariableKind.INTERVAL:
        codes, spec = bin_interval(column.values, n_bins)
        return Discretized(column.name, codes, spec.labels(), spec)
    if column.kind is VariableKind.ORDINAL:
        levels = tuple(column.order)
    else:
        levels = tuple(sorted({v for v in column.values if v is not None}))
    if not levels:
        raise ValueError("empty column")
    index = {lev: i for i, lev in enumerate(levels)}
    codes = np.array([-1 if v is None else index[v] for v in column.values], dtype=np.int64)
    return Discretized(column.name, codes, levels)


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    counts: np.ndarray
    row_labels: tuple
    col_labels: tuple

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 2 or 0 in counts.shape:
            raise ValueError("counts must be a non-empty 2-D array")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        rows, cols = tuple(self.row_labels), tuple(self.col_labels)
        if len(rows) != counts.shape[0] or len(cols) != counts.shape[1]:
            raise ValueError("label lengths must match the table shape")
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError("labels must be unique per axis")
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)

    @classmethod
    def from_counts(cls, counts, row_labels=None, col_labels=None):
        counts = np.asarray(counts)
        if row_labels is None:
            row_labels = tuple(str(i) for i in range(counts.shape[0]))
        if col_labels is None:
            col_labels = tuple(str(j) for j in range(counts.shape[1]))
        return cls(counts, row_labels, col_labels)

    @property
    def n_total(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self):
        return self.counts.shape

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.counts.T, self.col_labels, self.row_labels)

    def __eq__(self, other):
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return (
            np.array_equal(self.counts, other.counts)
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
        )


def _as_discretized(x, name):
    if isinstance(x, Discretized):
        return x
    if isinstance(x, Column):
        return discretize(x)
    cells = [None if is_missing(c) else c for c in x]
    levels = tuple(sorted({c for c in cells if c is not None}, key=str))
    index = {lev: i for i, lev in enumerate(levels)}
    codes = np.array([-1 if c is None else index[c] for c in cells], dtype=np.int64)
    return Discretized(name, codes, tuple(str(v) for v in levels))


def build_table(a, b) -> ContingencyTable:
    """Cross-tabulate two variables, dropping records missing in either.

    ``a`` and ``b`` may be :class:`Discretized`, :class:`Column` (interval
    columns get the default 10 bins) or plain label sequences.
    """
    da, db = _as_discretized(a, "a"), _as_discretized(b, "b")
    if len(da.codes) != len(db.codes):
        raise ValueError("columns must have equal length")
    keep = (da.codes >= 0) & (db.codes >= 0)
    if not keep.any():
        raise ValueError("empty table")
    r, k = len(da.levels), len(db.levels)
    flat = da.codes[keep] * k + db.codes[keep]
    counts = np.bincount(flat, minlength=r * k).reshape(r, k)
    return ContingencyTable(counts, da.levels, db.levels)
