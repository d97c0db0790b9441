"""Strict readers for the run-artifact CSV files the figure tools consume.

Three file kinds are understood, matching the CSV layouts written by the
solver harness:

* **trace CSV** — per-step training log export.  Must provide the columns
  ``t_wall_s``, ``energy`` and ``stderr``; extra columns (``step``, ``lr``,
  ``grad_norm``, ``n_samples``) are ignored.  Wall-time values must be
  strictly increasing.
* **order-profile CSV** — header exactly ``site,order,max_abs,l1``; the
  ``site`` column holds a site index or the aggregate label ``all``.
* **disorder-summary CSV** — header exactly
  ``g,mean_energy,stderr,n_ok,n_failed``.

Every reader fails loudly on schema drift, and every error message names the
offending file.  The readers never write anything.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SchemaError",
    "TRACE_COLUMNS",
    "ORDER_COLUMNS",
    "SUMMARY_COLUMNS",
    "TraceSeries",
    "Reference",
    "TraceSet",
    "read_trace",
    "OrderTable",
    "OrderProfile",
    "read_order_table",
    "DisorderSummary",
    "read_disorder_summary",
]


class SchemaError(ValueError):
    """A CSV file does not match the schema the figure tools consume."""


#: Columns a trace CSV must provide (extras are tolerated and ignored).
TRACE_COLUMNS = ("t_wall_s", "energy", "stderr")

#: Exact header of an order-profile CSV.
ORDER_COLUMNS = ("site", "order", "max_abs", "l1")

#: Exact header of a disorder-summary CSV.
SUMMARY_COLUMNS = ("g", "mean_energy", "stderr", "n_ok", "n_failed")


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    """Return (header, data rows) of a CSV file, or raise SchemaError."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read file: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: file is empty (no header row)")
    header, data = rows[0], rows[1:]
    if len(header) != len(set(header)):
        raise SchemaError(f"{path}: duplicate column names in header {header}")
    return header, data


def _float_cell(path: Path, row_no: int, column: str, text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise SchemaError(
            f"{path}: row {row_no}: column '{column}' is not a number: {text!r}"
        ) from exc


def _int_cell(path: Path, row_no: int, column: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise SchemaError(
            f"{path}: row {row_no}: column '{column}' is not an integer: {text!r}"
        ) from exc


# ---------------------------------------------------------------------------
# Energy traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceSeries:
    """One named energy-vs-wall-time series with a standard-error column."""

    label: str
    t_wall_s: np.ndarray
    energy: np.ndarray
    stderr: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.t_wall_s, dtype=float)
        e = np.asarray(self.energy, dtype=float)
        s = np.asarray(self.stderr, dtype=float)
        if not (t.ndim == e.ndim == s.ndim == 1):
            raise ValueError("series columns must be one-dimensional")
        if not (t.size == e.size == s.size):
            raise ValueError("series columns must have equal length")
        if t.size == 0:
            raise ValueError("series must contain at least one row")
        if not np.all(np.diff(t) > 0):
            raise ValueError("series time column must be strictly increasing")
        object.__setattr__(self, "t_wall_s", t)
        object.__setattr__(self, "energy", e)
        object.__setattr__(self, "stderr", s)

    def __len__(self) -> int:
        return int(self.t_wall_s.size)


@dataclass(frozen=True)
class Reference:
    """A horizontal reference line (e.g. an exact ground-state energy)."""

    label: str
    value: float

    def __post_init__(self) -> None:
        value = float(self.value)
        if not math.isfinite(value):
            raise ValueError(f"reference '{self.label}' must be finite, got {value}")
        object.__setattr__(self, "value", value)


def read_trace(path: str | Path, label: str | None = None) -> TraceSeries:
    """Load one trace CSV into a :class:`TraceSeries`.

    The file must provide the columns in :data:`TRACE_COLUMNS`; any extra
    columns are ignored.  A missing column, a non-numeric cell, an empty
    table, or a non-increasing time column raises :class:`SchemaError`
    naming the file.
    """
    path = Path(path)
    header, data = _read_rows(path)
    missing = [c for c in TRACE_COLUMNS if c not in header]
    if missing:
        raise SchemaError(
            f"{path}: missing required column(s) {missing}; header is {header}"
        )
    if not data:
        raise SchemaError(f"{path}: no data rows")
    idx = {c: header.index(c) for c in TRACE_COLUMNS}
    columns: dict[str, list[float]] = {c: [] for c in TRACE_COLUMNS}
    for row_no, row in enumerate(data, start=2):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: row {row_no}: expected {len(header)} fields, got {len(row)}"
            )
        for column in TRACE_COLUMNS:
            columns[column].append(
                _float_cell(path, row_no, column, row[idx[column]])
            )
    try:
        return TraceSeries(
            label=label if label is not None else path.stem,
            t_wall_s=np.array(columns["t_wall_s"]),
            energy=np.array(columns["energy"]),
            stderr=np.array(columns["stderr"]),
        )
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _default_labels(paths: Sequence[Path]) -> list[str]:
    """Label series by file stem, falling back to full paths on collision."""
    stems = [p.stem for p in paths]
    if len(set(stems)) == len(stems):
        return stems
    return [str(p) for p in paths]


@dataclass(frozen=True)
class TraceSet:
    """A collection of named trace series plus optional reference lines."""

    series: tuple[TraceSeries, ...]
    references: tuple[Reference, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.series:
            raise ValueError("TraceSet needs at least one series")
        object.__setattr__(self, "series", tuple(self.series))
        object.__setattr__(self, "references", tuple(self.references))

    @classmethod
    def from_csvs(
        cls,
        paths: Iterable[str | Path],
        references: Iterable[Reference | tuple[str, float] | float] = (),
        labels: Sequence[str] | None = None,
    ) -> "TraceSet":
        """Load one series per CSV path.

        ``labels`` overrides the default per-file labels (file stems, or the
        full paths when stems collide) and must match ``paths`` in length.
        ``references`` items may be :class:`Reference` objects,
        ``(label, value)`` pairs, or bare numbers.
        """
        path_list = [Path(p) for p in paths]
        if not path_list:
            raise ValueError("need at least one CSV path")
        if labels is None:
            names = _default_labels(path_list)
        else:
            if len(labels) != len(path_list):
                raise ValueError(
                    f"got {len(labels)} labels for {len(path_list)} CSV paths"
                )
            names = list(labels)
        series = tuple(
            read_trace(p, label=name) for p, name in zip(path_list, names)
        )
        refs = tuple(as_reference(r) for r in references)
        return cls(series=series, references=refs)


def as_reference(item: Reference | tuple[str, float] | float) -> Reference:
    """Coerce a bare number or (label, value) pair into a Reference."""
    if isinstance(item, Reference):
        return item
    if isinstance(item, tuple):
        label, value = item
        return Reference(label=str(label), value=float(value))
    value = float(item)
    return Reference(label=f"{value:g}", value=value)


# ---------------------------------------------------------------------------
# Interaction order profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderProfile:
    """Per-order coefficient magnitudes for one site (or the aggregate)."""

    site: str
    orders: np.ndarray
    max_abs: np.ndarray
    l1: np.ndarray

    def __post_init__(self) -> None:
        orders = np.asarray(self.orders, dtype=int)
        if orders.size == 0:
            raise ValueError("order profile must contain at least one order")
        if len(set(orders.tolist())) != orders.size:
            raise ValueError(f"duplicate orders for site '{self.site}'")
        rank = np.argsort(orders)
        object.__setattr__(self, "orders", orders[rank])
        object.__setattr__(
            self, "max_abs", np.asarray(self.max_abs, dtype=float)[rank]
        )
        object.__setattr__(self, "l1", np.asarray(self.l1, dtype=float)[rank])

    def __len__(self) -> int:
        return int(self.orders.size)


@dataclass(frozen=True)
class OrderTable:
    """Parsed order-profile CSV: rows of (site, order, max_abs, l1)."""

    path: Path
    sites: tuple[str, ...]
    rows: tuple[tuple[str, int, float, float], ...]

    def profile(self, site: str = "all") -> OrderProfile:
        """Extract the profile of one ``site`` label (default aggregate)."""
        selected = [r for r in self.rows if r[0] == site]
        if not selected:
            raise SchemaError(
                f"{self.path}: no rows for site '{site}'; "
                f"available sites: {sorted(set(self.sites))}"
            )
        try:
            return OrderProfile(
                site=site,
                orders=np.array([r[1] for r in selected]),
                max_abs=np.array([r[2] for r in selected]),
                l1=np.array([r[3] for r in selected]),
            )
        except ValueError as exc:
            raise SchemaError(f"{self.path}: {exc}") from exc


def read_order_table(path: str | Path) -> OrderTable:
    """Load an order-profile CSV (header exactly ``site,order,max_abs,l1``)."""
    path = Path(path)
    header, data = _read_rows(path)
    if tuple(header) != ORDER_COLUMNS:
        raise SchemaError(
            f"{path}: expected header {list(ORDER_COLUMNS)}, got {header}"
        )
    if not data:
        raise SchemaError(f"{path}: no data rows")
    rows: list[tuple[str, int, float, float]] = []
    for row_no, row in enumerate(data, start=2):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: row {row_no}: expected {len(header)} fields, got {len(row)}"
            )
        site = row[0]
        if site != "all":
            _int_cell(path, row_no, "site", site)
        rows.append(
            (
                site,
                _int_cell(path, row_no, "order", row[1]),
                _float_cell(path, row_no, "max_abs", row[2]),
                _float_cell(path, row_no, "l1", row[3]),
            )
        )
    return OrderTable(
        path=path,
        sites=tuple(r[0] for r in rows),
        rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# Disorder-sweep summaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DisorderSummary:
    """Disorder-averaged final energies, one row per coupling strength g."""

    g: np.ndarray
    mean_energy: np.ndarray
    stderr: np.ndarray
    n_ok: np.ndarray
    n_failed: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.g, dtype=float)
        if g.size == 0:
            raise ValueError("summary must contain at least one row")
        rank = np.argsort(g, kind="stable")
        object.__setattr__(self, "g", g[rank])
        for name in ("mean_energy", "stderr"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=float)[rank]
            )
        for name in ("n_ok", "n_failed"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=int)[rank]
            )

    def __len__(self) -> int:
        return int(self.g.size)


def read_disorder_summary(paths: Iterable[str | Path]) -> DisorderSummary:
    """Load and merge one or more disorder-summary CSVs, sorted by g.

    Each file must have the header ``g,mean_energy,stderr,n_ok,n_failed``
    and at least one data row.
    """
    path_list = [Path(p) for p in paths]
    if not path_list:
        raise ValueError("need at least one summary CSV path")
    columns: dict[str, list[float]] = {c: [] for c in SUMMARY_COLUMNS}
    for path in path_list:
        header, data = _read_rows(path)
        if tuple(header) != SUMMARY_COLUMNS:
            raise SchemaError(
                f"{path}: expected header {list(SUMMARY_COLUMNS)}, got {header}"
            )
        if not data:
            raise SchemaError(f"{path}: no data rows")
        for row_no, row in enumerate(data, start=2):
            if len(row) != len(header):
                raise SchemaError(
                    f"{path}: row {row_no}: expected {len(header)} fields, "
                    f"got {len(row)}"
                )
            for column, text in zip(("g", "mean_energy", "stderr"), row[:3]):
                columns[column].append(_float_cell(path, row_no, column, text))
            for column, text in zip(("n_ok", "n_failed"), row[3:]):
                columns[column].append(_int_cell(path, row_no, column, text))
    return DisorderSummary(
        g=np.array(columns["g"]),
        mean_energy=np.array(columns["mean_energy"]),
        stderr=np.array(columns["stderr"]),
        n_ok=np.array(columns["n_ok"], dtype=int),
        n_failed=np.array(columns["n_failed"], dtype=int),
    )
