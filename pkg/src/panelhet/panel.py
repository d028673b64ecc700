"""Balanced panel container, CSV ingestion and time-axis splits."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import BinaryIO, Sequence, Union

import numpy as np

from .errors import (
    DuplicateCell,
    EmptyInput,
    NonNumericValue,
    PanelTooShort,
    UnbalancedPanel,
)

Source = Union[str, os.PathLike, bytes, BinaryIO, io.TextIOBase]


@dataclass(frozen=True)
class PanelData:
    """N x T balanced panel ``values[i, t]`` with unit and time labels.

    The value matrix is copied and flagged read-only on construction.
    """

    unit_ids: tuple
    time_ids: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True, order="C")
        if values.ndim != 2:
            raise EmptyInput("panel values must be a 2-d N x T matrix")
        n, t = values.shape
        if n < 1 or t < 1:
            raise EmptyInput("panel must have at least one unit and one period")
        units = tuple(self.unit_ids)
        times = tuple(self.time_ids)
        if len(units) != n or len(times) != t:
            raise EmptyInput(
                f"label lengths ({len(units)}, {len(times)}) do not match values shape {values.shape}"
            )
        if len(set(units)) != n:
            raise DuplicateCell("duplicate unit labels")
        if len(set(times)) != t:
            raise DuplicateCell("duplicate time labels")
        if any(not (a < b) for a, b in zip(times, times[1:])):
            raise ValueError("time labels must be strictly increasing")
        bad = ~np.isfinite(values)
        if bad.any():
            rows = sorted({units[i] for i in np.nonzero(bad.any(axis=1))[0]}, key=str)
            raise NonNumericValue("non-finite values for units: " + ", ".join(map(str, rows)))
        values.setflags(write=False)
        object.__setattr__(self, "unit_ids", units)
        object.__setattr__(self, "time_ids", times)
        object.__setattr__(self, "values", values)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def T(self) -> int:
        return self.values.shape[1]

    def window(self, start: int, stop: int) -> "PanelData":
        """Sub-panel of periods ``start..stop`` (1-based, inclusive)."""
        return PanelData(self.unit_ids, self.time_ids[start - 1 : stop], self.values[:, start - 1 : stop])

    def to_long_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["unit", "time", "value"])
        for i, u in enumerate(self.unit_ids):
            for j, t in enumerate(self.time_ids):
                w.writerow([u, t, repr(float(self.values[i, j]))])
        return buf.getvalue()


@dataclass(frozen=True)
class PanelSplit:
    """Ordered subpanels over contiguous time blocks (1-based inclusive ranges)."""

    panels: tuple
    blocks: tuple

    def __iter__(self):
        return iter(self.panels)

    def __len__(self):
        return len(self.panels)

    @property
    def min_length(self) -> int:
        return min(b - a + 1 for a, b in self.blocks)


def half_blocks(T: int) -> tuple:
    if T < 2:
        raise PanelTooShort(f"half-panel split needs T >= 2, got T={T}")
    if T % 2 == 0:
        m = T // 2
        return ((1, m), (m + 1, T))
    # odd T: two overlapping halves of length (T+1)/2 sharing the middle period
    m = (T + 1) // 2
    return ((1, m), (m, T))


def third_blocks(T: int) -> tuple:
    if T < 3:
        raise PanelTooShort(f"third-panel split needs T >= 3, got T={T}")
    if T % 3 == 0:
        m = T // 3
        return ((1, m), (m + 1, 2 * m), (2 * m + 1, T))
    m = -(-T // 3)
    mid = (T - m) // 2 + 1
    return ((1, m), (mid, mid + m - 1), (T - m + 1, T))


def split_half(p: PanelData) -> PanelSplit:
    blocks = half_blocks(p.T)
    return PanelSplit(tuple(p.window(a, b) for a, b in blocks), blocks)


def split_thirds(p: PanelData) -> PanelSplit:
    blocks = third_blocks(p.T)
    return PanelSplit(tuple(p.window(a, b) for a, b in blocks), blocks)


# -- CSV ingestion -----------------------------------------------------------


def _normalize_labels(raw: Sequence[str]) -> list:
    """Cast labels to int, then float, when every label parses; else keep strings."""
    for cast in (int, float):
        try:
            return [cast(s) for s in raw]
        except ValueError:
            continue
    return list(raw)


def _parse_value(text: str, unit, time) -> float:
    s = text.strip()
    try:
        v = float(s)
    except ValueError:
        raise NonNumericValue(f"non-numeric value {text!r} at unit={unit}, time={time}") from None
    if not math.isfinite(v):
        raise NonNumericValue(f"non-finite value {text!r} at unit={unit}, time={time}")
    return v


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    return data


def load_csv(source: Source, layout: str = "long") -> PanelData:
    """Read a balanced panel from CSV.

    Parameters
    ----------
    source : path, bytes, or binary/text file object
        UTF-8 CSV with a header row.
    layout : {"long", "wide"}
        ``long`` expects columns ``unit,time,value``; ``wide`` expects a
        ``unit`` column followed by one column per time label.

    Returns
    -------
    PanelData
        Rows sorted by unit label, columns by time label.
    """
    rows = [r for r in csv.reader(io.StringIO(_read_text(source))) if any(c.strip() for c in r)]
    if len(rows) < 2:
        raise EmptyInput("CSV has no data rows")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if layout == "long":
        return _from_long(header, body)
    if layout == "wide":
        return _from_wide(header, body)
    raise ValueError(f"unknown layout {layout!r}; expected 'long' or 'wide'")


def _from_long(header, body) -> PanelData:
    try:
        iu, it, iv = (header.index(c) for c in ("unit", "time", "value"))
    except ValueError:
        raise EmptyInput(f"long layout needs columns unit,time,value; got {header}") from None
    units_raw, times_raw = [], []
    for r in body:
        if len(r) <= max(iu, it, iv):
            raise NonNumericValue(f"short row {r!r}")
        units_raw.append(r[iu].strip())
        times_raw.append(r[it].strip())
    units = _normalize_labels(units_raw)
    times = _normalize_labels(times_raw)
    cells = {}
    for r, u, t in zip(body, units, times):
        if (u, t) in cells:
            raise DuplicateCell(f"duplicate cell unit={u}, time={t}")
        cells[(u, t)] = _parse_value(r[iv], u, t)
    unit_ids = sorted(set(units))
    time_ids = sorted(set(times))
    missing = [u for u in unit_ids if any((u, t) not in cells for t in time_ids)]
    if missing:
        raise UnbalancedPanel(missing)
    values = np.array([[cells[(u, t)] for t in time_ids] for u in unit_ids])
    return PanelData(tuple(unit_ids), tuple(time_ids), values)


def _from_wide(header, body) -> PanelData:
    if not header or header[0] != "unit":
        raise EmptyInput(f"wide layout needs 'unit' as first column; got {header[:1]}")
    time_labels = _normalize_labels(header[1:])
    if not time_labels:
        raise EmptyInput("wide layout has no time columns")
    if len(set(time_labels)) != len(time_labels):
        raise DuplicateCell("duplicate time columns")
    units = _normalize_labels([r[0].strip() for r in body])
    if len(set(units)) != len(units):
        raise DuplicateCell("duplicate unit rows")
    missing = []
    parsed = {}
    for r, u in zip(body, units):
        cells = [c.strip() for c in r[1:]]
        cells += [""] * (len(time_labels) - len(cells))
        if len(cells) > len(time_labels) and any(cells[len(time_labels):]):
            raise NonNumericValue(f"row for unit {u} has more cells than time columns")
        if any(c == "" for c in cells[: len(time_labels)]):
            missing.append(u)
            continue
        parsed[u] = [_parse_value(c, u, t) for c, t in zip(cells, time_labels)]
    if missing:
        raise UnbalancedPanel(missing)
    order = np.argsort(np.array(time_labels, dtype=object), kind="stable")
    unit_ids = sorted(units)
    values = np.array([parsed[u] for u in unit_ids])[:, order]
    return PanelData(tuple(unit_ids), tuple(time_labels[k] for k in order), values)
