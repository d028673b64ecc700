"""Per-unit sample means, autocovariances and autocorrelations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateUnit, LagTooLarge
from .panel import PanelData


@dataclass(frozen=True)
class HeterogeneityKind:
    """Which unit-level quantity is estimated.

    ``name`` is one of ``"mean"``, ``"acov"``, ``"acor"``; ``lag`` is ignored
    for the mean.
    """

    name: str
    lag: int = 0

    def __post_init__(self):
        if self.name not in ("mean", "acov", "acor"):
            raise ValueError(f"unknown heterogeneity kind {self.name!r}")
        if isinstance(self.lag, bool) or int(self.lag) != self.lag or self.lag < 0:
            raise LagTooLarge(f"lag must be a nonnegative integer, got {self.lag!r}")
        if self.name == "mean":
            object.__setattr__(self, "lag", 0)
        if self.name == "acor" and self.lag < 1:
            raise LagTooLarge("autocorrelation needs lag >= 1")

    @property
    def min_length(self) -> int:
        """Shortest series on which this quantity is defined."""
        if self.name == "mean":
            return 1
        return self.lag + 1

    @property
    def label(self) -> str:
        return "mean" if self.name == "mean" else f"{self.name}{self.lag}"

    def __str__(self):
        return self.label


def Mean() -> HeterogeneityKind:
    return HeterogeneityKind("mean")


def Autocovariance(k: int) -> HeterogeneityKind:
    return HeterogeneityKind("acov", k)


def Autocorrelation(k: int) -> HeterogeneityKind:
    return HeterogeneityKind("acor", k)


@dataclass(frozen=True)
class UnitEstimates:
    kind: HeterogeneityKind
    values: np.ndarray = field(repr=False)
    subpanel: str = "full"
    source_T: int = 0

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).ravel()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def autocovariance(y: np.ndarray, k: int) -> np.ndarray:
    """Row-wise lag-``k`` autocovariance with divisor ``T - k``."""
    T = y.shape[1]
    d = y - y.mean(axis=1, keepdims=True)
    return np.einsum("it,it->i", d[:, k:], d[:, : T - k]) / (T - k)


def estimate_units(p: PanelData, kind: HeterogeneityKind, subpanel: str = "full") -> UnitEstimates:
    y = p.values
    T = p.T
    if kind.name == "mean":
        return UnitEstimates(kind, y.mean(axis=1), subpanel, T)
    if T < kind.lag + 1:
        raise LagTooLarge(f"lag {kind.lag} needs T >= {kind.lag + 1}, got T={T}")
    gk = autocovariance(y, kind.lag)
    if kind.name == "acov":
        return UnitEstimates(kind, gk, subpanel, T)
    g0 = gk if kind.lag == 0 else autocovariance(y, 0)
    bad = (np.ptp(y, axis=1) == 0) | (g0 <= 0)
    if bad.any():
        raise DegenerateUnit([p.unit_ids[i] for i in np.nonzero(bad)[0]])
    return UnitEstimates(kind, gk / g0, subpanel, T)
