"""Kernel density, kernel CDF and empirical CDF of unit-level estimates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._backend import core
from .errors import InvalidBandwidth, TooFewUnits
from .kernels import KernelSpec
from .unit_stats import HeterogeneityKind

ESTIMATORS = ("NE", "HPJ", "TOJ", "IE")


class EvalGrid:
    """Strictly increasing, finite evaluation points."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.array(points, dtype=float, copy=True).ravel()
        if pts.size == 0:
            raise ValueError("evaluation grid is empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("evaluation grid has non-finite points")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ValueError("evaluation grid must be strictly increasing")
        pts.setflags(write=False)
        self.points = pts

    def __len__(self):
        return self.points.size

    def __array__(self, dtype=None, copy=None):
        return self.points if dtype is None else self.points.astype(dtype)

    def __repr__(self):
        return f"EvalGrid(n={self.points.size}, [{self.points[0]:g}, {self.points[-1]:g}])"


@dataclass
class EstimateGrid:
    """Estimator values on a grid, keyed by estimator tag.

    ``intervals`` maps an estimator tag to a dict with arrays ``debiased``,
    ``sigma``, ``lo`` and ``hi`` when confidence bands were requested.
    """

    grid: EvalGrid
    values: dict
    h: float
    kernel: KernelSpec
    target: str = "density"
    kind: Optional[HeterogeneityKind] = None
    intervals: dict = field(default_factory=dict)


def _as_points(grid) -> np.ndarray:
    if isinstance(grid, EvalGrid):
        return grid.points
    return np.atleast_1d(np.asarray(grid, dtype=float))


def _as_data(xi) -> np.ndarray:
    data = np.ascontiguousarray(np.asarray(xi, dtype=float).ravel())
    if data.size < 1:
        raise TooFewUnits("need at least one unit estimate")
    return data


def _check_h(h):
    if not (np.isfinite(h) and h > 0):
        raise InvalidBandwidth(f"bandwidth must be positive and finite, got {h}")


def kde(xi, grid, h: float, kernel: KernelSpec) -> np.ndarray:
    """Kernel density ``(N h)^-1 sum_i K((x - xi_i) / h)`` at each grid point."""
    _check_h(h)
    data = _as_data(xi)
    pts = np.ascontiguousarray(_as_points(grid))
    return core.kernel_sum(data, pts, float(h), kernel.code, 0) / (data.size * h)


def kcdf(xi, grid, h: float, kernel: KernelSpec) -> np.ndarray:
    """Integrated kernel density ``N^-1 sum_i Kbar((x - xi_i) / h)``."""
    _check_h(h)
    data = _as_data(xi)
    pts = np.ascontiguousarray(_as_points(grid))
    return core.kernel_sum(data, pts, float(h), kernel.code, 1) / data.size


def kde_d2(xi, grid, b: float) -> np.ndarray:
    """Second derivative of a Gaussian-kernel density estimate with bandwidth ``b``."""
    _check_h(b)
    data = _as_data(xi)
    pts = np.ascontiguousarray(_as_points(grid))
    return core.kernel_sum(data, pts, float(b), 1, 2) / (data.size * b**3)


def ecdf(xi, grid) -> np.ndarray:
    data = np.sort(_as_data(xi))
    return np.searchsorted(data, _as_points(grid), side="right") / data.size


def default_grid(xi, h: float, n_points: int = 512) -> EvalGrid:
    if n_points < 2:
        raise ValueError(f"grid needs at least 2 points, got {n_points}")
    _check_h(h)
    data = _as_data(xi)
    return EvalGrid(np.linspace(data.min() - 3 * h, data.max() + 3 * h, n_points))
