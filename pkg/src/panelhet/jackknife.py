"""Split-panel jackknife bias correction of kernel density estimates.

The half-panel jackknife (HPJ) combines the full-panel estimate with the
average of the two half-panel estimates; the third-order jackknife (TOJ)
adds the average of three third-panel estimates, with weights chosen to
cancel bias terms of order ``1/T`` and ``T**-1.5``. All components share
the full-panel bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import EstimateGrid, EvalGrid, kde
from .errors import LengthMismatch, PanelTooShort
from .kernels import KernelSpec
from .panel import PanelData, split_half, split_thirds
from .unit_stats import HeterogeneityKind, UnitEstimates, estimate_units


@dataclass(frozen=True)
class JackknifeWeights:
    w_full: float
    w_half: float
    w_third: float

    def as_tuple(self):
        return (self.w_full, self.w_half, self.w_third)


HPJ_WEIGHTS = JackknifeWeights(2.0, -1.0, 0.0)

_W3 = (2 * math.sqrt(2) - 2) / (3 * math.sqrt(3) + 1 - 4 * math.sqrt(2))
_W2 = -1 - 2 * _W3
TOJ_WEIGHTS = JackknifeWeights(1 - _W2 - _W3, _W2, _W3)


def toj_system():
    """Coefficient matrix and right-hand side whose solution is ``TOJ_WEIGHTS``."""
    a = np.array(
        [
            [1.0, 1.0, 1.0],
            [1.0, 2.0, 3.0],
            [1.0, 2.0**1.5, 3.0**1.5],
        ]
    )
    return a, np.array([1.0, 0.0, 0.0])


def _same_length(*seqs):
    arrs = [np.asarray(s, dtype=float) for s in seqs]
    if len({a.shape for a in arrs}) != 1:
        raise LengthMismatch(f"sequence shapes differ: {[a.shape for a in arrs]}")
    return arrs


def hpj_combine(full, half1, half2) -> np.ndarray:
    full, half1, half2 = _same_length(full, half1, half2)
    return 2.0 * full - 0.5 * (half1 + half2)


def toj_combine(full, half_avg, third_avg) -> np.ndarray:
    full, half_avg, third_avg = _same_length(full, half_avg, third_avg)
    w = TOJ_WEIGHTS
    return w.w_full * full + w.w_half * half_avg + w.w_third * third_avg


@dataclass(frozen=True)
class SubpanelEstimates:
    """Unit estimates on the full panel and on its half / third subpanels."""

    full: UnitEstimates
    halves: tuple = ()
    thirds: tuple = ()

    @property
    def N(self) -> int:
        return len(self.full)


def subpanel_estimates(p: PanelData, kind: HeterogeneityKind, order: str = "HPJ") -> SubpanelEstimates:
    order = order.upper()
    if order not in ("NE", "HPJ", "TOJ"):
        raise ValueError(f"unknown jackknife order {order!r}")
    full = estimate_units(p, kind)
    if order == "NE":
        return SubpanelEstimates(full)
    halves = split_half(p)
    if halves.min_length < kind.min_length:
        raise PanelTooShort(
            f"half panels of length {halves.min_length} cannot support {kind.label} (T={p.T})"
        )
    h_est = tuple(estimate_units(sp, kind, f"half{j + 1}") for j, sp in enumerate(halves))
    if order == "HPJ":
        return SubpanelEstimates(full, h_est)
    thirds = split_thirds(p)
    if thirds.min_length < kind.min_length:
        raise PanelTooShort(
            f"third panels of length {thirds.min_length} cannot support {kind.label} (T={p.T})"
        )
    t_est = tuple(estimate_units(sp, kind, f"third{j + 1}") for j, sp in enumerate(thirds))
    return SubpanelEstimates(full, h_est, t_est)


def estimator_terms(estimator: str, sub: SubpanelEstimates):
    """Estimate arrays and weights whose weighted KDE sum is ``estimator``.

    Returns ``(components, weights)`` with ``components`` an ``(M, N)`` array.
    """
    full = sub.full.values
    if estimator in ("NE", "IE"):
        return full[None, :], np.array([1.0])
    if estimator == "HPJ":
        if len(sub.halves) != 2:
            raise ValueError("HPJ needs half-panel estimates")
        comps = [full, sub.halves[0].values, sub.halves[1].values]
        return np.vstack(comps), np.array([2.0, -0.5, -0.5])
    if estimator == "TOJ":
        if len(sub.halves) != 2 or len(sub.thirds) != 3:
            raise ValueError("TOJ needs half- and third-panel estimates")
        w = TOJ_WEIGHTS
        comps = [full] + [e.values for e in sub.halves] + [e.values for e in sub.thirds]
        weights = [w.w_full] + [w.w_half / 2] * 2 + [w.w_third / 3] * 3
        return np.vstack(comps), np.array(weights)
    raise ValueError(f"unknown estimator {estimator!r}")


def jackknife_values(sub: SubpanelEstimates, points, h: float, kernel: KernelSpec) -> dict:
    """NE and, where subpanels are present, HPJ / TOJ density values."""
    f_full = kde(sub.full, points, h, kernel)
    out = {"NE": f_full}
    if sub.halves:
        f_h = [kde(e, points, h, kernel) for e in sub.halves]
        out["HPJ"] = hpj_combine(f_full, f_h[0], f_h[1])
        if sub.thirds:
            f_t = [kde(e, points, h, kernel) for e in sub.thirds]
            out["TOJ"] = toj_combine(f_full, (f_h[0] + f_h[1]) / 2, (f_t[0] + f_t[1] + f_t[2]) / 3)
    return out


def jackknife_density(
    p: PanelData,
    kind: HeterogeneityKind,
    grid,
    h: float,
    kernel: KernelSpec,
    order: str = "HPJ",
) -> EstimateGrid:
    """Naive and split-panel jackknife density estimates on ``grid``.

    The same bandwidth ``h`` is used for every subpanel; per-subpanel
    bandwidths are deliberately not accepted.
    """
    if not isinstance(grid, EvalGrid):
        grid = EvalGrid(grid)
    sub = subpanel_estimates(p, kind, order)
    values = jackknife_values(sub, grid.points, h, kernel)
    return EstimateGrid(grid, values, h, kernel, "density", kind)
