"""Robust bias-corrected confidence intervals for (jackknifed) density estimates.

Each estimator is written as ``(N h)^-1 sum_i Kc_i(x)`` where the per-unit
combined kernel ``Kc_i`` includes the jackknife terms and the estimated
smoothing-bias term ``c * kappa1 * lambda**3 * L''((x - xi_i) / b)``. The
interval is centred at that debiased value and uses the sample variance of
``Kc_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from ._backend import core
from .density import kde_d2
from .errors import InvalidBandwidth, LengthMismatch, OutOfDomain, TooFewUnits, UnsupportedDerivativeKernel
from .jackknife import TOJ_WEIGHTS
from .kernels import GAUSSIAN, KernelSpec, k_d2, k_eval

BIAS_FACTORS = {"none": 0.0, "half": 0.5, "one": 1.0}


@dataclass(frozen=True)
class RbcConfig:
    """Settings for the bias-corrected intervals.

    ``bias_factor`` multiplies ``h**2 * kappa1 * f''``: 0.5 targets the
    leading smoothing bias, 1.0 is the unhalved variant, 0.0 switches the
    correction off.
    """

    alpha: float = 0.05
    lam: float = 1.0
    bias_factor: float = 0.5
    L: KernelSpec = GAUSSIAN

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise OutOfDomain(f"alpha must be in (0, 1), got {self.alpha}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise InvalidBandwidth(f"lambda must be positive, got {self.lam}")
        if self.bias_factor not in BIAS_FACTORS.values():
            raise ValueError(f"bias_factor must be one of {sorted(BIAS_FACTORS.values())}")
        if self.L.code != GAUSSIAN.code:
            raise UnsupportedDerivativeKernel("derivative kernel L must be gaussian")

    def pilot_bandwidth(self, h: float) -> float:
        return h / self.lam

    def bias_coef(self, kernel: KernelSpec) -> float:
        return self.bias_factor * kernel.kappa1 * self.lam**3


@dataclass(frozen=True)
class RbcInterval:
    x: float
    debiased: float
    sigma: float
    lo: float
    hi: float


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise OutOfDomain(f"quantile level must be in (0, 1), got {p}")
    return NormalDist().inv_cdf(p)


def _check_h(h):
    if not (np.isfinite(h) and h > 0):
        raise InvalidBandwidth(f"bandwidth must be positive and finite, got {h}")


def bias_estimate(xi, points, h: float, kernel: KernelSpec, cfg: RbcConfig = RbcConfig()) -> np.ndarray:
    """Estimated smoothing bias ``c * h**2 * kappa1 * f''(x)`` with pilot ``b = h / lambda``."""
    _check_h(h)
    return cfg.bias_factor * h**2 * kernel.kappa1 * kde_d2(xi, points, cfg.pilot_bandwidth(h))


def combined_kernel(components, weights, lxi, x: float, h: float, K: KernelSpec, cfg: RbcConfig) -> np.ndarray:
    """Per-unit ``sum_m w_m K((x - comp[m, i]) / h) - c kappa1 lambda^3 L''((x - lxi_i) / b)``."""
    _check_h(h)
    comps = np.atleast_2d(np.asarray(components, dtype=float))
    lxi = np.asarray(lxi, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if comps.shape[1] != lxi.shape[0] or comps.shape[0] != weights.shape[0]:
        raise LengthMismatch(f"components {comps.shape}, weights {weights.shape}, lxi {lxi.shape}")
    b = cfg.pilot_bandwidth(h)
    out = weights @ k_eval(K, (x - comps) / h)
    return out - cfg.bias_coef(K) * k_d2(cfg.L, (x - lxi) / b)


def combined_kernel_ne(xi, x: float, h: float, K: KernelSpec, cfg: RbcConfig = RbcConfig()) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    return combined_kernel(xi[None, :], [1.0], xi, x, h, K, cfg)


def combined_kernel_hpj(xi_full, xi_half1, xi_half2, x: float, h: float, K: KernelSpec,
                        cfg: RbcConfig = RbcConfig()) -> np.ndarray:
    arrs = [np.asarray(a, dtype=float).ravel() for a in (xi_full, xi_half1, xi_half2)]
    if len({a.shape for a in arrs}) != 1:
        raise LengthMismatch(f"estimate lengths differ: {[a.size for a in arrs]}")
    return combined_kernel(np.vstack(arrs), [2.0, -0.5, -0.5], arrs[0], x, h, K, cfg)


def combined_kernel_toj(xi_full, halves, thirds, x: float, h: float, K: KernelSpec,
                        cfg: RbcConfig = RbcConfig()) -> np.ndarray:
    arrs = [np.asarray(a, dtype=float).ravel() for a in (xi_full, *halves, *thirds)]
    if len(halves) != 2 or len(thirds) != 3 or len({a.shape for a in arrs}) != 1:
        raise LengthMismatch("TOJ needs one full, two half and three third estimate sequences of equal length")
    w = TOJ_WEIGHTS
    weights = [w.w_full, w.w_half / 2, w.w_half / 2, w.w_third / 3, w.w_third / 3, w.w_third / 3]
    return combined_kernel(np.vstack(arrs), weights, arrs[0], x, h, K, cfg)


def rbc_interval(per_unit_kernel, N: int, h: float, alpha: float = 0.05, x: float = math.nan) -> RbcInterval:
    kv = np.asarray(per_unit_kernel, dtype=float).ravel()
    if N != kv.size:
        raise LengthMismatch(f"N={N} but {kv.size} per-unit values")
    if N < 2:
        raise TooFewUnits(f"variance estimate needs N >= 2, got N={N}")
    _check_h(h)
    m1 = math.fsum(kv) / N
    # shifted two-pass variance: exact zero for constant input
    d = kv - kv[0]
    dm = math.fsum(d) / N
    var = math.fsum((d - dm) ** 2) / N
    sigma = math.sqrt(var / (N * h * h))
    debiased = m1 / h
    z = normal_quantile(1.0 - alpha / 2.0)
    return RbcInterval(x, debiased, sigma, debiased - z * sigma, debiased + z * sigma)


def rbc_band(components, weights, lxi, points, h: float, K: KernelSpec, cfg: RbcConfig = RbcConfig()) -> dict:
    """Pointwise intervals over ``points`` for the estimator defined by ``components``/``weights``.

    Returns a dict of arrays ``debiased``, ``sigma``, ``lo``, ``hi``.
    """
    _check_h(h)
    comps = np.ascontiguousarray(np.atleast_2d(np.asarray(components, dtype=float)))
    lxi = np.ascontiguousarray(lxi, dtype=float)
    n = comps.shape[1]
    if n < 2:
        raise TooFewUnits(f"variance estimate needs N >= 2, got N={n}")
    pts = np.ascontiguousarray(points, dtype=float)
    s1, s2 = core.combined_moments(
        comps, np.ascontiguousarray(weights, dtype=float), lxi, pts,
        float(h), cfg.pilot_bandwidth(h), cfg.bias_coef(K), K.code,
    )
    m1, m2 = s1 / n, s2 / n
    sigma = np.sqrt(np.maximum(m2 - m1 * m1, 0.0) / (n * h * h))
    debiased = m1 / h
    z = normal_quantile(1.0 - cfg.alpha / 2.0)
    return {"debiased": debiased, "sigma": sigma, "lo": debiased - z * sigma, "hi": debiased + z * sigma}
