"""Monte Carlo study with heterogeneous stationary AR(1) units.

Unit parameters: mean ``varsigma ~ N(-1, 1)``, AR coefficient
``phi ~ 2 Beta(2, 4) - 1`` and variance ``sigma2 ~ 3 Beta(3, 2)``, so the
true unit mean, variance and first autocorrelation are ``varsigma``,
``sigma2`` and ``phi``. Each replication draws from its own RNG stream
derived from ``(seed, replication)``, which makes results independent of the
number of worker threads.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np
from scipy.optimize import brentq

from .bandwidth import BandwidthPolicy, resolve
from .density import ESTIMATORS, kde
from .errors import OutOfDomain, OutOfSupport
from .jackknife import estimator_terms, jackknife_values, subpanel_estimates
from .kernels import EPANECHNIKOV, KernelSpec
from .panel import PanelData
from .rbc import RbcConfig, rbc_band
from .unit_stats import Autocorrelation, Autocovariance, HeterogeneityKind, Mean

_STD_NORMAL = NormalDist()
SUPPORTED_KINDS = (Mean(), Autocovariance(0), Autocorrelation(1))


@dataclass(frozen=True)
class DgpDraw:
    """Per-unit parameters; fields are scalars or length-N arrays."""

    varsigma: np.ndarray
    phi: np.ndarray
    sigma2: np.ndarray

    def truth(self, kind: HeterogeneityKind) -> np.ndarray:
        if kind == Mean():
            return np.asarray(self.varsigma)
        if kind == Autocovariance(0):
            return np.asarray(self.sigma2)
        if kind == Autocorrelation(1):
            return np.asarray(self.phi)
        raise ValueError(f"no true value available for {kind.label}")


def draw_unit_params(rng: np.random.Generator, size=None) -> DgpDraw:
    varsigma = rng.normal(-1.0, 1.0, size)
    phi = 2.0 * rng.beta(2.0, 4.0, size) - 1.0
    sigma2 = 3.0 * rng.beta(3.0, 2.0, size)
    return DgpDraw(varsigma, phi, sigma2)


def simulate_ar1(params: DgpDraw, T: int, rng: np.random.Generator) -> np.ndarray:
    """N x T observations ``t = 1..T``; ``y_0`` is drawn from the stationary law."""
    mu = np.atleast_1d(np.asarray(params.varsigma, dtype=float))
    phi = np.atleast_1d(np.asarray(params.phi, dtype=float))
    s2 = np.atleast_1d(np.asarray(params.sigma2, dtype=float))
    n = mu.shape[0]
    y_prev = mu + np.sqrt(s2) * rng.standard_normal(n)
    u = rng.standard_normal((T, n))
    scale = np.sqrt((1.0 - phi * phi) * s2)
    drift = (1.0 - phi) * mu
    y = np.empty((T, n))
    for t in range(T):
        y_prev = drift + phi * y_prev + scale * u[t]
        y[t] = y_prev
    return y.T


def simulate_panel(N: int, T: int, rng: np.random.Generator):
    if N < 1 or T < 1:
        raise ValueError(f"N and T must be positive, got N={N}, T={T}")
    params = draw_unit_params(rng, N)
    y = simulate_ar1(params, T, rng)
    return PanelData(tuple(range(N)), tuple(range(1, T + 1)), y), params


# -- true distributions --------------------------------------------------------


def _beta32_pdf(u):
    return 12.0 * u * u * (1.0 - u)


def _beta32_cdf(u):
    return u**3 * (4.0 - 3.0 * u)


def _beta24_pdf(u):
    return 20.0 * u * (1.0 - u) ** 3


def _beta24_cdf(u):
    return 1.0 - (1.0 - u) ** 5 - 5.0 * u * (1.0 - u) ** 4


def _support(kind):
    if kind == Mean():
        return -math.inf, math.inf
    if kind == Autocovariance(0):
        return 0.0, 3.0
    if kind == Autocorrelation(1):
        return -1.0, 1.0
    raise ValueError(f"no true distribution for {kind.label}")


def _check_support(kind, x):
    lo, hi = _support(kind)
    if not (lo <= x <= hi):
        raise OutOfSupport(f"x={x} outside support [{lo}, {hi}] of {kind.label}")


def true_density(kind: HeterogeneityKind, x: float) -> float:
    _check_support(kind, x)
    if kind == Mean():
        return _STD_NORMAL.pdf(x + 1.0)
    if kind == Autocovariance(0):
        return _beta32_pdf(x / 3.0) / 3.0
    return _beta24_pdf((x + 1.0) / 2.0) / 2.0


def true_cdf(kind: HeterogeneityKind, x: float) -> float:
    _check_support(kind, x)
    if kind == Mean():
        return _STD_NORMAL.cdf(x + 1.0)
    if kind == Autocovariance(0):
        return _beta32_cdf(x / 3.0)
    return _beta24_cdf((x + 1.0) / 2.0)


def true_quantile(kind: HeterogeneityKind, p: float) -> float:
    if not 0.0 < p < 1.0:
        raise OutOfDomain(f"quantile level must be in (0, 1), got {p}")
    lo, hi = _support(kind)
    if kind == Mean():
        lo, hi = -1.0 - 40.0, -1.0 + 40.0
    return brentq(lambda x: true_cdf(kind, x) - p, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps)


# -- study -------------------------------------------------------------------


@dataclass(frozen=True)
class McConfig:
    N: int = 1000
    T: int = 24
    R: int = 500
    seed: int = 0
    kinds: tuple = SUPPORTED_KINDS
    quantiles: tuple = (0.2, 0.4, 0.6, 0.8)
    estimators: tuple = ESTIMATORS
    kernel: KernelSpec = EPANECHNIKOV
    bandwidth: BandwidthPolicy = field(default_factory=BandwidthPolicy)
    ie_bandwidth: BandwidthPolicy = field(default_factory=BandwidthPolicy)
    rbc: RbcConfig = field(default_factory=RbcConfig)

    def __post_init__(self):
        if self.R < 1:
            raise ValueError(f"replications must be >= 1, got R={self.R}")
        if self.N < 2 or self.T < 1:
            raise ValueError(f"need N >= 2 and T >= 1, got N={self.N}, T={self.T}")
        if not self.kinds or any(k not in SUPPORTED_KINDS for k in self.kinds):
            raise ValueError(f"kinds must be a nonempty subset of {[k.label for k in SUPPORTED_KINDS]}")
        if not self.quantiles or any(not 0.0 < q < 1.0 for q in self.quantiles):
            raise OutOfDomain("quantiles must lie in (0, 1)")
        if not self.estimators or any(e not in ESTIMATORS for e in self.estimators):
            raise ValueError(f"estimators must be a nonempty subset of {ESTIMATORS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "T": self.T,
            "R": self.R,
            "seed": self.seed,
            "kinds": [k.label for k in self.kinds],
            "quantiles": list(self.quantiles),
            "estimators": list(self.estimators),
            "kernel": self.kernel.id,
            "bandwidth": _policy_dict(self.bandwidth),
            "ie_bandwidth": _policy_dict(self.ie_bandwidth),
            "ci_level": 1.0 - self.rbc.alpha,
            "rbc_bias_factor": self.rbc.bias_factor,
            "rbc_lambda": self.rbc.lam,
        }


def _policy_dict(p: BandwidthPolicy) -> dict:
    return {"mode": p.mode, "h": p.h, "scale": p.scale}


@dataclass(frozen=True)
class McRow:
    kind: str
    quantile: float
    estimator: str
    true: float
    bias: float
    std: float
    cp: float
    h_mean: float
    h_std: float


CSV_COLUMNS = ("kind", "quantile", "estimator", "true", "bias", "std", "cp", "h_mean", "h_std")


@dataclass
class McStudyResult:
    config: McConfig
    rows: list

    def row(self, kind, quantile: float, estimator: str) -> McRow:
        label = kind.label if isinstance(kind, HeterogeneityKind) else kind
        for r in self.rows:
            if r.kind == label and r.estimator == estimator and math.isclose(r.quantile, quantile):
                return r
        raise KeyError((label, quantile, estimator))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.kind, repr(r.quantile), r.estimator] + [repr(float(getattr(r, c))) for c in CSV_COLUMNS[3:]])
        return buf.getvalue()


def replication_rng(seed: int, r: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))


def _replicate(cfg: McConfig, points: dict, r: int):
    """Estimates, coverage indicators and bandwidths for one replication.

    Returns three arrays of shape ``(kinds, quantiles, estimators)``.
    """
    rng = replication_rng(cfg.seed, r)
    panel, params = simulate_panel(cfg.N, cfg.T, rng)
    shape = (len(cfg.kinds), len(cfg.quantiles), len(cfg.estimators))
    est = np.empty(shape)
    cover = np.empty(shape)
    bw = np.empty(shape)
    feasible = [e for e in cfg.estimators if e != "IE"]
    order = "TOJ" if "TOJ" in feasible else "HPJ" if "HPJ" in feasible else "NE"
    K = cfg.kernel
    for a, kind in enumerate(cfg.kinds):
        x, truth = points[kind]
        if feasible:
            sub = subpanel_estimates(panel, kind, order)
            h = resolve(cfg.bandwidth, sub.full, K)
            vals = jackknife_values(sub, x, h, K)
        for c, name in enumerate(cfg.estimators):
            if name == "IE":
                xi = params.truth(kind)
                h_e = resolve(cfg.ie_bandwidth, xi, K)
                value = kde(xi, x, h_e, K)
                band = rbc_band(xi[None, :], [1.0], xi, x, h_e, K, cfg.rbc)
            else:
                h_e = h
                value = vals[name]
                comps, weights = estimator_terms(name, sub)
                band = rbc_band(comps, weights, sub.full.values, x, h_e, K, cfg.rbc)
            est[a, :, c] = value
            cover[a, :, c] = (band["lo"] <= truth) & (truth <= band["hi"])
            bw[a, :, c] = h_e
    return est, cover, bw


def _mean_std(v: np.ndarray):
    n = v.size
    m = math.fsum(v) / n
    if n < 2:
        return m, 0.0
    return m, math.sqrt(math.fsum((v - m) ** 2) / (n - 1))


def run_study(cfg: McConfig, threads: int = 1) -> McStudyResult:
    points = {}
    for kind in cfg.kinds:
        x = np.array([true_quantile(kind, q) for q in cfg.quantiles])
        points[kind] = (x, np.array([true_density(kind, v) for v in x]))
    work = lambda r: _replicate(cfg, points, r)  # noqa: E731
    if threads > 1 and cfg.R > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reps = list(pool.map(work, range(cfg.R)))
    else:
        reps = [work(r) for r in range(cfg.R)]
    est = np.stack([e for e, _, _ in reps])
    cover = np.stack([c for _, c, _ in reps])
    bw = np.stack([b for _, _, b in reps])
    rows = []
    for a, kind in enumerate(cfg.kinds):
        for b, q in enumerate(cfg.quantiles):
            truth = float(points[kind][1][b])
            for c, name in enumerate(cfg.estimators):
                m, s = _mean_std(est[:, a, b, c])
                hm, hs = _mean_std(bw[:, a, b, c])
                cp = math.fsum(cover[:, a, b, c]) / cfg.R
                rows.append(McRow(kind.label, float(q), name, truth, m - truth, s, cp, hm, hs))
    return McStudyResult(cfg, rows)
