"""Pure numpy fallback for the compiled kernel-sum loops in ``_core.pyx``."""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

_INV_SQRT_2PI = 0.3989422804014327
_CHUNK = 1 << 20  # max elements per (points x units) block


def _pdf(u, kernel):
    if kernel == 0:
        return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0)
    return np.exp(-0.5 * u * u) * _INV_SQRT_2PI


def _cdf(u, kernel):
    if kernel == 0:
        c = np.clip(u, -1.0, 1.0)
        return 0.75 * (c - c * c * c / 3.0) + 0.5
    return ndtr(u)


def _d2gauss(u):
    return (u * u - 1.0) * np.exp(-0.5 * u * u) * _INV_SQRT_2PI


def _blocks(g, n):
    step = max(1, _CHUNK // max(n, 1))
    for lo in range(0, g, step):
        yield slice(lo, min(g, lo + step))


def kernel_sum(data, points, h, kernel, mode):
    data = np.ascontiguousarray(data, dtype=float)
    points = np.ascontiguousarray(points, dtype=float)
    out = np.empty(points.shape[0])
    inv_h = 1.0 / h
    for sl in _blocks(points.shape[0], data.shape[0]):
        u = (points[sl, None] - data[None, :]) * inv_h
        if mode == 0:
            v = _pdf(u, kernel)
        elif mode == 1:
            v = _cdf(u, kernel)
        else:
            v = _d2gauss(u)
        out[sl] = v.sum(axis=1)
    return out


def combined_moments(comp, weights, lxi, points, h, b, coef, kernel):
    comp = np.ascontiguousarray(comp, dtype=float)
    weights = np.asarray(weights, dtype=float)
    lxi = np.asarray(lxi, dtype=float)
    points = np.ascontiguousarray(points, dtype=float)
    m, n = comp.shape
    s1 = np.empty(points.shape[0])
    s2 = np.empty(points.shape[0])
    inv_h, inv_b = 1.0 / h, 1.0 / b
    for sl in _blocks(points.shape[0], n * m):
        x = points[sl, None]
        kv = np.zeros((x.shape[0], n))
        for r in range(m):
            kv += weights[r] * _pdf((x - comp[r][None, :]) * inv_h, kernel)
        kv -= coef * _d2gauss((x - lxi[None, :]) * inv_b)
        s1[sl] = kv.sum(axis=1)
        s2[sl] = (kv * kv).sum(axis=1)
    return s1, s2
