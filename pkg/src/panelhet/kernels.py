"""Second-order kernels, their CDFs and the Gaussian second derivative."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import UnsupportedDerivativeKernel

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class KernelSpec:
    """Kernel identity with moment constants.

    ``kappa1`` is the second moment of the kernel and ``kappa2`` the integral
    of its square. ``code`` is the integer id used by the compiled core.
    """

    id: str
    kappa1: float
    kappa2: float
    code: int

    def __call__(self, u):
        return k_eval(self, u)


EPANECHNIKOV = KernelSpec("epanechnikov", 1.0 / 5.0, 3.0 / 5.0, 0)
GAUSSIAN = KernelSpec("gaussian", 1.0, 1.0 / (2.0 * math.sqrt(math.pi)), 1)

KERNELS = {k.id: k for k in (EPANECHNIKOV, GAUSSIAN)}


def get_kernel(name) -> KernelSpec:
    if isinstance(name, KernelSpec):
        return name
    try:
        return KERNELS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; choose from {sorted(KERNELS)}") from None


def k_eval(spec: KernelSpec, u):
    u = np.asarray(u, dtype=float)
    if spec.code == 0:
        out = np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0)
    else:
        out = np.exp(-0.5 * u * u) * _INV_SQRT_2PI
    return out[()] if out.ndim == 0 else out


def k_cdf(spec: KernelSpec, u):
    u = np.asarray(u, dtype=float)
    if spec.code == 0:
        c = np.clip(u, -1.0, 1.0)
        out = 0.75 * (c - c**3 / 3.0) + 0.5
    else:
        out = ndtr(u)
    return out[()] if out.ndim == 0 else out


def k_d2(spec: KernelSpec, u):
    """Second derivative ``(u**2 - 1) * phi(u)``; defined for the Gaussian only."""
    if spec.code != 1:
        raise UnsupportedDerivativeKernel(
            f"second derivative is only provided for the gaussian kernel, not {spec.id}"
        )
    u = np.asarray(u, dtype=float)
    out = (u * u - 1.0) * np.exp(-0.5 * u * u) * _INV_SQRT_2PI
    return out[()] if out.ndim == 0 else out
