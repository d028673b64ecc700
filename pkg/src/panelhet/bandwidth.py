"""Normal-reference bandwidth rule and fixed-bandwidth overrides."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateDispersion, InvalidBandwidth, TooFewUnits
from .kernels import KernelSpec

# h = C * s * N^(-1/5); Epanechnikov constant is the canonical rescaling of 1.06
ROT_CONSTANTS = {"gaussian": 1.06, "epanechnikov": 2.34}


@dataclass(frozen=True)
class BandwidthPolicy:
    """Either a fixed bandwidth (``h`` set) or the rule of thumb times ``scale``."""

    h: Optional[float] = None
    scale: float = 1.0

    def __post_init__(self):
        if self.h is not None and not (math.isfinite(self.h) and self.h > 0):
            raise InvalidBandwidth(f"fixed bandwidth must be positive, got {self.h}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise InvalidBandwidth(f"bandwidth scale must be positive, got {self.scale}")

    @classmethod
    def fixed(cls, h: float) -> "BandwidthPolicy":
        return cls(h=float(h))

    @classmethod
    def rule_of_thumb(cls, scale: float = 1.0) -> "BandwidthPolicy":
        return cls(None, float(scale))

    @property
    def mode(self) -> str:
        return "fixed" if self.h is not None else "rot"


def robust_spread(x) -> float:
    """``min(sd, IQR / 1.349)``, falling back to ``sd`` when the IQR is zero."""
    x = np.asarray(x, dtype=float).ravel()
    sd = float(np.std(x, ddof=1))
    q75, q25 = np.percentile(x, [75, 25])
    iqr = float(q75 - q25)
    return min(sd, iqr / 1.349) if iqr > 0 else sd


def rot_from_spread(s: float, n: int, kernel: KernelSpec) -> float:
    return ROT_CONSTANTS[kernel.id] * s * n ** (-0.2)


def rot_bandwidth(xi, kernel: KernelSpec) -> float:
    x = np.asarray(xi, dtype=float).ravel()
    if x.size < 2:
        raise TooFewUnits(f"rule-of-thumb bandwidth needs N >= 2, got N={x.size}")
    s = robust_spread(x)
    if not s > 0:
        raise DegenerateDispersion("unit estimates have zero dispersion")
    return rot_from_spread(s, x.size, kernel)


def resolve(policy: BandwidthPolicy, xi, kernel: KernelSpec) -> float:
    if policy.h is not None:
        return policy.h
    return policy.scale * rot_bandwidth(xi, kernel)
