"""Similarity dimension: the unique real root of sum(r_j^D) = 1.

The left-hand side is strictly decreasing in the exponent, so a bracket
always exists and bisection plus a Newton polish converges unconditionally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import RatioList

RESIDUAL_TOL = 1e-13
_BISECTION_STEPS = 30
_NEWTON_STEPS = 60


@dataclass(frozen=True)
class SimilarityDimension:
    value: float
    residual: float
    iterations: int


def real_dirichlet_sum(ratios: RatioList, x: float) -> float:
    """sum of r_j^x over the ratio list (with multiplicity)."""
    return ratios.power_sum(x)


def _dirichlet_derivative(ratios: RatioList, x: float) -> float:
    return sum(m * r**x * math.log(r) for r, m in ratios.distinct)


def similarity_dimension(ratios: RatioList) -> SimilarityDimension:
    """Solve the Moran equation sum(r_j^D) = 1 for the unique real D.

    Bracketing by doubling, 30 bisection steps, then Newton polish down to
    |sum(r_j^D) - 1| < 1e-13.  A single ratio gives D = 0 exactly.
    """
    if ratios.count == 1:
        return SimilarityDimension(0.0, 0.0, 0)

    iterations = 0
    lo = 0.0
    hi = 1.0
    while real_dirichlet_sum(ratios, hi) >= 1.0:
        hi *= 2.0
        iterations += 1
        if hi > 1e6:  # unreachable for valid ratios; defensive stop
            raise AssertionError("bracket expansion ran away")

    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if real_dirichlet_sum(ratios, mid) > 1.0:
            lo = mid
        else:
            hi = mid
        iterations += 1

    x = 0.5 * (lo + hi)
    resid = real_dirichlet_sum(ratios, x) - 1.0
    for _ in range(_NEWTON_STEPS):
        if abs(resid) < RESIDUAL_TOL:
            break
        x -= resid / _dirichlet_derivative(ratios, x)
        resid = real_dirichlet_sum(ratios, x) - 1.0
        iterations += 1

    return SimilarityDimension(x, abs(resid), iterations)
