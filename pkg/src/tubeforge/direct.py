"""Exact direct evaluation of the spray's inner tube volume.

Every scaled copy whose factor lam satisfies lam > eps/g is still in its
polynomial regime; all remaining copies contribute exactly their full
volume, and their factor-power sum is known in closed form from the
geometric series.  Splitting the sum there makes the evaluation exact up
to rounding, with no truncation error.

Scaling words are aggregated by exponent vector over the distinct ratios
(multinomial multiplicities), so the cost grows polynomially with the
depth of the enumeration even when the word count itself is astronomical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceLimitError
from .model import SprayModel, RatioList, generator_tube_volume, total_spray_volume
from .summation import CompensatedSum

# Guard against runaway enumeration (threshold far too small for the list).
MAX_ENUMERATION = 50_000_000


@dataclass(frozen=True)
class ScalingWord:
    """One word over the ratio list: factor, length, and letter indices."""

    factor: float
    depth: int
    letters: tuple


def enumerate_words(ratios: RatioList, threshold: float):
    """All words (with multiplicity, empty word included) with factor > threshold.

    Letters index into the canonical (descending) ratio tuple.  The result
    is sorted by descending factor, ties broken by depth then letters.
    """
    if not (threshold > 0.0):
        raise DomainError("threshold must be positive (the word set is infinite)")
    rs = ratios.ratios
    out = []

    def descend(factor, letters):
        if len(out) >= MAX_ENUMERATION:
            raise ResourceLimitError(
                f"word enumeration exceeded {MAX_ENUMERATION} words"
            )
        out.append(ScalingWord(factor, len(letters), tuple(letters)))
        for j, r in enumerate(rs):
            child = factor * r
            if child > threshold:
                letters.append(j)
                descend(child, letters)
                letters.pop()

    if 1.0 > threshold:
        descend(1.0, [])
    out.sort(key=lambda w: (-w.factor, w.depth, w.letters))
    return out


def factor_multiplicities(ratios: RatioList, threshold: float):
    """Aggregated scaling factors: [(lam, multiplicity, depth), ...].

    One entry per exponent vector over the distinct ratios; multiplicity
    counts the words sharing that vector, multinomial(|e|; e) * prod(m^e).
    Sorted by descending lam with deterministic tie-breaking, so the
    downstream compensated accumulation order is reproducible.
    """
    if not (threshold > 0.0):
        raise DomainError("threshold must be positive (the factor set is infinite)")
    distinct = ratios.distinct
    out = []

    def multiplicity(exponents):
        total = sum(exponents)
        count = math.factorial(total)
        for (_, m), e in zip(distinct, exponents):
            count //= math.factorial(e)
            count *= m**e
        try:
            return float(count)
        except OverflowError:
            raise ResourceLimitError(
                "word multiplicity overflows double precision; threshold too small"
            ) from None

    def descend(j, lam, exponents):
        if len(out) >= MAX_ENUMERATION:
            raise ResourceLimitError(
                f"factor enumeration exceeded {MAX_ENUMERATION} exponent vectors"
            )
        out.append((lam, multiplicity(exponents), sum(exponents), tuple(exponents)))
        for i in range(j, len(distinct)):
            child = lam * distinct[i][0]
            if child > threshold:
                exponents[i] += 1
                descend(i, child, exponents)
                exponents[i] -= 1

    if 1.0 > threshold:
        descend(0, 1.0, [0] * len(distinct))
    out.sort(key=lambda rec: (-rec[0], rec[2], rec[3]))
    return [(lam, mult, depth) for lam, mult, depth, _ in out]


def direct_tube_volume(model: SprayModel, eps: float) -> float:
    """Inner tube volume of the whole spray, exact up to rounding."""
    if not (eps > 0.0):
        raise DomainError(f"tube volume needs eps > 0, got {eps!r}")
    gen = model.generator
    n = gen.dimension
    total = total_spray_volume(model)  # raises on infinite volume

    threshold = eps / gen.inradius
    if threshold >= 1.0:
        return total  # constant regime: every copy is saturated

    head = CompensatedSum()
    enumerated_power = CompensatedSum()
    for lam, mult, _ in factor_multiplicities(model.ratios, threshold):
        lam_n = mult * lam**n
        head.add(lam_n * generator_tube_volume(gen, eps / lam))
        enumerated_power.add(lam_n)

    # Tail: all remaining copies contribute exactly Vol(G) each; their
    # total power sum is the closed-form geometric total minus the head's.
    s_n = model.ratio_power_sum_n()
    tail = gen.volume * (1.0 / (1.0 - s_n) - enumerated_power.value)
    return head.value + tail


def functional_equation_residual(model: SprayModel, eps: float) -> float:
    """V(eps) - sum(r_j^n V(eps/r_j)) - V_G(eps); zero up to rounding."""
    if not (eps > 0.0):
        raise DomainError(f"residual needs eps > 0, got {eps!r}")
    n = model.generator.dimension
    acc = CompensatedSum(direct_tube_volume(model, eps))
    for r, m in model.ratios.distinct:
        acc.add(-m * r**n * direct_tube_volume(model, eps / r))
    acc.add(-generator_tube_volume(model.generator, eps))
    return acc.value


def scaling_exponent_fit(model: SprayModel, depth: int) -> float:
    """Least-squares slope of log V against log eps on eps = g * 2^-m.

    m runs 1..depth; the slope estimates n - D.
    """
    if depth < 8:
        raise DomainError("depth must be at least 8 for a stable fit")
    g = model.generator.inradius
    eps = g * 2.0 ** -np.arange(1, depth + 1)
    vols = np.array([direct_tube_volume(model, e) for e in eps])
    slope = np.polyfit(np.log(eps), np.log(vols), 1)[0]
    return float(slope)
