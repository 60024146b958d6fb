"""Zeros of the Dirichlet polynomial 1 - sum(r_j^s) in a vertical window.

Lattice ratio lists (all ratios integer powers of one base r) reduce to an
ordinary polynomial in z = r^s, solved by a companion matrix; the zeros
then come in exact vertical arithmetic progressions with period
2*pi/ln(1/r).  Nonlattice lists are handled by the argument principle:
winding-number counts over rectangles, recursive bisection until each
rectangle isolates one zero, then Newton refinement.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BoundaryProximityError,
    ConvergenceError,
    DomainError,
    SprayValidationError,
)
from .model import RatioList, SprayModel
from .moran import similarity_dimension

RESIDUAL_TOL = 1e-10
NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 100
_LATTICE_MATCH_TOL = 1e-9
_MAX_DENOMINATOR = 64
_DEDUP_DISTANCE = 1e-8
_PERTURB_RETRIES = 5
_REAL_IM_TOL = 1e-9
# Winding integral controls.
_WINDING_STABLE_TOL = 1e-3
_WINDING_ROUND_TOL = 0.25
_MAX_CONTOUR_NODES = 8_000_000


@dataclass(frozen=True)
class ComplexDimension:
    """A zero of 1 - sum(r_j^s) with multiplicity and verification residual."""

    omega: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class LatticeStructure:
    """Common-base structure of a ratio list, when it exists.

    ``exponents`` aligns with the canonical ratio tuple: r_j = base**k_j,
    gcd of the k_j is 1.  ``period`` is the vertical period 2*pi/ln(1/base)
    of the zero set.
    """

    is_lattice: bool
    base: float = 0.0
    exponents: tuple = ()
    period: float = 0.0


def dirichlet_poly(ratios: RatioList, s):
    """f(s) = 1 - sum(r_j^s); s may be a complex scalar or ndarray."""
    if isinstance(s, np.ndarray):
        acc = np.ones_like(s, dtype=np.complex128)
        for r, m in ratios.distinct:
            acc = acc - m * np.exp(s * math.log(r))
        return acc
    acc = 1.0 + 0.0j
    for r, m in ratios.distinct:
        acc -= m * cmath.exp(s * math.log(r))
    return acc


def dirichlet_poly_deriv(ratios: RatioList, s):
    """f'(s) = -sum(r_j^s ln r_j), in closed form."""
    if isinstance(s, np.ndarray):
        acc = np.zeros_like(s, dtype=np.complex128)
        for r, m in ratios.distinct:
            acc = acc - m * math.log(r) * np.exp(s * math.log(r))
        return acc
    acc = 0.0 + 0.0j
    for r, m in ratios.distinct:
        acc -= m * math.log(r) * cmath.exp(s * math.log(r))
    return acc


def detect_lattice(ratios: RatioList) -> LatticeStructure:
    """Decide whether all ratios are integer powers of a common base.

    Continued-fraction convergents of ln(r_j)/ln(r_1) up to denominator 64;
    accepted only if the reconstructed base**k_j matches every ratio to 1e-9.
    """
    distinct = ratios.distinct
    logs = [math.log(r) for r, _ in distinct]

    if len(distinct) == 1:
        base = distinct[0][0]
        exponents = tuple(1 for _ in ratios.ratios)
        return LatticeStructure(True, base, exponents, 2.0 * math.pi / -math.log(base))

    fracs = []
    for lg in logs:
        x = lg / logs[0]  # >= 1 since r_1 is the largest ratio
        frac = Fraction(x).limit_denominator(_MAX_DENOMINATOR)
        if frac.numerator <= 0:
            return LatticeStructure(False)
        fracs.append(frac)

    denom = 1
    for frac in fracs:
        denom = denom * frac.denominator // math.gcd(denom, frac.denominator)
        if denom > _MAX_DENOMINATOR:
            return LatticeStructure(False)

    ks = [int(frac * denom) for frac in fracs]
    g = 0
    for k in ks:
        g = math.gcd(g, k)
    ks = [k // g for k in ks]

    # Least-squares base exponent over all distinct ratios.
    u = sum(k * lg for k, lg in zip(ks, logs)) / sum(k * k for k in ks)
    base = math.exp(u)
    for (r, _), k in zip(distinct, ks):
        if abs(base**k - r) > _LATTICE_MATCH_TOL:
            return LatticeStructure(False)

    by_ratio = {r: k for (r, _), k in zip(distinct, ks)}
    exponents = tuple(by_ratio[r] for r in ratios.ratios)
    return LatticeStructure(True, base, exponents, 2.0 * math.pi / -u)


def _newton(ratios: RatioList, seed: complex, tol: float = NEWTON_TOL) -> complex:
    s = complex(seed)
    try:
        for _ in range(_NEWTON_MAX_ITER):
            fs = dirichlet_poly(ratios, s)
            if abs(fs) < tol:
                return s
            dfs = dirichlet_poly_deriv(ratios, s)
            if dfs == 0 or abs(s - seed) > 1e6:
                break
            s -= fs / dfs
    except OverflowError:
        pass  # iterate escaped far left; treated as divergence
    raise ConvergenceError(
        f"Newton iteration from seed {seed!r} did not reach |f| < {tol}"
    )


def refine_zero(ratios: RatioList, seed: complex, multiplicity: int = 1) -> ComplexDimension:
    """Polish a seed known to lie near a single zero; Newton on f."""
    omega = _newton(ratios, seed)
    return ComplexDimension(omega, multiplicity, abs(dirichlet_poly(ratios, omega)))


def _cluster_roots(roots, tol_scale=1e-6):
    """Group numerically coincident polynomial roots into (value, count)."""
    remaining = sorted(roots, key=lambda z: (z.real, z.imag))
    clusters = []
    for z in remaining:
        for idx, (c, cnt) in enumerate(clusters):
            if abs(z - c) <= tol_scale * (1.0 + abs(c)):
                clusters[idx] = ((c * cnt + z) / (cnt + 1), cnt + 1)
                break
        else:
            clusters.append((z, 1))
    return clusters


def lattice_zeros(structure: LatticeStructure, ratios: RatioList, im_window: float):
    """All zeros with |Im s| <= T in the lattice case, from the polynomial in z.

    Substituting z = base**s turns 1 - sum(r_j^s) into 1 - sum(z^k_j); its
    roots, lifted through the principal logarithm, generate the vertical
    zero families s = ln(z)/ln(base) + i*k*period.
    """
    if not structure.is_lattice:
        raise DomainError("lattice_zeros requires a lattice ratio list")
    if not (im_window > 0.0):
        raise DomainError("imaginary window must be positive")

    deg = max(structure.exponents)
    coeffs = np.zeros(deg + 1)
    coeffs[-1] = 1.0  # constant term
    for k in structure.exponents:
        coeffs[deg - k] -= 1.0
    roots = np.roots(coeffs)

    log_base = math.log(structure.base)
    period = structure.period
    tol_t = im_window * (1.0 + 1e-12) + 1e-12

    raw = []
    for z, mult in _cluster_roots(list(map(complex, roots))):
        if abs(z) == 0.0:
            continue  # cannot happen: constant term is 1
        s0 = cmath.log(z) / log_base
        k_lo = math.ceil((-tol_t - s0.imag) / period)
        k_hi = math.floor((tol_t - s0.imag) / period)
        for k in range(k_lo, k_hi + 1):
            s = complex(s0.real, s0.imag + k * period)
            if mult == 1:
                try:
                    s = _newton(ratios, s)
                except ConvergenceError:
                    pass  # keep the closed-form lift
            raw.append((s, mult))

    return _symmetrize_and_sort(ratios, raw)


def _symmetrize_and_sort(ratios: RatioList, raw):
    """Force exact conjugate symmetry, dedup, and sort by (Im, Re)."""
    reals, uppers = [], []
    for s, mult in raw:
        if abs(s.imag) <= _REAL_IM_TOL:
            reals.append((complex(s.real, 0.0), mult))
        elif s.imag > 0.0:
            uppers.append((s, mult))
        # lower-half entries are regenerated from the uppers

    def dedup(entries):
        out = []
        for s, mult in sorted(entries, key=lambda e: (e[0].imag, e[0].real)):
            if out and abs(out[-1][0] - s) <= _DEDUP_DISTANCE:
                continue
            out.append((s, mult))
        return out

    reals = dedup(reals)
    uppers = dedup(uppers)
    entries = [(s.conjugate(), m) for s, m in uppers] + reals + uppers
    entries.sort(key=lambda e: (e[0].imag, e[0].real))
    return tuple(
        ComplexDimension(s, m, abs(dirichlet_poly(ratios, s))) for s, m in entries
    )


def _winding_estimate(ratios: RatioList, corners, nodes_per_edge):
    """Trapezoid of f'/f along the closed rectangle, plus the largest
    phase jump between consecutive samples (resolution diagnostic)."""
    pts = []
    for (a, b), n_edge in zip(corners, nodes_per_edge):
        t = np.linspace(0.0, 1.0, n_edge + 1)[:-1]
        pts.append(a + (b - a) * t)
    s = np.concatenate(pts)
    f = dirichlet_poly(ratios, s)
    df = dirichlet_poly_deriv(ratios, s)
    g = df / f

    s_next = np.roll(s, -1)
    g_next = np.roll(g, -1)
    integral = np.sum(0.5 * (g + g_next) * (s_next - s))
    winding = (integral / (2.0j * math.pi)).real

    phase = np.angle(f)
    jumps = np.abs((np.diff(np.concatenate([phase, phase[:1]])) + math.pi)
                   % (2.0 * math.pi) - math.pi)
    return winding, float(np.max(jumps)), s.size


def count_zeros_rectangle(ratios: RatioList, rect) -> int:
    """Zeros (with multiplicity) inside an axis-aligned rectangle.

    rect = (re_lo, re_hi, im_lo, im_hi).  Adaptive composite trapezoid of
    f'/f along the boundary, refined until the estimate stabilizes to 1e-3
    and every phase step is resolved; accepted only within 0.25 of an
    integer, otherwise a zero is presumed near the boundary.
    """
    re_lo, re_hi, im_lo, im_hi = rect
    if not (re_hi > re_lo and im_hi > im_lo):
        raise DomainError(f"degenerate rectangle {rect!r}")
    c1 = complex(re_lo, im_lo)
    c2 = complex(re_hi, im_lo)
    c3 = complex(re_hi, im_hi)
    c4 = complex(re_lo, im_hi)
    corners = [(c1, c2), (c2, c3), (c3, c4), (c4, c1)]
    lengths = [abs(b - a) for a, b in corners]

    density = 6.0
    prev = None
    while True:
        nodes = [max(24, int(math.ceil(length * density))) for length in lengths]
        winding, max_jump, total = _winding_estimate(ratios, corners, nodes)
        resolved = max_jump < 0.5 * math.pi
        if prev is not None and resolved and abs(winding - prev) < _WINDING_STABLE_TOL:
            break
        if total > _MAX_CONTOUR_NODES:
            raise BoundaryProximityError(
                f"winding integral on {rect!r} did not stabilize "
                f"({total} nodes, estimate {winding!r})"
            )
        prev = winding
        density *= 2.0

    nearest = round(winding)
    if abs(winding - nearest) > _WINDING_ROUND_TOL:
        raise BoundaryProximityError(
            f"winding {winding!r} on {rect!r} is not close to an integer"
        )
    return int(nearest)


def _perturb(rect, attempt):
    """Push every side outward; deterministic in rect coordinates and attempt."""
    if attempt == 0:
        return rect
    re_lo, re_hi, im_lo, im_hi = rect
    d = 1e-6 * attempt
    return (
        re_lo - d * (1.0 + abs(re_lo)),
        re_hi + d * (1.0 + abs(re_hi)),
        im_lo - d * (1.0 + abs(im_lo)),
        im_hi + d * (1.0 + abs(im_hi)),
    )


def _count_with_retries(ratios: RatioList, rect) -> int:
    last = None
    for attempt in range(_PERTURB_RETRIES + 1):
        try:
            return count_zeros_rectangle(ratios, _perturb(rect, attempt))
        except BoundaryProximityError as exc:
            last = exc
    raise last


def zero_free_abscissa(ratios: RatioList) -> float:
    """A real abscissa with no zeros to its left.

    Left of the returned value the smallest-ratio terms dominate the whole
    Dirichlet polynomial, so it cannot vanish.
    """
    distinct = ratios.distinct
    r_min, m_min = distinct[-1]

    def margin(sigma):
        others = sum(m * r**sigma for r, m in distinct[:-1])
        return m_min * r_min**sigma - others - 1.0

    hi = 0.0
    lo = 0.0
    for _ in range(400):
        if margin(lo) > 0.0:
            break
        hi = lo
        lo -= 1.0
    else:
        raise ConvergenceError("could not locate a zero-free left abscissa")

    if lo == 0.0:  # margin already positive at 0
        return -0.05

    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if margin(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    sigma = lo - 0.05
    return sigma if margin(sigma) > 0.0 else lo


def _subdivide(ratios: RatioList, rect, count):
    """Recursive bisection until each rectangle isolates one zero."""
    found = []
    stack = [(rect, count)]
    while stack:
        (re_lo, re_hi, im_lo, im_hi), cnt = stack.pop()
        if cnt == 0:
            continue
        width = re_hi - re_lo
        height = im_hi - im_lo
        if cnt == 1:
            seed = complex(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi))
            try:
                cd = refine_zero(ratios, seed)
            except ConvergenceError:
                cd = None
            if cd is not None:
                margin = 1e-7 * (1.0 + max(width, height))
                inside = (
                    re_lo - margin <= cd.omega.real <= re_hi + margin
                    and im_lo - margin <= cd.omega.imag <= im_hi + margin
                )
                if inside:
                    found.append((cd.omega, 1))
                    continue
        if max(width, height) < _DEDUP_DISTANCE:
            center = complex(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi))
            found.append((center, cnt))  # multiple zero: carry the count
            continue
        if height >= width:
            mid = 0.5 * (im_lo + im_hi)
            halves = [(re_lo, re_hi, im_lo, mid), (re_lo, re_hi, mid, im_hi)]
        else:
            mid = 0.5 * (re_lo + re_hi)
            halves = [(re_lo, mid, im_lo, im_hi), (mid, re_hi, im_lo, im_hi)]
        for half in halves:
            stack.append((half, _count_with_retries(ratios, half)))
    return found


def find_complex_dimensions(model: SprayModel, im_window: float, re_floor=None):
    """The complex-dimension set in [re_floor, D+1/2] x [-T, T].

    Lattice input takes the exact closed-form route; nonlattice input is
    located by the argument principle and refined by Newton.  The result is
    conjugate-symmetric, deduplicated, sorted by (Im, Re), and checked:
    total multiplicity must match the winding count of the whole window,
    and no zero may approach the integer poles 0..n-1 of the tube-formula
    numerator.
    """
    if not (im_window > 0.0):
        raise DomainError("imaginary window must be positive")
    ratios = model.ratios
    dim = similarity_dimension(ratios)
    structure = detect_lattice(ratios)

    if structure.is_lattice:
        zeros = lattice_zeros(structure, ratios, im_window)
        if re_floor is not None:
            zeros = tuple(z for z in zeros if z.omega.real >= re_floor)
    else:
        sigma = re_floor if re_floor is not None else zero_free_abscissa(ratios)
        right = dim.value + 0.5
        if sigma >= right:
            raise DomainError(f"re_floor {sigma!r} is right of D + 1/2")
        total = _count_with_retries(ratios, (sigma, right, -im_window, im_window))

        # Conjugate symmetry halves the search: a thin symmetric band
        # catches real (and near-real) zeros, the upper half is mirrored.
        band = min(1e-3, 0.25 * im_window)
        raw = _subdivide(ratios, (sigma, right, -band, band),
                         _count_with_retries(ratios, (sigma, right, -band, band)))
        raw += _subdivide(ratios, (sigma, right, band, im_window),
                          _count_with_retries(ratios, (sigma, right, band, im_window)))
        zeros = _symmetrize_and_sort(ratios, raw)

        total_mult = sum(z.multiplicity for z in zeros)
        if total_mult != total:
            raise ConvergenceError(
                f"zero search found multiplicity {total_mult}, winding count "
                f"of the full window is {total}"
            )

    _check_zero_set(model, zeros, dim.value)
    return zeros


def _check_zero_set(model: SprayModel, zeros, dim_value: float):
    n = model.generator.dimension
    reals = [z for z in zeros if abs(z.omega.imag) <= _REAL_IM_TOL]
    for z in zeros:
        if z.omega.real > dim_value + 1e-9:
            raise SprayValidationError(
                f"zero {z.omega!r} lies right of the similarity dimension"
            )
        for i in range(n):
            if abs(z.omega - i) < 1e-6:
                raise SprayValidationError(
                    f"zero {z.omega!r} collides with the integer pole {i}; "
                    "residue separation breaks down"
                )
    if len(reals) != 1 or abs(reals[0].omega.real - dim_value) > 1e-10:
        raise SprayValidationError(
            "the real zero of the Dirichlet polynomial must be the "
            f"similarity dimension {dim_value!r}, got {[z.omega for z in reals]!r}"
        )
