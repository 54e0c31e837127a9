"""Stability tests on the disk and bidisk, stability radius, and friends."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (DegenerateResultant, InputError, NoUnstableBracket,
                     NotStable, ZeroConstantTerm)
from .poly import (BiPoly, UniPoly, polyroots, resultant_det, toeplitz_pair,
                   trig_bezoutian)

STABLE = "stable"
SEMI_STABLE = "semi-stable"
UNSTABLE = "unstable"
INCONCLUSIVE = "inconclusive"

PSD_TOL = 1e-9
DEFAULT_GRID = 512


@dataclass(frozen=True)
class StabilityVerdict:
    status: str
    margin: float
    witness: tuple | complex | None = None
    grid: int = 0

    @property
    def is_semistable(self) -> bool:
        """True for both stable and semi-stable verdicts."""
        return self.status in (STABLE, SEMI_STABLE)


@dataclass(frozen=True)
class RadiusResult:
    s: float
    tol: float
    evaluations: int = 0


@dataclass(frozen=True)
class SelfReversiveResult:
    flag: bool
    alpha: complex
    corner_unimodular: bool
    defect: float


@dataclass(frozen=True)
class KneseResult:
    c: float
    holds: bool
    worst_slack: float
    points: int = field(default=500)


def _as_unipoly(u) -> UniPoly:
    return u if isinstance(u, UniPoly) else UniPoly(u)


def schur_cohn(u, tol: float = PSD_TOL) -> StabilityVerdict:
    """Classify a univariate polynomial relative to the closed unit disk.

    Uses the Hermitian matrix ``Q = A A^* - B^* B`` built from the triangular
    Toeplitz matrices of the coefficients; ``Q`` is positive definite exactly
    when every root lies outside the closed disk.  When the smallest
    eigenvalue sits within ``tol`` (relative) of zero the companion roots
    decide between semi-stable and unstable.

    Returns
    -------
    StabilityVerdict
        ``margin`` is the smallest eigenvalue of ``Q``; for an unstable
        polynomial ``witness`` is the root of smallest modulus.
    """
    u = _as_unipoly(u)
    if u.coeffs[0] == 0:
        raise ZeroConstantTerm("u(0) = 0")
    if u.degree == 0:
        return StabilityVerdict(STABLE, float("inf"), None, 0)
    A, B = toeplitz_pair(u.coeffs)
    Q = A @ A.conj().T - B.conj().T @ B
    m = float(np.linalg.eigvalsh(0.5 * (Q + Q.conj().T))[0])
    scale = max(float(np.linalg.norm(A, 2)) ** 2, float(np.linalg.norm(B, 2)) ** 2)
    roots = u.roots()
    inner = roots[np.argmin(np.abs(roots))]
    if m > tol * scale:
        return StabilityVerdict(STABLE, m, None, 0)
    if m < -tol * scale:
        return StabilityVerdict(UNSTABLE, m, complex(inner), 0)
    # boundary band: the roots arbitrate
    if abs(inner) < 1.0 - 1e-7:
        return StabilityVerdict(UNSTABLE, m, complex(inner), 0)
    return StabilityVerdict(SEMI_STABLE, m, complex(inner), 0)


def _slice_witness(p: BiPoly, z1: complex):
    roots = p.slice_z1(z1).roots()
    if roots.size == 0:
        return None
    return (complex(z1), complex(roots[np.argmin(np.abs(roots))]))


def _bezoutian_minimum(Q, grid: int, refine: int = 3):
    """Minimum eigenvalue of a Laurent matrix on the circle.

    Grid sweep followed by bounded scalar minimization around the
    ``refine`` smallest local minima of the grid.
    """
    _, _, mins = Q.min_eig_on_circle(grid)
    step = 2 * np.pi / grid
    left, right = np.roll(mins, 1), np.roll(mins, -1)
    local = np.nonzero((mins <= left) & (mins <= right))[0]
    local = local[np.argsort(mins[local])][:refine]

    def f(t):
        M = Q(np.exp(1j * t))
        return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])

    best_val, best_t = float(np.min(mins)), float(np.argmin(mins) * step)
    for k in local:
        t0 = k * step
        res = minimize_scalar(f, bounds=(t0 - step, t0 + step), method="bounded",
                              options={"xatol": 1e-12})
        if res.fun < best_val:
            best_val, best_t = float(res.fun), float(res.x)
    return best_val, best_t


def semistability(p: BiPoly, grid: int = DEFAULT_GRID,
                  tol: float = PSD_TOL) -> StabilityVerdict:
    """Classify ``p`` relative to the closed unit bidisk.

    ``p`` is stable iff ``p(., 0)`` is stable on the disk and, for every
    ``z1`` on the circle, the slice ``p(z1, .)`` is stable, which is read off
    from the smallest eigenvalue of the Bezoutian ``Q(z1)``.
    """
    if p.constant == 0:
        raise ZeroConstantTerm("p(0, 0) = 0")
    n1, n2 = p.bidegree
    p0 = UniPoly(p.coeffs[:, 0])
    base = schur_cohn(p0, tol) if p0.degree > 0 else StabilityVerdict(STABLE, np.inf)
    if base.status == UNSTABLE:
        return StabilityVerdict(UNSTABLE, base.margin, (base.witness, 0j), grid)
    if n2 == 0:
        return StabilityVerdict(base.status, base.margin, None, grid)
    Q = trig_bezoutian(p)
    # Q vanishes identically for self-reversive p, so measure against p itself
    scale = max(Q.max_abs(), p.scale ** 2)
    if n1 == 0:
        M = Q.coeff(0)
        m, theta = float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0]), 0.0
    else:
        m, theta = _bezoutian_minimum(Q, grid)
    margin = min(m, base.margin)
    z1 = np.exp(1j * theta)
    if m < -tol * scale:
        return StabilityVerdict(UNSTABLE, margin, _slice_witness(p, z1), grid)
    if m > tol * scale and base.status == STABLE:
        return StabilityVerdict(STABLE, margin, None, grid)
    w = _slice_witness(p, z1)
    if w is not None and abs(w[1]) < 1.0 - 1e-6:
        return StabilityVerdict(INCONCLUSIVE, margin, w, grid)
    return StabilityVerdict(SEMI_STABLE, margin, w, grid)


def _direction_bracket(p: BiPoly, count: int = 16) -> float:
    # smallest |t| with p(t w1, t w2) = 0 over fixed unimodular directions
    n1, n2 = p.bidegree
    i, j = np.indices(p.coeffs.shape)
    best = np.inf
    for a in range(count):
        for b in range(count):
            w1 = np.exp(2j * np.pi * (a + 0.5) / count)
            w2 = np.exp(2j * np.pi * (b + 0.25) / count)
            coeffs = np.zeros(n1 + n2 + 1, dtype=complex)
            np.add.at(coeffs, (i + j).ravel(),
                      (p.coeffs * w1 ** i * w2 ** j).ravel())
            r = polyroots(coeffs)
            if r.size:
                best = min(best, float(np.min(np.abs(r))))
    return best


def stability_radius(p: BiPoly, tol: float = 1e-8, grid: int = DEFAULT_GRID,
                     psd_tol: float = 1e-12) -> RadiusResult:
    """Largest ``s`` such that ``p`` has no zeros in the open bidisk of radius ``s``.

    Bisection on ``r -> semistability(p(r z))`` to half-width ``tol``.  The
    upper end of the bracket is the smallest zero found along a fixed set
    of diagonal directions, which is a genuine zero of ``p``.
    """
    if p.is_constant:
        raise InputError("stability radius of a constant is undefined")
    if p.constant == 0:
        raise ZeroConstantTerm("p(0, 0) = 0")
    evals = 0

    def ok(r):
        nonlocal evals
        evals += 1
        return semistability(p.scaled(r), grid, psd_tol).status != UNSTABLE

    hi = _direction_bracket(p)
    if not np.isfinite(hi):
        raise NoUnstableBracket("no zero found along any direction")
    hi *= 1.0 + 1e-3
    while ok(hi):
        hi *= 2.0
        if hi > 1e12:
            raise NoUnstableBracket("could not bracket an unstable radius")
    lo = hi / 2.0
    while not ok(lo):
        hi = lo
        lo /= 2.0
        if lo < 1e-12:
            raise NoUnstableBracket("could not bracket a semi-stable radius")
    while (hi - lo) / 2.0 > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return RadiusResult(0.5 * (lo + hi), tol, evals)


def self_reversive_test(p: BiPoly, tol: float = 1e-9) -> SelfReversiveResult:
    """Check ``reverse(p) = alpha p`` coefficientwise for a unimodular alpha."""
    rev = p.reverse()
    if p.constant == 0:
        raise ZeroConstantTerm("p(0, 0) = 0")
    alpha = rev.constant / p.constant
    defect = float(np.max(np.abs(rev.coeffs - alpha * p.coeffs))) / p.scale
    unimodular = abs(abs(p.corner) - abs(p.constant)) <= tol * p.scale
    return SelfReversiveResult(bool(defect <= tol), complex(alpha), bool(unimodular),
                               defect)


def scattering_schur_test(p: BiPoly, tol: float = 1e-8) -> bool:
    """True iff ``p`` and its reverse are coprime (both resultants nonzero)."""
    n1, n2 = p.bidegree
    for q, deg in ((p, n2), (p.swapped(), n1)):
        if deg == 0:
            continue
        res = resultant_det(q, zero_tol=tol)
        if res.is_zero:
            return False
    return True


def intersecting_zeros(p: BiPoly, tol: float = 1e-8, match_tol: float = 1e-6,
                       z1_samples=None) -> list[tuple[complex, complex]]:
    """Common zeros of ``p`` and its reverse.

    The ``z1`` coordinates are roots of the resultant; for each the slice
    roots of ``p`` and of the reverse are paired within ``match_tol``.  When
    the resultant vanishes identically and ``p`` is self-reversive, every
    zero is intersecting; pass ``z1_samples`` to get the slice zeros at those
    points instead of an error.
    """
    n1, n2 = p.bidegree
    if n2 < 1:
        raise InputError("intersecting zeros need n2 >= 1")
    rev = p.reverse()
    res = resultant_det(p)
    if res.is_zero:
        if z1_samples is None or not self_reversive_test(p).flag:
            raise DegenerateResultant("resultant vanishes identically")
        candidates = np.asarray(z1_samples, dtype=complex)
    else:
        candidates = res.roots()
    out = []
    scale = p.scale
    for z1 in candidates:
        r1 = p.slice_z1(z1).roots()
        r2 = rev.slice_z1(z1).roots()
        for a in r1:
            if r2.size == 0:
                break
            k = int(np.argmin(np.abs(r2 - a)))
            if abs(r2[k] - a) > match_tol * (1 + abs(a)):
                continue
            z2 = 0.5 * (a + r2[k])
            big = scale * max(1.0, abs(z1)) ** n1 * max(1.0, abs(z2)) ** n2
            if abs(p(z1, z2)) < tol * big and abs(rev(z1, z2)) < tol * big:
                pt = (complex(z1), complex(z2))
                if not any(abs(pt[0] - q[0]) + abs(pt[1] - q[1]) < match_tol
                           for q in out):
                    out.append(pt)
    return out


def knese_check(p: BiPoly, quad: int = 256, samples: int = 500,
                seed: int = 0) -> KneseResult:
    """Check ``|p|^2 - |rev p|^2 >= c (1 - |z1|^2)(1 - |z2|^2)`` on the bidisk.

    ``c = 4 pi / I`` where ``I`` is the integral of ``1/|p|^2`` over the
    torus ``[0, 2 pi]^2`` (trapezoid rule on a ``quad x quad`` grid).  The
    inequality is tested at ``samples`` random interior points; ``holds`` is
    true when the smallest slack is at least ``-1e-9``.
    """
    if p.is_constant:
        raise InputError("knese_check needs a non-constant polynomial")
    if semistability(p).status != STABLE:
        raise NotStable("knese_check requires a stable polynomial")
    theta = 2 * np.pi * np.arange(quad) / quad
    z1, z2 = np.meshgrid(np.exp(1j * theta), np.exp(1j * theta), indexing="ij")
    integral = np.sum(1.0 / np.abs(p(z1, z2)) ** 2) * (2 * np.pi / quad) ** 2
    c = 4 * np.pi / integral
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.uniform(size=(2, samples)))
    ang = np.exp(2j * np.pi * rng.uniform(size=(2, samples)))
    a, b = r[0] * ang[0], r[1] * ang[1]
    lhs = np.abs(p(a, b)) ** 2 - np.abs(p.reverse()(a, b)) ** 2
    slack = lhs - c * (1 - np.abs(a) ** 2) * (1 - np.abs(b) ** 2)
    worst = float(np.min(slack))
    return KneseResult(float(c), worst >= -1e-9, worst, samples)
