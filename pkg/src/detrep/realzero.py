"""Hermitian pencil representations ``p(x1, x2) = det(I + x1 A1 + x2 A2)``.

Input is a real-zero polynomial: every line through the origin meets its
real zero set only at real parameters.  Two constructions are provided.
Both start from the reversed slice

    pv_{x2}(t) = t**d p(1/t, x2/t) = t**d + p_1(x2) t**(d-1) + ... + p_d(x2)

and its companion matrix ``C(x2)``.

* ``hermite``: the Hankel matrix of Newton sums ``H(x2)`` intertwines
  ``C`` and is positive definite on the real line.  With ``H = Q^* Q``,
  ``M = Q C Q^{-1}`` is Hermitian and linear in ``x2``.
* ``bezoutian``: an interlacing ``q`` (the Renegar derivative by default)
  gives a Bezoutian ``B(x2) = P P^*`` and ``M = P^{-1} C P``.

In both cases ``M(x2) = -A1 - A2 x2``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._polish import polish_hermitian
from .errors import (DegreeMismatch, DegreeViolation, InputError, NonLinearM,
                     NotInComponent, NotRealZero, NotSize2, NumericalError,
                     StrictificationFailed, VerificationFailed)
from .poly import MatPoly, UniPoly, polyroots
from .specfact import specfact_line

log = logging.getLogger(__name__)

BACKENDS = ("hermite", "bezoutian")


class RealBiPoly:
    """Real bivariate polynomial, ``coeffs[i, j]`` multiplies ``x1**i x2**j``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, tol: float = 1e-12):
        c = np.asarray(coeffs)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        if c.ndim != 2:
            raise InputError("coefficients must form a 2-d grid")
        if np.iscomplexobj(c):
            if np.max(np.abs(c.imag), initial=0.0) > tol * max(1.0, np.max(np.abs(c))):
                raise InputError("coefficients must be real")
            c = c.real
        c = np.array(c, dtype=float)
        top = np.max(np.abs(c), initial=0.0)
        keep = np.abs(c) > tol * top if top > 0 else np.zeros(c.shape, bool)
        if keep.any():
            rows = np.nonzero(keep.any(axis=1))[0][-1]
            cols = np.nonzero(keep.any(axis=0))[0][-1]
            c = c[: rows + 1, : cols + 1]
            c[~keep[: rows + 1, : cols + 1]] = 0.0
        else:
            c = np.zeros((1, 1))
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def from_terms(cls, terms: dict) -> "RealBiPoly":
        n1 = max(i for i, _ in terms)
        n2 = max(j for _, j in terms)
        c = np.zeros((n1 + 1, n2 + 1))
        for (i, j), v in terms.items():
            c[i, j] += v
        return cls(c)

    @classmethod
    def from_pencil(cls, A1, A2) -> "RealBiPoly":
        """Coefficients of ``det(I + x1 A1 + x2 A2)`` by DFT interpolation."""
        d = np.asarray(A1).shape[0]
        N = d + 1
        w = np.exp(2j * np.pi * np.arange(N) / N)
        x1, x2 = np.meshgrid(w, w, indexing="ij")
        c = np.fft.fft2(_kernels.pencil_values(A1, A2, x1, x2)) / N ** 2
        return cls(c.real)

    @property
    def total_degree(self) -> int:
        i, j = np.nonzero(self.coeffs)
        return int(np.max(i + j)) if i.size else 0

    @property
    def constant(self) -> float:
        return float(self.coeffs[0, 0])

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def grid(self, d: int | None = None) -> np.ndarray:
        """Coefficients padded to ``(d + 1, d + 1)``."""
        d = self.total_degree if d is None else d
        out = np.zeros((d + 1, d + 1))
        c = self.coeffs
        out[: c.shape[0], : c.shape[1]] = c
        return out

    def __call__(self, x1, x2):
        out = _kernels.horner2(self.coeffs, x1, x2)
        if np.isrealobj(x1) and np.isrealobj(x2):
            out = out.real
        return out if np.ndim(out) else out.item()

    def along(self, x1: float, x2: float) -> np.ndarray:
        """Ascending coefficients of ``t -> p(t x1, t x2)``."""
        d = self.total_degree
        g = self.grid(d)
        out = np.zeros(d + 1)
        for i in range(d + 1):
            for j in range(d + 1 - i):
                out[i + j] += g[i, j] * x1 ** i * x2 ** j
        return out


@dataclass(frozen=True)
class RZRep:
    d: int
    A1: np.ndarray
    A2: np.ndarray
    max_eval_error: float
    backend: str
    info: dict = field(default_factory=dict)

    def det_at(self, x1, x2):
        return _kernels.pencil_values(self.A1, self.A2, x1, x2)


@dataclass(frozen=True)
class RealZeroResult:
    flag: bool
    witness: tuple | None
    max_imag: float


def _as_real(p) -> RealBiPoly:
    return p if isinstance(p, RealBiPoly) else RealBiPoly(p)


# -------------------------------------------------------------- certification

def _directions(trials: int, seed: int):
    rng = np.random.default_rng(seed)
    theta = np.concatenate([[0.0, np.pi / 2, np.pi / 4, 3 * np.pi / 4],
                            rng.uniform(0, np.pi, max(trials - 4, 0))])
    return np.cos(theta), np.sin(theta)


def _line_roots(p: RealBiPoly, x1: float, x2: float) -> np.ndarray:
    return polyroots(p.along(x1, x2))


def is_real_zero(p: RealBiPoly, trials: int = 200, seed: int = 0) -> RealZeroResult:
    """Test real-rootedness of ``t -> p(t x1, t x2)`` on random directions.

    The four axis and diagonal directions are always included.  A root
    counts as real when ``|Im| <= 1e-7 (1 + |Re|)``, where a numerically
    multiple root is judged by the centre of its cluster.
    """
    p = _as_real(p)
    if abs(p.constant - 1.0) > 1e-12:
        raise InputError(f"constant term must be 1, got {p.constant}")
    worst = 0.0
    for x1, x2 in zip(*_directions(trials, seed)):
        r = _line_roots(p, x1, x2)
        if r.size == 0:
            continue
        rel = _cluster_imag(r)
        nz = np.abs(r) > 0
        if nz.all():
            # large roots are better conditioned as roots of the reversal
            rel = np.minimum(rel, _cluster_imag(1.0 / r))
        worst = max(worst, float(rel.max()))
        if rel.max() > 1e-7:
            return RealZeroResult(False, (float(x1), float(x2)), worst)
    return RealZeroResult(True, None, worst)


def _cluster_imag(r: np.ndarray) -> np.ndarray:
    """Relative imaginary parts, judging a root of multiplicity ``k`` by its cluster.

    Rounding scatters a ``k``-fold real root into a ring of radius about
    ``eps^(1/k)``.  A root that fails on its own is replaced by the mean of
    the roots within that radius, provided the cluster is that tight.
    """
    rel = np.abs(r.imag) / (1.0 + np.abs(r.real))
    for i in np.nonzero(rel > 1e-7)[0]:
        dist = np.abs(r - r[i])
        for k in range(2, r.size + 1):
            near = np.argsort(dist)[:k]
            c = r[near].mean()
            radius = float(np.max(np.abs(r[near] - c)))
            if radius > 100.0 * 1e-16 ** (1.0 / k) * (1.0 + abs(c)):
                continue
            if abs(c.imag) <= 1e-7 * (1.0 + abs(c.real)):
                rel[i] = abs(c.imag) / (1.0 + abs(c.real))
                break
    return rel


def pcheck_coeffs(p: RealBiPoly) -> list[UniPoly]:
    """``p_1, ..., p_d`` with ``pv_{x2}(t) = t^d + p_1(x2) t^{d-1} + ... + p_d(x2)``."""
    p = _as_real(p)
    d = p.total_degree
    if d < 1:
        raise DegreeViolation("total degree must be at least 1")
    if abs(p.constant - 1.0) > 1e-12:
        raise InputError(f"constant term must be 1, got {p.constant}")
    g = p.grid(d)
    out = []
    for j in range(1, d + 1):
        # terms of total degree j: c[j - k, k] x2^k
        c = np.array([g[j - k, k] for k in range(j + 1)])
        u = UniPoly(c)
        if u.degree > j:
            raise DegreeViolation(f"p_{j} has degree {u.degree} > {j}")
        out.append(u)
    return out


def _slice_coeffs(pj, x2) -> np.ndarray:
    """Descending coefficients of ``pv_{x2}``: ``[1, p_1(x2), ..., p_d(x2)]``."""
    return np.concatenate([[1.0], [np.real_if_close(u(x2)) for u in pj]])


def _slice_roots(pj, x2) -> np.ndarray:
    desc = _slice_coeffs(pj, x2)
    return np.sort(np.roots(desc).real)


def _x2_samples(count: int = 64) -> np.ndarray:
    # spread over the whole line, denser near the origin
    return np.tan(np.pi * (np.arange(count) + 0.5) / count - np.pi / 2) * 0.5


def min_root_gap(p: RealBiPoly, samples: int = 64) -> float:
    pj = pcheck_coeffs(p)
    if len(pj) < 2:
        return np.inf
    gap = np.inf
    for x2 in _x2_samples(samples):
        r = _slice_roots(pj, x2)
        gap = min(gap, float(np.min(np.diff(r)) / (1.0 + np.max(np.abs(r)))))
    return gap


def _smooth_slices(g: np.ndarray, s: float, axis: int) -> np.ndarray:
    """Coefficients of ``p + s x_k q`` with ``q`` the Renegar derivative at 0.

    With ``k = axis + 1``, every slice ``t -> t^d p(t^-1 e + ...)`` taken in
    the chart ``x_k = 1/t`` changes as ``pv -> pv + s pv'``.  That keeps the
    roots real, lowers each multiplicity by one and puts the new roots
    strictly between the old ones.
    """
    d = g.shape[0] - 1
    i, j = np.meshgrid(np.arange(d + 1), np.arange(d + 1), indexing="ij")
    dq = s * g * (d - i - j)
    out = g.copy()
    if axis == 0:
        out[1:, :] += dq[:-1, :]
    else:
        out[:, 1:] += dq[:, :-1]
    return out


def strictify(p: RealBiPoly, eps: float = 1e-6, seed: int = 0, gap: float = 1e-6,
              force: bool = False, budget: int = 200) -> RealBiPoly:
    """Real-zero ``q`` near ``p`` whose reversed slices have simple roots.

    Returns ``p`` itself when it already passes and ``force`` is off.
    Otherwise the slice-smoothing map ``pv -> pv + s pv'`` is applied
    ``d - 1`` times in each of the two coordinate charts, which also
    separates repeated linear factors of the top-degree form.  Half of
    ``eps`` bounds this step, and the result is real-zero by construction.
    If its roots are still too close, random perturbations within the other
    half are tried and re-tested, halving their size whenever the real-zero
    property is lost.
    """
    p = _as_real(p)
    d = p.total_degree
    if not force and min_root_gap(p) > gap:
        return p
    if eps <= 0:
        raise StrictificationFailed("slice roots are not simple and eps = 0")
    base = p.grid(d)
    steps = max(d - 1, 1)

    def run(s):
        c = base
        for axis in (1, 0):
            for _ in range(steps):
                c = _smooth_slices(c, s, axis)
        return c

    s, half = eps, 0.5 * eps
    for _ in range(60):
        c = run(s)
        move = float(np.max(np.abs(c - base)))
        if move <= half:
            break
        s *= 0.9 * half / move
    else:
        raise StrictificationFailed(f"could not bound the perturbation by {eps:.1e}")
    q = RealBiPoly(c)
    # roots of a smoothed cluster sit about s apart
    if min_root_gap(q) > min(gap, 1e-2 * s):
        return q
    rng = np.random.default_rng(seed)
    mask = np.add.outer(np.arange(d + 1), np.arange(d + 1)) <= d
    mask[0, 0] = False
    amp = half
    for attempt in range(budget):
        cand = RealBiPoly(c + amp * rng.uniform(-1.0, 1.0, c.shape) * mask)
        if cand.total_degree != d:
            continue
        if not is_real_zero(cand, trials=64, seed=seed + attempt).flag:
            amp *= 0.5
            continue
        if min_root_gap(cand) > gap:
            return cand
    raise StrictificationFailed(f"no strict real-zero polynomial found within {eps:.1e}")


# ---------------------------------------------------------- linear factors

def _candidate_roots(r: np.ndarray, cluster: float = 1e-4) -> list[float]:
    """Means of tight root clusters, then the real parts of the real roots.

    A ``k``-fold root comes back from a root finder spread over a ring of
    radius ``eps^(1/k)``; the cluster mean is accurate to working precision.
    """
    r = np.asarray(r, dtype=complex)
    out = []
    left = list(r)
    while left:
        z = left.pop(0)
        group = [z] + [w for w in left if abs(w - z) <= cluster * (1.0 + abs(z))]
        left = [w for w in left if abs(w - z) > cluster * (1.0 + abs(z))]
        if len(group) > 1:
            m = complex(np.mean(group))
            if abs(m.imag) <= 1e-7 * (1.0 + abs(m)):
                out.append(m.real)
    return out + [float(z.real) for z in r if abs(z.imag) <= 1e-6 * (1.0 + abs(z))]


def _divide_linear(p: RealBiPoly, a: float, b: float, tol: float):
    """Quotient ``p / (1 + a x1 + b x2)`` when the division is exact within ``tol``."""
    d = p.total_degree
    target = p.grid(d)
    cells = [(i, j) for i in range(d) for j in range(d - i)]
    cols = []
    for i, j in cells:
        col = np.zeros((d + 1, d + 1))
        col[i, j] += 1.0
        col[i + 1, j] += a
        col[i, j + 1] += b
        cols.append(col.ravel())
    G = np.array(cols).T
    sol = np.linalg.lstsq(G, target.ravel(), rcond=None)[0]
    if np.max(np.abs(G @ sol - target.ravel())) > tol * max(1.0, p.scale):
        return None
    r = np.zeros((d, d))
    for (i, j), v in zip(cells, sol):
        r[i, j] = v
    return RealBiPoly(r)


def split_linear_factors(p: RealBiPoly, tol: float = 1e-10):
    """Peel off real linear factors ``1 + a x1 + b x2`` of ``p``.

    Candidate directions ``(a, b)`` come from the real roots of the
    top-degree form, and the scale from the roots of ``p`` along that
    direction.  A candidate is kept only if it divides ``p`` to ``tol``.

    Returns
    -------
    factors : list of (a, b)
    rest : RealBiPoly
        Quotient with ``rest(0, 0) = 1``, possibly constant.
    """
    p = _as_real(p)
    factors = []
    while p.total_degree >= 1:
        d = p.total_degree
        g = p.grid(d)
        top = np.array([g[d - k, k] for k in range(d + 1)])
        dirs = [(-y, 1.0) for y in _candidate_roots(polyroots(top))]
        if abs(top[-1]) <= 1e-12 * np.max(np.abs(top)) or UniPoly(top).degree < d:
            dirs.append((1.0, 0.0))
        found = None
        for al, be in dirs:
            nrm = np.hypot(al, be)
            al, be = al / nrm, be / nrm
            for t in _candidate_roots(polyroots(p.along(al, be))):
                if t == 0:
                    continue
                lam = -1.0 / t
                rest = _divide_linear(p, lam * al, lam * be, tol)
                if rest is not None:
                    found = (lam * al, lam * be), rest
                    break
            if found:
                break
        if found is None:
            break
        factors.append(found[0])
        p = found[1]
    return factors, p


# --------------------------------------------------------- Hermite route

def newton_sums(pj, count: int) -> list[UniPoly]:
    """Power sums ``s_0, ..., s_{count-1}`` of the roots of ``pv``.

    ``s_j = -j p_j - sum_{k<j} p_k s_{j-k}`` with ``p_k = 0`` for ``k > d``.
    """
    d = len(pj)
    zero = UniPoly([0.0])
    p = [None] + list(pj)
    s = [UniPoly([float(d)])]
    for j in range(1, count):
        acc = p[j] * (-float(j)) if j <= d else zero
        for k in range(1, min(j - 1, d) + 1):
            acc = acc - p[k] * s[j - k]
        s.append(acc)
    for j in range(min(count, d + 1)):
        if s[j].degree > j:
            raise DegreeViolation(f"s_{j} has degree {s[j].degree} > {j}")
    return s


def _matpoly_from_entries(entries, d) -> MatPoly:
    deg = max(e.degree for row in entries for e in row)
    out = np.zeros((deg + 1, d, d), dtype=complex)
    for a in range(d):
        for b in range(d):
            c = entries[a][b].coeffs
            out[: c.size, a, b] = c
    return MatPoly(out, trim=False)


def hermite_matrix(p: RealBiPoly) -> MatPoly:
    """Hankel matrix ``H(x2) = [s_{i+j}(x2)]`` of Newton sums."""
    pj = pcheck_coeffs(p)
    d = len(pj)
    s = newton_sums(pj, 2 * d - 1)
    return _matpoly_from_entries([[s[a + b] for b in range(d)] for a in range(d)], d)


def companion_line(pj) -> MatPoly:
    """``C(x2)`` with ones on the subdiagonal and last column ``-p_d, ..., -p_1``."""
    d = len(pj)
    deg = max(u.degree for u in pj)
    out = np.zeros((deg + 1, d, d), dtype=complex)
    for a in range(1, d):
        out[0, a, a - 1] = 1.0
    for a in range(d):
        c = pj[d - 1 - a].coeffs
        out[: c.size, a, d - 1] = -c
    return MatPoly(out, trim=False)


def intertwining_residual(C: MatPoly, X: MatPoly, left_transpose: bool) -> float:
    """Coefficient residual of ``C^T X - X C`` or of ``C X - X C^T``."""
    if left_transpose:
        R = C.transpose() * X - X * C
    else:
        R = C * X - X * C.transpose()
    return R.max_abs() / max(1.0, X.max_abs())


# ----------------------------------------------------- Bezoutian route

def _in_component(p: RealBiPoly, x0, samples: int = 400) -> bool:
    s = np.linspace(0.0, 1.0, samples + 1)
    vals = p(s * x0[0], s * x0[1])
    return bool(np.all(vals > 0))


def renegar_derivative(p: RealBiPoly, x0=(0.0, 0.0)) -> RealBiPoly:
    """Derivative of the homogenization along ``(1, x0)`` at ``x_0 = 1``.

    ``q = sum (d - i - j) c_ij x1^i x2^j + x0_1 dp/dx1 + x0_2 dp/dx2``.
    """
    p = _as_real(p)
    x0 = (float(x0[0]), float(x0[1]))
    if not _in_component(p, x0):
        raise NotInComponent(f"{x0} is not in the component of the origin where p > 0",
                             witness=x0)
    d = p.total_degree
    g = p.grid(d)
    i, j = np.meshgrid(np.arange(d + 1), np.arange(d + 1), indexing="ij")
    q = g * (d - i - j)
    q[:-1, :] += x0[0] * (g[1:, :] * i[1:, :])
    q[:, :-1] += x0[1] * (g[:, 1:] * j[:, 1:])
    return RealBiPoly(q)


def _reversed_rows(p: RealBiPoly, deg: int) -> list[np.ndarray]:
    """Ascending-in-``t`` coefficients of ``t^deg p(1/t, x2/t)``, each a poly in x2."""
    g = p.grid(max(deg, p.total_degree))
    rows = []
    for a in range(deg + 1):
        k = deg - a  # total degree of the contributing terms
        rows.append(np.array([g[k - m, m] for m in range(k + 1)], dtype=float))
    return rows


def _padd(a, b):
    out = np.zeros(max(a.size, b.size))
    out[: a.size] += a
    out[: b.size] += b
    return out


def bezoutian_line(p: RealBiPoly, q: RealBiPoly) -> MatPoly:
    """Bezoutian of ``pv_{x2}`` and ``qv_{x2}``.

    ``B(x2)`` is defined by

        (pv(t) qv(s) - pv(s) qv(t)) / (t - s) = sum b_ij(x2) t^i s^j,

    which is positive definite on the real line when ``q`` strictly
    interlaces ``p`` and ``q(0, 0) > 0``.
    """
    p, q = _as_real(p), _as_real(q)
    d = p.total_degree
    if q.total_degree >= d:
        raise DegreeMismatch(f"interlacer degree {q.total_degree} must be below {d}")
    f = _reversed_rows(p, d)
    g = _reversed_rows(q, d - 1) + [np.zeros(1)]
    entries = [[np.zeros(1) for _ in range(d)] for _ in range(d)]
    for a in range(d + 1):
        for b in range(d + 1):
            # f_a g_b (t^a s^b - s^a t^b) / (t - s)
            if a == b:
                continue
            fg = np.convolve(f[a], g[b])
            if not fg.any():
                continue
            sign = 1.0 if a > b else -1.0
            hi, lo = max(a, b), min(a, b)
            for m in range(hi - lo):
                i, j = lo + m, hi - 1 - m
                entries[i][j] = _padd(entries[i][j], sign * fg)
    return _matpoly_from_entries([[UniPoly(e) for e in row] for row in entries], d)


# --------------------------------------------------------------- pencils

def _fit_linear(Ms, xs, tol):
    # M(x) = M0 + M1 x by least squares; the residual measures nonlinearity
    V = np.stack([np.ones_like(xs), xs], axis=1)
    flat = Ms.reshape(len(xs), -1)
    coef, *_ = np.linalg.lstsq(V, flat, rcond=None)
    resid = np.max(np.abs(V @ coef - flat))
    scale = max(1.0, float(np.max(np.abs(flat))))
    if resid > tol * scale:
        raise NonLinearM(f"M(x2) deviates from a line by {resid:.2e}")
    d = Ms.shape[1]
    return coef[0].reshape(d, d), coef[1].reshape(d, d)


def _hermitian_part(A, tol, what):
    dist = float(np.max(np.abs(A - A.conj().T))) / 2
    if dist > tol * max(1.0, float(np.max(np.abs(A)))):
        raise VerificationFailed(f"{what} is not Hermitian (defect {dist:.1e})")
    return 0.5 * (A + A.conj().T), dist


def _pencil_from_M(Mfun, d, x2s):
    Ms = np.array([Mfun(x) for x in x2s])
    return Ms


def verification_grid(size: int = 32):
    x = np.linspace(-1.0, 1.0, size)
    return np.meshgrid(x, x, indexing="ij")


def pencil_error(p: RealBiPoly, A1, A2, size: int = 32) -> float:
    x1, x2 = verification_grid(size)
    return float(np.max(np.abs(_kernels.pencil_values(A1, A2, x1, x2) - p(x1, x2))))


def _construct(q: RealBiPoly, backend: str, tol: float):
    pj = pcheck_coeffs(q)
    d = len(pj)
    C = companion_line(pj)
    x2s = np.cos(np.pi * (np.arange(2 * d + 2) + 0.5) / (2 * d + 2))
    if backend == "hermite":
        H = hermite_matrix(q)
        Qf = specfact_line(H)

        def Mfun(x):
            Qx = Qf(x)
            return Qx @ C(x) @ np.linalg.inv(Qx)
        factor = Qf
    else:
        r = renegar_derivative(q)
        B = bezoutian_line(q, r)
        Qf = specfact_line(B)
        P = Qf.transpose()  # B = P P^* on the real line

        def Mfun(x):
            Px = P(x)
            return np.linalg.solve(Px, C(x) @ Px)
        factor = P
    Ms = _pencil_from_M(Mfun, d, x2s)
    herm = max(float(np.max(np.abs(M - M.conj().T))) for M in Ms)
    M0, M1 = _fit_linear(Ms, x2s, tol)
    A1, d1 = _hermitian_part(-M0, 1e-7, "A1")
    A2, d2 = _hermitian_part(-M1, 1e-7, "A2")
    return A1, A2, {"hermitian_defect": herm, "projection_distance": max(d1, d2),
                     "factor_degree": factor.degree}


def represent_hermitian(p: RealBiPoly, backend: str = "hermite", tol: float = 1e-6,
                        seed: int = 0, strict_eps=(0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1e-1),
                        nonlinear_tol: float = 1e-6, polish: bool = True) -> RZRep:
    """Hermitian ``A1, A2`` of size ``d`` with ``det(I + x1 A1 + x2 A2) = p``.

    Real linear factors are split off first and become ``1 x 1`` diagonal
    blocks; this handles products of lines, whose slices never have simple
    roots, without any perturbation.

    Parameters
    ----------
    p : RealBiPoly
        Real-zero polynomial with ``p(0, 0) = 1``.
    backend : {"hermite", "bezoutian"}
    tol : float
        Acceptance threshold for the maximum error on a 32 x 32 grid over
        ``[-1, 1]^2``, always measured against the input ``p``.
    strict_eps : sequence of float
        Perturbation sizes tried in turn when the reversed slices of ``p``
        have (near) repeated roots.  ``0`` means "use ``p`` as is".
    polish : bool
        Refine the pencil by Levenberg-Marquardt against the coefficients
        of ``p``.  This removes the offset introduced by strictification.
    """
    if backend not in BACKENDS:
        raise InputError(f"unknown backend {backend!r}")
    p = _as_real(p)
    d = p.total_degree
    if d < 1:
        raise InputError("polynomial must be non-constant")
    rz = is_real_zero(p, seed=seed)
    if not rz.flag:
        raise NotRealZero(f"complex zeros along direction {rz.witness}", witness=rz.witness)
    factors, rest = split_linear_factors(p)
    if not factors:
        return _represent_direct(p, backend, tol, seed, strict_eps, nonlinear_tol, polish)
    # linear factors are 1 x 1 blocks; the pencil is block diagonal
    D1 = np.array([a for a, _ in factors], dtype=complex)
    D2 = np.array([b for _, b in factors], dtype=complex)
    info = {"linear_factors": len(factors)}
    A1, A2 = np.diag(D1), np.diag(D2)
    if rest.total_degree >= 1:
        sub = _represent_direct(rest, backend, tol, seed, strict_eps, nonlinear_tol,
                                     polish)
        k = len(factors)
        A1 = np.block([[A1, np.zeros((k, sub.d))], [np.zeros((sub.d, k)), sub.A1]])
        A2 = np.block([[A2, np.zeros((k, sub.d))], [np.zeros((sub.d, k)), sub.A2]])
        info.update(sub.info)
    else:
        info.update(strict_eps=0.0, seed=seed, strictified=False)
    err = pencil_error(p, A1, A2)
    if err > tol:
        raise VerificationFailed(f"block pencil error {err:.2e}")
    return RZRep(d, A1, A2, err, backend, info)


def _represent_direct(p, backend, tol, seed, strict_eps, nonlinear_tol, polish):
    d = p.total_degree
    failures = []
    for eps in strict_eps:
        try:
            q = p if eps == 0 else strictify(p, eps, seed, force=True)
            if eps == 0 and min_root_gap(p) <= 1e-6:
                raise StrictificationFailed("slice roots are not simple")
            A1, A2, info = _construct(q, backend, nonlinear_tol)
        except (NumericalError, StrictificationFailed, np.linalg.LinAlgError) as exc:
            failures.append(f"eps={eps:g}: {type(exc).__name__}: {exc}")
            continue
        info.update(strict_eps=eps, seed=seed, strictified=q is not p)
        err = pencil_error(p, A1, A2)
        if polish and (q is not p or err > 1e-13 * max(1.0, p.scale)):
            B1, B2, res = polish_hermitian(A1, A2, p.grid(d))
            B1 = 0.5 * (B1 + B1.conj().T)
            B2 = 0.5 * (B2 + B2.conj().T)
            err2 = pencil_error(p, B1, B2)
            if err2 < err:
                A1, A2, err = B1, B2, err2
                info["polished"] = True
        if err <= tol:
            return RZRep(d, A1, A2, err, backend, info)
        failures.append(f"eps={eps:g}: error {err:.2e}")
    raise VerificationFailed("; ".join(failures))


def realsym_2x2(rep: RZRep) -> RZRep:
    """Real symmetric pair with the same determinant, for ``d = 2``.

    Diagonalize ``A1 = U D U^*`` and rotate the phase of the off-diagonal
    entry of ``U^* A2 U`` away with ``diag(1, e^{i theta})``.
    """
    if rep.d != 2:
        raise NotSize2(f"realsym_2x2 needs d = 2, got {rep.d}")
    w, U = np.linalg.eigh(rep.A1)
    B = U.conj().T @ rep.A2 @ U
    theta = np.angle(B[0, 1])
    V = np.diag([1.0, np.exp(1j * theta)])
    A1 = np.diag(w).astype(complex)
    A2 = V @ B @ V.conj().T
    imag = max(np.max(np.abs(A1.imag)), np.max(np.abs(A2.imag)))
    if imag > 1e-10 * max(1.0, np.max(np.abs(A2))):
        raise VerificationFailed(f"phase rotation left imaginary part {imag:.1e}")
    A1, A2 = A1.real, 0.5 * (A2.real + A2.real.T)
    info = dict(rep.info, realsym=True)
    return RZRep(2, A1, A2, rep.max_eval_error, rep.backend, info)


def square_double(rep: RZRep):
    """Real symmetric ``2d x 2d`` pair representing ``p**2``.

    ``alpha_k = [[Re A_k, Im A_k], [-Im A_k, Re A_k]]``.
    """
    out = []
    for A in (rep.A1, rep.A2):
        A = np.asarray(A, dtype=complex)
        R, I = A.real, A.imag
        if np.max(np.abs(R - R.T)) > 1e-10 or np.max(np.abs(I + I.T)) > 1e-10:
            raise InputError("pencil matrices must be Hermitian")
        out.append(np.block([[R, I], [-I, R]]))
    return out[0], out[1]
