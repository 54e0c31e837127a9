"""Determinantal representations ``p(z1, z2) = det(I - K Z_n)`` on the bidisk.

``Z_n = diag(z1 I_{n1}, z2 I_{n2})``.  Three constructions are provided:

* ``represent_contractive``: a contraction ``K`` of size ``n1 + n2`` with
  ``||K|| = 1/s(p)`` for a polynomial with stability radius ``s(p)``, via
  spectral factorization of the slice Bezoutian and a minimal realization
  of the resulting transfer function;
* ``represent_univariate``: the one-variable version built from the
  Schur-Cohn matrix;
* ``represent_unitary``: a unitary ``K`` for self-reversive semi-stable
  polynomials, through a sums-of-squares decomposition and the lurking
  isometry, with a dilation limit as the fallback.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from ._polish import levenberg_marquardt, polish_unitary
from .errors import (DetrepError, InputError, NoConvergence, NotSelfReversive,
                     PipelineDiverged, RankMismatch, SizeMismatch, SpanDeficient)
from .poly import (BiPoly, UniPoly, companion, series_divide, toeplitz_pair,
                   trig_bezoutian)
from .realization import (assemble_K, contractive_balance, det_poly, markov_of_M,
                          minimal_realization)
from .specfact import specfact_circle
from .stability import (UNSTABLE, self_reversive_test, semistability,
                        stability_radius)

log = logging.getLogger(__name__)

ROUTES = ("pipeline", "product", "unitary_limit", "unitary_sos", "univariate")


@dataclass(frozen=True)
class DetRep:
    n: tuple[int, int]
    K: np.ndarray
    norm: float
    max_eval_error: float
    route: str
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")

    def det_at(self, z1, z2):
        return _kernels.detrep_values(self.K, self.n[0], z1, z2)


@dataclass(frozen=True)
class SosDecomp:
    A_polys: list
    B_polys: list
    residual: float
    poly: BiPoly | None = None


@dataclass(frozen=True)
class VerifyReport:
    max_error: float
    norm: float
    singular_values: np.ndarray
    unitarity_distance: float
    points: int


# ------------------------------------------------------------ verification

def _check_unit_constant(p: BiPoly):
    if abs(p.constant - 1.0) > 1e-12:
        raise InputError(f"constant term must be 1, got {p.constant}")
    if p.is_constant:
        raise InputError("polynomial must be non-constant")


def verification_points(grid: int = 32, n_random: int = 1000, seed: int = 0):
    """Torus mesh plus random points, half on the torus and half inside."""
    theta = 2 * np.pi * np.arange(grid) / grid
    z1, z2 = np.meshgrid(np.exp(1j * theta), np.exp(1j * (theta + 0.5 / grid)),
                         indexing="ij")
    rng = np.random.default_rng(seed)
    rad = np.sqrt(rng.uniform(size=(2, n_random)))
    rad[:, : n_random // 2] = 1.0
    w = rad * np.exp(2j * np.pi * rng.uniform(size=(2, n_random)))
    return (np.concatenate([z1.ravel(), w[0]]), np.concatenate([z2.ravel(), w[1]]))


def eval_error(p: BiPoly, K, n, grid: int = 32, n_random: int = 1000,
               seed: int = 0) -> float:
    z1, z2 = verification_points(grid, n_random, seed)
    return float(np.max(np.abs(_kernels.detrep_values(K, n[0], z1, z2) - p(z1, z2))))


def verify_detrep(p: BiPoly, rep: DetRep, grid: int = 32, n_random: int = 1000,
                  seed: int = 0) -> VerifyReport:
    """Compare ``det(I - K Z_n)`` with ``p`` on the torus mesh and random points."""
    K = np.asarray(rep.K)
    n1, n2 = rep.n
    if K.ndim != 2 or K.shape[0] != K.shape[1] or K.shape[0] != n1 + n2:
        raise SizeMismatch(f"K has shape {K.shape}, expected {(n1 + n2,) * 2}")
    m1, m2 = p.bidegree
    if m1 > n1 or m2 > n2:
        raise SizeMismatch(f"bidegree {p.bidegree} exceeds representation size {rep.n}")
    err = eval_error(p, K, rep.n, grid, n_random, seed)
    sv = np.linalg.svd(K, compute_uv=False) if K.size else np.zeros(0)
    udist = float(np.linalg.norm(K.conj().T @ K - np.eye(K.shape[0]), 2)) if K.size else 0.0
    return VerifyReport(err, float(sv[0]) if sv.size else 0.0, sv, udist,
                        grid * grid + n_random)


def _finish(p, K, n, route, info, grid=32):
    err = eval_error(p, K, n, grid)
    norm = float(np.linalg.norm(K, 2)) if K.size else 0.0
    return DetRep(tuple(n), K, norm, err, route, info)


# ---------------------------------------------------------------- univariate

def represent_univariate(u, tol: float = 1e-9) -> DetRep:
    """``u(z) = det(I - z K)`` with ``||K|| <= 1/s(u)`` up to ``tol``.

    ``K = P^{-1} C P`` where ``C`` is the companion matrix of the dilated
    polynomial ``v(z) = u(rho z)`` and ``P`` is the Cholesky factor of its
    Schur-Cohn matrix; ``rho`` sits just below the smallest root modulus.
    The representation has ``n = (deg u, 0)``.
    """
    u = u if isinstance(u, UniPoly) else UniPoly(u)
    if u.degree < 1:
        raise InputError("polynomial must be non-constant")
    if abs(u.coeffs[0] - 1.0) > 1e-12:
        raise InputError(f"constant term must be 1, got {u.coeffs[0]}")
    s = float(np.min(np.abs(u.roots())))
    last = None
    for eps in (1e-10, 1e-9, 1e-8, 1e-7):
        rho = s * (1.0 - eps * min(1.0, s))
        v = u.scaled(rho)
        A, B = toeplitz_pair(v.coeffs)
        Q = A @ A.conj().T - B.conj().T @ B
        try:
            P = np.linalg.cholesky(0.5 * (Q + Q.conj().T))
        except np.linalg.LinAlgError as exc:
            last = exc
            continue
        Kv = np.linalg.solve(P, companion(v) @ P)
        # Kv Kv^* = I - w w^*, so every singular value is at most one; clip
        # the rounding excess that an ill-conditioned P leaves behind
        U, sv, Vh = np.linalg.svd(Kv)
        clipped = float(max(sv[0] - 1.0, 0.0))
        K = (U * np.minimum(sv, 1.0)) @ Vh / rho
        if np.linalg.norm(K, 2) <= 1.0 / s + tol:
            break
    else:
        raise NoConvergence(f"Schur-Cohn matrix factorization failed: {last}")
    n = (u.degree, 0)
    p = BiPoly(u.coeffs[:, None])
    return _finish(p, K, n, "univariate", {"radius": s, "clipped": clipped})


def _univariate_in(p: BiPoly, axis: int) -> DetRep:
    # p depends on a single variable; represent it in that variable
    if axis == 1:
        rep = represent_univariate(UniPoly(p.coeffs[:, 0]))
        return rep
    rep = represent_univariate(UniPoly(p.coeffs[0, :]))
    n2 = rep.n[0]
    return replace(rep, n=(0, n2))


# ------------------------------------------------------------------ products

def compose_product(r1: DetRep, r2: DetRep, p: BiPoly | None = None) -> DetRep:
    """Representation of a product from representations of the factors.

    ``K = T (K1 (+) K2) T^T`` with ``T`` the permutation gathering the
    ``z1`` coordinates first.  If ``p`` is given the result is verified
    against it, otherwise ``max_eval_error`` is NaN.
    """
    a1, b1 = r1.n
    a2, b2 = r2.n
    K = np.zeros((a1 + b1 + a2 + b2,) * 2, dtype=complex)
    K[: a1 + b1, : a1 + b1] = r1.K
    K[a1 + b1:, a1 + b1:] = r2.K
    order = (list(range(a1)) + list(range(a1 + b1, a1 + b1 + a2))
             + list(range(a1, a1 + b1)) + list(range(a1 + b1 + a2, a1 + b1 + a2 + b2)))
    K = K[np.ix_(order, order)]
    n = (a1 + a2, b1 + b2)
    info = {"factors": [r1.route, r2.route]}
    if p is not None:
        return _finish(p, K, n, "product", info)
    norm = float(np.linalg.norm(K, 2)) if K.size else 0.0
    return DetRep(n, K, norm, float("nan"), "product", info)


# ------------------------------------------------------- contractive route

def _divide_z1(p: BiPoly, g: UniPoly, tol: float):
    """Exact division of every z2-coefficient of ``p`` by ``g(z1)``."""
    n1 = p.bidegree[0]
    m = n1 - g.degree
    out = np.zeros((m + 1, p.coeffs.shape[1]), dtype=complex)
    for j in range(p.coeffs.shape[1]):
        col = p.coeffs[:, j]
        q = series_divide(col, g.coeffs, m)
        back = np.convolve(q, g.coeffs)
        full = np.zeros(max(back.size, col.size), dtype=complex)
        full[: back.size] += back
        full[: col.size] -= col
        if np.max(np.abs(full)) > tol * max(1.0, p.scale):
            return None
        out[:, j] = q
    return BiPoly(out)


def _pipeline(q: BiPoly, svd_tol: float = 1e-8, sf_tol: float = 1e-9) -> np.ndarray:
    """Contractive K for a stable ``q`` with ``q(0, 0) = 1``.

    Raises RankMismatch when the McMillan degree falls short of ``n1`` and
    the shortfall is not a common factor in ``z1``.
    """
    n1, n2 = q.bidegree
    Q = trig_bezoutian(q)
    P = specfact_circle(Q, sf_tol)
    markov = markov_of_M(q, P)
    try:
        sysm = minimal_realization(markov, n1, svd_tol)
    except RankMismatch as exc:
        if exc.rank is None or exc.rank >= n1:
            raise
        return _deflated(q, markov, exc.rank, svd_tol)
    sysb = contractive_balance(sysm, tol=1e-10)
    return assemble_K(sysb, q)


def _deflated(q: BiPoly, markov, rank: int, svd_tol: float) -> np.ndarray:
    # q = g(z1) q'(z1, z2) with g common to all z2-coefficients
    n1, n2 = q.bidegree
    sysm = minimal_realization(markov, rank, svd_tol)
    den = det_poly(sysm.A, (rank, 0)).coeffs[:, 0] if rank else np.ones(1)
    p0 = q.coeffs[:, 0]
    g = UniPoly(series_divide(p0, den, n1 - rank))
    if g.degree != n1 - rank:
        raise RankMismatch("deflation factor has the wrong degree", rank=rank)
    qd = _divide_z1(q, g, 1e-8)
    if qd is None:
        raise RankMismatch("rank drop is not a common z1 factor", rank=rank)
    sysb = contractive_balance(sysm, tol=1e-10)
    K1 = assemble_K(sysb, qd)
    r1 = DetRep((rank, n2), K1, float(np.linalg.norm(K1, 2)), float("nan"), "pipeline")
    r2 = represent_univariate(g)
    return compose_product(r1, r2).K


def _perturbed(q: BiPoly, eps: float, rng) -> BiPoly:
    noise = rng.normal(size=q.coeffs.shape) + 1j * rng.normal(size=q.coeffs.shape)
    noise[0, 0] = 0.0
    return BiPoly(q.coeffs + eps * noise / np.sqrt(2), trim=False)


def represent_contractive(p: BiPoly, tol: float = 1e-6, seed: int = 0,
                          radius_tol: float = 1e-8, normalize: bool = True,
                          kmin: int = 4, kmax: int = 20) -> DetRep:
    """Contractive determinantal representation with ``||K|| = 1/s(p)``.

    Parameters
    ----------
    p : BiPoly
        Polynomial with ``p(0, 0) = 1``.
    tol : float
        Acceptance threshold for ``max |p - det(I - K Z)|`` on the
        verification points.
    seed : int
        Seeds the coefficient perturbation used when the realization is not
        minimal at the expected order.
    normalize : bool
        Rescale by the stability radius first.  With ``False`` the input is
        treated as if its radius were one.
    kmin, kmax : int
        The dilation schedule ``r_k = 1 - 2**-k``.  The last ``k`` that meets
        ``tol`` wins.
    """
    _check_unit_constant(p)
    n1, n2 = p.bidegree
    if n2 == 0:
        rep = _univariate_in(p, 1)
        return _finish(p, rep.K, rep.n, "univariate", rep.info)
    if n1 == 0:
        rep = _univariate_in(p, 2)
        return _finish(p, rep.K, rep.n, "univariate", rep.info)
    s = stability_radius(p, radius_tol).s if normalize else 1.0
    q = p.scaled(s)
    rng = np.random.default_rng(seed)
    best = None
    failures = {}
    for k in range(kmin, kmax + 1):
        r = 1.0 - 2.0 ** -k
        qr = q.scaled(r)
        perturbed = False
        try:
            try:
                Kr = _pipeline(qr)
            except RankMismatch:
                perturbed = True
                Kr = _pipeline(_perturbed(qr, 1e-4 * 2.0 ** -k, rng))
        except (DetrepError, np.linalg.LinAlgError) as exc:
            failures[k] = type(exc).__name__
            continue
        K = Kr / (r * s)
        err = eval_error(p, K, (n1, n2), grid=16, n_random=0)
        if err <= tol:
            best = (K, k, perturbed)
        else:
            failures[k] = f"error {err:.1e}"
    if best is None:
        raise PipelineDiverged(f"no dilation step met tol={tol}: {failures}")
    K, k, perturbed = best
    info = {"radius": s, "k": k, "perturbed": perturbed, "seed": seed}
    rep = _finish(p, K, (n1, n2), "pipeline", info)
    if rep.max_eval_error > tol:
        raise PipelineDiverged(f"verification error {rep.max_eval_error:.2e} > {tol}")
    return rep


# ----------------------------------------------------------- unitary route

def _sos_structure(n1: int, n2: int):
    N = (n1 + 1) * (n2 + 1)

    def idx(a1, a2):
        return a1 * (n2 + 1) + a2

    EA = np.zeros((N, n1 * (n2 + 1)))
    FA = np.zeros_like(EA)
    k = 0
    for a1 in range(n1):
        for a2 in range(n2 + 1):
            EA[idx(a1, a2), k] = 1.0
            FA[idx(a1 + 1, a2), k] = 1.0
            k += 1
    EB = np.zeros((N, (n1 + 1) * n2))
    FB = np.zeros_like(EB)
    k = 0
    for a1 in range(n1 + 1):
        for a2 in range(n2):
            EB[idx(a1, a2), k] = 1.0
            FB[idx(a1, a2 + 1), k] = 1.0
            k += 1
    LA = np.kron(EA, EA) - np.kron(FA, FA)
    LB = np.kron(EB, EB) - np.kron(FB, FB)
    return EA, EB, LA, LB


def _sos_kernel(p: BiPoly) -> np.ndarray:
    """Coefficient matrix of ``g(z) conj g(w) - z2 conj(w2) f(z) conj f(w)``.

    ``f = dp/dz2`` and ``g`` is its reverse at bidegree ``(n1, n2 - 1)``.
    """
    n1, n2 = p.bidegree
    f = BiPoly(p.deriv_z2().padded((n1, n2 - 1)), trim=False)
    g = BiPoly(f.coeffs, trim=False).reverse((n1, n2 - 1))
    gv = np.zeros((n1 + 1, n2 + 1), dtype=complex)
    gv[: g.coeffs.shape[0], : g.coeffs.shape[1]] = g.coeffs
    fv = np.zeros((n1 + 1, n2 + 1), dtype=complex)
    fv[:, 1:] = f.coeffs
    gv, fv = gv.ravel(), fv.ravel()
    return np.outer(gv, gv.conj()) - np.outer(fv, fv.conj())


def _psd_project(G):
    w, V = np.linalg.eigh(0.5 * (G + G.conj().T))
    return (V * np.clip(w, 0, None)) @ V.conj().T


def _top_factor(G, rank):
    w, V = np.linalg.eigh(0.5 * (G + G.conj().T))
    w, V = w[::-1][:rank], V[:, ::-1][:, :rank]
    return V * np.sqrt(np.clip(w, 0, None))


def _sos_pairs(n1, n2, m=12):
    k = np.arange(m)
    z = np.stack([0.95 * np.exp(2j * np.pi * k / m), 0.8 * np.exp(2j * np.pi * (5 * k + 1) / m)])
    w = np.stack([np.exp(2j * np.pi * (3 * k + 2) / m), 0.6 * np.exp(2j * np.pi * (7 * k) / m)])
    return z, w


def _sos_residual(p, A_polys, B_polys, m=12) -> float:
    n1, n2 = p.bidegree
    f = BiPoly(p.deriv_z2().padded((n1, n2 - 1)), trim=False)
    g = f.reverse((n1, n2 - 1))
    z, w = _sos_pairs(n1, n2, m)
    Z1, W1 = np.meshgrid(z[0], w[0], indexing="ij")
    Z2, W2 = np.meshgrid(z[1], w[1], indexing="ij")
    lhs = g(Z1, Z2) * np.conj(g(W1, W2)) - Z2 * np.conj(W2) * f(Z1, Z2) * np.conj(f(W1, W2))
    rhs = np.zeros_like(lhs)
    for a in A_polys:
        rhs += (1 - Z1 * np.conj(W1)) * a(Z1, Z2) * np.conj(a(W1, W2))
    for b in B_polys:
        rhs += (1 - Z2 * np.conj(W2)) * b(Z1, Z2) * np.conj(b(W1, W2))
    return float(np.max(np.abs(lhs - rhs)))


def sos_decompose(p: BiPoly, tol: float = 1e-9, seed: int = 0,
                  max_iter: int = 20000, warm_tol: float = 1e-3,
                  restarts: int = 8) -> SosDecomp:
    """Polynomials ``A_1..A_n1``, ``B_1..B_n2`` with

        g(z) conj g(w) - z2 conj(w2) f(z) conj f(w)
            = (1 - z1 conj w1) sum A_i(z) conj A_i(w)
            + (1 - z2 conj w2) sum B_j(z) conj B_j(w)

    where ``f = dp/dz2`` and ``g`` is the reverse of ``f``.  The Gram
    matrices are found by Dykstra's alternating projections between the
    affine coefficient constraints and the PSD cone; their leading
    eigenvectors seed a Levenberg-Marquardt fit of rank-``n1`` and
    rank-``n2`` factors that enforces the number of squares.
    """
    n1, n2 = p.bidegree
    if n1 < 1 or n2 < 1:
        raise InputError("sos_decompose needs n1, n2 >= 1")
    if not self_reversive_test(p).flag:
        raise NotSelfReversive("sum-of-squares route needs a self-reversive polynomial")
    EA, EB, LA, LB = _sos_structure(n1, n2)
    dA, dB = EA.shape[1], EB.shape[1]
    L = _sos_kernel(p)
    target = L.ravel()
    scale = max(1.0, float(np.max(np.abs(L))))
    Lmat = np.concatenate([LA, LB], axis=1).astype(complex)
    pinv = np.linalg.pinv(Lmat)

    def split(x):
        return x[: dA * dA].reshape(dA, dA), x[dA * dA:].reshape(dB, dB)

    def affine(x):
        return x - pinv @ (Lmat @ x - target)

    x = np.zeros(dA * dA + dB * dB, dtype=complex)
    corr = np.zeros_like(x)
    for it in range(max_iter):
        y = affine(x)
        GA, GB = split(y + corr)
        xa = np.concatenate([_psd_project(GA).ravel(), _psd_project(GB).ravel()])
        corr = y + corr - xa
        x = xa
        if it % 50 == 0:
            res = np.max(np.abs(Lmat @ x - target))
            if res <= warm_tol * scale:
                break
    GA, GB = split(x)
    rng = np.random.default_rng(seed)
    FA0, FB0 = _top_factor(GA, n1), _top_factor(GB, n2)

    def residual_jac(F):
        FA, FB = F
        r = Lmat @ np.concatenate([(FA @ FA.conj().T).ravel(),
                                   (FB @ FB.conj().T).ravel()]) - target
        cols = []
        for Fm, Lm, d in ((FA, LA, dA), (FB, LB, dB)):
            for pi in range(d):
                for qi in range(Fm.shape[1]):
                    for ph in (1.0, 1j):
                        dG = np.zeros((d, d), dtype=complex)
                        dG[pi, :] += ph * Fm[:, qi].conj()
                        dG[:, pi] += np.conj(ph) * Fm[:, qi]
                        c = Lm @ dG.ravel()
                        cols.append(np.concatenate([c.real, c.imag]))
        return np.concatenate([r.real, r.imag]), np.array(cols).T

    def retract(F, step):
        FA, FB = F
        na = 2 * FA.size
        sa = step[:na].reshape(dA, n1, 2)
        sb = step[na:].reshape(dB, n2, 2)
        return (FA + sa[..., 0] + 1j * sa[..., 1], FB + sb[..., 0] + 1j * sb[..., 1])

    best = None
    for attempt in range(restarts + 1):
        if attempt == 0:
            start = (FA0.astype(complex), FB0.astype(complex))
        else:
            amp = 0.1 * 2.0 ** (attempt // 2)
            start = (FA0 + amp * (rng.normal(size=FA0.shape) + 1j * rng.normal(size=FA0.shape)),
                     FB0 + amp * (rng.normal(size=FB0.shape) + 1j * rng.normal(size=FB0.shape)))
        F, res = levenberg_marquardt(start, residual_jac, retract, max_iter=200,
                                     tol=1e-14 * scale)
        if best is None or res < best[1]:
            best = (F, res)
        if res <= tol * scale * 1e-2:
            break
    (FA, FB), _ = best
    A_polys = [BiPoly((EA @ FA[:, i]).reshape(n1 + 1, n2 + 1)[:n1], trim=False)
               for i in range(n1)]
    B_polys = [BiPoly((EB @ FB[:, j]).reshape(n1 + 1, n2 + 1)[:, :n2], trim=False)
               for j in range(n2)]
    resid = _sos_residual(p, A_polys, B_polys)
    if resid > tol * scale:
        raise NoConvergence(f"sum-of-squares residual {resid:.2e} above {tol:.1e}")
    return SosDecomp(A_polys, B_polys, resid, p)


def _stacked(dec: SosDecomp, zeros):
    z = np.asarray(zeros, dtype=complex).reshape(-1, 2)
    Av = np.array([[a(z1, z2) for z1, z2 in z] for a in dec.A_polys]).reshape(len(dec.A_polys), -1)
    Bv = np.array([[b(z1, z2) for z1, z2 in z] for b in dec.B_polys]).reshape(len(dec.B_polys), -1)
    X = np.concatenate([z[:, 0] * Av, z[:, 1] * Bv], axis=0)
    Y = np.concatenate([Av, Bv], axis=0)
    return X, Y


def _orth_complement(M, rank):
    U, _, _ = np.linalg.svd(M)
    return U[:, rank:]


def lurking_isometry(dec: SosDecomp, zeros, tol: float = 1e-8) -> np.ndarray:
    """Unitary ``K`` with ``K [z1 A(z); z2 B(z)] = [A(z); B(z)]`` on zeros of p.

    Solved in least squares over the samples; a deficient span is completed
    with orthonormal bases of the two orthogonal complements.
    """
    zeros = list(zeros)
    if dec.poly is not None:
        p = dec.poly
        big = max(1.0, p.scale)
        bad = [z for z in zeros if abs(p(z[0], z[1])) > 1e-6 * big *
               max(1.0, abs(z[0])) ** p.bidegree[0] * max(1.0, abs(z[1])) ** p.bidegree[1]]
        if bad:
            raise InputError(f"{len(bad)} sample points are not zeros of p")
    X, Y = _stacked(dec, zeros)
    N = X.shape[0]
    if X.size == 0:
        raise SpanDeficient("no zero samples")
    sx = np.linalg.svd(X, compute_uv=False)
    if sx[0] == 0:
        raise SpanDeficient("zero samples give a trivial span")
    rank = int(np.sum(sx > 1e-8 * sx[0]))
    K = Y @ np.linalg.pinv(X, rcond=1e-8)
    if rank < N:
        Ux = _orth_complement(X, rank)
        Uy = _orth_complement(Y, rank)
        K = K + Uy @ Ux.conj().T
    U, _, Vh = np.linalg.svd(K)
    Ku = U @ Vh
    scale = max(1.0, float(np.max(np.abs(Y))))
    if np.max(np.abs(Ku @ X - Y)) > 1e3 * tol * scale:
        raise NoConvergence("lurking isometry does not fit the zero samples")
    return Ku


def _slice_zeros(p: BiPoly, count: int, rng):
    out = []
    for _ in range(count):
        z1 = np.exp(2j * np.pi * rng.uniform())
        for z2 in p.slice_z1(z1).roots():
            out.append((complex(z1), complex(z2)))
    return out


def _unitary_sos(p: BiPoly, tol: float, seed: int) -> DetRep:
    n1, n2 = p.bidegree
    rng = np.random.default_rng(seed)
    dec = sos_decompose(p, seed=seed)
    zeros = _slice_zeros(p, max(2, 2 * (n1 + n2)), rng)
    K = lurking_isometry(dec, zeros)
    # the isometry acts on stacked [z1 A; z2 B], so K itself is the representation
    rep = _finish(p, K, (n1, n2), "unitary_sos", {"sos_residual": dec.residual,
                                                   "samples": len(zeros), "seed": seed})
    if rep.max_eval_error > tol:
        raise NoConvergence(f"lurking isometry error {rep.max_eval_error:.2e}")
    return rep


def _unitary_limit(p: BiPoly, tol: float, seed: int, kmax: int = 20) -> DetRep:
    n1, n2 = p.bidegree
    rng = np.random.default_rng(seed)
    last = None
    for k in range(kmax, 3, -1):
        r = 1.0 - 2.0 ** -k
        try:
            # the Bezoutian of p(r z) degenerates like (1 - r)^2, hence the loose PD check
            try:
                Kr = _pipeline(p.scaled(r), sf_tol=1e-15)
            except RankMismatch:
                Kr = _pipeline(_perturbed(p.scaled(r), 1e-4 * 2.0 ** -k, rng), sf_tol=1e-15)
        except (DetrepError, np.linalg.LinAlgError) as exc:
            last = exc
            continue
        K = Kr / r
        U, _, Vh = np.linalg.svd(K)
        Ku = U @ Vh
        dist = float(np.linalg.norm(K - Ku, 2))
        if dist > 1e-5:
            last = NoConvergence(f"polar distance {dist:.1e} at k={k}")
            continue
        target = p.padded((n1, n2))
        Ku, _ = polish_unitary(Ku, (n1, n2), target)
        rep = _finish(p, Ku, (n1, n2), "unitary_limit",
                      {"k": k, "projection_distance": dist, "seed": seed})
        if rep.max_eval_error <= tol:
            return rep
        last = NoConvergence(f"unitary limit error {rep.max_eval_error:.2e}")
    raise PipelineDiverged(f"unitary limit route failed: {last}")


def represent_unitary(p: BiPoly, tol: float = 1e-6, seed: int = 0, factors=None,
                      routes=("sos", "limit")) -> DetRep:
    """Unitary determinantal representation of a self-reversive semi-stable ``p``.

    Tries the sums-of-squares / lurking-isometry construction first and
    falls back to the limit of contractive representations of ``p(r z)``
    projected onto the unitary group.  ``factors`` may list BiPoly factors
    whose product is ``p``; each is represented separately and the results
    are composed.
    """
    _check_unit_constant(p)
    sr = self_reversive_test(p)
    if not sr.flag:
        raise NotSelfReversive(f"reverse(p) != alpha p (defect {sr.defect:.1e})")
    if semistability(p).status == UNSTABLE:
        raise PipelineDiverged("self-reversive input is not semi-stable")
    if factors:
        reps = [represent_unitary(f, tol, seed, None, routes) for f in factors]
        out = reps[0]
        for r in reps[1:]:
            out = compose_product(out, r)
        rep = _finish(p, out.K, out.n, "product", {"factors": [r.route for r in reps]})
        if rep.max_eval_error > tol:
            raise PipelineDiverged(f"factor product misses p by {rep.max_eval_error:.2e}")
        return rep
    n1, n2 = p.bidegree
    if n1 == 0 or n2 == 0:
        rep = _univariate_in(p, 1 if n2 == 0 else 2)
        U, _, Vh = np.linalg.svd(rep.K)
        Ku, _ = polish_unitary(U @ Vh, rep.n, p.padded(rep.n))
        return _finish(p, Ku, rep.n, "univariate", rep.info)
    errors = []
    for route in routes:
        try:
            if route == "sos":
                return _unitary_sos(p, tol, seed)
            if route == "limit":
                return _unitary_limit(p, tol, seed)
            raise InputError(f"unknown route {route!r}")
        except (NoConvergence, SpanDeficient, PipelineDiverged,
                np.linalg.LinAlgError) as exc:
            log.debug("unitary route %s failed: %s", route, exc)
            errors.append(f"{route}: {exc}")
    raise PipelineDiverged("; ".join(errors))
