"""State-space realization of the transfer function built from a bivariate
polynomial, contractive balancing, and assembly of the block matrix K."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import _kernels
from .errors import (DenominatorMismatch, EvaluationMismatch, KYPFailure,
                     RankMismatch, SingularP0)
from .poly import BiPoly, MatPoly, companion_series


@dataclass(frozen=True)
class SysMat:
    """Realization ``M(z) = D + C z (I - A z)^{-1} B``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @property
    def n1(self) -> int:
        return self.A.shape[0]

    @property
    def n2(self) -> int:
        return self.D.shape[0]

    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    def transfer(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        n = self.n1
        out = np.empty((z.size, self.n2, self.n2), dtype=complex)
        for k, zk in enumerate(z):
            if n:
                x = np.linalg.solve(np.eye(n) - zk * self.A, self.B)
                out[k] = self.D + zk * self.C @ x
            else:
                out[k] = self.D
        return out

    def markov(self, count: int) -> np.ndarray:
        """``[D, CB, CAB, ...]`` with ``count`` entries."""
        out = np.empty((count, self.n2, self.n2), dtype=complex)
        out[0] = self.D
        if count > 1 and self.n1:
            X = self.B.copy()
            for k in range(1, count):
                out[k] = self.C @ X
                X = self.A @ X
        elif count > 1:
            out[1:] = 0.0
        return out


def _series_mul(X, Y):
    n = X.shape[0]
    out = np.zeros_like(X)
    for k in range(n):
        for j in range(k + 1):
            out[k] += X[j] @ Y[k - j]
    return out


def markov_of_M(p: BiPoly, P: MatPoly, order: int | None = None) -> np.ndarray:
    """Taylor coefficients of ``P^{-1} C P`` at zero, ``C`` the companion matrix.

    Returns
    -------
    ndarray, shape (order + 1, n2, n2)
    """
    n1, n2 = p.bidegree
    if order is None:
        order = 2 * (n1 + n2) + 4
    comp = companion_series(p, order)
    Pp = np.zeros((order + 1, n2, n2), dtype=complex)
    k = min(P.coeffs.shape[0], order + 1)
    Pp[:k] = P.coeffs[:k]
    cond = np.linalg.cond(Pp[0])
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularP0("factor is singular at the origin")
    P0inv = np.linalg.inv(Pp[0])
    Pinv = np.zeros_like(Pp)
    Pinv[0] = P0inv
    for k in range(1, order + 1):
        acc = np.zeros((n2, n2), dtype=complex)
        for j in range(1, k + 1):
            acc -= Pp[j] @ Pinv[k - j]
        Pinv[k] = P0inv @ acc
    return _series_mul(_series_mul(Pinv, comp), Pp)


def hankel_singular_values(markov, horizon: int) -> np.ndarray:
    Hk = np.block([[markov[i + j + 1] for j in range(horizon)] for i in range(horizon)])
    return np.linalg.svd(Hk, compute_uv=False)


def minimal_realization(markov, n: int, svd_tol: float = 1e-8,
                        horizon: int | None = None) -> SysMat:
    """Ho-Kalman realization of exact order ``n`` from Markov parameters.

    ``markov[0]`` is the feedthrough ``D``; the block Hankel matrix uses
    ``markov[1:]``.  The default horizon is ``n + 2`` block rows/columns.

    Raises
    ------
    RankMismatch
        If the numerical rank of the Hankel matrix (relative threshold
        ``svd_tol``) differs from ``n``.  ``exc.rank`` carries the rank found.
    """
    markov = np.asarray(markov, dtype=complex)
    d = markov.shape[1]
    if horizon is None:
        horizon = n + 2
    if markov.shape[0] < 2 * horizon:
        raise ValueError(f"need {2 * horizon} Markov parameters, got {markov.shape[0]}")
    Hk = np.block([[markov[i + j + 1] for j in range(horizon)] for i in range(horizon)])
    U, S, Vh = np.linalg.svd(Hk)
    top = S[0] if S.size else 0.0
    rank = int(np.sum(S > svd_tol * top)) if top > 0 else 0
    if rank != n:
        raise RankMismatch(f"Hankel rank {rank}, expected {n}", rank=rank)
    if n == 0:
        e = np.zeros((0, 0), dtype=complex)
        return SysMat(e, np.zeros((0, d), dtype=complex), np.zeros((d, 0), dtype=complex),
                      markov[0].copy())
    root = np.sqrt(S[:n])
    Ob = U[:, :n] * root
    Ct = root[:, None] * Vh[:n]
    C = Ob[:d]
    B = Ct[:, :d]
    A = np.linalg.lstsq(Ob[:-d], Ob[d:], rcond=None)[0]
    return SysMat(A, B, C, markov[0].copy())


def sup_norm(sys: SysMat, grid: int = 256) -> float:
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    return float(np.max(np.linalg.norm(sys.transfer(z), 2, axis=(-2, -1))))


def _similar(sys: SysMat, X) -> SysMat:
    X = 0.5 * (X + X.conj().T)
    w, V = np.linalg.eigh(X)
    if not w[0] > 0:
        raise KYPFailure("storage function is not positive definite")
    T = (V * np.sqrt(w)) @ V.conj().T
    Ti = (V / np.sqrt(w)) @ V.conj().T
    return SysMat(T @ sys.A @ Ti, T @ sys.B, sys.C @ Ti, sys.D)


def _kyp_riccati(sys: SysMat, gamma: float):
    A, B, C, D = sys.A, sys.B, sys.C, sys.D
    m = D.shape[0]
    return sla.solve_discrete_are(A, B, C.conj().T @ C,
                                  D.conj().T @ D - gamma ** 2 * np.eye(m),
                                  s=C.conj().T @ D)


def _kyp_iterate(sys: SysMat, gamma: float, budget: int = 500, tol: float = 1e-12):
    # Riccati difference map from X = 0; converges to the minimal solution
    A, B, C, D = sys.A, sys.B, sys.C, sys.D
    m = D.shape[0]
    X = np.zeros_like(A)
    for _ in range(budget):
        R = gamma ** 2 * np.eye(m) - D.conj().T @ D - B.conj().T @ X @ B
        L = A.conj().T @ X @ B + C.conj().T @ D
        Xn = A.conj().T @ X @ A + C.conj().T @ C + L @ np.linalg.solve(R, L.conj().T)
        Xn = 0.5 * (Xn + Xn.conj().T)
        if np.linalg.norm(Xn - X) <= tol * max(np.linalg.norm(Xn), 1e-300):
            return Xn
        X = Xn
    raise KYPFailure("Riccati iteration did not converge within the budget")


def contractive_balance(sys: SysMat, tol: float = 1e-9) -> SysMat:
    """State-space similarity making the system matrix a contraction.

    The storage function ``X`` of the bounded-real lemma at level
    ``1 + tol/4`` supplies ``T = X^{1/2}``; the returned realization is
    ``(T A T^{-1}, T B, C T^{-1}, D)``.  Systems whose block matrix is already
    within ``1 + tol`` are returned unchanged.
    """
    K = sys.matrix()
    if K.size == 0 or np.linalg.norm(K, 2) <= 1.0 + tol:
        return sys
    if sys.n1 == 0:
        raise KYPFailure("feedthrough alone is not contractive")
    if sup_norm(sys) > 1.0 + 1e-6:
        raise KYPFailure("transfer function is not contractive on the circle")
    gamma = 1.0 + tol / 4
    out = None
    try:
        out = _similar(sys, _kyp_riccati(sys, gamma))
    except (np.linalg.LinAlgError, ValueError, KYPFailure):
        out = None
    if out is None or np.linalg.norm(out.matrix(), 2) > 1.0 + tol:
        out = _similar(sys, _kyp_iterate(sys, gamma))
    if np.linalg.norm(out.matrix(), 2) > 1.0 + tol:
        raise KYPFailure("balanced system matrix is not contractive")
    return out


def det_poly(K, n) -> BiPoly:
    """Coefficients of ``det(I - K Z_n)`` by exact 2-d DFT interpolation."""
    n1, n2 = n
    N1, N2 = n1 + 1, n2 + 1
    w1 = np.exp(2j * np.pi * np.arange(N1) / N1)
    w2 = np.exp(2j * np.pi * np.arange(N2) / N2)
    z1, z2 = np.meshgrid(w1, w2, indexing="ij")
    vals = _kernels.detrep_values(K, n1, z1, z2)
    return BiPoly(np.fft.fft2(vals) / (N1 * N2), trim=False)


def bidisk_grid(size: int = 16):
    """Points on the torus plus an interior ring, shape ``(size, size)``."""
    theta = 2 * np.pi * (np.arange(size) + 0.5) / size
    rad = np.where(np.arange(size) % 2 == 0, 1.0, 0.5)
    w = rad * np.exp(1j * theta)
    return np.meshgrid(w, w[::-1] * np.exp(0.3j), indexing="ij")


def assemble_K(sys: SysMat, p: BiPoly, tol: float = 1e-7) -> np.ndarray:
    """Block matrix ``[[A, B], [C, D]]`` after checking it reproduces ``p``."""
    n1 = sys.n1
    K = sys.matrix()
    scale = max(1.0, p.scale)
    p0 = p.coeffs[:, 0]
    den = det_poly(sys.A, (n1, 0)).coeffs[:, 0] * p.constant if n1 else np.array([p.constant])
    m = max(den.size, p0.size)
    gap = np.zeros(m, dtype=complex)
    gap[: den.size] += den
    gap[: p0.size] -= p0
    if np.max(np.abs(gap)) > tol * scale:
        raise DenominatorMismatch(f"det(I - z A) differs from p(., 0) by "
                                  f"{np.max(np.abs(gap)):.2e}")
    z1, z2 = bidisk_grid(16)
    err = np.max(np.abs(_kernels.detrep_values(K, n1, z1, z2) * p.constant - p(z1, z2)))
    if err > tol * scale:
        raise EvaluationMismatch(f"det(I - K Z) differs from p by {err:.2e}")
    return K
