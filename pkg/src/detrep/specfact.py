"""Spectral factorization of matrix polynomials on the circle and the line.

Circle: ``Q(z) = P(z) P(z)^*`` for ``|z| = 1`` with ``det P`` zero-free on
the closed unit disk.  Line: ``H(x) = Q(x)^* Q(x)`` for real ``x`` with
``det Q`` zero-free on the closed upper half-plane.

The circle factor is computed from the stabilizing solution of a discrete
algebraic Riccati equation (scipy's Schur-method solver) or, alternatively,
by Cholesky factorization of a growing block-Toeplitz section.  A few
Gauss-Newton sweeps on the coefficient equations polish either result.
The line problem is mapped to the circle with a column-weighted Cayley
transform.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .errors import (InputError, NoConvergence, NotPositiveDefinite,
                     NotPositiveDefiniteOnLine)
from .poly import MatPoly, TrigMatPoly

CIRCLE_GRID = 512


# ------------------------------------------------------------------ helpers

def _hermitian(a):
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def _polar_unitary(a):
    u, _, vh = np.linalg.svd(a)
    return u @ vh


def factor_residual(Q: TrigMatPoly, P: MatPoly, grid: int = 64) -> float:
    """Max spectral-norm gap between ``Q`` and ``P P^*`` on circle samples."""
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    Pz = P(z)
    diff = Q(z) - Pz @ np.conj(np.swapaxes(Pz, -1, -2))
    return float(np.max(np.linalg.norm(diff, 2, axis=(-2, -1))))


def reversed_zero_moduli(P: MatPoly) -> np.ndarray:
    """Moduli of ``1/z`` over the zeros ``z`` of ``det P``.

    All values strictly below one means ``det P`` has no zeros in the closed
    unit disk.  Zeros at infinity show up as zeros here.
    """
    m, d = P.degree, P.size
    P0inv = np.linalg.inv(P.coeffs[0])
    if m == 0:
        return np.zeros(0)
    C = np.zeros((m * d, m * d), dtype=complex)
    C[: (m - 1) * d, d:] = np.eye((m - 1) * d)
    for j in range(m):
        C[(m - 1) * d:, j * d:(j + 1) * d] = -P0inv @ P.coeffs[m - j]
    return np.abs(np.linalg.eigvals(C))


def matpoly_zeros(Q: MatPoly, inf_tol: float = 1e-10) -> np.ndarray:
    """Finite zeros of ``det Q`` from a block-companion pencil."""
    m, d = Q.degree, Q.size
    if m == 0:
        return np.zeros(0, dtype=complex)
    N = m * d
    A = np.zeros((N, N), dtype=complex)
    Bm = np.eye(N, dtype=complex)
    A[: (m - 1) * d, d:] = np.eye((m - 1) * d)
    for k in range(m):
        A[(m - 1) * d:, k * d:(k + 1) * d] = -Q.coeffs[k]
    Bm[(m - 1) * d:, (m - 1) * d:] = Q.coeffs[m]
    ab = sla.eigvals(A, Bm, homogeneous_eigvals=True)
    alpha, beta = ab[0], ab[1]
    scale = np.hypot(np.abs(alpha), np.abs(beta))
    finite = np.abs(beta) > inf_tol * scale
    return alpha[finite] / beta[finite]


# ----------------------------------------------------------- circle engines

def _factor_riccati(Q: TrigMatPoly) -> np.ndarray:
    m, d = Q.band, Q.size
    R0 = _hermitian(Q.coeff(0))
    if m == 0:
        return np.linalg.cholesky(R0)[None]
    N = m * d
    F = np.zeros((N, N), dtype=complex)
    F[: (m - 1) * d, d:] = np.eye((m - 1) * d)
    Hm = np.zeros((d, N), dtype=complex)
    Hm[:, :d] = np.eye(d)
    G = np.concatenate([Q.coeff(k) for k in range(1, m + 1)], axis=0)
    # covariance-type Riccati: X = F X F^* - (G - F X H^*)(R0 - H X H^*)^{-1}(...)^*
    X = sla.solve_discrete_are(F.conj().T, Hm.conj().T, np.zeros((N, N)), -R0,
                               s=-G)
    lam = _hermitian(R0 - Hm @ X @ Hm.conj().T)
    gain = (G - F @ X @ Hm.conj().T) @ np.linalg.inv(lam)
    ls = np.linalg.cholesky(lam)
    P = np.zeros((m + 1, d, d), dtype=complex)
    P[0] = ls
    Fk = np.eye(N, dtype=complex)
    for k in range(1, m + 1):
        P[k] = Hm @ Fk @ gain @ ls
        Fk = Fk @ F
    return P


def _factor_bauer(Q: TrigMatPoly, tol: float, max_blocks: int) -> np.ndarray:
    """Block Cholesky of the semi-infinite Toeplitz matrix ``[Q_{i-j}]``.

    Rows of the banded Cholesky factor converge to the outer factor
    coefficients ``[P_0, ..., P_m]``; only the last ``m`` rows are kept.
    """
    m = Q.band
    if m == 0:
        return np.linalg.cholesky(_hermitian(Q.coeff(0)))[None]
    Qk = [Q.coeff(k) for k in range(m + 1)]
    scale = Q.max_abs()
    history = []  # history[-s] is row i-s, stored as [L[i,i], L[i,i-1], ...]
    prev = None
    check_every = 64 * m
    for i in range(max_blocks):
        row = [None] * (m + 1)
        for k in range(min(i, m), 0, -1):
            j = i - k
            rj = history[-k]
            acc = Qk[k].copy()
            for c in range(max(i - m, 0), j):
                acc -= row[i - c] @ rj[j - c].conj().T
            row[k] = sla.solve_triangular(rj[0].conj(), acc.T, lower=True).T
        acc = _hermitian(Qk[0])
        for c in range(max(i - m, 0), i):
            acc -= row[i - c] @ row[i - c].conj().T
        try:
            row[0] = np.linalg.cholesky(_hermitian(acc))
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("Toeplitz section lost definiteness") from exc
        history.append(row)
        if len(history) > m:
            history.pop(0)
        if i >= m and (i + 1) % check_every == 0:
            cur = np.stack(row)
            if prev is not None and np.max(np.abs(cur - prev)) <= tol * scale:
                return cur
            prev = cur
    raise NoConvergence(f"Toeplitz Cholesky did not settle within {max_blocks} blocks")


def _newton_refine(Q: TrigMatPoly, P: np.ndarray, sweeps: int = 2) -> np.ndarray:
    """Gauss-Newton on ``sum_l P_{l+k} P_l^* = Q_k``, k = 0..m."""
    m = P.shape[0] - 1
    target = np.stack([Q.coeff(k) for k in range(m + 1)])

    def F(P):
        out = np.zeros_like(target)
        for k in range(m + 1):
            for l in range(m + 1 - k):
                out[k] += P[l + k] @ P[l].conj().T
        return out

    def dF(P, E):
        out = np.zeros_like(target)
        for k in range(m + 1):
            for l in range(m + 1 - k):
                out[k] += E[l + k] @ P[l].conj().T + P[l + k] @ E[l].conj().T
        return out

    def flat(x):
        return np.concatenate([x.real.ravel(), x.imag.ravel()])

    res = F(P) - target
    err = np.max(np.abs(res))
    n = P.size
    for _ in range(sweeps):
        if err == 0.0:
            break
        J = np.empty((2 * target.size, 2 * n))
        for idx in range(n):
            E = np.zeros(n, dtype=complex)
            E[idx] = 1.0
            E = E.reshape(P.shape)
            J[:, idx] = flat(dF(P, E))
            J[:, n + idx] = flat(dF(P, 1j * E))
        step = np.linalg.lstsq(J, -flat(res), rcond=None)[0]
        cand = P + (step[:n] + 1j * step[n:]).reshape(P.shape)
        cres = F(cand) - target
        cerr = np.max(np.abs(cres))
        if not cerr < err:
            break
        P, res, err = cand, cres, cerr
    return P


def _gauge_circle(P: np.ndarray) -> np.ndarray:
    # right unitary so that P(0) is Hermitian positive definite
    U = _polar_unitary(P[0])
    return P @ U.conj().T


def specfact_circle(Q: TrigMatPoly, tol: float = 1e-9, method: str = "auto",
                    grid: int = CIRCLE_GRID, max_blocks: int = 1 << 16,
                    newton_sweeps: int = 2) -> MatPoly:
    """Outer factor ``P`` with ``Q = P P^*`` on the unit circle.

    Parameters
    ----------
    Q : TrigMatPoly
        Hermitian Laurent band, positive definite on the circle.
    tol : float
        Relative tolerance for the positivity pre-check and the residual.
    method : {"auto", "riccati", "bauer"}
        ``auto`` tries the Riccati solver and falls back to Toeplitz Cholesky.

    Returns
    -------
    MatPoly
        ``P`` of degree ``Q.band`` with ``P(0)`` Hermitian positive definite
        and ``det P`` zero-free on the closed unit disk.
    """
    if Q.hermitian_defect() > 1e-10 * max(1.0, Q.max_abs()):
        raise InputError("Laurent band is not Hermitian-symmetric")
    scale = Q.max_abs()
    m_eig, theta, _ = Q.min_eig_on_circle(grid)
    if not m_eig > tol * scale:
        raise NotPositiveDefinite(
            f"min eigenvalue {m_eig:.3e} on the circle", witness=np.exp(1j * theta))
    P = None
    if method in ("auto", "riccati"):
        try:
            P = _factor_riccati(Q)
            if not np.all(np.isfinite(P)):
                P = None
        except (np.linalg.LinAlgError, ValueError):
            P = None
        if P is None and method == "riccati":
            raise NoConvergence("Riccati solver failed")
    if P is None:
        if method not in ("auto", "bauer"):
            raise InputError(f"unknown method {method!r}")
        P = _factor_bauer(Q, tol * 1e-3, max_blocks)
    P = _newton_refine(Q, P, newton_sweeps)
    P = _gauge_circle(P)
    out = MatPoly(P, trim=False)
    if factor_residual(Q, out) > tol * max(scale, 1.0):
        raise NoConvergence("factor residual above tolerance")
    rz = reversed_zero_moduli(out)
    if rz.size and not np.max(rz) < 1.0:
        raise NoConvergence("factor has zeros in the closed unit disk")
    return out


# --------------------------------------------------------------------- line

def column_degrees(H: MatPoly) -> np.ndarray:
    """Half the degree (rounded up) of each diagonal entry of ``H``."""
    d = H.size
    return np.array([(H.entry(j, j).degree + 1) // 2 for j in range(d)])


def _cayley_symbol(H: MatPoly, deltas) -> TrigMatPoly:
    """``G(w) = D(w)^* H(x(w)) D(w)`` with ``x = i(1-w)/(1+w)``.

    ``D = diag((1+w)^deltas)`` clears the denominators column by column.
    """
    d = H.size
    m = int(max(deltas)) if d else 0
    out = np.zeros((2 * m + 1, d, d), dtype=complex)
    for a in range(d):
        for b in range(d):
            tot = deltas[a] + deltas[b]
            h = H.coeffs[:, a, b]
            for k in np.nonzero(h)[0]:
                if k > tot:
                    raise InputError(
                        f"entry ({a},{b}) has degree {k} > {tot}; not column reduced")
                c = np.array([1.0 + 0j])
                for _ in range(k):
                    c = np.convolve(c, [1.0, -1.0])
                for _ in range(tot - k):
                    c = np.convolve(c, [1.0, 1.0])
                c = c * h[k] * (1j) ** k
                lo = -deltas[a] + m
                out[lo: lo + c.size, a, b] += c
    return TrigMatPoly(out)


def _gauge_line(Q: np.ndarray, deltas) -> np.ndarray:
    # left unitary so that the column-leading matrix is Hermitian positive definite
    d = Q.shape[1]
    hc = np.stack([Q[deltas[j], :, j] for j in range(d)], axis=1)
    U = _polar_unitary(hc)
    return np.einsum("ij,kjl->kil", U.conj().T, Q)


def specfact_line(H: MatPoly, tol: float = 1e-9, grid: int = CIRCLE_GRID,
                  method: str = "auto") -> MatPoly:
    """Factor ``H(x) = Q(x)^* Q(x)`` on the real line.

    ``det Q`` has all its zeros in the open lower half-plane, and column
    ``j`` of ``Q`` has degree ``ceil(deg H_jj / 2)``.
    """
    hc = H.coeffs
    if np.max(np.abs(hc - np.conj(np.swapaxes(hc, 1, 2)))) > 1e-10 * max(1.0, H.max_abs()):
        raise InputError("coefficients of H must be Hermitian")
    d = H.size
    deltas = column_degrees(H)
    lead = np.zeros((d, d), dtype=complex)
    for a in range(d):
        for b in range(d):
            k = deltas[a] + deltas[b]
            if k < hc.shape[0]:
                lead[a, b] = hc[k, a, b]
    if np.linalg.eigvalsh(_hermitian(lead))[0] <= tol * max(1.0, H.max_abs()):
        raise NotPositiveDefiniteOnLine("leading coefficient matrix is not positive "
                                        "definite", witness=np.inf)
    G = _cayley_symbol(H, deltas)
    try:
        P = specfact_circle(TrigMatPoly(np.swapaxes(G.coeffs, 1, 2)), tol,
                            method=method, grid=grid)
    except NotPositiveDefinite as exc:
        w = exc.witness
        x = 1j * (1 - w) / (1 + w) if w is not None else None
        raise NotPositiveDefiniteOnLine(str(exc), witness=None if x is None else x.real) \
            from exc
    R = np.swapaxes(P.coeffs, 1, 2)
    m = R.shape[0] - 1
    out = np.zeros((int(max(deltas)) + 1, d, d), dtype=complex)
    spill = 0.0
    for j in range(d):
        dj = int(deltas[j])
        spill = max(spill, float(np.max(np.abs(R[dj + 1:, :, j]), initial=0.0)))
        for k in range(min(dj, m) + 1):
            # (i - x)^k (i + x)^(dj - k) / (2i)^dj as a polynomial in x
            c = np.array([1.0 + 0j])
            for _ in range(k):
                c = np.convolve(c, [1j, -1.0])
            for _ in range(dj - k):
                c = np.convolve(c, [1j, 1.0])
            c = c / (2j) ** dj
            out[: c.size, :, j] += np.outer(c, R[k, :, j])
    if spill > 1e-6 * max(1.0, float(np.max(np.abs(R)))):
        raise NoConvergence("circle factor exceeds the column degree bound")
    Qm = MatPoly(_gauge_line(out, deltas), trim=False)
    # coefficient identity Q^# Q = H
    prod = Qm.adjoint() * Qm
    k = min(prod.coeffs.shape[0], hc.shape[0])
    resid = np.max(np.abs(prod.coeffs[:k] - hc[:k]))
    extra = max(np.max(np.abs(prod.coeffs[k:]), initial=0.0),
                np.max(np.abs(hc[k:]), initial=0.0))
    if max(resid, extra) > 1e3 * tol * max(1.0, H.max_abs()):
        raise NoConvergence(f"line factor residual {max(resid, extra):.2e}")
    zs = matpoly_zeros(Qm)
    if zs.size and not np.max(zs.imag) < 0.0:
        raise NoConvergence("line factor has zeros in the closed upper half-plane")
    return Qm
