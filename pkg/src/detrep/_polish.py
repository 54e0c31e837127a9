"""Levenberg-Marquardt refinement of determinantal representations.

Both polishers fit the coefficients of a determinant to a target
polynomial.  Coefficients are recovered exactly from values at roots of
unity, so the residual is a finite vector and its Jacobian follows from
``d det(X) = det(X) tr(X^{-1} dX)``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm


def levenberg_marquardt(x, residual_jac, retract, max_iter: int = 50,
                        tol: float = 1e-15, lam: float = 1e-6):
    """Minimize ``|r(x)|^2`` for a residual given with its Jacobian.

    ``residual_jac(x)`` returns ``(r, J)`` as real arrays with ``J`` the
    derivative along the local chart used by ``retract(x, step)``.
    Returns the final point and residual norm.
    """
    r, J = residual_jac(x)
    cost = float(r @ r)
    for _ in range(max_iter):
        if np.sqrt(cost) <= tol:
            break
        g = J.T @ r
        JTJ = J.T @ J
        diag = np.diag(JTJ).copy()
        diag[diag == 0] = 1.0
        improved = False
        for _ in range(12):
            try:
                step = np.linalg.solve(JTJ + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            cand = retract(x, step)
            rc, Jc = residual_jac(cand)
            cc = float(rc @ rc)
            if cc < cost:
                x, r, J, cost = cand, rc, Jc, cc
                lam = max(lam / 10.0, 1e-15)
                improved = True
                break
            lam *= 10.0
        if not improved:
            break
    return x, float(np.sqrt(cost))


def hermitian_basis(n: int) -> np.ndarray:
    """Real basis of the n x n Hermitian matrices, shape ``(n*n, n, n)``."""
    out = []
    for p in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[p, p] = 1.0
        out.append(E)
    for p in range(n):
        for q in range(p + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[p, q] = E[q, p] = 1.0 / np.sqrt(2)
            out.append(E)
            E = np.zeros((n, n), dtype=complex)
            E[p, q] = 1j / np.sqrt(2)
            E[q, p] = -1j / np.sqrt(2)
            out.append(E)
    return np.array(out).reshape(-1, n, n)


def _split(c):
    return np.concatenate([c.real.ravel(), c.imag.ravel()])


def polish_unitary(U, n, target_coeffs, max_iter: int = 50, radius: float = 0.8):
    """Refine a unitary ``U`` so that ``det(I - U Z_n)`` has the target coefficients.

    Iterates on the manifold through ``U <- U expm(i H)`` with Hermitian
    ``H``, so every iterate is exactly unitary up to rounding.  Values are
    sampled on roots of unity scaled by ``radius`` because a semi-stable
    target may vanish on the torus itself.
    """
    n1, n2 = n
    N = n1 + n2
    N1, N2 = n1 + 1, n2 + 1
    w1 = radius * np.exp(2j * np.pi * np.arange(N1) / N1)
    w2 = radius * np.exp(2j * np.pi * np.arange(N2) / N2)
    z1, z2 = np.meshgrid(w1, w2, indexing="ij")
    zd = np.zeros((N1, N2, N), dtype=complex)
    zd[..., :n1] = z1[..., None]
    zd[..., n1:] = z2[..., None]
    basis = hermitian_basis(N)
    tgt = np.asarray(target_coeffs, dtype=complex)
    unscale = 1.0 / (N1 * N2 * np.multiply.outer(radius ** np.arange(N1),
                                                   radius ** np.arange(N2)))

    def residual_jac(U):
        X = np.eye(N) - U[None, None] * zd[..., None, :]
        det = np.linalg.det(X)
        Xinv = np.linalg.inv(X)
        coeffs = np.fft.fft2(det) * unscale
        # d det = -det tr(X^{-1} U (iE) Z)
        W = np.einsum("abij,jk->abik", Xinv, U)
        cols = []
        for E in basis:
            dX = 1j * E[None, None] * zd[..., None, :]
            dd = -det * np.einsum("abij,abji->ab", W, dX)
            cols.append(_split(np.fft.fft2(dd) * unscale))
        return _split(coeffs - tgt), np.array(cols).T

    def retract(U, step):
        H = np.tensordot(step, basis, axes=1)
        return U @ expm(1j * H)

    return levenberg_marquardt(np.asarray(U, dtype=complex), residual_jac, retract,
                               max_iter=max_iter)


def polish_hermitian(A1, A2, target, max_iter: int = 50):
    """Refine Hermitian ``A1, A2`` so that ``det(I + x1 A1 + x2 A2)`` matches.

    ``target`` is a real coefficient grid indexed ``[i, j]`` for
    ``x1**i x2**j``.
    """
    d = A1.shape[0]
    N = d + 1
    w = np.exp(2j * np.pi * np.arange(N) / N)
    x1, x2 = np.meshgrid(w, w, indexing="ij")
    basis = hermitian_basis(d)
    tgt = np.zeros((N, N), dtype=complex)
    t = np.asarray(target)
    tgt[: t.shape[0], : t.shape[1]] = t
    nb = basis.shape[0]

    def residual_jac(x):
        B1, B2 = x
        X = (np.eye(d)[None, None] + x1[..., None, None] * B1
             + x2[..., None, None] * B2)
        det = np.linalg.det(X)
        Xinv = np.linalg.inv(X)
        coeffs = np.fft.fft2(det) / N ** 2
        cols = []
        for which, xs in ((0, x1), (1, x2)):
            tr = np.einsum("abij,kji->kab", Xinv, basis)
            dd = det[None] * xs[None] * tr
            for k in range(nb):
                cols.append(_split(np.fft.fft2(dd[k]) / N ** 2))
        return _split(coeffs - tgt), np.array(cols).T

    def retract(x, step):
        return (x[0] + np.tensordot(step[:nb], basis, axes=1),
                x[1] + np.tensordot(step[nb:], basis, axes=1))

    (B1, B2), res = levenberg_marquardt((np.asarray(A1, complex), np.asarray(A2, complex)),
                                        residual_jac, retract, max_iter=max_iter)
    return B1, B2, res
