"""Point-sweep kernels: bivariate Horner and batched small determinants.

Each kernel exists twice, as a numba ``@njit`` loop and as vectorized
numpy.  The numba path is used when numba imports and the environment
variable ``DETREP_USE_NUMBA`` is not ``"0"``.  :func:`set_backend` switches
at runtime, which the benchmark and the cross-check tests rely on.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None

_backend = "numpy"
if HAVE_NUMBA and os.environ.get("DETREP_USE_NUMBA", "1") != "0":
    _backend = "numba"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    old, _backend = _backend, name
    return old


# ----------------------------------------------------------------- numpy path

def _horner2_np(c, z1, z2):
    acc = np.zeros(z1.shape, dtype=complex)
    for i in range(c.shape[0] - 1, -1, -1):
        row = np.full(z2.shape, c[i, -1], dtype=complex)
        for j in range(c.shape[1] - 2, -1, -1):
            row = row * z2 + c[i, j]
        acc = acc * z1 + row
    return acc


def _detrep_np(K, n1, z1, z2):
    n = K.shape[0]
    z = np.empty((z1.size, n), dtype=complex)
    z[:, :n1] = z1[:, None]
    z[:, n1:] = z2[:, None]
    mats = np.eye(n) - K[None, :, :] * z[:, None, :]
    return np.linalg.det(mats)


def _pencil_np(A1, A2, x1, x2):
    n = A1.shape[0]
    mats = (np.eye(n)[None] + x1[:, None, None] * A1[None]
            + x2[:, None, None] * A2[None])
    return np.linalg.det(mats)


# ----------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _horner2_nb(c, z1, z2, out):
        m1, m2 = c.shape
        for k in range(z1.size):
            a = z1[k]
            b = z2[k]
            acc = 0j
            for i in range(m1 - 1, -1, -1):
                row = c[i, m2 - 1]
                for j in range(m2 - 2, -1, -1):
                    row = row * b + c[i, j]
                acc = acc * a + row
            out[k] = acc

    @numba.njit(cache=True)
    def _det_inplace(a):
        # Gaussian elimination with partial pivoting, destroys `a`
        n = a.shape[0]
        det = 1.0 + 0j
        for col in range(n):
            piv = col
            best = abs(a[col, col])
            for r in range(col + 1, n):
                v = abs(a[r, col])
                if v > best:
                    best = v
                    piv = r
            if best == 0.0:
                return 0j
            if piv != col:
                for c in range(n):
                    tmp = a[col, c]
                    a[col, c] = a[piv, c]
                    a[piv, c] = tmp
                det = -det
            d = a[col, col]
            det *= d
            for r in range(col + 1, n):
                f = a[r, col] / d
                if f != 0:
                    for c in range(col + 1, n):
                        a[r, c] -= f * a[col, c]
        return det

    @numba.njit(cache=True)
    def _detrep_nb(K, n1, z1, z2, out):
        n = K.shape[0]
        work = np.empty((n, n), dtype=np.complex128)
        for k in range(z1.size):
            for i in range(n):
                for j in range(n):
                    zj = z1[k] if j < n1 else z2[k]
                    work[i, j] = -K[i, j] * zj
                work[i, i] += 1.0
            out[k] = _det_inplace(work)

    @numba.njit(cache=True)
    def _pencil_nb(A1, A2, x1, x2, out):
        n = A1.shape[0]
        work = np.empty((n, n), dtype=np.complex128)
        for k in range(x1.size):
            for i in range(n):
                for j in range(n):
                    work[i, j] = x1[k] * A1[i, j] + x2[k] * A2[i, j]
                work[i, i] += 1.0
            out[k] = _det_inplace(work)

    @numba.njit(cache=True)
    def _det_batch_nb(mats, out):
        for k in range(mats.shape[0]):
            out[k] = _det_inplace(mats[k].copy())


# ------------------------------------------------------------------ dispatch

def _flat_pair(a, b):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=complex),
                               np.asarray(b, dtype=complex))
    shape = a.shape
    return (np.ascontiguousarray(a.ravel()), np.ascontiguousarray(b.ravel()),
            shape)


def horner2(coeffs, z1, z2):
    """Evaluate ``sum c[i, j] z1**i z2**j`` at broadcast point arrays."""
    c = np.ascontiguousarray(coeffs, dtype=complex)
    a, b, shape = _flat_pair(z1, z2)
    if _backend == "numba":
        out = np.empty(a.size, dtype=complex)
        _horner2_nb(c, a, b, out)
    else:
        out = _horner2_np(c, a, b)
    return out.reshape(shape)


def detrep_values(K, n1: int, z1, z2):
    """``det(I - K diag(z1 I_n1, z2 I_n2))`` at broadcast point arrays."""
    K = np.ascontiguousarray(K, dtype=complex)
    a, b, shape = _flat_pair(z1, z2)
    if K.shape[0] == 0:
        return np.ones(shape, dtype=complex)
    if _backend == "numba":
        out = np.empty(a.size, dtype=complex)
        _detrep_nb(K, int(n1), a, b, out)
    else:
        out = _detrep_np(K, int(n1), a, b)
    return out.reshape(shape)


def pencil_values(A1, A2, x1, x2):
    """``det(I + x1 A1 + x2 A2)`` at broadcast point arrays."""
    A1 = np.ascontiguousarray(A1, dtype=complex)
    A2 = np.ascontiguousarray(A2, dtype=complex)
    a, b, shape = _flat_pair(x1, x2)
    if A1.shape[0] == 0:
        return np.ones(shape, dtype=complex)
    if _backend == "numba":
        out = np.empty(a.size, dtype=complex)
        _pencil_nb(A1, A2, a, b, out)
    else:
        out = _pencil_np(A1, A2, a, b)
    return out.reshape(shape)


def det_batch(mats):
    """Determinants of a stack of square matrices, shape ``(..., n, n)``."""
    mats = np.asarray(mats, dtype=complex)
    lead = mats.shape[:-2]
    n = mats.shape[-1]
    if n == 0:
        return np.ones(lead, dtype=complex)
    flat = np.ascontiguousarray(mats.reshape(-1, n, n))
    if _backend == "numba":
        out = np.empty(flat.shape[0], dtype=complex)
        _det_batch_nb(flat, out)
    else:
        out = np.linalg.det(flat)
    return out.reshape(lead)


def warmup() -> None:
    """Trigger JIT compilation of every kernel once."""
    if not HAVE_NUMBA:
        return
    old = set_backend("numba")
    try:
        z = np.array([0.1 + 0.2j, -0.3j])
        horner2(np.ones((2, 2)), z, z)
        K = np.eye(2) * 0.5
        detrep_values(K, 1, z, z)
        pencil_values(K, K, z.real, z.real)
        det_batch(np.stack([K, K]))
    finally:
        set_backend(old)
