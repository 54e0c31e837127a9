"""Polynomial containers and the structured matrices built from them.

Coefficient conventions: ``UniPoly.coeffs[k]`` multiplies ``z**k``;
``BiPoly.coeffs[i, j]`` multiplies ``z1**i * z2**j``; ``MatPoly.coeffs[k]``
is the matrix coefficient of the k-th power.  All containers are treated
as immutable values.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import InputError, ZeroConstantTerm

TRIM_TOL = 1e-12


def _trim_tail(c, tol=TRIM_TOL):
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(c) > tol * scale)[0]
    return c[: keep[-1] + 1].copy()


def _trim_grid(c, tol=TRIM_TOL):
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros((1, 1), dtype=c.dtype)
    big = np.abs(c) > tol * scale
    rows = np.nonzero(big.any(axis=1))[0]
    cols = np.nonzero(big.any(axis=0))[0]
    return c[: rows[-1] + 1, : cols[-1] + 1].copy()


def _frozen(a):
    a.flags.writeable = False
    return a


def polyroots(coeffs) -> np.ndarray:
    """Roots of ``sum c_k z**k`` as eigenvalues of the companion matrix."""
    c = _trim_tail(coeffs)
    # leading zeros (roots at the origin) are split off exactly
    nz = np.nonzero(c)[0]
    if c.size <= 1 or nz.size == 0:
        return np.zeros(0, dtype=complex)
    low = nz[0]
    c = c[low:]
    n = c.size - 1
    origin = np.zeros(low, dtype=complex)
    if n == 0:
        return origin
    comp = np.zeros((n, n), dtype=complex)
    comp[0, :] = -c[-2::-1] / c[-1]
    comp[np.arange(1, n), np.arange(n - 1)] = 1.0
    return np.concatenate([origin, np.linalg.eigvals(comp)])


def series_divide(num, den, order: int) -> np.ndarray:
    """Taylor coefficients ``0..order`` of ``num(z) / den(z)`` at z = 0."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    if den[0] == 0:
        raise ZeroConstantTerm("series division by a polynomial vanishing at 0")
    out = np.zeros(order + 1, dtype=complex)
    for k in range(order + 1):
        acc = num[k] if k < num.size else 0.0
        for j in range(1, min(k, den.size - 1) + 1):
            acc -= den[j] * out[k - j]
        out[k] = acc / den[0]
    return out


# ---------------------------------------------------------------- univariate

class UniPoly:
    """Univariate complex polynomial."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim: bool = True):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        self.coeffs = _frozen(_trim_tail(c) if trim else c.copy())

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc if acc.ndim else complex(acc)

    def roots(self) -> np.ndarray:
        return polyroots(self.coeffs)

    def scaled(self, r) -> "UniPoly":
        """``z -> u(r z)``."""
        return UniPoly(self.coeffs * r ** np.arange(self.coeffs.size))

    def deriv(self) -> "UniPoly":
        if self.degree == 0:
            return UniPoly([0.0])
        return UniPoly(self.coeffs[1:] * np.arange(1, self.coeffs.size))

    def _other(self, other):
        return other if isinstance(other, UniPoly) else UniPoly([other])

    def __add__(self, other):
        o = self._other(other)
        n = max(self.coeffs.size, o.coeffs.size)
        out = np.zeros(n, dtype=complex)
        out[: self.coeffs.size] += self.coeffs
        out[: o.coeffs.size] += o.coeffs
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return UniPoly(self.coeffs * other)
        return UniPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __repr__(self):
        return f"UniPoly({np.array2string(self.coeffs, precision=6)})"


# ----------------------------------------------------------------- bivariate

class BiPoly:
    """Bivariate complex polynomial on a dense coefficient grid."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim: bool = True):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim == 0:
            c = c.reshape(1, 1)
        elif c.ndim == 1:
            c = c.reshape(-1, 1)
        elif c.ndim != 2:
            raise InputError("bivariate coefficients must form a 2-d grid")
        self.coeffs = _frozen(_trim_grid(c) if trim else c.copy())

    @classmethod
    def from_terms(cls, terms: dict) -> "BiPoly":
        """Build from ``{(i, j): coefficient}``."""
        n1 = max(i for i, _ in terms)
        n2 = max(j for _, j in terms)
        c = np.zeros((n1 + 1, n2 + 1), dtype=complex)
        for (i, j), v in terms.items():
            c[i, j] += v
        return cls(c)

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @property
    def constant(self) -> complex:
        return complex(self.coeffs[0, 0])

    @property
    def corner(self) -> complex:
        return complex(self.coeffs[-1, -1])

    @property
    def is_constant(self) -> bool:
        return self.coeffs.shape == (1, 1)

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, z1, z2):
        out = _kernels.horner2(self.coeffs, z1, z2)
        return out if out.ndim else complex(out)

    def padded(self, bidegree) -> np.ndarray:
        n1, n2 = bidegree
        m1, m2 = self.bidegree
        if m1 > n1 or m2 > n2:
            raise InputError(f"bidegree {self.bidegree} exceeds {bidegree}")
        out = np.zeros((n1 + 1, n2 + 1), dtype=complex)
        out[: m1 + 1, : m2 + 1] = self.coeffs
        return out

    def reverse(self, bidegree=None) -> "BiPoly":
        """``z^n conj(p(1/conj z))`` with respect to ``bidegree`` (default: own)."""
        c = self.coeffs if bidegree is None else self.padded(bidegree)
        return BiPoly(np.conj(c[::-1, ::-1]))

    def scaled(self, r) -> "BiPoly":
        """``(z1, z2) -> p(r z1, r z2)``."""
        i, j = np.indices(self.coeffs.shape)
        return BiPoly(self.coeffs * np.power(complex(r), i + j), trim=False)

    def swapped(self) -> "BiPoly":
        return BiPoly(self.coeffs.T)

    def deriv_z1(self) -> "BiPoly":
        if self.coeffs.shape[0] == 1:
            return BiPoly(np.zeros((1, 1)))
        k = np.arange(1, self.coeffs.shape[0])[:, None]
        return BiPoly(self.coeffs[1:] * k)

    def deriv_z2(self) -> "BiPoly":
        if self.coeffs.shape[1] == 1:
            return BiPoly(np.zeros((1, 1)))
        k = np.arange(1, self.coeffs.shape[1])[None, :]
        return BiPoly(self.coeffs[:, 1:] * k)

    def slice_z1(self, z1) -> UniPoly:
        """The univariate polynomial ``z2 -> p(z1, z2)``."""
        pw = complex(z1) ** np.arange(self.coeffs.shape[0])
        return UniPoly(pw @ self.coeffs)

    def _other(self, other):
        return other if isinstance(other, BiPoly) else BiPoly([[other]])

    def __add__(self, other):
        o = self._other(other)
        s = (max(self.coeffs.shape[0], o.coeffs.shape[0]),
             max(self.coeffs.shape[1], o.coeffs.shape[1]))
        out = np.zeros(s, dtype=complex)
        out[: self.coeffs.shape[0], : self.coeffs.shape[1]] += self.coeffs
        out[: o.coeffs.shape[0], : o.coeffs.shape[1]] += o.coeffs
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return BiPoly(self.coeffs * other)
        a, b = self.coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                       dtype=complex)
        for i in range(b.shape[0]):
            for j in range(b.shape[1]):
                out[i: i + a.shape[0], j: j + a.shape[1]] += b[i, j] * a
        return BiPoly(out)

    __rmul__ = __mul__

    def allclose(self, other, tol=1e-10) -> bool:
        d = self - other
        return d.scale <= tol * max(1.0, self.scale, other.scale)

    def __repr__(self):
        return f"BiPoly(bidegree={self.bidegree})"


def eval_bi(p: BiPoly, z1, z2):
    """Nested Horner evaluation of ``p`` at ``(z1, z2)`` (broadcasting)."""
    return p(z1, z2)


def reverse(p: BiPoly) -> BiPoly:
    return p.reverse()


def coeffs_in_z2(p: BiPoly) -> list[UniPoly]:
    """``[p_0(z1), ..., p_n2(z1)]`` with ``p = sum_j p_j(z1) z2**j``."""
    return [UniPoly(p.coeffs[:, j]) for j in range(p.coeffs.shape[1])]


# ------------------------------------------------------------ matrix-valued

class MatPoly:
    """Square matrix polynomial ``sum_k coeffs[k] x**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim: bool = True):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise InputError("matrix polynomial coefficients must be (k, d, d)")
        if trim and c.shape[0] > 1:
            norms = np.abs(c).reshape(c.shape[0], -1).max(axis=1)
            top = norms.max()
            if top == 0.0:
                c = c[:1]
            else:
                last = np.nonzero(norms > TRIM_TOL * top)[0][-1]
                c = c[: last + 1]
        self.coeffs = _frozen(c.copy())

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def size(self) -> int:
        return self.coeffs.shape[1]

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        acc = np.broadcast_to(self.coeffs[-1], x.shape + self.coeffs.shape[1:]).copy()
        for c in self.coeffs[-2::-1]:
            acc = acc * x[..., None, None] + c
        return acc

    def __mul__(self, other):
        if np.isscalar(other):
            return MatPoly(self.coeffs * other)
        a, b = self.coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1,) + a.shape[1:], dtype=complex)
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                out[i + j] += a[i] @ b[j]
        return MatPoly(out)

    def __add__(self, other):
        k = max(self.coeffs.shape[0], other.coeffs.shape[0])
        out = np.zeros((k,) + self.coeffs.shape[1:], dtype=complex)
        out[: self.coeffs.shape[0]] += self.coeffs
        out[: other.coeffs.shape[0]] += other.coeffs
        return MatPoly(out)

    def __sub__(self, other):
        return self + MatPoly(-other.coeffs, trim=False)

    def adjoint(self) -> "MatPoly":
        """Coefficientwise conjugate transpose, i.e. ``x -> P(conj x)^*``."""
        return MatPoly(np.conj(np.swapaxes(self.coeffs, 1, 2)), trim=False)

    def transpose(self) -> "MatPoly":
        return MatPoly(np.swapaxes(self.coeffs, 1, 2), trim=False)

    def entry(self, i: int, j: int) -> UniPoly:
        return UniPoly(self.coeffs[:, i, j])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __repr__(self):
        return f"MatPoly(degree={self.degree}, size={self.size})"


class TrigMatPoly:
    """Laurent matrix polynomial ``sum_{k=-m}^{m} Q_k z**k`` stored densely.

    ``coeffs[k + m]`` holds ``Q_k``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[0] % 2 == 0 or c.shape[1] != c.shape[2]:
            raise InputError("Laurent band must have shape (2m+1, d, d)")
        self.coeffs = _frozen(c.copy())

    @classmethod
    def from_factor(cls, P: MatPoly) -> "TrigMatPoly":
        """``P(z) P(z)^*`` on the unit circle."""
        m = P.degree
        d = P.size
        out = np.zeros((2 * m + 1, d, d), dtype=complex)
        for k in range(m + 1):
            for l in range(m + 1):
                out[k - l + m] += P.coeffs[k] @ P.coeffs[l].conj().T
        return cls(out)

    @property
    def band(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def size(self) -> int:
        return self.coeffs.shape[1]

    def coeff(self, k: int) -> np.ndarray:
        return self.coeffs[k + self.band]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        m = self.band
        powers = z[..., None] ** np.arange(-m, m + 1)
        return np.einsum("...k,kij->...ij", powers, self.coeffs)

    def hermitian_defect(self) -> float:
        flip = np.conj(np.swapaxes(self.coeffs[::-1], 1, 2))
        return float(np.max(np.abs(self.coeffs - flip)))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def min_eig_on_circle(self, grid: int = 512):
        """Minimum eigenvalue over ``grid`` circle points, with its angle."""
        theta = 2 * np.pi * np.arange(grid) / grid
        vals = self(np.exp(1j * theta))
        vals = 0.5 * (vals + np.conj(np.swapaxes(vals, -1, -2)))
        mins = np.linalg.eigvalsh(vals)[:, 0]
        k = int(np.argmin(mins))
        return float(mins[k]), float(theta[k]), mins


# ---------------------------------------------------- structured matrices

def companion(u) -> np.ndarray:
    """Companion matrix with first column ``-u_k/u_0`` and unit superdiagonal.

    Satisfies ``det(I - z C) = u(z)/u(0)``.
    """
    c = u.coeffs if isinstance(u, UniPoly) else _trim_tail(u)
    if c[0] == 0:
        raise ZeroConstantTerm("companion matrix needs u(0) != 0")
    n = c.size - 1
    C = np.zeros((n, n), dtype=complex)
    if n:
        C[:, 0] = -c[1:] / c[0]
        C[np.arange(n - 1), np.arange(1, n)] = 1.0
    return C


def toeplitz_pair(coeffs):
    """Constant triangular Toeplitz matrices of a univariate polynomial.

    ``A[i, j] = c_{i-j}`` (lower) and ``B[i, j] = c_{n-(j-i)}`` (upper).
    """
    c = np.asarray(coeffs, dtype=complex)
    n = c.size - 1
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if j <= i:
                A[i, j] = c[i - j]
            else:
                B[i, j] = c[n - (j - i)]
        B[i, i] = c[n]
    return A, B


def toeplitz_AB(p: BiPoly):
    """Triangular Toeplitz matrix polynomials in ``z1`` built from the z2-slices."""
    n1, n2 = p.bidegree
    if n2 < 1:
        raise InputError("toeplitz_AB needs n2 >= 1")
    A = np.zeros((n1 + 1, n2, n2), dtype=complex)
    B = np.zeros((n1 + 1, n2, n2), dtype=complex)
    for k in range(n1 + 1):
        A[k], B[k] = toeplitz_pair(p.coeffs[k])
    return MatPoly(A, trim=False), MatPoly(B, trim=False)


def trig_bezoutian(p: BiPoly) -> TrigMatPoly:
    """``Q(z1) = A(z1) A(z1)^* - B(z1)^* B(z1)`` on the unit circle."""
    n1 = p.bidegree[0]
    A, B = toeplitz_AB(p)
    d = A.size
    out = np.zeros((2 * n1 + 1, d, d), dtype=complex)
    for k in range(n1 + 1):
        for l in range(n1 + 1):
            out[k - l + n1] += (A.coeffs[k] @ A.coeffs[l].conj().T
                                - B.coeffs[l].conj().T @ B.coeffs[k])
    return TrigMatPoly(out)


def companion_series(p: BiPoly, order: int | None = None) -> np.ndarray:
    """Taylor coefficients of the z1-dependent companion matrix.

    Returns an array of shape ``(order + 1, n2, n2)``; its first column holds
    the series of ``-p_j(z1)/p_0(z1)`` and the superdiagonal of the constant
    term is one.
    """
    n1, n2 = p.bidegree
    if n2 < 1:
        raise InputError("companion_series needs n2 >= 1")
    if p.constant == 0:
        raise ZeroConstantTerm("p(0, 0) = 0")
    if order is None:
        order = 2 * (n1 + n2) + 4
    c = p.coeffs
    out = np.zeros((order + 1, n2, n2), dtype=complex)
    for j in range(1, n2 + 1):
        out[:, j - 1, 0] = series_divide(-c[:, j], c[:, 0], order)
    out[0, np.arange(n2 - 1), np.arange(1, n2)] = 1.0
    return out


def _resultant_matrices(p: BiPoly, z):
    n1, n2 = p.bidegree
    A, B = toeplitz_AB(p)
    z = np.asarray(z, dtype=complex)
    pw = z[:, None] ** np.arange(n1 + 1)
    rpw = z[:, None] ** (n1 - np.arange(n1 + 1))
    Az = np.einsum("pk,kij->pij", pw, A.coeffs)
    Bz = np.einsum("pk,kij->pij", pw, B.coeffs)
    Bs = np.einsum("pk,kij->pij", rpw, np.conj(np.swapaxes(B.coeffs, 1, 2)))
    As = np.einsum("pk,kij->pij", rpw, np.conj(np.swapaxes(A.coeffs, 1, 2)))
    top = np.concatenate([Az, Bs], axis=2)
    bot = np.concatenate([Bz, As], axis=2)
    return np.concatenate([top, bot], axis=1)


def resultant_scale(p: BiPoly) -> float:
    """Hadamard bound of the cleared resultant matrix over circle samples."""
    n1, n2 = p.bidegree
    N = 2 * n1 * n2 + 1
    z = np.exp(2j * np.pi * np.arange(N) / N)
    R = _resultant_matrices(p, z)
    return float(np.max(np.prod(np.linalg.norm(R, axis=1), axis=1)))


def resultant_det(p: BiPoly, zero_tol: float = 1e-12) -> UniPoly:
    """``det R(z1) * z1**(n1 n2)`` as a polynomial in ``z1``.

    Coefficients below ``zero_tol`` times the Hadamard bound of the matrix
    are set to zero, so a resultant that vanishes identically comes back as
    the zero polynomial.
    """
    n1, n2 = p.bidegree
    if n2 < 1:
        raise InputError("resultant_det needs n2 >= 1")
    N = 2 * n1 * n2 + 1
    z = np.exp(2j * np.pi * np.arange(N) / N)
    R = _resultant_matrices(p, z)
    vals = _kernels.det_batch(R)
    coeffs = np.fft.fft(vals) / N
    scale = float(np.max(np.prod(np.linalg.norm(R, axis=1), axis=1)))
    coeffs[np.abs(coeffs) <= zero_tol * scale] = 0.0
    return UniPoly(coeffs)
