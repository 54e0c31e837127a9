import numpy as np
import pytest

from detrep.errors import InputError, NotPositiveDefinite, NotPositiveDefiniteOnLine
from detrep.poly import MatPoly, TrigMatPoly
from detrep.specfact import (column_degrees, factor_residual, matpoly_zeros,
                             reversed_zero_moduli, specfact_circle, specfact_line)

CIRCLE = np.exp(2j * np.pi * np.arange(256) / 256)


def random_outer(rng, d, deg, margin=0.9):
    """C0 (I - z T1)...(I - z Tdeg) with spectral radii < 1: det zeros outside the disk."""
    P = MatPoly(rng.normal(size=(1, d, d)) + 1j * rng.normal(size=(1, d, d)))
    for _ in range(deg):
        T = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        T *= margin * rng.uniform(0.2, 1.0) / np.max(np.abs(np.linalg.eigvals(T)))
        P = P * MatPoly(np.stack([np.eye(d), -T]))
    return P


def circle_gap(Q, P):
    vals = P(CIRCLE)
    return float(np.max(np.abs(Q(CIRCLE) - vals @ np.conj(np.swapaxes(vals, -1, -2)))))


def det_zeros_brute(P):
    """Zeros of det P(z) from the dense scalar polynomial (interpolation oracle)."""
    d, m = P.size, P.degree
    N = d * m + 1
    z = np.exp(2j * np.pi * np.arange(N) / N)
    c = np.fft.fft(np.linalg.det(P(z))) / N
    c[np.abs(c) < 1e-12 * np.max(np.abs(c))] = 0
    return np.roots(np.trim_zeros(c, "b")[::-1])


# ----------------------------------------------------------------- circle

def test_scalar_closed_form():
    a, b = 0.3, 0.5
    Q = TrigMatPoly(np.array([a, 1 + a * a - b * b, a]).reshape(3, 1, 1))
    P = specfact_circle(Q)
    # |gamma|^2 (1 + |delta|^2) = 1 + a^2 - b^2 and |gamma|^2 delta = a
    delta = min(np.roots([a, -(1 + a * a - b * b), a]), key=abs)
    g0, g1 = P.coeffs[:, 0, 0]
    assert abs(g1 / g0 - delta) <= 1e-10
    assert abs(g1 * np.conj(g0) - a) <= 1e-10
    assert abs(delta) < 1


def test_identity_symbol():
    P = specfact_circle(TrigMatPoly(np.eye(3)[None]))
    assert np.allclose(P.coeffs[0] @ P.coeffs[0].conj().T, np.eye(3), atol=1e-12)


def test_round_trip_degree2_3x3():
    rng = np.random.default_rng(12)
    P0 = random_outer(rng, 3, 2)
    Q = TrigMatPoly.from_factor(P0)
    P = specfact_circle(Q)
    assert circle_gap(Q, P) <= 1e-8 * max(1, Q.max_abs())


@pytest.mark.parametrize("method", ["riccati", "bauer"])
def test_round_trip_fifty(method):
    rng = np.random.default_rng(13)
    count = 50 if method == "riccati" else 10
    for _ in range(count):
        d = int(rng.integers(1, 4))
        deg = int(rng.integers(1, 3))
        P0 = random_outer(rng, d, deg, margin=0.8)
        Q = TrigMatPoly.from_factor(P0)
        P = specfact_circle(Q, method=method)
        assert circle_gap(Q, P) <= 1e-8 * max(1, Q.max_abs())
        U = np.linalg.solve(P0.coeffs[0], P.coeffs[0])
        assert np.max(np.abs(U @ U.conj().T - np.eye(d))) <= 1e-6
        z = det_zeros_brute(P)
        assert z.size == 0 or np.min(np.abs(z)) > 1


def test_factor_gauge_positive():
    rng = np.random.default_rng(14)
    P = specfact_circle(TrigMatPoly.from_factor(random_outer(rng, 2, 1)))
    h = P.coeffs[0]
    assert np.allclose(h, h.conj().T, atol=1e-10)
    assert np.linalg.eigvalsh(h)[0] > 0


def test_reversed_zero_moduli_matches_brute():
    rng = np.random.default_rng(15)
    P = random_outer(rng, 2, 2)
    ours = np.sort(1 / reversed_zero_moduli(P))
    ref = np.sort(np.abs(det_zeros_brute(P)))
    assert np.allclose(ours, ref, rtol=1e-8)


def test_circle_not_positive_definite():
    Q = TrigMatPoly(np.array([1.0, 2.0, 1.0]).reshape(3, 1, 1))
    with pytest.raises(NotPositiveDefinite) as info:
        specfact_circle(Q)
    assert abs(info.value.witness + 1) < 0.05


def test_circle_non_hermitian_band():
    with pytest.raises(InputError):
        specfact_circle(TrigMatPoly(np.array([0.5, 2.0, 0.1]).reshape(3, 1, 1)))


def test_factor_residual_zero_for_exact():
    rng = np.random.default_rng(16)
    P0 = random_outer(rng, 2, 1)
    assert factor_residual(TrigMatPoly.from_factor(P0), P0) <= 1e-12


# ------------------------------------------------------------------- line

def test_line_reference_example():
    H = MatPoly(np.array([[[2, -4], [-4, 18]], [[0, -10], [-10, 84]], [[0, 0], [0, 102]]],
                         dtype=complex))
    Q = specfact_line(H)
    s2, s10 = np.sqrt(2), np.sqrt(10)

    def reference_Q(y):
        return np.array([[s2, -2 * s2 - 5 * s2 * y], [0, s10 * (1 + y * (11 + 3j) / 5)]])

    x = np.linspace(-3, 3, 41)
    for t in x:
        Qt, Rt = Q(t), reference_Q(t)
        assert np.allclose(Qt.conj().T @ Qt, Rt.conj().T @ Rt, atol=1e-9)
        assert abs(abs(np.linalg.det(Qt)) - abs(np.linalg.det(Rt))) <= 1e-9
    assert np.allclose((Q.adjoint() * Q).coeffs, H.coeffs, atol=1e-8)
    zs = matpoly_zeros(Q)
    # mirror image of the displayed factor's determinant zero
    assert zs.size == 1 and abs(zs[0] - np.conj(-5 / (11 + 3j))) <= 1e-9


def test_line_identity():
    Q = specfact_line(MatPoly(np.eye(2)[None]))
    assert np.allclose(Q.coeffs[0].conj().T @ Q.coeffs[0], np.eye(2), atol=1e-12)


def test_line_scalar_lower_zero():
    H = MatPoly(np.stack([np.eye(2), np.zeros((2, 2)), np.eye(2)]).astype(complex))
    Q = specfact_line(H)
    assert np.allclose((Q.adjoint() * Q).coeffs, H.coeffs, atol=1e-10)
    zs = matpoly_zeros(Q)
    assert np.allclose(zs, -1j, atol=1e-8)


def random_line_factor(rng, d):
    L = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    ev = rng.normal(size=d) - 1j * rng.uniform(0.2, 2.0, d)
    V = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    T = V @ np.diag(ev) @ np.linalg.inv(V)
    return MatPoly(np.stack([-L @ T, L])), ev


def test_line_round_trip_fifty():
    rng = np.random.default_rng(17)
    for _ in range(50):
        d = int(rng.integers(1, 4))
        Q0, ev = random_line_factor(rng, d)
        H = Q0.adjoint() * Q0
        Q = specfact_line(H)
        assert np.max(np.abs((Q.adjoint() * Q).coeffs - H.coeffs)) <= 1e-8 * H.max_abs()
        zs = matpoly_zeros(Q)
        assert np.all(zs.imag < 0)
        # same determinant zeros as the constructed factor
        for e in ev:
            assert np.min(np.abs(zs - e)) <= 1e-6 * max(1, abs(e))


def test_line_column_degrees():
    H = MatPoly(np.array([[[2, -4], [-4, 18]], [[0, -10], [-10, 84]], [[0, 0], [0, 102]]],
                         dtype=complex))
    assert list(column_degrees(H)) == [0, 1]


def test_line_not_positive():
    H = MatPoly(np.array([0, 0, 1.0]).reshape(3, 1, 1))
    with pytest.raises(NotPositiveDefiniteOnLine) as info:
        specfact_line(H)
    assert abs(info.value.witness) < 0.05


def test_line_negative_leading():
    with pytest.raises(NotPositiveDefiniteOnLine):
        specfact_line(MatPoly(np.array([1.0, 0, -1.0]).reshape(3, 1, 1)))


def test_line_non_hermitian():
    with pytest.raises(InputError):
        specfact_line(MatPoly(np.array([[[1, 1], [0, 1]]], dtype=complex)))


def test_matpoly_zeros_against_determinant():
    rng = np.random.default_rng(18)
    P = random_outer(rng, 3, 2)
    ours = np.sort_complex(matpoly_zeros(P))
    ref = np.sort_complex(det_zeros_brute(P))
    assert ours.size == ref.size
    for r in ref:
        assert np.min(np.abs(ours - r)) <= 1e-7 * max(1, abs(r))
