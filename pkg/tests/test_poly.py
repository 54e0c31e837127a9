import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import direct_eval, linear_example, self_reversive_example
from detrep.errors import ZeroConstantTerm
from detrep.poly import (BiPoly, MatPoly, TrigMatPoly, UniPoly, coeffs_in_z2,
                         companion, companion_series, eval_bi, polyroots,
                         resultant_det, reverse, series_divide, toeplitz_AB,
                         trig_bezoutian)

complex_coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def grids(max_deg=3):
    return st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)).flatmap(
        lambda s: st.lists(complex_coeff, min_size=(s[0] + 1) * (s[1] + 1),
                           max_size=(s[0] + 1) * (s[1] + 1)).map(
            lambda v: np.array(v).reshape(s[0] + 1, s[1] + 1)))


# ------------------------------------------------------------------- eval_bi

def test_eval_constant_term():
    assert eval_bi(linear_example(), 0, 0) == 1


def test_eval_self_reversive_example_at_one():
    # 1 - 1 - 1/2 - 1/2 + 1 = 0 by direct arithmetic
    p = self_reversive_example()
    assert abs(eval_bi(p, 1, 1) - direct_eval(p.coeffs, 1, 1)) < 1e-15
    assert abs(eval_bi(p, 1, 1)) < 1e-15


def test_eval_real_zero_example():
    # p = 1 + 10y + 4x - y^2 - 2xy - x^2 with z1 = x, z2 = y
    p = BiPoly.from_terms({(0, 0): 1, (0, 1): 10, (1, 0): 4, (0, 2): -1, (1, 1): -2,
                           (2, 0): -1})
    assert eval_bi(p, 1, 0) == pytest.approx(4)


@settings(max_examples=60, deadline=None)
@given(grids(), st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_horner_matches_power_sum(c, z1, z2):
    p = BiPoly(c, trim=False)
    ref = direct_eval(c, z1, z2)
    scale = np.sum(np.abs(c)) * max(1, abs(z1)) ** c.shape[0] * max(1, abs(z2)) ** c.shape[1]
    assert abs(p(z1, z2) - ref) <= 1e-12 * max(1.0, scale)


def test_univariate_horner_matches_power_sum():
    rng = np.random.default_rng(0)
    c = rng.normal(size=7) + 1j * rng.normal(size=7)
    z = 2 * np.exp(1j * np.linspace(0, 6, 11))
    ref = sum(ck * z ** k for k, ck in enumerate(c))
    assert np.max(np.abs(UniPoly(c)(z) - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_broadcast_evaluation():
    p = linear_example()
    z = np.linspace(-1, 1, 5)
    out = p(z[:, None], z[None, :])
    assert out.shape == (5, 5)
    assert out[1, 3] == pytest.approx(1 + 0.3 * z[1] + 0.5 * z[3])


# ----------------------------------------------------------------- containers

def test_trim_sets_bidegree():
    p = BiPoly([[1, 2, 1e-16], [0, 0, 0]])
    assert p.bidegree == (0, 1)
    assert BiPoly([[1, 0], [0, 1e-13]]).bidegree == (0, 0)


def test_bidegree_and_constant():
    p = self_reversive_example()
    assert p.bidegree == (2, 2)
    assert p.constant == 1
    assert p.corner == 1


def test_unipoly_degree_and_roots():
    u = UniPoly([2, -3, 1, 0, 0])
    assert u.degree == 2
    assert np.allclose(np.sort(u.roots().real), [1, 2])


def test_polyroots_zero_at_origin():
    r = polyroots([0, 0, 1, 1])
    assert np.sum(np.abs(r) < 1e-15) == 2
    assert np.any(np.abs(r + 1) < 1e-14)


def test_series_divide_geometric():
    out = series_divide([1], [1, -0.5], 5)
    assert np.allclose(out, 0.5 ** np.arange(6))
    with pytest.raises(ZeroConstantTerm):
        series_divide([1], [0, 1], 3)


def test_arithmetic():
    p = linear_example()
    q = BiPoly.from_terms({(0, 0): 1, (1, 0): 0.2})
    prod = p * q
    z1, z2 = 0.3 - 0.2j, -0.7j
    assert prod(z1, z2) == pytest.approx(p(z1, z2) * q(z1, z2))
    assert (p + q)(z1, z2) == pytest.approx(p(z1, z2) + q(z1, z2))
    assert (p - p).is_constant


def test_scaled_and_swapped():
    p = self_reversive_example()
    z1, z2 = 0.4, -0.3j
    assert p.scaled(2)(z1, z2) == pytest.approx(p(2 * z1, 2 * z2))
    assert p.swapped()(z1, z2) == pytest.approx(p(z2, z1))


def test_matpoly_evaluation_and_ops():
    rng = np.random.default_rng(1)
    A = MatPoly(rng.normal(size=(3, 2, 2)))
    B = MatPoly(rng.normal(size=(2, 2, 2)))
    x = 0.7
    assert np.allclose((A * B)(x), A(x) @ B(x))
    assert np.allclose((A + B)(x), A(x) + B(x))
    assert np.allclose(A.adjoint()(x), A(x).conj().T)
    assert A.degree == 2 and A.size == 2


def test_trig_matpoly_hermitian_symmetry():
    rng = np.random.default_rng(2)
    P = MatPoly(rng.normal(size=(3, 3, 3)) + 1j * rng.normal(size=(3, 3, 3)))
    Q = TrigMatPoly.from_factor(P)
    assert Q.band == 2 and Q.size == 3
    assert Q.hermitian_defect() <= 1e-12
    for k in range(-2, 3):
        assert np.allclose(Q.coeff(-k), Q.coeff(k).conj().T, atol=1e-12)
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
    vals = Q(z)
    assert np.max(np.abs(vals - np.conj(np.swapaxes(vals, -1, -2)))) <= 1e-10
    assert np.allclose(vals[5], P(z[5]) @ P(z[5]).conj().T)


# ------------------------------------------------------------------- reverse

def test_reverse_two_term_flip():
    p = BiPoly.from_terms({(0, 0): 1, (1, 1): -1})
    r = reverse(p)
    assert np.allclose(r.coeffs, [[-1, 0], [0, 1]])


def test_reverse_linear_symbolic():
    # oracle: sympy expansion of z1 z2 conj(p(1/conj z1, 1/conj z2)) for real a, b
    a, b = 0.3, 0.5
    z1, z2 = sp.symbols("z1 z2")
    expr = sp.expand(z1 * z2 * (1 + a / z1 + b / z2))
    poly = sp.Poly(expr, z1, z2)
    r = reverse(linear_example(a, b))
    for (i, j), v in poly.terms():
        assert r.coeffs[i, j] == pytest.approx(float(v))
    assert r.coeffs[0, 0] == 0


def test_reverse_self_reversive_example():
    p = self_reversive_example()
    assert reverse(p).allclose(p, 1e-15)


@settings(max_examples=40, deadline=None)
@given(grids())
def test_reverse_involution(c):
    c = c.copy()
    c[0, 0] = 1.0
    c[-1, -1] = 0.5 + 0.5j
    p = BiPoly(c, trim=False)
    assert np.allclose(p.reverse().reverse().coeffs, p.coeffs)


def test_reverse_pointwise_identity():
    rng = np.random.default_rng(3)
    c = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    p = BiPoly(c)
    z1, z2 = 0.6 + 0.3j, -0.2 + 0.9j
    expected = z1 ** 2 * z2 * np.conj(p(1 / np.conj(z1), 1 / np.conj(z2)))
    assert p.reverse()(z1, z2) == pytest.approx(expected)


# -------------------------------------------------------------- coeffs_in_z2

def test_coeffs_in_z2_linear():
    p0, p1 = coeffs_in_z2(linear_example())
    assert np.allclose(p0.coeffs, [1, 0.3]) and np.allclose(p1.coeffs, [0.5])


def test_coeffs_in_z2_self_reversive():
    out = coeffs_in_z2(self_reversive_example())
    assert np.allclose(out[0].coeffs, [1, 0, -0.5])
    assert np.allclose(out[1].coeffs, [0, -1])
    assert np.allclose(out[2].coeffs, [-0.5, 0, 1])


def test_coeffs_in_z2_no_z2():
    out = coeffs_in_z2(BiPoly([[1], [1]]))
    assert len(out) == 1 and np.allclose(out[0].coeffs, [1, 1])


# --------------------------------------------------------- companion_series

def test_companion_series_linear_geometric():
    a, b = 0.3, 0.5
    s = companion_series(linear_example(a, b), 2)
    assert np.allclose(s[:, 0, 0], [-b, a * b, -a * a * b])


def test_companion_series_constant_symbol():
    # p = 1 + c z2^2: the companion of t^2 + c
    p = BiPoly.from_terms({(0, 0): 1, (0, 2): 0.7})
    s = companion_series(p, 3)
    assert np.allclose(s[0], companion(UniPoly([1, 0, 0.7])))
    assert np.allclose(s[1:], 0)


def test_companion_series_zero_constant():
    with pytest.raises(ZeroConstantTerm):
        companion_series(BiPoly([[0, 1], [1, 0]]), 3)


def test_companion_series_sums_to_symbol():
    rng = np.random.default_rng(4)
    c = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    c[0, 0] = 1.0
    c[1:, 0] *= 0.2
    p = BiPoly(c)
    s = companion_series(p, 60)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    for z in (0.5, -0.3j, 0.25 + 0.25j):
        pj = [u(z) for u in coeffs_in_z2(p)]
        series = sum(s[k] * z ** k for k in range(s.shape[0]))
        ref = companion(UniPoly(pj))
        assert np.max(np.abs(series @ v - ref @ v)) <= 1e-10


# --------------------------------------------------------------- toeplitz_AB

def test_toeplitz_linear():
    A, B = toeplitz_AB(linear_example())
    assert np.allclose(A.coeffs[:, 0, 0], [1, 0.3])
    assert np.allclose(B.coeffs[:, 0, 0], [0.5, 0])


def test_toeplitz_univariate_schur_cohn_display():
    # n1 = 0: A lower triangular Toeplitz of p0..p_{n-1}, B upper of p_n..p_1
    u = [1, 0.2, -0.3, 0.1]
    A, B = toeplitz_AB(BiPoly([u]))
    A0, B0 = A.coeffs[0], B.coeffs[0]
    assert np.allclose(A0, [[1, 0, 0], [0.2, 1, 0], [-0.3, 0.2, 1]])
    assert np.allclose(B0, [[0.1, -0.3, 0.2], [0, 0.1, -0.3], [0, 0, 0.1]])


def test_toeplitz_index_check():
    rng = np.random.default_rng(5)
    c = rng.normal(size=(2, 3))
    A, B = toeplitz_AB(BiPoly(c))
    p1 = UniPoly(c[:, 1])
    z = 0.37
    assert A(z)[1, 0] == pytest.approx(p1(z))
    assert A(z)[0, 1] == 0
    assert B(z)[0, 1] == pytest.approx(p1(z))
    assert B(z)[0, 0] == pytest.approx(UniPoly(c[:, 2])(z))


# ----------------------------------------------------------- trig_bezoutian

def test_bezoutian_linear_closed_form():
    a, b = 0.3, 0.5
    Q = trig_bezoutian(linear_example(a, b))
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 17))
    ref = (1 + a * z) * (1 + a / z) - b ** 2
    assert np.allclose(Q(z)[:, 0, 0], ref, atol=1e-14)


def test_bezoutian_univariate_stable_is_pd():
    Q = trig_bezoutian(BiPoly([[1, -0.5, 0.1]]))
    assert Q.band == 0
    assert np.linalg.eigvalsh(Q.coeff(0))[0] > 0


def test_bezoutian_self_reversive_vanishes():
    Q = trig_bezoutian(self_reversive_example())
    assert Q.max_abs() <= 1e-14


def test_bezoutian_footnote_identity():
    rng = np.random.default_rng(6)
    c = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    p = BiPoly(c)
    rev = p.reverse()
    Q = trig_bezoutian(p)
    n2 = 2
    for _ in range(200):
        z1 = np.exp(2j * np.pi * rng.uniform())
        z2 = 0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        w1 = 1 / np.conj(z1)
        lhs = (p(z1, z2) * np.conj(p(w1, z2)) - rev(z1, z2) * np.conj(rev(w1, z2)))
        lhs /= 1 - abs(z2) ** 2
        v = z2 ** np.arange(n2)
        rhs = v @ Q(z1) @ v.conj()
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs))


def test_bezoutian_pd_for_stable():
    Q = trig_bezoutian(linear_example())
    assert Q.min_eig_on_circle(64)[0] > 0


# ------------------------------------------------------------ resultant_det

def _sympy_resultant_roots(p):
    z1, z2 = sp.symbols("z1 z2")
    n1, n2 = p.bidegree
    rev = p.reverse()
    P = sum(sp.nsimplify(complex(p.coeffs[i, j]).real, rational=True) * z1 ** i * z2 ** j
            for i in range(n1 + 1) for j in range(n2 + 1))
    R = sum(sp.nsimplify(complex(rev.coeffs[i, j]).real, rational=True) * z1 ** i * z2 ** j
            for i in range(n1 + 1) for j in range(n2 + 1))
    res = sp.Poly(sp.resultant(P, R, z2), z1)
    return np.array([complex(r) for r in sp.Poly(res).nroots()])


def test_resultant_linear_two_by_two():
    # Res_{z2}(1 + a z1 + b z2, b z1 + (z1 + a) z2) = (1 + a z1)(z1 + a) - b^2 z1
    a, b = 0.3, 0.5
    r = resultant_det(linear_example(a, b))
    ref = np.array([a, 1 + a * a - b * b, a])
    k = np.argmax(np.abs(r.coeffs))
    assert np.allclose(r.coeffs / r.coeffs[k], ref / ref[k])
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 100))
    assert np.min(np.abs(r(z))) > 0.05


def test_resultant_roots_match_sympy():
    p = BiPoly.from_terms({(0, 0): 1, (1, 0): 0.25, (0, 1): -0.5, (1, 1): 0.125,
                           (0, 2): 0.25, (2, 1): 0.125})
    ours = resultant_det(p).roots()
    ours = ours[np.abs(ours) > 1e-9]
    ref = _sympy_resultant_roots(p)
    ref = ref[np.abs(ref) > 1e-9]
    assert ours.size == ref.size
    for r in ref:
        assert np.min(np.abs(ours - r)) <= 1e-6 * max(1, abs(r))


def test_resultant_scattering_schur_nonzero():
    assert not resultant_det(linear_example()).is_zero


def test_resultant_self_reversive_zero():
    assert resultant_det(self_reversive_example()).is_zero
