import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (linear_example, poly_of, radius_oracle, random_contraction,
                      self_reversive_example)
from detrep.errors import (DegenerateResultant, InputError, NotStable,
                           ZeroConstantTerm)
from detrep.poly import BiPoly, UniPoly
from detrep.stability import (INCONCLUSIVE, SEMI_STABLE, STABLE, UNSTABLE,
                              intersecting_zeros, knese_check, schur_cohn,
                              scattering_schur_test, self_reversive_test,
                              semistability, stability_radius)


def grid_min_abs(p, r=1.0, m=200):
    """min |p| over a polar grid of the closed bidisk of radius r."""
    rad = r * np.linspace(0, 1, 21)
    ang = np.exp(2j * np.pi * np.arange(m) / m)
    z = (rad[:, None] * ang[None, :]).ravel()
    return float(np.min(np.abs(p(z[:, None], z[None, :]))))


# -------------------------------------------------------------- schur_cohn

def test_schur_cohn_stable_scalar():
    v = schur_cohn(UniPoly([1, -0.5]))
    assert v.status == STABLE and v.margin == pytest.approx(0.75)


def test_schur_cohn_boundary():
    assert schur_cohn(UniPoly([1, 1])).status == SEMI_STABLE


def test_schur_cohn_unstable():
    v = schur_cohn(UniPoly([1, -2]))
    assert v.status == UNSTABLE and v.margin == pytest.approx(-3)


def test_schur_cohn_zero_constant():
    with pytest.raises(ZeroConstantTerm):
        schur_cohn(UniPoly([0, 1]))


def test_schur_cohn_constant_is_stable():
    assert schur_cohn(UniPoly([2.0])).status == STABLE


def test_schur_cohn_agrees_with_roots():
    rng = np.random.default_rng(7)
    for _ in range(500):
        deg = int(rng.integers(1, 9))
        roots = rng.uniform(0.3, 2.5, deg) * np.exp(2j * np.pi * rng.uniform(size=deg))
        # keep roots away from the circle so the oracle is unambiguous
        roots = np.where(np.abs(np.abs(roots) - 1) < 0.02, roots * 1.1, roots)
        c = np.poly(roots)[::-1]
        c = c / c[0]
        oracle = bool(np.all(np.abs(roots) > 1))
        assert (schur_cohn(UniPoly(c)).status == STABLE) == oracle


# ------------------------------------------------------------ semistability

def test_semistability_linear_stable():
    p = linear_example()
    assert grid_min_abs(p) >= 0.2 - 1e-12
    v = semistability(p)
    assert v.status == STABLE and v.margin > 0


def test_semistability_torus_zero():
    assert semistability(BiPoly.from_terms({(0, 0): 1, (1, 1): -1})).status == SEMI_STABLE


def test_semistability_unstable_witness():
    p = BiPoly.from_terms({(0, 0): 1, (1, 1): -2})
    v = semistability(p)
    assert v.status == UNSTABLE
    z1, z2 = v.witness
    assert abs(z1) <= 1 + 1e-9 and abs(z2) <= 1 + 1e-9
    assert abs(p(z1, z2)) < 1e-8
    assert grid_min_abs(p) < 1e-2


def test_semistability_unstable_at_origin_slice():
    p = BiPoly.from_terms({(0, 0): 1, (1, 0): -3, (0, 1): 0.1})
    assert semistability(p).status == UNSTABLE


def test_semistability_self_reversive_example():
    assert semistability(self_reversive_example()).status == SEMI_STABLE


def test_semistability_zero_constant():
    with pytest.raises(ZeroConstantTerm):
        semistability(BiPoly([[0, 1]]))


def test_semistability_statuses_are_known():
    rng = np.random.default_rng(8)
    for _ in range(20):
        c = rng.normal(size=(3, 3)) * 0.3
        c[0, 0] = 1
        assert semistability(BiPoly(c)).status in (STABLE, SEMI_STABLE, UNSTABLE,
                                                   INCONCLUSIVE)


@pytest.mark.parametrize("n", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_contractive_never_unstable(n):
    rng = np.random.default_rng(sum(n))
    for k in range(6):
        K = random_contraction(rng, sum(n), norm=1.0 if k % 2 else 0.9)
        p = poly_of(K, n, seed=k)
        assert semistability(p).status != UNSTABLE


def test_products_of_torus_factors_semistable():
    rng = np.random.default_rng(9)
    for _ in range(5):
        p = BiPoly([[1]])
        for _ in range(int(rng.integers(1, 4))):
            t = rng.uniform(0, 2 * np.pi)
            p = p * BiPoly.from_terms({(0, 0): 1, (1, 1): -np.exp(1j * t)})
        assert semistability(p).status == SEMI_STABLE


# --------------------------------------------------------- stability_radius

def test_radius_linear():
    r = stability_radius(linear_example(), tol=1e-8)
    assert abs(r.s - 1.25) <= 2e-8
    assert abs(r.s - radius_oracle(linear_example())) <= 1e-6


def test_radius_torus_factor():
    r = stability_radius(BiPoly.from_terms({(0, 0): 1, (1, 1): -1}), tol=1e-8)
    assert abs(r.s - 1) <= 2e-8


def test_radius_quarter_sum():
    p = BiPoly.from_terms({(0, 0): 1, (1, 0): -0.25, (0, 1): -0.25})
    r = stability_radius(p, tol=1e-8)
    assert abs(r.s - 2) <= 2e-8
    assert abs(r.s - radius_oracle(p)) <= 1e-6


def test_radius_bracket_invariant():
    p = linear_example()
    r = stability_radius(p, tol=1e-6)
    assert semistability(p.scaled(r.s * (1 - 1e-4))).status != UNSTABLE
    assert semistability(p.scaled(r.s * (1 + 1e-4))).status == UNSTABLE


def test_radius_constant_rejected():
    with pytest.raises(InputError):
        stability_radius(BiPoly([[1.0]]))


@pytest.mark.parametrize("beta", [0.5, 2.0])
def test_radius_scaling_covariance(beta):
    tol = 1e-8
    p = BiPoly.from_terms({(0, 0): 1, (1, 0): 0.2, (0, 1): -0.3, (1, 1): 0.25, (0, 2): 0.1})
    s = stability_radius(p, tol=tol).s
    sb = stability_radius(p.scaled(beta), tol=tol).s
    assert abs(sb - s / beta) <= 2 * tol * max(1, s / beta)


def test_radius_random_against_oracle():
    rng = np.random.default_rng(10)
    for _ in range(5):
        c = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        c[0, 0] = 1
        p = BiPoly(c)
        assert abs(stability_radius(p, tol=1e-8).s - radius_oracle(p)) <= 1e-4


# ------------------------------------------------------ self_reversive_test

def test_self_reversive_example():
    res = self_reversive_test(self_reversive_example())
    assert res.flag and res.alpha == pytest.approx(1) and res.corner_unimodular


def test_self_reversive_torus_factor():
    res = self_reversive_test(BiPoly.from_terms({(0, 0): 1, (1, 1): -1}))
    assert res.flag and res.alpha == pytest.approx(-1)


def test_not_self_reversive():
    res = self_reversive_test(linear_example())
    assert not res.flag and not res.corner_unimodular


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 2 * math.pi), min_size=1, max_size=3))
def test_self_reversive_implies_unimodular_corner(thetas):
    p = BiPoly([[1]])
    for t in thetas:
        p = p * BiPoly.from_terms({(0, 0): 1, (1, 1): -np.exp(1j * t)})
    res = self_reversive_test(p)
    assert res.flag
    assert res.corner_unimodular
    assert abs(abs(res.alpha) - 1) <= 1e-12


# ----------------------------------------------------- scattering Schur test

def test_scattering_schur_linear():
    assert scattering_schur_test(linear_example())


def test_scattering_schur_torus_factor():
    assert not scattering_schur_test(BiPoly.from_terms({(0, 0): 1, (1, 1): -1}))


def test_stable_irreducible_random_is_scattering_schur():
    rng = np.random.default_rng(11)
    for _ in range(10):
        c = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        c[0, 0] = 0
        c *= 0.9 / np.sum(np.abs(c))
        c[0, 0] = 1
        p = BiPoly(c)
        assert semistability(p).status == STABLE
        assert scattering_schur_test(p)


# -------------------------------------------------------- intersecting zeros

def test_intersecting_zeros_self_reversive_example():
    p = self_reversive_example()
    r2 = math.sqrt(2)
    ref = [(0, r2), (r2, 0), (0.5, -1 + 3 / r2), (-1 + 3 / r2, 0.5)]
    got = intersecting_zeros(p, z1_samples=[z for z, _ in ref])
    for a, b in ref:
        assert min(abs(x - a) + abs(y - b) for x, y in got) < 1e-8


def test_intersecting_zeros_degenerate():
    with pytest.raises(DegenerateResultant):
        intersecting_zeros(self_reversive_example())


def test_intersecting_zeros_linear_closed_form():
    # eliminating z2 = -(1 + a z1)/b from the reverse gives a z1^2 + (1 + a^2 - b^2) z1 + a
    a, b = 0.3, 0.5
    pts = intersecting_zeros(linear_example(a, b))
    ref = [(z1, -(1 + a * z1) / b) for z1 in np.roots([a, 1 + a * a - b * b, a])]
    assert len(pts) == 2
    for z1, z2 in ref:
        assert min(abs(x - z1) + abs(y - z2) for x, y in pts) < 1e-9


def test_intersecting_zeros_empty():
    # constant nonzero resultant: p and its reverse share no zero
    p = BiPoly([[1, 0.5, 0.2]])
    assert intersecting_zeros(p) == []


def test_intersecting_zeros_product_with_torus_factor():
    # (1 + 0.3 z1 + 0.5 z2)(1 - z1 z2): the torus curve is shared with the reverse
    p = linear_example() * BiPoly.from_terms({(0, 0): 1, (1, 1): -1})
    with pytest.raises(DegenerateResultant):
        intersecting_zeros(p)


def test_intersecting_zeros_common_zero():
    # p = (1 - z1 z2) + 0.1 z1 (1 - z2)^2 ... a generic sample with finitely many
    # common zeros; every returned pair must annihilate p and its reverse
    p = BiPoly.from_terms({(0, 0): 1, (1, 1): -0.8, (1, 0): 0.1, (0, 1): 0.2,
                           (1, 2): 0.05})
    rev = p.reverse()
    pts = intersecting_zeros(p)
    assert pts
    for z1, z2 in pts:
        assert abs(p(z1, z2)) < 1e-7 and abs(rev(z1, z2)) < 1e-7


def test_intersecting_zeros_symmetric():
    p = BiPoly.from_terms({(0, 0): 1, (1, 0): 0.2, (0, 1): 0.2, (1, 1): -0.6,
                           (2, 1): 0.05, (1, 2): 0.05})
    pts = intersecting_zeros(p)
    assert pts
    for z1, z2 in pts:
        assert min(abs(x - z2) + abs(y - z1) for x, y in pts) < 1e-6


# ---------------------------------------------------------------- knese

def _torus_mean_inverse_square_linear(a, b, terms=200):
    # 1/(1 + a z1 + b z2) = sum binom(i+j, i) (-a z1)^i (-b z2)^j
    total = 0.0
    for i in range(terms):
        for j in range(terms - i):
            total += (math.comb(i + j, i) * a ** i * b ** j) ** 2
    return total


def test_knese_linear():
    a, b = 0.3, 0.5
    res = knese_check(linear_example(a, b))
    c_ref = 1.0 / (math.pi * _torus_mean_inverse_square_linear(a, b))
    assert res.holds
    assert res.c == pytest.approx(c_ref, rel=1e-9)
    assert 0 < res.c <= 4 * math.pi * (1 + a + b) ** 2


def test_knese_diagonal():
    p = BiPoly.from_terms({(0, 0): 1, (1, 1): -0.9})
    res = knese_check(p)
    assert res.holds
    assert res.c == pytest.approx((1 - 0.81) / math.pi, rel=1e-9)


def test_knese_constant_rejected():
    with pytest.raises(InputError):
        knese_check(BiPoly([[1.0]]))


def test_knese_requires_stable():
    with pytest.raises(NotStable):
        knese_check(BiPoly.from_terms({(0, 0): 1, (1, 1): -1}))
