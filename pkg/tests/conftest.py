import numpy as np
import pytest

from detrep import _kernels
from detrep.poly import BiPoly
from detrep.realzero import RealBiPoly

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    # keep numba compilation out of the timed sections
    _kernels.warmup()


def linear_example(a=0.3, b=0.5):
    return BiPoly.from_terms({(0, 0): 1, (1, 0): a, (0, 1): b})


def self_reversive_example():
    return BiPoly.from_terms({(0, 0): 1, (1, 1): -1, (2, 0): -0.5, (0, 2): -0.5, (2, 2): 1})


def unitary_example_K():
    return np.array([[0, 1, 0, 1], [1, 0, -1, 0], [0, -1, 0, 1], [1, 0, 1, 0]]) / np.sqrt(2)


def real_zero_example():
    return RealBiPoly.from_terms({(0, 0): 1, (0, 1): 10, (1, 0): 4, (0, 2): -1,
                                  (1, 1): -2, (2, 0): -1})


def random_contraction(rng, size, norm=1.0):
    G = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return norm * G / np.linalg.norm(G, 2)


def poly_of(K, n, seed=0):
    """Coefficients of det(I - K Z) by least-squares interpolation at random points.

    Independent of the library's DFT interpolation.
    """
    n1, n2 = n
    rng = np.random.default_rng(seed)
    m = 4 * (n1 + 1) * (n2 + 1)
    z1 = np.exp(2j * np.pi * rng.uniform(size=m))
    z2 = np.exp(2j * np.pi * rng.uniform(size=m))
    d = np.concatenate([np.full(n1, 1.0), np.zeros(n2)])
    vals = np.array([np.linalg.det(np.eye(n1 + n2) - K * (a * d + b * (1 - d)))
                     for a, b in zip(z1, z2)])
    V = np.stack([z1 ** i * z2 ** j for i in range(n1 + 1) for j in range(n2 + 1)], axis=1)
    c = np.linalg.lstsq(V, vals, rcond=None)[0].reshape(n1 + 1, n2 + 1)
    c[np.abs(c) < 1e-13] = 0.0
    return BiPoly(c)


def random_hermitian(rng, d):
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (X + X.conj().T) / 2


def direct_eval(coeffs, z1, z2):
    """Power-sum evaluation, the naive oracle for Horner."""
    c = np.asarray(coeffs)
    out = 0
    for i in range(c.shape[0]):
        for j in range(c.shape[1]):
            out = out + c[i, j] * z1 ** i * z2 ** j
    return out


def radius_oracle(p, directions=2000):
    """min over phi of the smallest |t| with p(t, t e^{i phi}) = 0."""
    c = p.coeffs
    i, j = np.indices(c.shape)
    best = np.inf
    for phi in np.linspace(0, 2 * np.pi, directions, endpoint=False):
        u = np.zeros(c.shape[0] + c.shape[1] - 1, dtype=complex)
        np.add.at(u, (i + j).ravel(), (c * np.exp(1j * phi * j)).ravel())
        r = np.roots(np.trim_zeros(u, "b")[::-1])
        if r.size:
            best = min(best, float(np.abs(r).min()))
    return best
