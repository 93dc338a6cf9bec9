import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toricmellin.errors import DivergenceError, DomainError, NonConvergenceError, UnsupportedError
from toricmellin.quadrature import (
    gauss_laguerre_general,
    integrate_orthant,
    integrate_orthant_log,
    log_normalizer,
    monte_carlo_volume,
)


def one(y):
    return np.ones(y.shape[0])


def test_single_node_rules():
    r = gauss_laguerre_general(1, 0)
    np.testing.assert_allclose(r.nodes, [1.0])
    np.testing.assert_allclose(r.weights, [1.0])
    r = gauss_laguerre_general(1, 2)
    np.testing.assert_allclose(r.nodes, [3.0])
    np.testing.assert_allclose(r.weights, [2.0])


def test_degree_nine_exactness():
    r = gauss_laguerre_general(5, 0)
    assert float(np.sum(r.weights * r.nodes**9)) == pytest.approx(362880, rel=1e-12)


def test_invalid_parameter():
    with pytest.raises(DivergenceError):
        gauss_laguerre_general(3, -1.0)


def test_against_scipy_rule():
    from scipy.special import roots_genlaguerre

    x, w = roots_genlaguerre(12, 1.5)
    r = gauss_laguerre_general(12, 1.5)
    np.testing.assert_allclose(r.nodes, x, rtol=1e-12)
    np.testing.assert_allclose(r.weights, w, rtol=1e-10)


@given(st.integers(1, 40), st.sampled_from([0.0, 0.5, 2.0, 5.0, 40.0, 1e3, 1e4]))
def test_rule_exactness(n, a):
    r = gauss_laguerre_general(n, a)
    assert np.all(np.diff(r.nodes) > 0) and np.all(r.nodes > 0)
    for j in range(2 * n):
        # moment j normalised by Gamma(a+1) is the rising product (a+1)...(a+j)
        ref = math.prod(a + i for i in range(1, j + 1))
        got = float(np.sum(r.normalized_weights * r.nodes**j))
        assert got == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("n", [80, 160, 320])
def test_tail_weights_stay_accurate(n):
    # high moments are carried by the tiny weights of the largest nodes
    r = gauss_laguerre_general(n, 0.0)
    assert r.normalized_weights.sum() == pytest.approx(1.0, rel=1e-13)
    for j in (n // 2, n, 3 * n // 2):
        with np.errstate(divide="ignore"):
            lw = np.log(r.normalized_weights) + j * np.log(r.nodes)
        m = lw.max()
        got = m + math.log(np.exp(lw - m).sum())
        assert got == pytest.approx(math.lgamma(j + 1), rel=1e-12)


def test_large_exponent_mass_in_log_space():
    r = gauss_laguerre_general(40, 1e4)
    assert r.log_mass == pytest.approx(math.lgamma(1e4 + 1), rel=1e-14)
    assert np.all(np.isfinite(r.log_weights))


def test_orthant_examples():
    assert integrate_orthant(one, [0], 1) == pytest.approx(1.0, rel=1e-14)
    assert integrate_orthant(one, [5], 2) == pytest.approx(1.875, rel=1e-13)
    assert integrate_orthant(lambda y: y[:, 0], [3], 1) == pytest.approx(24.0, rel=1e-13)


@pytest.mark.parametrize("a", [0, 0.5, 5, 40])
@pytest.mark.parametrize("N", [1, 10, 200])
def test_orthant_reproduces_gamma(a, N):
    got = integrate_orthant_log(one, [a, a], N)[0]
    assert got == pytest.approx(log_normalizer([a, a], N), rel=1e-11, abs=1e-11)
    assert got == pytest.approx(2 * (math.lgamma(a + 1) - (a + 1) * math.log(N)), rel=1e-11, abs=1e-11)


def test_orthant_against_mpmath():
    g = lambda y: np.exp(-((y[:, 0] - 1.0) ** 2) / 2)
    got = integrate_orthant(g, [7.0], 5.0, normalize=True)
    f = lambda y: y**7 * mpmath.exp(-5 * y - (y - 1) ** 2 / 2)
    ref = mpmath.quad(f, [0, 1, 3, mpmath.inf]) / (mpmath.gamma(8) / mpmath.mpf(5) ** 8)
    assert got == pytest.approx(float(ref), rel=1e-10)


def test_node_doubling_is_stable():
    g = lambda y: np.exp(-y[:, 0]) / (1 + y[:, 1] ** 2)
    a = integrate_orthant(g, [3, 4], 6.0, normalize=True, nodes=40)
    b = integrate_orthant(g, [3, 4], 6.0, normalize=True, nodes=80)
    assert a == pytest.approx(b, rel=1e-10)


def test_orthant_errors():
    with pytest.raises(UnsupportedError):
        integrate_orthant(one, [0, 0, 0, 0], 1)
    with pytest.raises(DivergenceError):
        integrate_orthant(one, [-1.5], 1)
    with pytest.raises(NonConvergenceError):
        integrate_orthant(lambda y: np.sin(50 * y[:, 0]), [0], 1, nodes=4, max_nodes=8)


def test_monte_carlo_examples():
    est, err = monte_carlo_volume(lambda p: np.ones(len(p), bool), [(0, 1), (0, 1)], 10_000, 1)
    assert (est, err) == (1.0, 0.0)
    est, err = monte_carlo_volume(lambda p: np.sum(p * p, axis=1) <= 1, [(-1, 1), (-1, 1)], 10**6, 3)
    assert abs(est - math.pi) < 3 * err
    assert monte_carlo_volume(lambda p: p[:, 0] < 0, [(0, 1)], 1000, 5) == (0.0, 0.0)
    with pytest.raises(DomainError):
        monte_carlo_volume(lambda p: p[:, 0] < 0, [(0, 1)], 0, 5)


def test_monte_carlo_is_deterministic_and_chunk_split():
    inside = lambda p: p[:, 0] + p[:, 1] < 1
    a = monte_carlo_volume(inside, [(0, 1), (0, 1)], 200_000, 11)
    b = monte_carlo_volume(inside, [(0, 1), (0, 1)], 200_000, 11)
    assert a == b
    assert monte_carlo_volume(inside, [(0, 1), (0, 1)], 200_000, 12) != a
