import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toricmellin.errors import DomainError
from toricmellin.quadrature import monte_carlo_volume
from toricmellin.special import (
    log_factorial,
    log_gamma,
    stirling_log_factorial,
    todd_coefficients,
    unit_ball_volume,
)


def test_log_gamma_values():
    assert log_gamma(1) == 0.0
    assert log_gamma(5) == pytest.approx(math.log(24), rel=1e-15)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@given(st.floats(min_value=0.5, max_value=1e6))
def test_log_gamma_against_mpmath(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert abs(log_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("x", [0.5, 1, 2.5, 7, 100])
def test_gamma_recurrence(x):
    assert math.exp(log_gamma(x + 1) - log_gamma(x)) == pytest.approx(x, rel=1e-12)


def test_log_factorial():
    assert log_factorial(0) == 0.0
    assert log_factorial(10) == pytest.approx(15.1044125730755, rel=1e-13)


def test_stirling_values():
    assert stirling_log_factorial(1) == pytest.approx(-0.0810614667953, abs=1e-12)
    assert abs(stirling_log_factorial(10) - log_factorial(10)) < 1 / 120
    assert abs(stirling_log_factorial(1000) - log_factorial(1000)) < 1 / 12000
    with pytest.raises(DomainError):
        stirling_log_factorial(0)


@given(st.integers(1, 1000))
def test_stirling_gap_bound(k):
    gap = log_factorial(k) - stirling_log_factorial(k)
    assert 0 < gap <= 1 / (12 * k) + 1e-12


@given(st.integers(1000, 10**7))
def test_stirling_gap_bound_large_k(k):
    # both sides are ~k log k, so the difference carries a few ulps of rounding
    gap = log_factorial(k) - stirling_log_factorial(k)
    assert gap <= 1 / (12 * k) + 8 * math.ulp(log_factorial(k))


def test_unit_ball_volume_values():
    assert unit_ball_volume(1) == pytest.approx(2.0, rel=1e-15)
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)


@pytest.mark.parametrize("d", range(3, 20))
def test_unit_ball_recurrence(d):
    assert unit_ball_volume(d) == pytest.approx(unit_ball_volume(d - 2) * 2 * math.pi / d, rel=1e-14)


def test_unit_ball_monte_carlo():
    est, err = monte_carlo_volume(lambda p: np.sum(p * p, axis=1) <= 1, [(-1, 1)] * 3, 400_000, 7)
    assert abs(est - unit_ball_volume(3)) < 3 * err


def test_todd_values():
    assert list(todd_coefficients(0).coeffs) == [1]
    assert list(todd_coefficients(1).coeffs) == [1, Fraction(1, 2)]
    assert list(todd_coefficients(4).coeffs) == [1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]


def test_todd_against_bernoulli():
    # w/(1-e^{-w}) = sum B_m^+ w^m / m!
    b = todd_coefficients(12)
    for m in range(13):
        bern = Fraction(*mpmath.bernfrac(m))
        if m == 1:
            bern = -bern
        assert b[m] == bern / math.factorial(m)


@given(st.integers(0, 16))
def test_todd_inverts_series(M):
    b = todd_coefficients(M)
    c = [Fraction((-1) ** j, math.factorial(j + 1)) for j in range(M + 1)]
    product = [sum(c[j] * b[m - j] for j in range(m + 1)) for m in range(M + 1)]
    assert product == [1] + [0] * M
