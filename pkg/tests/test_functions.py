import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toricmellin import functions
from toricmellin.errors import DerivativeCapabilityError, DomainError
from toricmellin.functions import ExponentialMix, GaussianBump, NumericFunction, PolynomialFunction
from toricmellin.polynomials import RationalPolynomial


def finite_difference(f, beta, y, h=1e-4):
    i = beta.index(1)
    e = np.zeros_like(y)
    e[i] = h
    return (f(y + e) - f(y - e)) / (2 * h)


def test_vectorised_and_scalar_calls():
    g = GaussianBump([1.0, 2.0], 0.5)
    pts = np.array([[1.0, 2.0], [0.0, 0.0]])
    out = g(pts)
    assert out.shape == (2,) and out[0] == 1.0
    assert isinstance(g([1.0, 2.0]), float)


@pytest.mark.parametrize(
    "f",
    [
        GaussianBump([1.0, 0.5], [0.7, 1.3]),
        ExponentialMix([(2, [-1, -0.5]), (-1, [0, -2])]),
        PolynomialFunction(RationalPolynomial(2, {(2, 1): 3, (0, 3): -1})),
    ],
)
@pytest.mark.parametrize("beta", [(1, 0), (0, 1)])
def test_first_derivatives_against_differences(f, beta):
    y = np.array([0.8, 1.7])
    assert f.partial(beta, y) == pytest.approx(finite_difference(f, list(beta), y), rel=1e-6, abs=1e-9)


@given(st.integers(0, 6), st.floats(-3, 3))
def test_gaussian_higher_derivatives(n, y):
    # d/dy of the order-n derivative equals the order-(n+1) derivative
    g = GaussianBump([0.3], 1.1)
    num = (g.partial((n,), [y + 1e-5]) - g.partial((n,), [y - 1e-5])) / 2e-5
    assert g.partial((n + 1,), [y]) == pytest.approx(num, rel=1e-5, abs=1e-6)


def test_expmix_must_be_bounded():
    with pytest.raises(DomainError):
        ExponentialMix([(1, [0.5])])


def test_polynomial_is_flagged_unbounded():
    assert not PolynomialFunction.monomial([2]).bounded
    assert GaussianBump([0.0]).bounded


def test_numeric_function_order_cap():
    f = NumericFunction(lambda y: np.sin(y[:, 0]) * np.cos(y[:, 1]), 2)
    y = np.array([0.4, 0.9])
    assert f.partial((1, 0), y) == pytest.approx(np.cos(0.4) * np.cos(0.9), rel=1e-8)
    assert f.partial((1, 1), y) == pytest.approx(-np.cos(0.4) * np.sin(0.9), rel=1e-5)
    assert f.partial((0, 2), y) == pytest.approx(-np.sin(0.4) * np.cos(0.9), rel=1e-5)
    with pytest.raises(DerivativeCapabilityError):
        f.partial((2, 1), y)


@pytest.mark.parametrize(
    "f",
    [
        PolynomialFunction(RationalPolynomial(2, {(1, 1): Fraction(1, 3)})),
        ExponentialMix([(Fraction(1, 2), [-1, 0])]),
        GaussianBump([1.0, 0.25], 2.0),
    ],
)
def test_json_round_trip(f):
    g = functions.from_json(f.to_json())
    pts = np.array([[0.3, 0.6], [1.5, 2.0]])
    np.testing.assert_array_equal(f(pts), g(pts))


def test_json_fraction_strings():
    f = functions.from_dict({"kind": "expmix", "terms": [{"c": "1/3", "lambda": ["-1/2"]}]})
    assert f([2.0]) == pytest.approx(np.exp(-1.0) / 3)
    with pytest.raises(DomainError):
        functions.from_dict({"kind": "nope"})
    assert json.loads(GaussianBump([1.0]).to_json())["kind"] == "gaussian"
