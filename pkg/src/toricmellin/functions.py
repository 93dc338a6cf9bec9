"""Test functions on the positive orthant with closed-form partial derivatives.

Every function is vectorised: calling it on an ``(m, d)`` array returns ``m``
values, and on a single ``d``-vector returns a float.  ``partial(beta, y)``
returns the mixed partial derivative ``d^beta f`` the same way.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from numpy.polynomial import hermite_e

from .errors import DerivativeCapabilityError, DomainError
from .polynomials import RationalPolynomial


def _frac(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**15) if v != int(v) else Fraction(int(v))
    return Fraction(v)


def _points(y, dim: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(y, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[-1] != dim:
        raise DomainError(f"expected points of dimension {dim}, got shape {arr.shape}")
    return arr, single


class TestFunction:
    """Base class; subclasses implement ``_eval`` and ``_partial`` on 2-D arrays."""

    __test__ = False  # not a pytest test class

    kind: str = "abstract"
    dim: int
    max_derivative_order: float = math.inf
    bounded: bool = True

    def __call__(self, y):
        pts, single = _points(y, self.dim)
        out = self._eval(pts)
        return float(out[0]) if single else out

    def partial(self, beta: Sequence[int], y):
        beta = tuple(int(b) for b in beta)
        if len(beta) != self.dim:
            raise DomainError("multi-index length must match the dimension")
        if sum(beta) > self.max_derivative_order:
            raise DerivativeCapabilityError(
                f"{self.kind} supplies derivatives up to order {self.max_derivative_order}, asked for {sum(beta)}"
            )
        pts, single = _points(y, self.dim)
        out = self._partial(beta, pts) if any(beta) else self._eval(pts)
        return float(out[0]) if single else out

    def _eval(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _partial(self, beta, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise TypeError(f"{self.kind} functions are not serialisable")

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class PolynomialFunction(TestFunction):
    """A polynomial in ``y_1..y_d``; unbounded, but its twisted transform is closed form."""

    kind = "polynomial"
    bounded = False

    def __init__(self, poly: RationalPolynomial):
        self.poly = poly
        self.dim = poly.nvars

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient=1) -> "PolynomialFunction":
        return cls(RationalPolynomial(len(exponents), {tuple(exponents): coefficient}))

    @classmethod
    def constant(cls, value, dim: int) -> "PolynomialFunction":
        return cls(RationalPolynomial.constant(value, dim))

    def _eval(self, pts):
        return self.poly.evaluate_array(pts)

    def _partial(self, beta, pts):
        return self.poly.derivative(beta).evaluate_array(pts)

    def __add__(self, other):
        return PolynomialFunction(self.poly + other.poly)

    def __mul__(self, scalar):
        return PolynomialFunction(self.poly.scale(scalar))

    __rmul__ = __mul__

    def to_dict(self):
        return {"kind": self.kind, "poly": self.poly.to_dict()}

    def __repr__(self):
        return f"PolynomialFunction({self.poly})"


class ExponentialMix(TestFunction):
    """``sum_j c_j exp(<lambda_j, y>)`` with every ``lambda_j <= 0`` (so bounded)."""

    kind = "expmix"

    def __init__(self, terms: Sequence[tuple[object, Sequence[object]]]):
        if not terms:
            raise DomainError("an exponential mix needs at least one term")
        self.terms = [(_frac(c), tuple(_frac(v) for v in lam)) for c, lam in terms]
        dims = {len(lam) for _, lam in self.terms}
        if len(dims) != 1:
            raise DomainError("all exponent vectors must share one dimension")
        self.dim = dims.pop()
        if any(v > 0 for _, lam in self.terms for v in lam):
            raise DomainError("exponents must be <= 0 to stay bounded on the orthant")
        self._c = np.array([float(c) for c, _ in self.terms])
        self._lam = np.array([[float(v) for v in lam] for _, lam in self.terms])

    def _eval(self, pts):
        return np.exp(pts @ self._lam.T) @ self._c

    def _partial(self, beta, pts):
        coef = self._c * np.prod(self._lam ** np.asarray(beta, dtype=float), axis=1)
        return np.exp(pts @ self._lam.T) @ coef

    def __add__(self, other):
        return ExponentialMix(self.terms + other.terms)

    def __mul__(self, scalar):
        return ExponentialMix([(c * _frac(scalar), lam) for c, lam in self.terms])

    __rmul__ = __mul__

    def to_dict(self):
        return {
            "kind": self.kind,
            "terms": [{"c": str(c), "lambda": [str(v) for v in lam]} for c, lam in self.terms],
        }

    def __repr__(self):
        return f"ExponentialMix({[(str(c), [str(v) for v in lam]) for c, lam in self.terms]})"


class GaussianBump(TestFunction):
    """``prod_i exp(-(y_i - c_i)^2 / (2 w_i^2))``; derivatives via Hermite polynomials."""

    kind = "gaussian"

    def __init__(self, center: Sequence[float], width: float | Sequence[float] = 1.0):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        self.dim = self.center.size
        w = np.asarray(width, dtype=float)
        self.width = np.full(self.dim, float(w)) if w.ndim == 0 else w.reshape(self.dim)
        if np.any(self.width <= 0):
            raise DomainError("widths must be positive")

    def _eval(self, pts):
        u = (pts - self.center) / self.width
        return np.exp(-0.5 * np.sum(u * u, axis=1))

    def _partial(self, beta, pts):
        u = (pts - self.center) / self.width
        out = np.exp(-0.5 * np.sum(u * u, axis=1))
        for i, n in enumerate(beta):
            if n:
                coeffs = np.zeros(n + 1)
                coeffs[n] = 1.0
                out = out * ((-1) ** n) * hermite_e.hermeval(u[:, i], coeffs) / self.width[i] ** n
        return out

    def to_dict(self):
        width = self.width.tolist()
        return {
            "kind": self.kind,
            "center": [repr(float(c)) for c in self.center],
            "width": [repr(float(w)) for w in width],
        }

    def __repr__(self):
        return f"GaussianBump(center={self.center.tolist()}, width={self.width.tolist()})"


class NumericFunction(TestFunction):
    """Black-box vectorised evaluator; derivatives up to order 2 by central differences."""

    kind = "numeric"
    max_derivative_order = 2

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], dim: int, *, bounded: bool = True):
        self.func = func
        self.dim = dim
        self.bounded = bounded

    def _eval(self, pts):
        return np.asarray(self.func(pts), dtype=float).reshape(pts.shape[0])

    def _partial(self, beta, pts):
        eps = np.finfo(float).eps
        idx = [i for i, b in enumerate(beta) for _ in range(b)]
        scale = np.maximum(1.0, np.abs(pts))
        if len(idx) == 1:
            i = idx[0]
            h = eps ** (1 / 3) * scale[:, i]
            e = np.zeros_like(pts)
            e[:, i] = h
            return (self._eval(pts + e) - self._eval(pts - e)) / (2 * h)
        i, j = idx
        h = eps ** (1 / 4)
        hi = h * scale[:, i]
        hj = h * scale[:, j]
        if i == j:
            e = np.zeros_like(pts)
            e[:, i] = hi
            return (self._eval(pts + e) - 2 * self._eval(pts) + self._eval(pts - e)) / hi**2
        ei = np.zeros_like(pts)
        ej = np.zeros_like(pts)
        ei[:, i] = hi
        ej[:, j] = hj
        f = self._eval
        return (f(pts + ei + ej) - f(pts + ei - ej) - f(pts - ei + ej) + f(pts - ei - ej)) / (4 * hi * hj)


def from_dict(data: Mapping) -> TestFunction:
    kind = data.get("kind")
    if kind == "polynomial":
        return PolynomialFunction(RationalPolynomial.from_dict(data["poly"]))
    if kind == "expmix":
        return ExponentialMix([(t["c"], t["lambda"]) for t in data["terms"]])
    if kind == "gaussian":
        center = [float(Fraction(c)) for c in data["center"]]
        width = data.get("width", 1)
        if isinstance(width, list):
            width = [float(Fraction(w)) for w in width]
        else:
            width = float(Fraction(width))
        return GaussianBump(center, width)
    raise DomainError(f"unknown test function kind {kind!r}")


def from_json(text: str) -> TestFunction:
    return from_dict(json.loads(text))


def load(path) -> TestFunction:
    with open(path) as fh:
        return from_dict(json.load(fh))
