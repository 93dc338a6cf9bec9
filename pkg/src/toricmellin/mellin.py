"""The N-twisted Mellin transform and its asymptotic series.

``A_N f(x)`` is the average of ``f`` under the product of Gamma laws with
shapes ``N x_i + 1`` and rate ``N``.  Polynomials and exponential mixes have
closed forms; everything else goes through tensor Gauss-Laguerre quadrature.
The series replaces the average by ``sum_beta N^-|beta| d^beta f(x) g_beta(N x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DerivativeCapabilityError, DivergenceError, DomainError
from .functions import ExponentialMix, PolynomialFunction, TestFunction
from .polynomials import RationalPolynomial, g_multiindex, multi_indices
from .quadrature import integrate_orthant_log, log_normalizer
from .reports import AsymptoticReport, loglog_slope

EXACT_THRESHOLD = 1e-13


@dataclass
class TransformResult:
    value: float
    method: str  # "closed_form" | "quadrature" | "series"
    log_denominator: float
    series_order: int | None = None
    terms: dict[tuple[int, ...], float] = field(default_factory=dict)

    def layer_magnitudes(self) -> list[float]:
        """``sum_{|beta| = j} |term_beta|`` for ``j = 0..series_order``."""
        if self.series_order is None:
            return []
        out = [0.0] * (self.series_order + 1)
        for beta, v in self.terms.items():
            out[sum(beta)] += abs(v)
        return out


def _check(x: Sequence[float], N: float) -> list[float]:
    if not N > 0:
        raise DomainError("N must be positive")
    x = [float(v) for v in x]
    for v in x:
        if not N * v > -1:
            raise DivergenceError(f"N*x_i = {N * v} <= -1: the kernel is not integrable")
    return x


def denominator_log(x: Sequence[float], N: float) -> float:
    """``log prod_i Gamma(N x_i + 1) / N^(N x_i + 1)``."""
    x = _check(x, N)
    return log_normalizer([N * v for v in x], N)


def _polynomial_closed_form(poly: RationalPolynomial, x, N) -> float:
    exact = isinstance(N, (int, Fraction)) and all(isinstance(v, (int, Fraction)) for v in x)
    if exact:
        return float(polynomial_transform_exact(poly, x, N))
    terms = []
    for exp, c in poly.items():
        term = float(c)
        for xi, m in zip(x, exp):
            for j in range(1, m + 1):
                term *= xi + j / N
        terms.append(term)
    return math.fsum(terms)


def polynomial_transform_exact(poly: RationalPolynomial, x: Sequence, N) -> Fraction:
    """Exact ``A_N`` of a polynomial at rational ``x``, ``N``: ``y^m -> prod (N x_i + 1)...(N x_i + m_i) / N^m_i``."""
    N = Fraction(N)
    x = [Fraction(v) for v in x]
    total = Fraction(0)
    for exp, c in poly.items():
        term = c
        for xi, m in zip(x, exp):
            for j in range(1, m + 1):
                term *= xi + j / N
        total += term
    return total


def _expmix_closed_form(f: ExponentialMix, x, N) -> float:
    terms = []
    for c, lam in zip(f._c, f._lam):
        log_t = -sum((N * xi + 1.0) * math.log1p(-li / N) for xi, li in zip(x, lam))
        terms.append(c * math.exp(log_t))
    return math.fsum(terms)


def transform_numeric(f: TestFunction, x: Sequence[float], N: float, **quad_kwargs) -> TransformResult:
    """``A_N f(x)`` by closed form where one exists, otherwise by orthant quadrature."""
    x_raw = list(x)
    xf = _check(x_raw, N)
    if len(xf) != f.dim:
        raise DomainError("point dimension does not match the function")
    logden = log_normalizer([N * v for v in xf], N)
    if isinstance(f, PolynomialFunction):
        return TransformResult(_polynomial_closed_form(f.poly, x_raw, N), "closed_form", logden)
    if isinstance(f, ExponentialMix):
        return TransformResult(_expmix_closed_form(f, xf, float(N)), "closed_form", logden)
    _, _, value = integrate_orthant_log(f, [N * v for v in xf], float(N), **quad_kwargs)
    return TransformResult(value, "quadrature", logden)


def transform_series(f: TestFunction, x: Sequence[float], N: float, M: int) -> TransformResult:
    """Truncated expansion ``sum_{|beta| <= M} N^-|beta| d^beta f(x) g_beta(N x)``."""
    xf = _check(x, N)
    if any(v <= 0 for v in xf):
        raise DomainError("the series is only offered at interior points x_i > 0")
    if M < 0:
        raise DomainError("order must be nonnegative")
    if M > f.max_derivative_order:
        raise DerivativeCapabilityError(f"{f.kind} cannot supply order-{M} derivatives")
    N = float(N)
    xa = np.asarray(xf)
    scaled = [N * v for v in xf]
    terms: dict[tuple[int, ...], float] = {}
    for beta in multi_indices(len(xf), M):
        deriv = f.partial(beta, xa)
        if deriv == 0.0:
            terms[beta] = 0.0
            continue
        terms[beta] = N ** (-sum(beta)) * deriv * g_multiindex(beta)(*scaled)
    ordered = sorted(terms.items(), key=lambda kv: -sum(kv[0]))
    value = math.fsum(v for _, v in ordered)
    return TransformResult(value, "series", log_normalizer(scaled, N), series_order=M, terms=terms)


def series_array(f: TestFunction, points: np.ndarray, N: float, M: int) -> np.ndarray:
    """Vectorised :func:`transform_series` values at the rows of ``points`` (boundary allowed)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.zeros(points.shape[0])
    for beta in sorted(multi_indices(f.dim, M), key=lambda b: -sum(b)):
        g = g_multiindex(beta).evaluate_array(N * points)
        out += N ** (-sum(beta)) * f.partial(beta, points) * g
    return out


def series_polynomial(poly: RationalPolynomial, N, M: int) -> RationalPolynomial:
    """The order-``M`` series of a polynomial as an exact polynomial in ``x``."""
    N = Fraction(N)
    d = poly.nvars
    scaled = [RationalPolynomial.variable(i, d).scale(N) for i in range(d)]
    total = RationalPolynomial(d)
    for beta in multi_indices(d, M):
        deriv = poly.derivative(beta)
        if deriv.is_zero():
            continue
        g = g_multiindex(beta).substitute(scaled)
        total = total + (deriv * g).scale(N ** (-sum(beta)))
    return total


def empirical_order(f: TestFunction, x: Sequence[float], N_list: Sequence[float], M: int) -> AsymptoticReport:
    """Fit the decay rate of ``|A_N f(x) - series_M(x)|`` in ``N``.

    The report carries the errors per ``N`` in ``params["errors"]``; when any
    error is below round-off the series is declared exact and no slope is fitted.
    """
    N_list = [float(n) for n in N_list]
    if len(N_list) < 4 or N_list[-1] < 10 * N_list[0] or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise DomainError("need >= 4 increasing N values spanning at least a decade")
    errors, numeric, series = [], [], []
    for N in N_list:
        a = transform_numeric(f, x, N).value
        b = transform_series(f, x, N, M).value
        numeric.append(a)
        series.append(b)
        errors.append(abs(a - b))
    params = {"x": list(map(float, x)), "M": M, "N_list": N_list, "errors": errors}
    if min(errors) < EXACT_THRESHOLD:
        return AsymptoticReport(numeric[-1], series[-1], params=params, note="exact")
    slope = loglog_slope(N_list, errors)
    return AsymptoticReport(numeric[-1], series[-1], fitted_slope=slope, params=params, note="fitted")


def predicted_slope_bound(M: int) -> float:
    """Slope ceiling ``-(M+1)/2 + 0.3`` that a smooth non-polynomial ``f`` must meet."""
    return -(M + 1) / 2 + 0.3
