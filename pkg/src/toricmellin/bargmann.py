"""Monomial states ``z^k`` in Bargmann space and the spectral measure they generate.

Torus-invariant observables are handled in the coordinates ``r_i = |z_i|^2``,
where the expectation in state ``z^k`` becomes the twisted Mellin transform at
``x = k/N`` and the spectral measure is a lattice sum of those values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, UnsupportedError
from .functions import NumericFunction, PolynomialFunction, TestFunction
from .mellin import series_array, series_polynomial, transform_numeric
from .polynomials import RationalPolynomial
from .polytope import EulerMaclaurin, HPolytope
from .quadrature import integrate_orthant


@dataclass(frozen=True)
class WeightData:
    """Scalar weights ``q`` and reduction level ``alpha``: slice ``sum q_i k_i = N alpha``."""

    d: int
    q: tuple[int, ...]
    alpha: int

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(v) for v in self.q))
        if len(self.q) != self.d or self.d < 1:
            raise DomainError("need one positive weight per coordinate")
        if any(v <= 0 for v in self.q) or int(self.alpha) <= 0:
            raise DomainError("weights and alpha must be positive integers")

    @classmethod
    def unit(cls, d: int, alpha: int = 1) -> "WeightData":
        return cls(d, (1,) * d, alpha)

    @property
    def unit_weights(self) -> bool:
        return all(v == 1 for v in self.q)

    def to_dict(self) -> dict:
        return {"d": self.d, "q": list(self.q), "alpha": self.alpha}

    @classmethod
    def from_dict(cls, data: Mapping) -> "WeightData":
        return cls(int(data["d"]), tuple(data["q"]), int(data["alpha"]))

    @classmethod
    def load(cls, path) -> "WeightData":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def norm_squared_log(N: float, k: Sequence[int]) -> float:
    """``log int |z^k|^2 e^{-N|z|^2} = d log(pi/N) + sum(log k_i! - k_i log N)``."""
    if N <= 0 or any(v < 0 for v in k):
        raise DomainError("need N > 0 and k >= 0")
    return len(k) * math.log(math.pi / N) + sum(math.lgamma(v + 1.0) - v * math.log(N) for v in k)


@dataclass(frozen=True)
class BargmannState:
    """The normalised monomial ``z^k / c_{N,k}``."""

    N: int
    k: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.k)

    @property
    def log_norm_sq(self) -> float:
        return norm_squared_log(self.N, self.k)

    def density(self, z) -> np.ndarray | float:
        return state_density(self.N, self.k, z)

    def log_max_density(self) -> float:
        """Log of the density at its peak ``|z_i|^2 = k_i / N``."""
        r = [v / self.N for v in self.k]
        return _log_density_r(self.N, self.k, np.array([r]))[0]


def _log_density_r(N: float, k: Sequence[int], r: np.ndarray) -> np.ndarray:
    k_arr = np.asarray(k, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(k_arr > 0, k_arr * np.log(r), 0.0)
    return -norm_squared_log(N, k) + logs.sum(axis=-1) - N * r.sum(axis=-1)


def state_density(N: float, k: Sequence[int], z) -> np.ndarray | float:
    """``(N/pi)^d N^|k| / k! |z^k|^2 e^{-N|z|^2}`` at complex points ``z`` (shape ``(d,)`` or ``(m, d)``)."""
    z = np.asarray(z, dtype=complex)
    single = z.ndim == 1
    r = np.abs(np.atleast_2d(z)) ** 2
    if r.shape[-1] != len(k):
        raise DomainError("point dimension does not match k")
    out = np.exp(_log_density_r(N, k, r))
    return float(out[0]) if single else out


def state_expectation(f: TestFunction, N: float, k: Sequence[int], *, method: str = "polar", nodes: int = 160, **quad_kwargs) -> float:
    """``<s_k, f s_k>`` for a torus-invariant observable ``f(|z_1|^2, ..., |z_d|^2)``.

    ``method="polar"`` integrates the Bargmann density itself over
    ``|z_i| = rho_i`` with tensor Gauss-Legendre on a window around the peak,
    independently of the Mellin module.  ``method="laguerre"`` evaluates the
    ratio of orthant integrals with the Gauss-Laguerre machinery instead.
    """
    if len(k) != f.dim:
        raise DomainError("state dimension does not match the function")
    if method == "laguerre":
        return integrate_orthant(f, [float(v) for v in k], float(N), normalize=True, **quad_kwargs)
    if method != "polar":
        raise DomainError(f"unknown method {method!r}")
    if len(k) > 3:
        raise UnsupportedError("polar quadrature is capped at d = 3")
    x, w = _legendre(nodes)
    axes, weights = [], []
    for ki in k:
        mean, sd = (ki + 1.0) / N, math.sqrt(ki + 1.0) / N
        lo = math.sqrt(max(0.0, mean - 14.0 * sd))
        hi = math.sqrt(mean + 14.0 * sd + 30.0 / N)
        rho = lo + (hi - lo) * (x + 1.0) / 2.0
        # one-coordinate density (N/pi) N^k/k! rho^{2k} e^{-N rho^2}, times the polar area element
        with np.errstate(divide="ignore"):
            log_dens = math.log(N / math.pi) + ki * math.log(N) - math.lgamma(ki + 1.0) - N * rho**2
            log_dens = log_dens + (2.0 * ki * np.log(rho) if ki else 0.0)
        axes.append(rho**2)
        weights.append(w * (hi - lo) / 2.0 * 2.0 * math.pi * rho * np.exp(log_dens))
    grids = np.meshgrid(*axes, indexing="ij")
    r = np.stack([g.ravel() for g in grids], axis=-1)
    wgrid = np.ones(())
    for wi in weights:
        wgrid = np.multiply.outer(wgrid, wi)
    # pairwise summation; the terms are products of positive weights with f
    return float(np.sum(wgrid.ravel() * f(r)))


@lru_cache(maxsize=16)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def weight_lattice_points(W: WeightData, N: int) -> list[tuple[int, ...]]:
    """All ``k in Z_+^d`` with ``sum q_i k_i = N alpha`` in lexicographic order."""
    target = N * W.alpha
    out: list[tuple[int, ...]] = []

    def recurse(i: int, remaining: int, prefix: list[int]):
        if i == W.d - 1:
            if remaining % W.q[i] == 0:
                out.append(tuple(prefix + [remaining // W.q[i]]))
            return
        for v in range(remaining // W.q[i] + 1):
            recurse(i + 1, remaining - v * W.q[i], prefix + [v])

    recurse(0, target, [])
    return out


def spectral_measure(f: TestFunction, W: WeightData, N: int) -> float:
    """``nu_N(f) = sum_k A_N f(k/N)`` over the weight slice."""
    values = [transform_numeric(f, [Fraction(v, N) for v in k], N).value for k in weight_lattice_points(W, N)]
    return math.fsum(sorted(values))


def spectral_measure_states(f: TestFunction, W: WeightData, N: int, **kwargs) -> float:
    """The same trace summed state by state from :func:`state_expectation`."""
    values = [state_expectation(f, N, k, **kwargs) for k in weight_lattice_points(W, N)]
    return math.fsum(sorted(values))


def slice_function(f: TestFunction, W: WeightData, N, M: int) -> TestFunction:
    """Order-``M`` series of ``A_N f`` pulled back to ``x' -> (x', alpha - sum x')``."""
    d = W.d
    if isinstance(f, PolynomialFunction):
        series = series_polynomial(f.poly, N, M)
        coords = [RationalPolynomial.variable(i, d - 1) for i in range(d - 1)]
        last = RationalPolynomial.constant(W.alpha, d - 1)
        for c in coords:
            last = last - c
        return PolynomialFunction(series.substitute(coords + [last]))

    Nf = float(N)

    def pulled(xp: np.ndarray) -> np.ndarray:
        full = np.column_stack([xp, W.alpha - xp.sum(axis=1)])
        return series_array(f, full, Nf, M)

    return NumericFunction(pulled, d - 1)


def spectral_measure_em(f: TestFunction, W: WeightData, N: int, M: int) -> float:
    """Euler-Maclaurin estimate of ``nu_N(f)`` on the unit-weight simplex slice."""
    if not W.unit_weights:
        raise UnsupportedError("the simplex parametrisation needs unit weights")
    if W.d == 1:
        return transform_numeric(f, [Fraction(W.alpha)], N).value
    P = HPolytope.standard_simplex(W.d - 1, W.alpha)
    em = EulerMaclaurin(slice_function(f, W, N, M), P, M)
    return float(em.value(N)) * N ** (W.d - 1)
