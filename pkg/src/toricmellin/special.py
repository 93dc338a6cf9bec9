"""Scalar special functions: log-Gamma, Stirling, ball volumes, Todd coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

__all__ = [
    "ToddCoefficients",
    "log_gamma",
    "log_factorial",
    "stirling_log_factorial",
    "unit_ball_volume",
    "log_unit_ball_volume",
    "todd_coefficients",
]


def log_gamma(x: float) -> float:
    """Natural logarithm of ``Gamma(x)`` for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def log_factorial(k: int) -> float:
    if k < 0:
        raise DomainError("factorial of a negative integer")
    return math.lgamma(k + 1.0)


def stirling_log_factorial(k: int) -> float:
    """``log(sqrt(2 pi k) (k/e)^k)``; undercuts ``log k!`` by less than ``1/(12k)``."""
    if k < 1:
        raise DomainError("Stirling's form needs k >= 1")
    return 0.5 * math.log(2.0 * math.pi * k) + k * (math.log(k) - 1.0)


def log_unit_ball_volume(d: int) -> float:
    if d < 1:
        raise DomainError("dimension must be positive")
    return 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0)


def unit_ball_volume(d: int) -> float:
    """Volume ``pi^(d/2) / Gamma(d/2 + 1)`` of the unit ball in ``R^d``."""
    return math.exp(log_unit_ball_volume(d))


@dataclass(frozen=True)
class ToddCoefficients:
    """Exact Taylor coefficients ``b_0..b_M`` of ``w / (1 - exp(-w))``."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __getitem__(self, m: int) -> Fraction:
        return self.coeffs[m]

    def __len__(self):
        return len(self.coeffs)

    def as_floats(self) -> list[float]:
        return [float(b) for b in self.coeffs]


def todd_coefficients(M: int) -> ToddCoefficients:
    """Invert the series ``(1 - exp(-w))/w = sum (-1)^j w^j / (j+1)!`` up to ``w^M``."""
    if M < 0:
        raise DomainError("order must be nonnegative")
    return ToddCoefficients(M, _todd(M))


@lru_cache(maxsize=None)
def _todd(M: int) -> tuple[Fraction, ...]:
    c = [Fraction((-1) ** j, math.factorial(j + 1)) for j in range(M + 1)]
    b = [Fraction(1)]
    for m in range(1, M + 1):
        b.append(-sum(c[j] * b[m - j] for j in range(1, m + 1)))
    return tuple(b)
