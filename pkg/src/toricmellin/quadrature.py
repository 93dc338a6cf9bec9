"""Integration on the positive orthant against ``y^a exp(-N y)`` and Monte Carlo volumes.

Generalized Gauss-Laguerre rules start from the Golub-Welsch eigenvalues; nodes
are then polished by Newton steps and weights taken from the Christoffel
function, which keeps tiny tail weights accurate to full relative precision.
Exponents ``a`` of order ``10^4`` are routine here (``a = N x`` with large
``N``), so the total mass ``Gamma(a+1)`` is only ever handled as a logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DivergenceError, DomainError, NonConvergenceError, UnsupportedError

DEFAULT_NODES = 40
MAX_NODES = 320
DEFAULT_RTOL = 1e-10
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight ``y^a exp(-y)`` on ``(0, inf)``.

    ``normalized_weights`` sum to one; the true weights are
    ``Gamma(a+1) * normalized_weights`` and are exposed through ``log_weights``
    because they overflow for large ``a``.
    """

    nodes: np.ndarray
    normalized_weights: np.ndarray
    a: float
    order: int

    @property
    def log_mass(self) -> float:
        return math.lgamma(self.a + 1.0)

    @property
    def log_weights(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.normalized_weights) + self.log_mass

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)


def gauss_laguerre_general(n: int, a: float) -> QuadratureRule:
    """``n``-point generalized Gauss-Laguerre rule for ``y^a e^{-y}``."""
    if n < 1:
        raise DomainError("need at least one node")
    a = float(a)
    if not a > -1.0:
        raise DivergenceError(f"weight y^a e^-y is not integrable for a = {a}")
    return _rule(int(n), a)


@lru_cache(maxsize=512)
def _rule(n: int, a: float) -> QuadratureRule:
    i = np.arange(n, dtype=float)
    diag = 2.0 * i + a + 1.0
    off = np.sqrt(i[1:] * (i[1:] + a))
    nodes = diag.copy() if n == 1 else eigh_tridiagonal(diag, off, eigvals_only=True)
    for _ in range(3):
        p, dp, _, _ = _recurrence(nodes, n, a)
        nodes = nodes - p / dp
    _, _, sumsq, log_scale = _recurrence(nodes, n, a)
    # Christoffel numbers of the unit-mass measure: 1 / sum_k p_k(x)^2
    w = np.exp(-(np.log(sumsq) + 2.0 * log_scale))
    nodes.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(nodes, w, a, n)


def _recurrence(x: np.ndarray, n: int, a: float):
    """Orthonormal Laguerre recurrence at ``x``: ``p_n``, ``p_n'``, ``sum_{k<n} p_k^2`` and a log rescaling.

    Values are rescaled per node whenever they grow past ``1e100`` so that
    large ``n`` never overflows; the first three outputs share the scale
    ``exp(log_scale)``.
    """
    x = np.asarray(x, dtype=float)
    p_prev, p = np.zeros_like(x), np.ones_like(x)
    dp_prev, dp = np.zeros_like(x), np.zeros_like(x)
    sumsq = np.zeros_like(x)
    log_scale = np.zeros_like(x)
    b_prev = 0.0
    for k in range(n):
        sumsq += p * p
        b = math.sqrt((k + 1.0) * (k + 1.0 + a))
        shift = x - (2.0 * k + a + 1.0)
        p_next = (shift * p - b_prev * p_prev) / b
        dp_next = (shift * dp + p - b_prev * dp_prev) / b
        p_prev, p, dp_prev, dp, b_prev = p, p_next, dp, dp_next, b
        big = np.maximum(np.abs(p), np.abs(dp)) > 1e100
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            p, p_prev, dp, dp_prev = p * f, p_prev * f, dp * f, dp_prev * f
            sumsq *= f * f
            log_scale -= np.log(f)
    return p, dp, sumsq, log_scale


def _tensor_sum(g: Callable, rules: Sequence[QuadratureRule], N: float):
    grids = np.meshgrid(*[r.nodes for r in rules], indexing="ij")
    points = np.stack([x.ravel() for x in grids], axis=-1) / N
    wgrid = np.ones(())
    for r in rules:
        wgrid = np.multiply.outer(wgrid, r.normalized_weights)
    w = wgrid.ravel()
    values = np.asarray(g(points), dtype=float).reshape(-1)
    terms = w * values
    return math.fsum(terms), math.fsum(np.abs(terms))


def log_normalizer(exponents: Sequence[float], N: float) -> float:
    """``log prod Gamma(a_i + 1) / N^(a_i + 1)``."""
    total = 0.0
    for a in exponents:
        if not a > -1.0:
            raise DivergenceError(f"exponent {a} <= -1 makes the integral diverge")
        total += math.lgamma(a + 1.0) - (a + 1.0) * math.log(N)
    return total


def integrate_orthant_log(
    g: Callable,
    exponents: Sequence[float],
    N: float,
    *,
    nodes: int = DEFAULT_NODES,
    max_nodes: int = MAX_NODES,
    rtol: float = DEFAULT_RTOL,
) -> tuple[float, float, float]:
    """Integrate ``prod y_i^{a_i} e^{-N y_i} g(y)`` over the orthant.

    Returns ``(log_magnitude, sign, normalized)`` where ``normalized`` is the
    integral divided by ``prod Gamma(a_i+1)/N^{a_i+1}``, i.e. the average of
    ``g`` under the product Gamma law.  ``g`` maps an ``(m, d)`` array to ``m``
    values.
    """
    exponents = [float(a) for a in exponents]
    d = len(exponents)
    if d == 0:
        raise DomainError("need at least one coordinate")
    if d > 3:
        raise UnsupportedError("tensor quadrature is capped at d = 3")
    if not N > 0:
        raise DomainError("N must be positive")
    lognorm = log_normalizer(exponents, N)

    n = nodes
    prev = None
    while n <= max_nodes:
        value, scale = _tensor_sum(g, [gauss_laguerre_general(n, a) for a in exponents], N)
        if prev is not None and abs(value - prev) <= rtol * max(abs(value), scale, np.finfo(float).tiny):
            break
        prev = value
        n *= 2
    else:
        raise NonConvergenceError(
            f"orthant quadrature did not settle to rtol={rtol} by {max_nodes} nodes per axis"
        )
    if value == 0.0:
        return -math.inf, 0.0, 0.0
    return lognorm + math.log(abs(value)), math.copysign(1.0, value), value


def integrate_orthant(g: Callable, exponents: Sequence[float], N: float, *, normalize: bool = False, **kwargs) -> float:
    """``int_{R_+^d} prod y_i^{a_i} e^{-N sum y} g(y) dy``, optionally divided by its ``g = 1`` value."""
    logmag, sign, normalized = integrate_orthant_log(g, exponents, N, **kwargs)
    if normalize:
        return normalized
    return sign * math.exp(logmag) if sign else 0.0


def monte_carlo_volume(
    inside: Callable[[np.ndarray], np.ndarray],
    box: Sequence[tuple[float, float]],
    samples: int,
    seed: int,
    *,
    chunk: int = MC_CHUNK,
) -> tuple[float, float]:
    """Hit-or-miss volume of ``{x in box : inside(x)}`` with its standard error.

    Sample ``j*chunk .. (j+1)*chunk - 1`` is drawn from PCG64 seeded by the
    ``j``-th child of ``SeedSequence(seed)``, so the result depends only on
    ``(seed, samples, chunk)`` and chunks can be evaluated in any order.
    ``inside`` takes an ``(m, dim)`` array and returns ``m`` booleans.
    """
    if samples <= 0:
        raise DomainError("samples must be positive")
    lo = np.array([b[0] for b in box], dtype=float)
    hi = np.array([b[1] for b in box], dtype=float)
    widths = hi - lo
    if np.any(widths <= 0):
        raise DomainError("box must have positive volume")
    volume = float(np.prod(widths))
    n_chunks = -(-samples // chunk)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    hits = 0
    for j, child in enumerate(children):
        m = min(chunk, samples - j * chunk)
        rng = np.random.Generator(np.random.PCG64(child))
        pts = lo + widths * rng.random((m, lo.size))
        hits += int(np.count_nonzero(inside(pts)))
    p = hits / samples
    return volume * p, volume * math.sqrt(p * (1.0 - p) / samples)
