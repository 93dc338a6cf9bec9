"""Distribution laws ``t -> Vol{z : <s_k, s_k>(z) >= t}`` of monomial states.

In ``r_i = |z_i|^2`` the superlevel set is ``{r : sum_i delta_i(r_i) <= D}``
with per-coordinate deficits ``delta_i(r) = k_i (u - log(1+u))``,
``u = r/a_i - 1`` (or ``N r`` when ``k_i = 0``) and total budget ``D`` equal to
``log(max density) - log t``.  Each complex coordinate contributes area
``pi dr_i``, so the volume in ``C^d`` is ``pi^d`` times the ``r``-volume.

Exact volumes are computed by nesting: the last coordinate's section is an
interval found by root-finding, earlier coordinates are integrated with
Gauss-Legendre after ``r = mid + half sin(theta)``, which absorbs the
square-root behaviour at the section endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, UnsupportedError, ValidityError
from .quadrature import monte_carlo_volume
from .reports import AsymptoticReport, loglog_slope
from .special import log_unit_ball_volume, unit_ball_volume

_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188)
DEFAULT_NODES = 96


def _peak_log_term(k: int) -> float:
    """``k log k - k - log k!`` without the cancellation of the naive form."""
    if k == 0:
        return 0.0
    if k < 12:
        return k * math.log(k) - k - math.lgamma(k + 1.0)
    inv = 1.0 / k
    series = sum(c * inv ** (2 * j + 1) for j, c in enumerate(_STIRLING))
    return -0.5 * math.log(2 * math.pi * k) - series


def _psi(u: float) -> float:
    """``u - log(1 + u)``, with a series near zero where the subtraction cancels."""
    if abs(u) < 0.2:
        total, term = 0.0, u * u
        for n in range(2, 40):
            total += term / n if n % 2 == 0 else -term / n
            term *= u
        return total
    return u - math.log1p(u)


def psi_roots(c: float) -> tuple[float, float]:
    """The two solutions ``u_- in (-1, 0]``, ``u_+ >= 0`` of ``u - log(1+u) = c``."""
    if c < 0:
        raise DomainError("no solution for a negative level")
    if c == 0:
        return 0.0, 0.0
    s = math.sqrt(2.0 * c)
    hi = 2.0 * s + 2.0 * c + 1.0
    while _psi(hi) < c:
        hi *= 2.0
    u_plus = brentq(lambda u: _psi(u) - c, s * 0.5, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    lo = -s if s < 1.0 else math.nextafter(-1.0, 0.0)
    if _psi(lo) < c:
        return -1.0, u_plus
    u_minus = brentq(lambda u: _psi(u) - c, lo, 0.0, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return u_minus, u_plus


@dataclass
class LevelSetProblem:
    """Superlevel set ``{<s_k, s_k> >= t}``; ``t`` is carried as ``log_t`` so tiny thresholds survive.

    Strictly positive components of ``k`` are moved to the front (the volume
    is invariant under permuting coordinates).
    """

    N: float
    k: tuple[int, ...]
    log_t: float

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        if any(v < 0 for v in k) or not k:
            raise DomainError("k must be a nonempty vector of nonnegative integers")
        if self.N <= 0:
            raise DomainError("N must be positive")
        self.k = tuple(sorted(k, key=lambda v: v == 0))

    @classmethod
    def from_t(cls, N: float, k: Sequence[int], t: float) -> "LevelSetProblem":
        if t <= 0:
            raise DomainError("t must be positive")
        return cls(N, tuple(k), math.log(t))

    @property
    def t(self) -> float:
        return math.exp(self.log_t)

    @property
    def d(self) -> int:
        return len(self.k)

    @property
    def l(self) -> int:
        return sum(1 for v in self.k if v > 0)

    @property
    def a(self) -> tuple[float, ...]:
        return tuple(v / self.N for v in self.k)

    @property
    def threshold_log(self) -> float:
        """Log of ``(pi/N)^d k! / N^|k| * t``, the bound on ``|z^k|^2 e^{-N|z|^2}``."""
        return self.d * math.log(math.pi / self.N) + sum(
            math.lgamma(v + 1.0) - v * math.log(self.N) for v in self.k
        ) + self.log_t

    @property
    def log_max_density(self) -> float:
        return -self.d * math.log(math.pi / self.N) + sum(_peak_log_term(v) for v in self.k)

    @property
    def budget(self) -> float:
        """``D = log(max density) - log t``; the set is empty when negative."""
        return self.log_max_density - self.log_t

    # -- per-coordinate geometry ---------------------------------------
    def deficit(self, i: int, r: float) -> float:
        k = self.k[i]
        if k == 0:
            return self.N * r
        a = k / self.N
        return k * _psi(r / a - 1.0)

    def section(self, i: int, D: float) -> tuple[float, float]:
        """``{r >= 0 : deficit_i(r) <= D}`` as an interval (empty gives ``(nan, nan)``)."""
        if D < 0:
            return math.nan, math.nan
        k = self.k[i]
        if k == 0:
            return 0.0, D / self.N
        a = k / self.N
        um, up = psi_roots(D / k)
        return a * (1.0 + um), a * (1.0 + up)

    def section_length(self, i: int, D: float) -> float:
        if D <= 0:
            return 0.0
        k = self.k[i]
        if k == 0:
            return D / self.N
        um, up = psi_roots(D / k)
        return (k / self.N) * (up - um)

    def inside(self, r: np.ndarray) -> np.ndarray:
        """Vectorised membership test for an ``(m, d)`` array of ``r`` points."""
        r = np.asarray(r, dtype=float)
        k = np.asarray(self.k, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(k > 0, k * np.log(np.where(r > 0, r, np.nan)), 0.0)
        logs = np.where(np.isnan(logs), -np.inf, logs)
        # same comparison as the density test, shifted by the peak value
        peak = np.array([v * math.log(v / self.N) - v if v else 0.0 for v in self.k])
        lhs = np.sum(peak - logs + self.N * r, axis=1)
        return np.all(r >= 0, axis=1) & (lhs <= self.budget)


@lru_cache(maxsize=16)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _nested_volume(P: LevelSetProblem, D: float, i: int, nodes: int) -> float:
    if D <= 0:
        return 0.0
    if i == P.d - 1:
        return P.section_length(i, D)
    lo, hi = P.section(i, D)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    x, w = _legendre(nodes)
    theta = 0.5 * math.pi * x
    acc = []
    for th, wt in zip(theta, w):
        r = mid + half * math.sin(th)
        rest = D - P.deficit(i, r)
        if rest > 0:
            acc.append(wt * 0.5 * math.pi * half * math.cos(th) * _nested_volume(P, rest, i + 1, nodes))
    return math.fsum(acc)


@dataclass
class VolumeResult:
    value: float
    error: float
    empty: bool = False
    method: str = "sections"


def superlevel_volume(P: LevelSetProblem, *, nodes: int = DEFAULT_NODES) -> VolumeResult:
    """Volume in ``C^d`` of the superlevel set, with a two-level quadrature error estimate."""
    D = P.budget
    if D <= 0:
        return VolumeResult(0.0, 0.0, empty=True)
    if P.d > 3:
        raise UnsupportedError("deterministic volumes are offered for d <= 3; use superlevel_volume_mc")
    scale = math.pi**P.d
    if P.d == 1:
        return VolumeResult(scale * P.section_length(0, D), 0.0, method="roots")
    coarse = _nested_volume(P, D, 0, nodes // 2)
    fine = _nested_volume(P, D, 0, nodes)
    return VolumeResult(scale * fine, scale * abs(fine - coarse))


def superlevel_volume_exact(P: LevelSetProblem, **kwargs) -> float:
    return superlevel_volume(P, **kwargs).value


def superlevel_interval(P: LevelSetProblem) -> tuple[float, float]:
    """Endpoints ``r_- < r_+`` of the ``d = 1`` superlevel set in ``r = |z|^2``."""
    if P.d != 1:
        raise DomainError("endpoints are defined for d = 1")
    return P.section(0, P.budget)


def r_box(P: LevelSetProblem) -> list[tuple[float, float]]:
    D = P.budget
    return [P.section(i, D) for i in range(P.d)]


def superlevel_volume_mc(P: LevelSetProblem, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo in ``r``-coordinates, scaled by ``pi^d``."""
    if P.budget <= 0:
        return 0.0, 0.0
    est, err = monte_carlo_volume(P.inside, r_box(P), samples, seed)
    return math.pi**P.d * est, math.pi**P.d * err


def superlevel_volume_mc_complex(P: LevelSetProblem, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo directly in ``C^d = R^{2d}`` against the density test, no fibration used."""
    if P.budget <= 0:
        return 0.0, 0.0
    box = []
    for lo, hi in r_box(P):
        rad = math.sqrt(hi)
        box += [(-rad, rad), (-rad, rad)]

    def inside(x: np.ndarray) -> np.ndarray:
        z = x[:, 0::2] + 1j * x[:, 1::2]
        return P.inside(np.abs(z) ** 2)

    return monte_carlo_volume(inside, box, samples, seed)


# ---------------------------------------------------------------------------
# predictors


def gamma_constant(a: Sequence[float]) -> float:
    """``log(pi^d prod_i sqrt(2 pi a_i))``."""
    if any(v <= 0 for v in a):
        raise DomainError("gamma needs every a_i > 0")
    return len(a) * math.log(math.pi) + 0.5 * sum(math.log(2 * math.pi * v) for v in a)


@dataclass(frozen=True)
class EpsilonSchedule:
    """How the threshold ``t`` is rescaled with ``N``.

    ``plain``: ``t``; ``power_rescale``: ``N^{d/2} t``;
    ``exp_rescale``: ``exp(-N^alpha_hat (log N)^beta_hat t)``; ``logN_rescale``: ``N^{-t}``.
    """

    variant: str = "plain"
    alpha_hat: float | None = None
    beta_hat: float | None = None

    VARIANTS = ("plain", "power_rescale", "exp_rescale", "logN_rescale")

    def __post_init__(self):
        if self.variant not in self.VARIANTS:
            raise DomainError(f"unknown schedule {self.variant!r}")
        if self.variant == "exp_rescale":
            ah, bh = self.alpha_hat, self.beta_hat
            if ah is None or bh is None:
                raise DomainError("exp_rescale needs alpha_hat and beta_hat")
            if not (0 < ah < 1 or (ah == 0 and bh > 1)):
                raise DomainError("exp_rescale needs 0 < alpha_hat < 1, or alpha_hat = 0 with beta_hat > 1")

    @classmethod
    def parse(cls, text: str) -> "EpsilonSchedule":
        """CLI spelling: ``plain``, ``power``, ``logn`` or ``exp:ALPHA,BETA``."""
        if text == "plain":
            return cls()
        if text == "power":
            return cls("power_rescale")
        if text == "logn":
            return cls("logN_rescale")
        if text.startswith("exp:"):
            ah, bh = (float(v) for v in text[4:].split(","))
            return cls("exp_rescale", ah, bh)
        raise DomainError(f"unknown rescaling {text!r}")

    @property
    def label(self) -> str:
        if self.variant == "exp_rescale":
            return f"exp:{self.alpha_hat:g},{self.beta_hat:g}"
        return {"plain": "plain", "power_rescale": "power", "logN_rescale": "logn"}[self.variant]

    def effective_log_t(self, N: float, t: float, d: int) -> float:
        """Log of the density threshold actually applied at this ``N``."""
        logN = math.log(N)
        if self.variant == "plain":
            return math.log(t)
        if self.variant == "power_rescale":
            return 0.5 * d * logN + math.log(t)
        if self.variant == "exp_rescale":
            return -(N**self.alpha_hat) * logN**self.beta_hat * t
        return -t * logN

    def epsilon(self, N: float, t: float, gamma: float, d: int) -> float:
        if N < 2:
            raise DomainError("schedules are defined for N >= 2")
        logN = math.log(N)
        if self.variant == "plain":
            return d * logN / (2 * N) - (math.log(t) + gamma) / N
        if self.variant == "power_rescale":
            if math.log(t) >= -gamma:
                raise ValidityError("power rescaling needs log t < -gamma")
            return (-math.log(t) - gamma) / N
        if self.variant == "exp_rescale":
            return N ** (self.alpha_hat - 1) * logN**self.beta_hat * t + d * logN / (2 * N) - gamma / N
        return (0.5 * d + t) * logN / N - gamma / N


def epsilon_schedule(N: float, t: float, S: EpsilonSchedule, gamma: float, d: int) -> float:
    return S.epsilon(N, t, gamma, d)


def epsilon_logN_as_printed(N: float, t: float, d: int) -> float:
    """``(d + 2t) log N / N``: the ``N^{-t}`` schedule in its printed form, twice the derived leading term."""
    return (d + 2 * t) * math.log(N) / N


def epsilon_from_budget(P: LevelSetProblem) -> float:
    """Plain-schedule ``epsilon`` at the problem's actual threshold."""
    gamma = gamma_constant(P.a)
    return P.d * math.log(P.N) / (2 * P.N) - (P.log_t + gamma) / P.N


def sigma_predicted(P: LevelSetProblem, mode: str = "leading", *, epsilon: float | None = None) -> float:
    """Asymptotic volume of the superlevel set.

    ``leading``: ``pi^d gamma_d prod (a_i d log N / N)^{1/2}``.
    ``refined``: ``(2 pi)^d gamma_d prod (a_i eps / 2)^{1/2}`` with ``eps`` the
    plain schedule at the problem's threshold unless given.
    ``degenerate``: ``2^{l-d} pi^l gamma_{2d-l} (d log N / N)^{d - l/2} prod_{i<=l} a_i^{1/2}``.
    """
    d, N = P.d, float(P.N)
    a = P.a
    logN = math.log(N)
    if mode == "degenerate":
        l = P.l
        if l == 0:
            raise ValidityError("degenerate law needs at least one positive k_i")
        log_val = (
            (l - d) * math.log(2)
            + l * math.log(math.pi)
            + log_unit_ball_volume(2 * d - l)
            + (d - 0.5 * l) * math.log(d * logN / N)
            + 0.5 * sum(math.log(v) for v in a[:l])
        )
        return math.exp(log_val)
    if P.l != d:
        raise ValidityError(f"{mode} law needs every k_i > 0")
    if mode == "leading":
        return math.pi**d * unit_ball_volume(d) * math.prod(math.sqrt(v * d * logN / N) for v in a)
    if mode == "refined":
        eps = epsilon_from_budget(P) if epsilon is None else epsilon
        if eps <= 0:
            raise ValidityError("epsilon_N <= 0: the predicted region is empty (log t too large)")
        return (2 * math.pi) ** d * unit_ball_volume(d) * math.prod(math.sqrt(v * eps / 2) for v in a)
    raise DomainError(f"unknown mode {mode!r}")


def predicted_interval(P: LevelSetProblem, epsilon: float | None = None) -> tuple[float, float]:
    """``a -/+ sqrt(2 a eps)`` for ``d = 1``."""
    if P.d != 1 or P.l != 1:
        raise DomainError("endpoint prediction is for d = 1, k > 0")
    eps = epsilon_from_budget(P) if epsilon is None else epsilon
    a = P.a[0]
    w = math.sqrt(2 * a * eps)
    return a - w, a + w


# ---------------------------------------------------------------------------
# studies


def layer_cake_check(N: float, k: Sequence[int], points: int = 200, *, nodes: int = DEFAULT_NODES) -> AsymptoticReport:
    """``int_0^{max} sigma([t, inf)) dt``, which must equal the total mass 1."""
    base = LevelSetProblem(N, tuple(k), 0.0)
    log_tmax = base.log_max_density
    tmax = math.exp(log_tmax)
    x, w = _legendre(points)
    u = 0.5 * (x + 1.0)
    acc = []
    for ui, wi in zip(u, w):
        P = LevelSetProblem(N, tuple(k), log_tmax + math.log(ui))
        acc.append(0.5 * wi * tmax * superlevel_volume(P, nodes=nodes).value)
    total = math.fsum(acc)
    note = "low-accuracy" if points < 2 else ""
    return AsymptoticReport(total, 1.0, params={"N": N, "k": list(k), "points": points}, note=note)


def scaling_study(
    a: Sequence[float],
    N_list: Sequence[float],
    t: float,
    mode: str = "refined",
    schedule: EpsilonSchedule | None = None,
    *,
    nodes: int = DEFAULT_NODES,
) -> list[AsymptoticReport]:
    """Exact versus predicted volumes along ``k = round(N a)``.

    Every report carries the slope of ``log exact`` against ``log(log N / N)``
    fitted over the whole sweep (needs at least two ``N``).
    """
    schedule = schedule or EpsilonSchedule()
    a = list(a)
    d = len(a)
    reports = []
    for N in N_list:
        k = tuple(int(round(N * v)) for v in a)
        P = LevelSetProblem(N, k, schedule.effective_log_t(N, t, d))
        vol = superlevel_volume(P, nodes=nodes)
        params = {"N": N, "d": d, "l": P.l, "t": t, "variant": schedule.label, "mode": mode}
        if mode == "refined" and P.l == d:
            gamma = gamma_constant(P.a)
            eps = schedule.epsilon(N, t, gamma, d)
            predicted = sigma_predicted(P, "refined", epsilon=eps)
            params["epsilon"] = eps
        else:
            predicted = sigma_predicted(P, mode)
        reports.append(AsymptoticReport(vol.value, predicted, stderr=vol.error, params=params))
    if len(reports) >= 2:
        xs = [math.log(N) / N for N in N_list]
        slope = loglog_slope(xs, [r.exact for r in reports])
        for r in reports:
            r.fitted_slope = slope
    return reports
