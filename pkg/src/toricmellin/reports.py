"""Records emitted by the convergence studies, plus the log-log slope fit they share."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np


@dataclass
class AsymptoticReport:
    """One (oracle, prediction) comparison.

    ``ratio`` is ``exact / predicted`` whenever ``predicted`` is nonzero.
    """

    exact: float
    predicted: float
    ratio: float | None = None
    stderr: float | None = None
    fitted_slope: float | None = None
    params: dict[str, Any] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.ratio is None and self.predicted not in (0, 0.0) and self.predicted is not None:
            self.ratio = self.exact / self.predicted

    @property
    def error(self) -> float:
        return abs(self.exact - self.predicted)

    def as_row(self) -> dict[str, Any]:
        row = dict(self.params)
        row.update(
            exact=self.exact,
            stderr=self.stderr,
            predicted=self.predicted,
            ratio=self.ratio,
            slope=self.fitted_slope,
        )
        if self.note:
            row["note"] = self.note
        return row

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log|y|`` against ``log x``."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.abs(np.asarray(ys, dtype=float)))
    if lx.size < 2:
        raise ValueError("need at least two points for a slope")
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def is_monotone_toward(values: Sequence[float], target: float = 1.0) -> bool:
    """True when ``|v - target|`` never increases along ``values``."""
    gaps = [abs(v - target) for v in values]
    return all(b <= a for a, b in zip(gaps, gaps[1:]))


def finite_or_none(x):
    return None if x is None or not math.isfinite(x) else x
