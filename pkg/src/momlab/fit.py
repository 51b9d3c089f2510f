"""Least-squares power-law fits in log-log space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cfkrs import MomParams

SYMMETRIES = ("unitary", "symplectic", "orthogonal")


class DegenerateFit(ValueError):
    pass


@dataclass(frozen=True)
class FitResult:
    exponent: float
    log_coefficient: float
    r_squared: float
    points: tuple[tuple[float, float], ...]

    @property
    def coefficient(self) -> float:
        return float(np.exp(self.log_coefficient))


def fit_power_law(points: Sequence[tuple[float, float]]) -> FitResult:
    """Fit y = C s^e by ordinary least squares on (log s, log y)."""
    pts = tuple((float(s), float(y)) for s, y in points)
    if len(pts) < 3:
        raise DegenerateFit("need at least 3 points")
    s = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.any(s <= 1) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise DegenerateFit("scales must exceed 1 and values must be positive")
    if np.any(np.diff(s) <= 0):
        raise DegenerateFit("scales must be strictly increasing")
    ls, ly = np.log(s), np.log(y)
    xm, ym = ls.mean(), ly.mean()
    sxx = float(np.sum((ls - xm) ** 2))
    slope = float(np.sum((ls - xm) * (ly - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = ly - (intercept + slope * ls)
    syy = float(np.sum((ly - ym) ** 2))
    r2 = 1.0 if syy == 0 else max(0.0, min(1.0, 1.0 - float(np.sum(resid**2)) / syy))
    return FitResult(slope, intercept, r2, pts)


def expected_exponent(params: MomParams, symmetry: str) -> int:
    k, b = params.k, params.beta
    if symmetry == "unitary":
        return k * k * b * b - k + 1
    if symmetry == "symplectic":
        return k * b * (2 * k * b + 1) - k
    if symmetry == "orthogonal":
        if k == 1 and b == 1:
            return 1  # exact value 2(N + 1)
        return k * b * (2 * k * b - 1) - k
    raise ValueError(f"symmetry must be one of {SYMMETRIES}")
