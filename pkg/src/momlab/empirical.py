"""Empirical moments of moments of zeta on the critical line.

The inner window integral of |zeta(1/2 + i h)|^(2 beta) is done by composite
Gauss-Legendre on panels no wider than the local zero spacing; the outer
average over the window start t is stratified Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cfkrs import MomParams
from .quad import NonConvergence, gauss_legendre, parallel_map
from .specfun import T_MAX_DEFAULT, DomainError, zeta_critical


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    stderr: float | None
    samples: int
    method: str
    seed: int | None
    params: MomParams | None
    T: float
    uncertainty: float = 0.0  # deterministic quadrature error estimate

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError("moment estimates are nonnegative")
        if self.stderr is not None and self.stderr < 0:
            raise ValueError("stderr must be nonnegative")


@dataclass(frozen=True)
class EmpiricalConfig:
    order: int = 16
    window: float = 1.0
    check_refinement: bool = True
    rtol: float = 1e-6
    max_halvings: int = 3
    t_max: float = T_MAX_DEFAULT
    workers: int | None = None


def panel_width(t: float) -> float:
    return min(0.125, math.pi / math.log(2.0 + t))


def _abs_power_integral(a: float, b: float, beta: int, order: int, shrink: int, t_max: float) -> float:
    width = panel_width(b) / 2**shrink
    n_panels = max(1, math.ceil((b - a) / width - 1e-12))
    edges = np.linspace(a, b, n_panels + 1)
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    z = zeta_critical(nodes, t_max=t_max)
    return float(np.sum(weights * np.abs(z) ** (2 * beta)))


def _checked_integral(a: float, b: float, beta: int, config: EmpiricalConfig) -> float:
    if config.order not in (8, 16, 32):
        raise ValueError("order must be 8, 16 or 32")
    coarse = _abs_power_integral(a, b, beta, config.order, 0, config.t_max)
    if not config.check_refinement:
        return coarse
    for shrink in range(config.max_halvings + 1):
        fine = _abs_power_integral(a, b, beta, min(2 * config.order, 32), shrink, config.t_max)
        if abs(fine - coarse) <= config.rtol * abs(fine):
            return fine
        coarse = fine
    raise NonConvergence(f"window integral on [{a}, {b}] did not settle to rtol={config.rtol:g}")


def window_moment(t: float, beta: int, config: EmpiricalConfig = EmpiricalConfig()) -> float:
    """int_t^{t + window} |zeta(1/2 + i h)|^(2 beta) dh."""
    if beta < 1:
        raise DomainError("beta must be >= 1")
    if t < 0 or t + config.window > config.t_max:
        raise DomainError(f"window [{t}, {t + config.window}] outside [0, {config.t_max}]")
    return _checked_integral(float(t), float(t) + config.window, beta, config)


def stratum_uniform(seed: int, stratum: int) -> float:
    """U(0,1) draw keyed by (seed, stratum): independent of evaluation order."""
    return float(np.random.default_rng([int(seed), int(stratum)]).random())


def stratified_stderr(y: np.ndarray) -> float:
    """Stderr of the mean of one-sample-per-stratum data (adjacent strata paired)."""
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 2:
        return math.inf
    m = n // 2
    diffs = y[0:2 * m:2] - y[1:2 * m:2]
    ss = float(np.sum(diffs**2))
    if n % 2:
        ss += 0.5 * float((y[-1] - y[-2]) ** 2) * 2.0
    return math.sqrt(ss) / n


def mom_zeta(
    params: MomParams,
    T: float,
    n_samples: int,
    seed: int,
    config: EmpiricalConfig = EmpiricalConfig(),
) -> MomentEstimate:
    """Stratified Monte Carlo over t in [0, T] of window_moment(t)^k."""
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    if T + config.window > config.t_max:
        raise DomainError(f"T must be <= t_max - window = {config.t_max - config.window}")
    width = T / n_samples

    def sample(i: int) -> float:
        t = (i + stratum_uniform(seed, i)) * width
        return window_moment(t, params.beta, config) ** params.k

    y = np.array(parallel_map(sample, range(n_samples), config.workers))
    return MomentEstimate(
        value=float(np.mean(y)),
        stderr=stratified_stderr(y),
        samples=n_samples,
        method="stratified-monte-carlo",
        seed=seed,
        params=params,
        T=float(T),
    )


def m_beta_empirical(beta: int, T: float, config: EmpiricalConfig = EmpiricalConfig(check_refinement=False)) -> float:
    """(1/T) int_0^T |zeta(1/2 + i t)|^(2 beta) dt by panel quadrature."""
    if T <= 0 or T > config.t_max:
        raise DomainError(f"T must lie in (0, {config.t_max}]")
    edges = np.arange(0.0, T, 1.0).tolist() + [float(T)]
    pieces = parallel_map(
        lambda ab: _checked_integral(ab[0], ab[1], beta, config),
        list(zip(edges[:-1], edges[1:])),
        config.workers,
    )
    return math.fsum(pieces) / T
