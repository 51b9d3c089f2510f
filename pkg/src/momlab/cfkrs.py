"""Shifted-moment predictor P_{k,beta}(x; h) and its averaged moments.

P_{k,beta}(x; h) is a 2n-fold contour integral (n = k beta) of

    A_n(z) prod_{i<=n<j} zeta(1 + z_i - z_j) Delta(z)^2 exp(-(x/2) S)
    / prod_j prod_l (z_j - i h_l)^(2 beta),        S = sum_{j>n} z_j - sum_{j<=n} z_j,

with prefactor (-1)^n / (n!^2 (2 pi i)^(2n)). Each contour must enclose
every pole i h_l. We split each contour into one circle per cluster of
nearby poles; by symmetry of the integrand the sum over which circle each
variable sits on collapses to a sum over count vectors with multinomial
weights.

Two routes are provided:

* ``p_direct``: the contour integral itself, evaluated by tensor trapezoid
  rules on small circles.
* ``p_decomposed``: the large-x form where every variable is rescaled to
  circles about the origin and the h-dependence is frozen at the poles.

``mom_p`` averages P over h in [0,1]^k and t in [0,T]. The t-average is
done in closed form inside the integrand:

    (1/T) int_0^T exp(-(x/2) S) dt = exp(-X S / 2) / (1 - S/2),  X = log(T / 2 pi),

which also covers the head t < 2 pi e where x is negative.

``gamma_coeff`` returns the leading coefficient gamma_{k,beta} through the
scaling limit h = 2 delta / x, x -> infinity, in which A -> A(0) and
zeta(1+s) -> 1/s:

    mom_P(T) ~ alpha gamma X^(k^2 beta^2 - k + 1),
    gamma = 2^-(k^2 beta^2 - k + 1) int_{R^(k-1)} Phi(delta) d delta,

where Phi(delta) is the rescaled integral at x = 2 with poles at i delta_l.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .arith import DEFAULT_PRIME_CUTOFF, EulerGrid, a_global, a_zero
from .quad import (
    Contour,
    ContourFamily,
    contour_integral,
    NonConvergence,
    gauss_legendre,
    oscillatory_halfline_integral,
    parallel_map,
)
from .specfun import DomainError, PoleError, zeta, zeta_near_one, zeta_one_plus

MAX_K_BETA = 4
MAX_DIRECT_K_BETA = 3


class GapError(ValueError):
    """Shifts too close together for the large-x decomposition."""


@dataclass(frozen=True)
class MomParams:
    k: int
    beta: int

    def __post_init__(self):
        if int(self.k) != self.k or int(self.beta) != self.beta or self.k < 1 or self.beta < 1:
            raise ValueError("k and beta must be integers >= 1")
        if self.k * self.beta > MAX_K_BETA:
            raise DomainError(f"k*beta must be <= {MAX_K_BETA}")

    @property
    def n(self) -> int:
        return self.k * self.beta

    @property
    def exponent(self) -> int:
        return self.k**2 * self.beta**2 - self.k + 1


@dataclass(frozen=True)
class ShiftVector:
    h: tuple[float, ...]

    def __post_init__(self):
        h = tuple(float(v) for v in self.h)
        if any(not 0.0 <= v <= 1.0 for v in h):
            raise ValueError("shifts must lie in [0, 1]")
        object.__setattr__(self, "h", h)

    def __len__(self) -> int:
        return len(self.h)


@dataclass(frozen=True)
class LAssignment:
    l: tuple[int, ...]
    labels: tuple[int, ...]  # index into h (0-based) for each of the 2n positions
    mu: tuple[float, ...]
    S: frozenset
    T: frozenset
    weight: int
    v_plus: dict = field(default_factory=dict)
    v_minus: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CfkrsConfig:
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF
    exact_prime_limit: int = 200
    contour_nodes: int = 16
    max_nodes: int = 64
    contour_atol: float = 1e-8
    contour_rtol: float = 1e-9
    cluster_radius: float = 0.02
    decomposed_radius: float = 0.5
    imag_tol: float = 1e-6
    # outer h-quadrature for mom_p
    h_panel_edges: tuple[float, ...] = (0.0, 1 / 64, 1 / 16, 1 / 8, 1 / 4, 1 / 2, 3 / 4, 1.0)
    h_order: int = 8
    moment_contour_rtol: float = 1e-5
    # gamma_coeff
    gamma_cutoff: float = 64.0
    gamma_order: int = 16
    workers: int | None = None


def _pmap(fn, items, config: CfkrsConfig) -> list:
    return parallel_map(fn, items, config.workers)


def multinomial(n: int, parts: Sequence[int]) -> int:
    if sum(parts) != n or min(parts, default=0) < 0:
        return 0
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out


def _binom(a: int, b: int) -> int:
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


def assignment_weight(params: MomParams, l: Sequence[int]) -> int:
    """c_l(k, beta): binomial product counting contour choices for ``l``."""
    n, beta = params.n, params.beta
    first, second = 1, 1
    used_first, used_second = 0, 0
    for lj in l:
        first *= _binom(n - used_first, lj)
        second *= _binom(n - used_second, 2 * beta - lj)
        used_first += lj
        used_second += 2 * beta - lj
    return first * second


def s_size_formula(params: MomParams, l: Sequence[int]) -> int:
    """|S| = sum_j l_j (2 beta - l_j) with l_k = k beta - sum_{j<k} l_j."""
    full = list(l) + [params.n - sum(l)]
    return sum(v * (2 * params.beta - v) for v in full)


def build_assignment(params: MomParams, l: Sequence[int], h: ShiftVector | Sequence[float]) -> LAssignment:
    k, beta, n = params.k, params.beta, params.n
    l = tuple(int(v) for v in l)
    h = h.h if isinstance(h, ShiftVector) else tuple(float(v) for v in h)
    if len(l) != k - 1:
        raise ValueError(f"need {k - 1} entries in l")
    if any(v < 0 or v > 2 * beta for v in l):
        raise ValueError("l entries must lie in [0, 2 beta]")
    if len(h) != k:
        raise ValueError(f"need {k} shifts")
    labels: list[int] = []
    for j, lj in enumerate(l):
        labels += [j] * lj
    labels += [k - 1] * (2 * beta)
    for j in reversed(range(k - 1)):
        labels += [j] * (2 * beta - l[j])
    mu = tuple(h[j] for j in labels)
    S, T = set(), set()
    v_plus: dict[tuple[int, int], list] = {}
    v_minus: dict[tuple[int, int], list] = {}
    for m in range(n):
        for q in range(n, 2 * n):
            a, b = labels[m], labels[q]
            if a == b:
                S.add((m, q))
                continue
            T.add((m, q))
            if a < b:
                v_plus.setdefault((a, b), []).append((m, q))
            else:
                v_minus.setdefault((b, a), []).append((m, q))
    return LAssignment(
        l=l,
        labels=tuple(labels),
        mu=mu,
        S=frozenset(S),
        T=frozenset(T),
        weight=assignment_weight(params, l),
        v_plus={key: tuple(v) for key, v in v_plus.items()},
        v_minus={key: tuple(v) for key, v in v_minus.items()},
    )


def all_assignments(params: MomParams, h: Sequence[float]) -> list[LAssignment]:
    grid = itertools.product(range(2 * params.beta + 1), repeat=params.k - 1)
    return [build_assignment(params, l, h) for l in grid]


def _zeta_shifted(s: complex) -> complex:
    if s == 0:
        raise PoleError("coinciding shifts across the two halves")
    if abs(s) <= 0.5:
        return complex(zeta_near_one(s))
    return complex(zeta(1.0 + s))


def g_func(params: MomParams, z: Sequence[complex], cutoff: int = DEFAULT_PRIME_CUTOFF) -> complex:
    """A_n(z) times prod_{i <= n < j} zeta(1 + z_i - z_j)."""
    n = params.n
    z = [complex(v) for v in z]
    if len(z) != 2 * n:
        raise ValueError(f"expected {2 * n} shifts")
    value = a_global(params.k, params.beta, z, cutoff).value
    for i in range(n):
        for j in range(n, 2 * n):
            value *= _zeta_shifted(z[i] - z[j])
    return value


# ---------------------------------------------------------------------------
# contour engine


@dataclass(frozen=True)
class _Cluster:
    center: float
    radius: float
    size: int
    ratio: float  # geometric convergence factor of the trapezoid rule


def _clusters(h: Sequence[float], rho: float) -> list[_Cluster]:
    """Group poles closer than ``rho`` and choose one circle per group.

    The radius keeps the enclosed poles and the excluded ones at comparable
    ratios, so the trapezoid rule converges like ratio^M.
    """
    hs = sorted(float(v) for v in h)
    groups = [[hs[0]]]
    for v in hs[1:]:
        if v - groups[-1][-1] < rho:
            groups[-1].append(v)
        else:
            groups.append([v])
    out = []
    for g in groups:
        c = 0.5 * (g[0] + g[-1])
        inner = 0.5 * (g[-1] - g[0])
        others = [abs(v - c) for gg in groups if gg is not g for v in gg]
        outer = min(others) if others else math.inf
        if inner == 0.0:
            r = min(rho, outer / 5.0)
        else:
            r = min(inner + 2.0 * rho, math.sqrt(inner * outer))
        spread = 1.0 + 0.01 * (2 * len(g))  # radii grow by 1% per extra contour
        ratio = max(inner / r, r * spread / outer)
        out.append(_Cluster(c, r, len(g), ratio))
    return out


def _count_vectors(clusters: list[_Cluster], n: int, beta: int):
    sizes = [2 * beta * c.size for c in clusters]
    for a in itertools.product(*(range(s + 1) for s in sizes)):
        if sum(a) != n:
            continue
        b = tuple(s - ai for s, ai in zip(sizes, a))
        if sum(b) != n:
            continue
        yield a, b


@dataclass(frozen=True)
class EngineResult:
    value: np.ndarray
    error: float
    nodes: int


def _engine(
    n: int,
    beta: int,
    h: Sequence[float],
    kernel: Callable[[np.ndarray], np.ndarray],
    rho: float,
    *,
    euler: EulerGrid | None,
    zeta_fn: Callable,
    nodes: int,
    max_nodes: int,
    atol: float,
    rtol: float,
) -> EngineResult:
    """Sum over count vectors of tensor contour integrals, times the prefactor.

    ``kernel(S)`` may return extra leading axes; the result keeps them.
    """
    d = 2 * n
    clusters = _clusters(h, rho)
    poles = [1j * v for v in h]
    total = 0
    err = 0.0
    used = nodes
    for a, b in _count_vectors(clusters, n, beta):
        contours, centers = [], []
        index = [0] * len(clusters)
        for half in (a, b):
            for ci, cnt in enumerate(half):
                cl = clusters[ci]
                for _ in range(cnt):
                    contours.append(Contour(1j * cl.center, cl.radius * (1 + 0.01 * index[ci]), nodes))
                    centers.append(1j * cl.center)
                    index[ci] += 1
        weight = multinomial(n, a) * multinomial(n, b)

        def integrand(*zs):
            S = sum(zs[n:]) - sum(zs[:n])
            val = 1.0
            if euler is not None:
                val = val * euler(zs, centers)
            for i in range(n):
                for j in range(n, d):
                    val = val * zeta_fn(zs[i] - zs[j])
            for i in range(d):
                for j in range(i + 1, d):
                    val = val * (zs[j] - zs[i]) ** 2
            for i in range(d):
                for p in poles:
                    val = val / (zs[i] - p) ** (2 * beta)
            return kernel(S) * val

        res = contour_integral(
            integrand, ContourFamily(contours), tol=atol, max_nodes=max_nodes, rtol=rtol
        )
        total = total + weight * res.value
        err += weight * res.refinement_delta
        used = max(used, res.node_budget)
    pref = 1.0 / (math.factorial(n) ** 2 * (4.0 * math.pi**2) ** n)
    return EngineResult(np.asarray(total * pref), err * pref, used)


@lru_cache(maxsize=8)
def _euler_grid(n: int, exact_limit: int, tail_limit: int) -> EulerGrid:
    return EulerGrid(n, exact_limit=exact_limit, tail_limit=tail_limit)


def _check_real(value: np.ndarray, tol: float, what: str) -> np.ndarray:
    value = np.asarray(value)
    bad = np.abs(value.imag) > tol * np.maximum(np.abs(value), 1.0)
    if np.any(bad):
        raise ArithmeticError(f"{what}: imaginary residue {np.max(np.abs(value.imag)):.3g} too large")
    return value.real


def _radius_for(x: float, beta: int, config: CfkrsConfig) -> float:
    return min(config.cluster_radius, 4.0 * beta / max(abs(x), 1.0))


def p_direct(params: MomParams, x: float, h: ShiftVector | Sequence[float], config: CfkrsConfig = CfkrsConfig()) -> float:
    """P_{k,beta}(x; h) by direct contour quadrature."""
    h = h.h if isinstance(h, ShiftVector) else tuple(h)
    if len(h) != params.k:
        raise ValueError(f"need {params.k} shifts")
    if x < 1:
        raise DomainError("x must be >= 1")
    if params.n > MAX_DIRECT_K_BETA:
        raise DomainError(f"direct evaluation needs k*beta <= {MAX_DIRECT_K_BETA}")
    euler = _euler_grid(params.n, config.exact_prime_limit, config.prime_cutoff) if params.n > 1 else None
    res = _engine(
        params.n,
        params.beta,
        h,
        lambda S: np.exp(-0.5 * x * S),
        _radius_for(x, params.beta, config),
        euler=euler,
        zeta_fn=zeta_one_plus,
        nodes=config.contour_nodes,
        max_nodes=config.max_nodes,
        atol=config.contour_atol,
        rtol=config.contour_rtol,
    )
    return float(_check_real(res.value, config.imag_tol, "p_direct"))


# ---------------------------------------------------------------------------
# large-x decomposition


def f_func(v: Sequence[np.ndarray], assignment: LAssignment, beta: int) -> np.ndarray:
    """The h-independent part of the rescaled integrand."""
    d = len(v)
    n = d // 2
    lab = assignment.labels
    val = np.exp(sum(v[:n]) - sum(v[n:]))
    for m in range(d):
        for q in range(m + 1, d):
            if lab[m] == lab[q]:
                val = val * (v[q] - v[m]) ** 2
    for m, q in assignment.S:
        val = val / (v[m] - v[q])
    for m in range(d):
        val = val / v[m] ** (2 * beta)
    return val


def p_decomposed(params: MomParams, x: float, h: ShiftVector | Sequence[float], config: CfkrsConfig = CfkrsConfig()) -> float:
    """Large-x form of P_{k,beta}(x; h) as a sum over assignments l."""
    h = h.h if isinstance(h, ShiftVector) else tuple(float(v) for v in h)
    k, beta, n = params.k, params.beta, params.n
    if len(h) != k:
        raise ValueError(f"need {k} shifts")
    if x < 10:
        raise DomainError("x must be >= 10")
    if k > 1 and min(abs(a - b) for a, b in itertools.combinations(h, 2)) < 1e-3:
        raise GapError("shifts closer than 1e-3")
    d = 2 * n
    family = ContourFamily.around(0.0, config.decomposed_radius, d, config.contour_nodes)
    pref = (-1) ** n / (math.factorial(n) ** 2 * (2j * math.pi) ** (2 * n))
    total = 0.0 + 0.0j
    for asg in all_assignments(params, h):
        if asg.weight == 0:
            continue
        mu = np.array(asg.mu)
        A = a_global(k, beta, 1j * mu, config.prime_cutoff).value if n > 1 else 1.0
        phase = np.exp(0.5j * x * (mu[:n].sum() - mu[n:].sum()))
        pairs = sorted(asg.T)

        def integrand(*v, asg=asg, pairs=pairs, mu=mu):
            val = f_func(v, asg, beta)
            for m, q in pairs:
                val = val * zeta_one_plus(2.0 * (v[m] - v[q]) / x + 1j * (mu[m] - mu[q]))
            return val

        res = contour_integral(
            integrand, family, tol=config.contour_atol, max_nodes=config.max_nodes, rtol=config.contour_rtol
        )
        total += asg.weight * pref * (0.5 * x) ** len(asg.S) * A * phase * res.value
    return float(_check_real(total, config.imag_tol, "p_decomposed"))


def psi(
    params: MomParams,
    v: Sequence[complex],
    assignment: LAssignment,
    config: CfkrsConfig = CfkrsConfig(),
    cutoff: float = 200.0,
    tolerance: float = 1e-6,
) -> complex:
    """Half-line integral over delta in [0, inf)^(k-1) of the shift factor.

    The integrand is exp(2i sum_j (l_j - beta) delta_j) over the affine
    factors (v_m - v_n +- i(delta_s - delta_t)) for (m, n) in V+ / V-, with
    delta_k = 0.
    """
    k, beta = params.k, params.beta
    if k == 1:
        return 1.0 + 0.0j
    if k > 3:
        raise DomainError("psi supports k <= 3")
    v = [complex(z) for z in v]
    freqs = [2.0 * (lj - beta) for lj in assignment.l]

    def integrand(*deltas):
        deltas = list(deltas) + [0.0]
        val = np.exp(1j * sum(f * dl for f, dl in zip(freqs, deltas)))
        for (s, t), pairs in assignment.v_plus.items():
            for m, q in pairs:
                val = val / (v[m] - v[q] + 1j * (deltas[s] - deltas[t]))
        for (s, t), pairs in assignment.v_minus.items():
            for m, q in pairs:
                val = val / (v[m] - v[q] - 1j * (deltas[s] - deltas[t]))
        return val

    def run(width):
        return oscillatory_halfline_integral(
            integrand,
            dim=k - 1,
            decay_degree=len(assignment.T),
            cutoff=cutoff,
            tolerance=tolerance,
            panel_width=width,
            frequencies=freqs,
        ).value

    # poles of the affine factors can sit close to the real delta axis, so
    # halve the panel width until the value settles
    width = 0.5
    prev = run(width)
    for _ in range(6):
        width /= 2
        cur = run(width)
        if abs(cur - prev) <= tolerance * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise NonConvergence("psi did not settle under panel halving")


# ---------------------------------------------------------------------------
# leading coefficient


@dataclass(frozen=True)
class GammaEstimate:
    value: float
    uncertainty: float
    method: str


def scaling_integrand(params: MomParams, delta: Sequence[float], nodes: int = 16, max_nodes: int = 64) -> EngineResult:
    """Phi(delta): the x -> infinity rescaled integral at x = 2, poles i*delta."""
    h = list(delta) + [0.0]
    if len(h) != params.k:
        raise ValueError(f"need {params.k - 1} offsets")
    return _engine(
        params.n,
        params.beta,
        h,
        lambda S: np.exp(-S),
        0.5,
        euler=None,
        zeta_fn=lambda s: 1.0 / s,
        nodes=nodes,
        max_nodes=max_nodes,
        atol=1e-13,
        rtol=1e-11,
    )


def _geometric_edges(cutoff: float) -> list[float]:
    edges = [0.0, 0.5]
    while edges[-1] < cutoff:
        edges.append(min(2 * edges[-1], cutoff))
    return edges


def gamma_coeff(params: MomParams, config: CfkrsConfig = CfkrsConfig()) -> GammaEstimate:
    """gamma_{k,beta} with an uncertainty estimate (k <= 2)."""
    k, e = params.k, params.exponent
    scale = 2.0**-e
    if params.n > MAX_DIRECT_K_BETA:
        raise DomainError(f"gamma_coeff needs k*beta <= {MAX_DIRECT_K_BETA}")
    if k == 1:
        res = scaling_integrand(params, [])
        val = float(_check_real(res.value, config.imag_tol, "gamma_coeff"))
        return GammaEstimate(scale * val, scale * res.error, "scaling-limit")
    if k > 2:
        raise DomainError("gamma_coeff supports k <= 2")
    # Phi is even in delta and decays like delta^-2
    x, w = gauss_legendre(config.gamma_order)
    edges = _geometric_edges(config.gamma_cutoff)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes += list(0.5 * (a + b) + 0.5 * (b - a) * x)
        weights += list(0.5 * (b - a) * w)
    ends = [0.5 * config.gamma_cutoff, config.gamma_cutoff]
    results = _pmap(lambda dl: scaling_integrand(params, [dl]), nodes + ends, config)
    vals = np.array([complex(r.value) for r in results])
    errs = np.array([r.error for r in results])
    vals_real = _check_real(vals, config.imag_tol, "gamma_coeff")
    body = vals_real[: len(nodes)]
    weights = np.array(weights)
    nodes_arr = np.array(nodes)
    full = float(np.sum(weights * body)) + vals_real[-1] * ends[1]
    half_mask = nodes_arr <= ends[0]
    half = float(np.sum(weights[half_mask] * body[half_mask])) + vals_real[-2] * ends[0]
    # tail model f(L) L has an O(1/L^2) error; the half-cutoff value bounds it
    unc = abs(full - half) + float(np.sum(weights * errs[: len(nodes)]))
    return GammaEstimate(scale * 2.0 * full, scale * 2.0 * unc, "scaling-limit")


def leading_prediction(params: MomParams, T: float, config: CfkrsConfig = CfkrsConfig(), gamma: GammaEstimate | None = None) -> float:
    """alpha * gamma * log(T / 2 pi)^(k^2 beta^2 - k + 1)."""
    if gamma is None:
        gamma = gamma_coeff(params, config)
    alpha = a_zero(params.k, params.beta, config.prime_cutoff).value.real
    return alpha * gamma.value * math.log(T / (2 * math.pi)) ** params.exponent


# ---------------------------------------------------------------------------
# averaged moment


def _t_average_kernel(X: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    X = np.asarray(X, dtype=float)

    def kernel(S):
        S = np.asarray(S)
        return np.exp(-0.5 * X.reshape((-1,) + (1,) * S.ndim) * S) / (1.0 - 0.5 * S)

    return kernel


def _h_nodes(params: MomParams, config: CfkrsConfig, order: int) -> tuple[list[tuple[float, ...]], np.ndarray]:
    """Shift vectors and weights for int_{[0,1]^k} F(h) dh, F depending on gaps only.

    With sorted shifts, k! * int_{u >= 0, sum u <= 1} (1 - sum u) F(u) du.
    """
    if params.k == 1:
        return [(0.0,)], np.array([1.0])
    if params.k > 2:
        raise DomainError("mom_p supports k <= 2")
    x, w = gauss_legendre(order)
    edges = config.h_panel_edges
    hs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        for xi, wi in zip(x, w):
            u = 0.5 * (a + b) + 0.5 * (b - a) * xi
            hs.append((0.0, float(u)))
            ws.append(2.0 * (1.0 - u) * 0.5 * (b - a) * wi)
    return hs, np.array(ws)


def _mom_values(params: MomParams, X: np.ndarray, config: CfkrsConfig, order: int) -> tuple[np.ndarray, float, int]:
    hs, ws = _h_nodes(params, config, order)
    euler = _euler_grid(params.n, config.exact_prime_limit, config.prime_cutoff) if params.n > 1 else None
    kernel = _t_average_kernel(X)
    rho = min(config.cluster_radius, 4.0 * params.beta / max(float(np.max(X)), 1.0))

    def one(h):
        return _engine(
            params.n,
            params.beta,
            h,
            kernel,
            rho,
            euler=euler,
            zeta_fn=zeta_one_plus,
            nodes=max(8, config.contour_nodes // 2),
            max_nodes=config.max_nodes,
            atol=config.contour_atol,
            rtol=config.moment_contour_rtol,
        )

    results = _pmap(one, hs, config)
    vals = np.stack([np.asarray(r.value).reshape(-1) for r in results])
    vals = _check_real(vals, config.imag_tol, "mom_p")
    err = float(np.sum(ws * np.array([r.error for r in results])))
    return ws @ vals, err, len(hs)


def mom_p(params: MomParams, T: float | Sequence[float], config: CfkrsConfig = CfkrsConfig()):
    """(1/T) int_{[0,1]^k} int_0^T P_{k,beta}(log(t/2 pi); h) dt dh.

    Accepts one T or a sequence (one shared pass over the h-nodes). The
    uncertainty combines the contour refinement deltas and the change under
    a higher-order h-rule.
    """
    from .empirical import MomentEstimate

    scalar = np.ndim(T) == 0
    Ts = np.atleast_1d(np.asarray(T, dtype=float))
    if np.any(Ts < 100):
        raise DomainError("T must be >= 100")
    if params.n > MAX_DIRECT_K_BETA:
        raise DomainError(f"mom_p needs k*beta <= {MAX_DIRECT_K_BETA}")
    X = np.log(Ts / (2 * math.pi))
    vals, err, count = _mom_values(params, X, config, config.h_order)
    if params.k > 1:
        finer, err2, count2 = _mom_values(params, X, config, config.h_order + 4)
        unc = np.abs(finer - vals) + err + err2
        vals, count = finer, count + count2
    else:
        unc = np.full(vals.shape, err)
    out = [
        MomentEstimate(
            value=float(v),
            stderr=None,
            samples=count,
            method="cfkrs-direct-exact-t",
            seed=None,
            params=params,
            T=float(t),
            uncertainty=float(u),
        )
        for v, u, t in zip(vals, unc, Ts)
    ]
    return out[0] if scalar else out
