"""Quadrature engines: tensor products of circular contours, composite
Gauss-Legendre panels, and truncated half-line integrals with algebraic tails.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

MAX_DIM = 8


def worker_count(requested: int | None = None) -> int:
    """Worker cap: explicit value, else MOMLAB_THREADS, else 1."""
    if requested is not None:
        return max(1, int(requested))
    try:
        return max(1, int(os.environ.get("MOMLAB_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items, workers: int | None = None) -> list:
    """Ordered map over a thread pool; results come back in input order."""
    items = list(items)
    w = worker_count(workers)
    if w == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items))


class BudgetExhausted(RuntimeError):
    """Node doubling hit the budget before the tolerance was met."""

    def __init__(self, message: str, last_values: tuple[complex, complex]):
        super().__init__(message)
        self.last_values = last_values


class NonConvergence(ValueError):
    pass


@dataclass(frozen=True)
class Contour:
    center: complex
    radius: float
    nodes: int = 16

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("contour radius must be positive")
        if self.nodes < 8 or self.nodes & (self.nodes - 1):
            raise ValueError("node count must be a power of two >= 8")

    def points(self, nodes: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Nodes z_j and weights dz_j for the trapezoid rule on the circle."""
        m = nodes or self.nodes
        theta = 2.0 * np.pi * np.arange(m) / m
        e = np.exp(1j * theta)
        z = self.center + self.radius * e
        w = 1j * self.radius * e * (2.0 * np.pi / m)
        return z, w


@dataclass
class ContourFamily:
    contours: list[Contour] = field(default_factory=list)

    def __post_init__(self):
        if len(self.contours) > MAX_DIM:
            raise ValueError(f"at most {MAX_DIM} tensor contours are supported")
        seen: dict[complex, set[float]] = {}
        for c in self.contours:
            radii = seen.setdefault(complex(c.center), set())
            if c.radius in radii:
                raise ValueError("contours sharing a center need distinct radii")
            radii.add(c.radius)

    @classmethod
    def around(cls, center: complex, base_radius: float, count: int, nodes: int = 16) -> "ContourFamily":
        """`count` circles about one center with radii r0 (1 + m/100)."""
        return cls([Contour(center, base_radius * (1 + 0.01 * m), nodes) for m in range(count)])

    def __len__(self) -> int:
        return len(self.contours)


@dataclass(frozen=True)
class QuadResult:
    value: complex | np.ndarray
    refinement_delta: float
    node_budget: int


def _tensor_sum(f, family: ContourFamily, nodes: int):
    """Trapezoid tensor sum; ``f`` may return extra leading axes (kept)."""
    d = len(family)
    pts = [c.points(nodes) for c in family.contours]
    # chunk over the leading axis so that at most ~2M points live at once
    per_slice = nodes ** (d - 1)
    step = max(1, 2_000_000 // max(per_slice, 1))
    total = 0.0 + 0.0j
    grids_rest = []
    for j in range(1, d):
        shape = [1] * d
        shape[j] = nodes
        grids_rest.append((pts[j][0].reshape(shape), pts[j][1].reshape(shape)))
    axes = tuple(range(-d, 0))
    for lo in range(0, nodes, step):
        shape0 = [1] * d
        shape0[0] = -1
        z0 = pts[0][0][lo:lo + step].reshape(shape0)
        w0 = pts[0][1][lo:lo + step].reshape(shape0)
        zs = [z0] + [g[0] for g in grids_rest]
        weight = w0
        for g in grids_rest:
            weight = weight * g[1]
        total = total + np.sum(np.asarray(f(*zs)) * weight, axis=axes)
    return total


def contour_integral(
    f: Callable[..., np.ndarray],
    family: ContourFamily,
    tol: float = 1e-10,
    max_nodes: int = 128,
    min_doublings: int = 1,
    rtol: float = 0.0,
) -> QuadResult:
    """Tensor trapezoid rule for a d-fold contour integral.

    ``f`` receives d broadcastable arrays of nodes (one per contour) and must
    return the integrand values, optionally with extra leading axes (for
    several integrands sharing one grid; the value is then an array). All contours use the same node count, taken
    from the first contour and doubled until successive values differ by at
    most ``max(tol, rtol * |value|)``.
    """
    if len(family) == 0:
        v = complex(f())
        return QuadResult(v, 0.0, 1)
    nodes = family.contours[0].nodes
    prev = _tensor_sum(f, family, nodes)
    doublings = 0
    while True:
        if nodes * 2 > max_nodes:
            raise BudgetExhausted(
                f"contour quadrature did not reach tol={tol:g} within {max_nodes} nodes",
                (prev, prev),
            )
        nodes *= 2
        cur = _tensor_sum(f, family, nodes)
        doublings += 1
        delta = float(np.max(np.abs(cur - prev)))
        if delta <= max(tol, rtol * float(np.max(np.abs(cur)))) and doublings >= min_doublings:
            return QuadResult(cur, delta, nodes)
        if nodes * 2 > max_nodes:
            raise BudgetExhausted(
                f"contour quadrature did not reach tol={tol:g} within {max_nodes} nodes "
                f"(last delta {delta:.3g})",
                (prev, cur),
            )
        prev = cur


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(a: float, b: float, panel_width: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Gauss-Legendre on [a, b]."""
    if not a < b:
        raise ValueError("need a < b")
    n_panels = max(1, math.ceil((b - a) / panel_width - 1e-12))
    edges = np.linspace(a, b, n_panels + 1)
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def gl_panel_integral(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    panel_width: float,
    order: int = 16,
):
    """Composite Gauss-Legendre with fixed panel width (vectorised f)."""
    if order not in (8, 16, 32):
        raise ValueError("order must be 8, 16 or 32")
    x, w = panel_nodes(a, b, panel_width, order)
    return np.sum(np.asarray(f(x)) * w)


@dataclass(frozen=True)
class HalflineResult:
    value: complex
    refinement_delta: float
    tail_correction: complex


def oscillatory_halfline_integral(
    f: Callable[..., np.ndarray],
    dim: int,
    decay_degree: int,
    cutoff: float = 200.0,
    tolerance: float = 1e-6,
    panel_width: float = 0.5,
    order: int = 16,
    frequencies: Sequence[float] | None = None,
) -> HalflineResult:
    """Integral of f over [0, inf)^dim for algebraically decaying f.

    The box [0, cutoff]^dim is done by composite Gauss-Legendre. In one
    dimension the tail beyond the cutoff is estimated from the endpoint value:
    ``f(L) L / (p - 1)`` for a non-oscillating integrand of decay degree p,
    ``i f(L) / w`` for one carrying exp(i w delta). In more dimensions the
    tail is not corrected; the bound ``cutoff^(dim - decay_degree)`` scaled by
    the integrand size at the cutoff is reported instead.
    """
    if dim == 0:
        return HalflineResult(complex(f()), 0.0, 0.0)
    if decay_degree < 2:
        raise NonConvergence("decay degree < 2: the half-line integral need not converge")
    x, w = panel_nodes(0.0, cutoff, panel_width, order)
    if dim == 1:
        body = complex(np.sum(np.asarray(f(x)) * w))
        f_end = complex(np.asarray(f(np.array([cutoff])))[0])
        freq = 0.0 if not frequencies else float(frequencies[0])
        if abs(freq) > 1e-12:
            tail = 1j * f_end / freq
        else:
            tail = f_end * cutoff / (decay_degree - 1)
        # the tail estimate is good to a relative O(1/L); report that much
        delta = abs(tail) * (decay_degree + 1) / cutoff + abs(tail) * 1e-3
        return HalflineResult(body + tail, max(delta, 0.0), tail)
    grids = []
    for j in range(dim):
        shape = [1] * dim
        shape[j] = -1
        grids.append(x.reshape(shape))
    weight = w.reshape([-1] + [1] * (dim - 1))
    for j in range(1, dim):
        shape = [1] * dim
        shape[j] = -1
        weight = weight * w.reshape(shape)
    body = complex(np.sum(np.asarray(f(*grids)) * weight))
    edge = np.full(dim, cutoff)
    f_end = abs(complex(np.asarray(f(*[np.array([e]) for e in edge])).ravel()[0]))
    bound = f_end * cutoff**dim / max(decay_degree - dim, 1)
    return HalflineResult(body, bound, 0.0)
