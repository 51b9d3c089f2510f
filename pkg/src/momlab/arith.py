"""The arithmetic factor A_n(z) of the shifted-moment recipe (n = k*beta).

Two local-factor formulas are provided (the theta-integral definition and the
closed rational form); they are checked against each other in the tests.
Global Euler products are truncated at a prime cutoff and carry a tail bound.

Tail bound. Writing x_j = p^(-1/2 - z_j), y_j = p^(-1/2 + z_{n+j}), the
Cauchy identity gives A_p = 1 - e2(x) e2(y) + O(p^-3), so
|log A_p| <= C(n) p^(-2 + 4 eps) for p > 100 with eps = max |Re z_j| and
C(n) = 2 binom(n, 2)^2 (the factor 2 absorbs the cubic and higher terms).
Summing over p > P with pi(x) < 1.26 x / log x gives

    tail_bound = exp(C(n) * 1.26 P^(1-s) / ((s-1) log P)) - 1,  s = 2 - 4 eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .specfun import DomainError, primes_up_to

DEFAULT_PRIME_CUTOFF = 100_000
COINCIDENCE_THRESHOLD = 1e-4


class NearCoincidence(ValueError):
    """Second-half shifts too close for the rational local-factor formula."""


@dataclass(frozen=True)
class EulerProductResult:
    value: complex
    prime_cutoff: int
    tail_bound: float


def _split(z: Sequence[complex]) -> tuple[np.ndarray, np.ndarray, int]:
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1 or z.size % 2 or z.size == 0:
        raise ValueError("z must hold 2n entries")
    n = z.size // 2
    return z[:n], z[n:], n


def tail_constant(n: int) -> float:
    return 2.0 * math.comb(n, 2) ** 2


def tail_bound(n: int, prime_cutoff: int, eps: float = 0.0) -> float:
    """Bound on |prod_{p > cutoff} A_p - 1| (see the module docstring)."""
    c = tail_constant(n)
    if c == 0:
        return 0.0
    s = 2.0 - 4.0 * eps
    if s <= 1.0:
        return math.inf
    log_p = math.log(prime_cutoff)
    tail_sum = 1.26 * prime_cutoff ** (1.0 - s) / ((s - 1.0) * log_p)
    return math.expm1(c * tail_sum)


def a_local_def(p: int, z: Sequence[complex], theta_nodes: int = 128) -> complex:
    """Local factor from the definition: double product times theta-integral.

    The theta-integrand is a smooth periodic function, so the trapezoid rule
    converges geometrically (aliasing error ~ |p^(-1/2 + eps)|^theta_nodes).
    """
    first, second, n = _split(z)
    if theta_nodes < 32:
        raise ValueError("theta_nodes must be >= 32")
    lp = math.log(p)
    x = np.exp(-(0.5 + first) * lp)
    y = np.exp(-(0.5 - second) * lp)
    if np.any(np.abs(x) >= 1) or np.any(np.abs(y) >= 1):
        raise DomainError("geometric factors not inside the unit disc")
    pre = np.prod(1.0 - np.outer(x, y))  # p^(z_m - z_l - 1) = x_l y_m
    theta = np.arange(theta_nodes) / theta_nodes
    e = np.exp(2j * np.pi * theta)
    integrand = np.prod(1.0 / (1.0 - np.outer(e, x)), axis=1) * np.prod(
        1.0 / (1.0 - np.outer(np.conj(e), y)), axis=1
    )
    return complex(pre * integrand.mean())


def _alt_sum(p: float, first, second):
    """Closed form sum over m of prod_{n != m} (...) / (1 - p^(z_{n+n'} - z_{n+m})).

    ``first`` and ``second`` are lists of broadcastable arrays.
    """
    lp = math.log(p)
    n = len(first)
    X = [np.exp(-zj * lp) for zj in first]
    Y = [np.exp(zj * lp) for zj in second]
    total = 0
    for m in range(n):
        term = 1
        for nn in range(n):
            if nn == m:
                continue
            num = 1
            for j in range(n):
                num = num * (1.0 - X[j] * Y[nn] / p)
            term = term * num / (1.0 - Y[nn] / Y[m])
        total = total + term
    return total


def a_local_alt(p: int, z: Sequence[complex]) -> complex:
    """Local factor from the closed rational form."""
    first, second, n = _split(z)
    if n > 1:
        gaps = np.abs(second[:, None] - second[None, :])[~np.eye(n, dtype=bool)]
        if np.min(gaps) < COINCIDENCE_THRESHOLD:
            raise NearCoincidence("second-half shifts nearly coincide; use a_local_def")
    return complex(_alt_sum(float(p), list(first), list(second)))


def a_local(p: int, z: Sequence[complex]) -> complex:
    try:
        return a_local_alt(p, z)
    except NearCoincidence:
        return a_local_def(p, z)


def _check_k_beta(k: int, beta: int, z) -> int:
    n = k * beta
    if z is not None and len(z) != 2 * n:
        raise ValueError(f"expected {2 * n} shifts, got {len(z)}")
    return n


def a_global(k: int, beta: int, z: Sequence[complex], prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> EulerProductResult:
    """Truncated Euler product of A_{k beta}(z) over p <= prime_cutoff."""
    if prime_cutoff < 100:
        raise ValueError("prime_cutoff must be >= 100")
    n = _check_k_beta(k, beta, z)
    z = np.asarray(z, dtype=complex)
    eps = float(np.max(np.abs(z.real)))
    if eps >= 0.25:
        raise DomainError("need |Re z_j| < 1/4")
    if n == 1:
        return EulerProductResult(1.0 + 0.0j, prime_cutoff, 0.0)
    primes = primes_up_to(prime_cutoff).primes
    first, second = z[:n], z[n:]
    gaps = np.abs(second[:, None] - second[None, :])[~np.eye(n, dtype=bool)]
    if np.min(gaps) >= COINCIDENCE_THRESHOLD:
        pcol = primes.astype(float)
        vals = _alt_sum_vector(pcol, first, second)
    else:
        vals = np.array([a_local_def(int(p), z) for p in primes])
    value = complex(np.exp(np.sum(np.log(vals))))
    return EulerProductResult(value, prime_cutoff, tail_bound(n, prime_cutoff, eps))


def _alt_sum_vector(primes: np.ndarray, first, second) -> np.ndarray:
    lp = np.log(primes)[:, None]
    X = np.exp(-np.asarray(first)[None, :] * lp)
    Y = np.exp(np.asarray(second)[None, :] * lp)
    p = primes[:, None]
    n = len(first)
    total = np.zeros(len(primes), dtype=complex)
    for m in range(n):
        term = np.ones(len(primes), dtype=complex)
        for nn in range(n):
            if nn == m:
                continue
            num = np.prod(1.0 - X * Y[:, nn:nn + 1] / p, axis=1)
            term *= num / (1.0 - Y[:, nn] / Y[:, m])
        total += term
    return total


def a_zero(k: int, beta: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> EulerProductResult:
    """alpha_{k,beta} = A_{k beta}(0, ..., 0) from its closed local form."""
    if prime_cutoff < 100:
        raise ValueError("prime_cutoff must be >= 100")
    n = k * beta
    if n == 1:
        return EulerProductResult(1.0 + 0.0j, prime_cutoff, 0.0)
    p = primes_up_to(prime_cutoff).primes.astype(float)
    poly = sum(math.comb(n - 1, m) ** 2 * p ** (-m) for m in range(n))
    logs = (n - 1) ** 2 * np.log1p(-1.0 / p) + np.log(poly)
    return EulerProductResult(complex(math.exp(np.sum(logs))), prime_cutoff, tail_bound(n, prime_cutoff))


@lru_cache(maxsize=8)
def _prime_block(lo: int, hi: int) -> np.ndarray:
    p = primes_up_to(hi).primes
    return p[p > lo].astype(float)


class EulerGrid:
    """A_n(z) on large node grids, for use inside contour integrands.

    Primes up to ``exact_limit`` use the closed local form exactly. For
    larger primes only the leading term -e2(x) e2(y) of log A_p is kept; its
    prime sum is a combination of sum_p p^(-2 + w) over shifts w, evaluated
    by a Taylor expansion in w about the contour centres (moments of log p
    precomputed once per centre) plus an integral estimate beyond
    ``tail_limit``. The neglected O(p^-3) terms are below 1e-6 for
    exact_limit = 200 and |Re z| <= 0.1.
    """

    def __init__(self, n: int, exact_limit: int = 200, tail_limit: int = DEFAULT_PRIME_CUTOFF):
        self.n = n
        self.exact_primes = primes_up_to(exact_limit).primes.astype(float)
        self.tail_primes = _prime_block(exact_limit, tail_limit)
        self.tail_limit = tail_limit
        self._log_tail = np.log(self.tail_primes)
        self._moment_cache: dict[tuple[complex, int], np.ndarray] = {}

    def _moments(self, w0: complex, terms: int) -> np.ndarray:
        key = (complex(round(w0.real, 12), round(w0.imag, 12)), terms)
        hit = self._moment_cache.get(key)
        if hit is not None:
            return hit
        base = np.exp((-2.0 + w0) * self._log_tail)
        out = np.empty(terms, dtype=complex)
        powr = base.copy()
        for r in range(terms):
            out[r] = powr.sum() / math.factorial(r)
            powr = powr * self._log_tail
        self._moment_cache[key] = out
        return out

    def __call__(self, zs: Sequence[np.ndarray], centers: Sequence[complex]) -> np.ndarray:
        n = self.n
        if n == 1:
            return np.ones(np.broadcast_shapes(*(np.shape(z) for z in zs)), dtype=complex)
        first, second = list(zs[:n]), list(zs[n:])
        value = 1
        for p in self.exact_primes:
            value = value * _alt_sum(p, first, second)
        log_tail = 0
        log_l = math.log(self.tail_limit)
        for i in range(n):
            for j in range(i + 1, n):
                for a in range(n):
                    for b in range(a + 1, n):
                        w = -(zs[i] + zs[j]) + (zs[n + a] + zs[n + b])
                        w0 = -(centers[i] + centers[j]) + (centers[n + a] + centers[n + b])
                        eps = w - w0
                        reach = float(np.max(np.abs(eps))) * math.log(self.tail_limit)
                        terms = _taylor_terms(reach)
                        mom = self._moments(complex(w0), terms)
                        acc = 0
                        for c in mom[::-1]:
                            acc = acc * eps + c
                        far = self.tail_limit ** (-1.0 + w) / ((1.0 - w) * log_l)
                        log_tail = log_tail + acc + far
        return value * np.exp(-log_tail)


def _taylor_terms(reach: float) -> int:
    # smallest R with reach^R / R! < 1e-16 (and at least 8)
    r, term = 0, 1.0
    while term > 1e-16 or r < 8:
        r += 1
        term *= reach / r
        if r > 200:
            raise DomainError("Taylor expansion of the prime tail does not converge; contours too wide")
    return r + 1
