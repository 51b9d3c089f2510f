"""Complex special functions and prime tables.

Everything here is plain numpy; functions that the contour engines call on
large node grids accept arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Godfrey/Lanczos coefficients, g = 671/128, 15 terms.
_LANCZOS_G_HALF = 5.24218750000000000
_LANCZOS = (
    0.999999999999997092,
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005024

# Stieltjes constants s_0..s_19, generated by scripts/gen_stieltjes.py.
STIELTJES = (
    5.772156649015328606065e-1,
    -7.281584548367672486059e-2,
    -9.69036319287231848453e-3,
    2.05383442030334586616e-3,
    2.325370065467300057468e-3,
    7.933238173010627017533e-4,
    -2.387693454301996098724e-4,
    -5.272895670577510460741e-4,
    -3.521233538030395096021e-4,
    -3.439477441808804817791e-5,
    2.053328149090647946837e-4,
    2.701844395439035266729e-4,
    1.672729121051401933535e-4,
    -2.746380660376015886001e-5,
    -2.092092620592999458371e-4,
    -2.834686553202414466429e-4,
    -1.996968583089697747078e-4,
    2.627703710991833669947e-5,
    3.073684081492528265928e-4,
    5.036054530473556290556e-4,
)
EULER_GAMMA = STIELTJES[0]
# Laurent coefficients of zeta(1+s) - 1/s.
_LAURENT = tuple((-1) ** j * STIELTJES[j] / math.factorial(j) for j in range(len(STIELTJES)))

# B_2, B_4, ..., B_40
_BERNOULLI_EVEN = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
    43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730, 8553103 / 6,
    -23749461029 / 870, 8615841276005 / 14322, -7709321041217 / 510,
    2577687858367 / 6, -26315271553053477373 / 1919190, 2929993913841559 / 6,
    -261082718496449122051 / 13530,
)

ZETA_PRIME_MINUS_ONE = -0.16542114370045092921
T_MAX_DEFAULT = 5.0e4
PRIME_LIMIT_MAX = 10**8


class PoleError(ValueError):
    """Argument sits on a pole of the requested function."""


class DomainError(ValueError):
    """Argument outside the supported domain."""


def _is_nonpositive_integer(z) -> np.ndarray:
    z = np.asarray(z)
    return (np.imag(z) == 0) & (np.real(z) <= 0) & (np.real(z) == np.round(np.real(z)))


def _loggamma_right(z):
    # valid for Re z >= 1/2
    z = np.asarray(z, dtype=complex)
    tmp = z + _LANCZOS_G_HALF
    tmp = (z + 0.5) * np.log(tmp) - tmp
    ser = np.full_like(z, _LANCZOS[0])
    for j, c in enumerate(_LANCZOS[1:], start=1):
        ser = ser + c / (z + j)
    return tmp + np.log(_SQRT_2PI * ser / z)


def loggamma(z):
    """Principal-branch-agnostic log Gamma (exp of it is exact Gamma).

    Only ``exp(loggamma(z))`` is guaranteed; the imaginary part may differ
    from the principal branch by a multiple of 2*pi for Re z < 1/2.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(_is_nonpositive_integer(z)):
        raise PoleError("Gamma has a pole at non-positive integers")
    left = np.real(z) < 0.5
    out = np.empty_like(z)
    zr = np.where(left, 1.0 - z, z)
    lg = _loggamma_right(zr)
    out[~left] = lg[~left]
    if np.any(left):
        zl = z[left]
        out[left] = np.log(np.pi / np.sin(np.pi * zl)) - lg[left]
    return out if out.ndim else out[()]


def complex_gamma(z):
    """Gamma(z) for complex z, about 14-15 significant digits for |z| <= 50."""
    return np.exp(loggamma(z))


def barnes_g(z: float) -> float:
    """Barnes G-function for real z >= 1.

    Shifts the argument up to at least 21, evaluates the asymptotic series
    for log G there and recurses down with G(z+1) = Gamma(z) G(z).
    """
    z = float(z)
    if z < 1:
        raise DomainError("barnes_g supports z >= 1 only")
    n = max(0, math.ceil(21.0 - z))
    w = z + n - 1.0  # G(1 + w) at the base point
    log_g = (
        0.5 * w * w * math.log(w)
        - 0.75 * w * w
        + 0.5 * w * math.log(2 * math.pi)
        - math.log(w) / 12.0
        + ZETA_PRIME_MINUS_ONE
    )
    for k in range(1, 10):
        log_g += _BERNOULLI_EVEN[k] / (4 * k * (k + 1) * w ** (2 * k))
    for j in range(n):
        log_g -= math.lgamma(z + j)
    return math.exp(log_g)


def fk_coefficient(beta: int) -> float:
    """Keating-Snaith leading coefficient G(1+beta)^2 / G(1+2 beta)."""
    if beta < 1:
        raise DomainError("beta must be >= 1")
    return barnes_g(1 + beta) ** 2 / barnes_g(1 + 2 * beta)


def _em_zeta(s, n_main, n_corr: int):
    """Euler-Maclaurin zeta for an array of s sharing the main-sum length."""
    s = np.asarray(s, dtype=complex)
    n_main = int(n_main)
    out = np.zeros(s.shape, dtype=complex)
    flat_s = s.reshape(-1)
    flat_out = out.reshape(-1)
    logn = np.log(np.arange(1, n_main, dtype=float))
    chunk = max(1, 2_000_000 // max(1, n_main))
    for lo in range(0, flat_s.size, chunk):
        ss = flat_s[lo:lo + chunk]
        flat_out[lo:lo + chunk] = np.exp(-np.outer(ss, logn)).sum(axis=1)
    N = float(n_main)
    out = out + N ** (1 - s) / (s - 1) + 0.5 * N ** (-s)
    term = s * N ** (-s - 1)  # s N^{-s-1}, rising factorial built incrementally
    fact = 2.0
    for k in range(1, n_corr + 1):
        out = out + _BERNOULLI_EVEN[k - 1] / fact * term
        term = term * (s + 2 * k - 1) * (s + 2 * k) / (N * N)
        fact *= (2 * k + 1) * (2 * k + 2)
    return out


def zeta_main_length(t: float) -> int:
    """Main-sum length used on the critical line at height t."""
    return int(math.ceil(0.5 * (1.0 + abs(t)))) + 10


def zeta_critical(t, t_max: float = T_MAX_DEFAULT):
    """zeta(1/2 + i t) by Euler-Maclaurin summation.

    Main sum length N = ceil((1+|t|)/2) + 10 and 12 Bernoulli corrections,
    so |s|/(2 pi N) <= 1/pi and the remainder is below 1e-10.
    Accepts scalars or arrays; arrays are grouped by a common N.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > t_max):
        raise DomainError(f"|t| exceeds the configured ceiling {t_max}")
    flat = t_arr.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    if flat.size:
        # bucket by main-sum length to keep the outer product dense
        lengths = np.array([zeta_main_length(x) for x in flat]) if flat.size < 64 else (
            np.ceil(0.5 * (1.0 + np.abs(flat))).astype(int) + 10
        )
        bucket = 64
        keys = (lengths + bucket - 1) // bucket * bucket
        for key in np.unique(keys):
            idx = np.nonzero(keys == key)[0]
            out[idx] = _em_zeta(0.5 + 1j * flat[idx], key, 12)
    out = out.reshape(t_arr.shape)
    return out if out.ndim else complex(out)


def zeta_near_one(s):
    """zeta(1 + s) from the Laurent series at the pole, |s| <= 1/2.

    The series is entire after removing 1/s; twenty Stieltjes constants give
    better than 1e-13 well beyond |s| = 1/2, but the contract is the disc.
    """
    s = np.asarray(s, dtype=complex)
    if np.any(s == 0):
        raise PoleError("zeta has a pole at 1")
    if np.any(np.abs(s) > 0.5 + 1e-12):
        raise DomainError("zeta_near_one is only valid for |s| <= 1/2")
    out = _laurent(s)
    return out if out.ndim else complex(out)


def _laurent(s):
    acc = np.zeros_like(s)
    for c in reversed(_LAURENT):
        acc = acc * s + c
    return 1.0 / s + acc


def zeta_one_plus(s):
    """zeta(1 + s) for arrays of s with |Im s| <= 4.

    The Laurent series with twenty Stieltjes constants stays at machine
    precision out to |s| = 2; Euler-Maclaurin beyond that.
    """
    s = np.asarray(s, dtype=complex)
    if np.any(s == 0):
        raise PoleError("zeta has a pole at 1")
    out = np.empty_like(s)
    near = np.abs(s) <= 2.0
    out[near] = _laurent(s[near])
    if np.any(~near):
        out[~near] = _em_zeta(1.0 + s[~near], 24, 14)
    return out if out.ndim else complex(out)


def zeta(s):
    """General zeta(s) for moderate |Im s| (<= 100) away from s = 1."""
    s = np.asarray(s, dtype=complex)
    if np.any(s == 1):
        raise PoleError("zeta has a pole at 1")
    n = int(max(24, math.ceil(np.max(np.abs(s)) if s.size else 0) + 10))
    out = _em_zeta(s, n, 14)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)


def primes_up_to(limit: int, max_limit: int = PRIME_LIMIT_MAX) -> PrimeTable:
    """Sieve of Eratosthenes."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("limit must be >= 2")
    if limit > max_limit:
        raise MemoryError(f"prime limit {limit} exceeds the configured maximum {max_limit}")
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    primes = np.nonzero(sieve)[0].astype(np.int64)
    primes.setflags(write=False)
    return PrimeTable(limit, primes)
