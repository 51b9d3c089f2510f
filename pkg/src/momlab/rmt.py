"""Haar-random matrices from U(N), SO(2N) and Sp(2N), and moments of moments
of their characteristic polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cfkrs import MomParams
from .empirical import MomentEstimate
from .quad import NonConvergence, parallel_map

GROUPS = ("unitary", "special_orthogonal_even", "symplectic")
MAX_N = 512


@dataclass(frozen=True)
class HaarSample:
    group: str
    phases: np.ndarray  # N phases; for the real/quaternionic groups the nonnegative member of each pair
    N: int

    def all_phases(self) -> np.ndarray:
        if self.group == "unitary":
            return self.phases
        return np.concatenate([self.phases, -self.phases])


def _rng(key) -> np.random.Generator:
    if isinstance(key, np.random.Generator):
        return key
    if isinstance(key, (tuple, list)):
        return np.random.default_rng([int(v) for v in key])
    return np.random.default_rng(int(key))


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))[None, :]


def _haar_so_even(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((2 * n, 2 * n))
    q, r = np.linalg.qr(z)
    q = q * np.sign(np.diagonal(r))[None, :]
    if np.linalg.det(q) < 0:
        q[[0, 1]] = q[[1, 0]]
    return q


def _haar_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    """Quaternionic Gram-Schmidt on a quaternionic Gaussian matrix.

    Columns come in pairs (v, J conj(v)) with J = [[0, -I], [I, 0]]; keeping
    that pairing during orthonormalization lands in Sp(2N) = USp(2N).
    """

    def partner(v):
        return np.concatenate([-np.conj(v[n:]), np.conj(v[:n])])

    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    b = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    cols = np.vstack([a, b])
    q = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        v = cols[:, j].copy()
        for _ in range(2):  # second pass for numerical orthogonality
            basis = q[:, : 2 * j]
            v = v - basis @ (basis.conj().T @ v)
        v = v / np.linalg.norm(v)
        q[:, 2 * j] = v
        q[:, 2 * j + 1] = partner(v)
    # reorder columns into the (first block, second block) layout
    return np.hstack([q[:, 0::2], q[:, 1::2]])


def _fold_pairs(angles: np.ndarray, n: int) -> np.ndarray:
    """Fold 2N angles (in +- pairs) to N representatives in [0, pi]."""
    mags = np.sort(np.abs(angles))
    first, second = mags[0::2], mags[1::2]
    if np.max(np.abs(first - second)) > 1e-8:
        raise ArithmeticError("eigenphases failed the +- pairing check")
    return 0.5 * (first + second)


def sample_haar(group: str, N: int, rng_key) -> HaarSample:
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}")
    if not 1 <= N <= MAX_N:
        raise ValueError(f"N must lie in [1, {MAX_N}]")
    rng = _rng(rng_key)
    if group == "unitary":
        m = _haar_unitary(N, rng)
        phases = np.mod(np.angle(np.linalg.eigvals(m)), 2 * np.pi)
        return HaarSample(group, phases, N)
    m = _haar_so_even(N, rng) if group == "special_orthogonal_even" else _haar_symplectic(N, rng)
    phases = _fold_pairs(np.angle(np.linalg.eigvals(m)), N)
    return HaarSample(group, phases, N)


def char_poly_abs2beta(sample: HaarSample, theta, beta: int):
    """|det(I - A e^{-i theta})|^(2 beta) from the eigenphases."""
    theta = np.asarray(theta, dtype=float)
    phi = sample.all_phases()
    vals = np.prod(2.0 - 2.0 * np.cos(phi[None, :] - theta.reshape(-1, 1)), axis=1) ** beta
    return vals.reshape(theta.shape) if theta.ndim else float(vals[0])


def default_nodes(sample: HaarSample, beta: int) -> int:
    # the integrand is a trigonometric polynomial of degree beta * (number of phases)
    degree = beta * sample.all_phases().size
    need = max(32 * sample.N, degree + 1)
    return 1 << (need - 1).bit_length()


def window_moment_rmt(sample: HaarSample, beta: int, nodes: int | None = None, rtol: float = 1e-8) -> float:
    """(1/2 pi) int_0^{2 pi} |P(theta)|^(2 beta) d theta by the trapezoid rule."""
    if nodes is None:
        nodes = default_nodes(sample, beta)
    if nodes < 32 * sample.N:
        raise ValueError("nodes must be >= 32 N")
    theta = 2 * np.pi * np.arange(2 * nodes) / (2 * nodes)
    vals = char_poly_abs2beta(sample, theta, beta)
    coarse = float(np.mean(vals[0::2]))
    fine = float(np.mean(vals))
    if abs(fine - coarse) > rtol * abs(fine):
        raise NonConvergence("trapezoid rule did not settle under node doubling")
    return fine


def mom_group(
    group: str,
    N: int,
    params: MomParams,
    n_samples: int,
    seed: int,
    workers: int | None = None,
) -> MomentEstimate:
    """Monte Carlo mean over Haar samples of window_moment_rmt^k."""
    if n_samples < 2:
        raise ValueError("need at least 2 samples")

    def one(i: int) -> float:
        s = sample_haar(group, N, (seed, i))
        return window_moment_rmt(s, params.beta) ** params.k

    y = np.array(parallel_map(one, range(n_samples), workers))
    return MomentEstimate(
        value=float(np.mean(y)),
        stderr=float(np.std(y, ddof=1) / math.sqrt(n_samples)),
        samples=n_samples,
        method=f"haar-monte-carlo-{group}",
        seed=seed,
        params=params,
        T=float(N),
    )


def ks_exact(N: int, beta: int | float) -> float:
    """prod_{j=1}^N Gamma(j) Gamma(j + 2 beta) / Gamma(j + beta)^2.

    For integer beta each factor is the rational prod_i (j + beta + i)/(j + i)
    and the product is accumulated exactly; otherwise log-Gamma sums are used.
    """
    if not 1 <= N <= 1000:
        raise ValueError("N must lie in [1, 1000]")
    if not 0 <= beta <= 6:
        raise ValueError("beta must lie in [0, 6]")
    if float(beta).is_integer():
        b = int(beta)
        num, den = 1, 1
        for j in range(1, N + 1):
            for i in range(b):
                num *= j + b + i
                den *= j + i
        return float(Fraction(num, den))
    log_val = math.fsum(
        math.lgamma(j) + math.lgamma(j + 2 * beta) - 2.0 * math.lgamma(j + beta) for j in range(1, N + 1)
    )
    return math.exp(log_val)
