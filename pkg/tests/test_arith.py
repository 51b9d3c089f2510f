import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momlab.arith import (
    EulerGrid,
    NearCoincidence,
    a_global,
    a_local,
    a_local_alt,
    a_local_def,
    a_zero,
    tail_bound,
)
from momlab.specfun import DomainError

SIX_OVER_PI2 = 6 / math.pi**2


def random_z(rng, n, re=0.24, im=1.0):
    return rng.uniform(-re, re, 2 * n) + 1j * rng.uniform(-im, im, 2 * n)


def test_local_examples():
    assert a_local_def(2, [0, 0]) == pytest.approx(1.0, abs=1e-12)
    assert a_local_def(3, [0, 0, 0, 0]) == pytest.approx(8 / 9, abs=1e-12)
    assert a_local_alt(3, [0, 0, 0.5j, -0.5j]) == pytest.approx(a_local_def(3, [0, 0, 0.5j, -0.5j]), rel=1e-10)


def test_local_alt_kb1_closed_form():
    for p in (2, 7, 101):
        z = [0.1 + 0.2j, -0.05 + 0.3j]
        assert a_local_alt(p, z) == pytest.approx(1.0, abs=1e-12)
        assert a_local_def(p, z) == pytest.approx(1.0, abs=1e-10)


def test_local_alt_small_example():
    z = [0.01, -0.02, 0.03j, -0.05j]
    assert abs(a_local_alt(2, z) - a_local_def(2, z)) <= 1e-9 * abs(a_local_def(2, z))


def test_local_second_order_in_one_over_p():
    z = [0.001, -0.002, 0.001j, -0.003j]
    assert abs(a_local_alt(101, z) - 1) <= 10 / 101**2


@pytest.mark.invariant
def test_local_cross_check_random():
    rng = np.random.default_rng(2024)
    for i in range(200):
        n = 1 + i % 3
        p = (2, 3, 5, 101)[i % 4]
        z = random_z(rng, n)
        a, b = a_local_def(p, z), a_local_alt(p, z)
        assert abs(a - b) <= 1e-8 * abs(b)


def test_near_coincidence_falls_back():
    z = [0.01, 0.02, 0.1j, 0.1j + 1e-6]
    with pytest.raises(NearCoincidence):
        a_local_alt(5, z)
    assert a_local(5, z) == pytest.approx(a_local_def(5, z))


@pytest.mark.invariant
@pytest.mark.parametrize("p", [2, 3, 5, 101])
def test_theta_doubling_converged(p):
    rng = np.random.default_rng(p)
    for i in range(30):
        z = random_z(rng, 1 + i % 3)
        assert abs(a_local_def(p, z, 64) - a_local_def(p, z, 128)) < 1e-12


def test_a_zero_values():
    assert a_zero(1, 1).value == 1
    assert a_zero(1, 1).tail_bound == 0.0
    res = a_zero(2, 1, 100_000)
    assert res.tail_bound <= 1e-4
    assert abs(res.value - SIX_OVER_PI2) <= res.tail_bound


def test_a_global_trivial_and_origin():
    res = a_global(1, 1, [0, 0])
    assert res.value == 1 and res.tail_bound == 0.0
    res = a_global(1, 2, [0, 0, 1e-3j, -1e-3j])
    assert abs(res.value - SIX_OVER_PI2) <= res.tail_bound + 1e-5


@pytest.mark.parametrize("k, beta", [(2, 1), (1, 2), (3, 1), (1, 3)])
def test_a_global_matches_a_zero(k, beta):
    n = k * beta
    # exact z = 0 sits on the coincidence fallback; a tiny spread keeps the closed form
    z = [0.0] * n + [1e-3j * (j - (n - 1) / 2) for j in range(n)]
    g, a = a_global(k, beta, z), a_zero(k, beta)
    assert abs(g.value - a.value) <= g.tail_bound + a.tail_bound + 2e-3 * n


def test_a_global_exact_origin_fallback():
    g, a = a_global(2, 1, [0, 0, 0, 0], 1000), a_zero(2, 1, 1000)
    assert abs(g.value - a.value) <= 1e-10


def test_conjugation_symmetry():
    z = np.array([0.05 + 0.3j, -0.02 - 0.1j, 0.01 + 0.7j, 0.03 - 0.4j])
    a = a_global(2, 1, z, 10_000).value
    b = a_global(2, 1, np.conj(z), 10_000).value
    assert abs(b - np.conj(a)) < 1e-12


@pytest.mark.invariant
def test_truncation_monotone():
    z = [0.02 + 0.1j, -0.01, 0.2j, -0.03 - 0.3j]
    small, big = a_global(2, 1, z, 10_000), a_global(2, 1, z, 100_000)
    assert abs(small.value - big.value) <= small.tail_bound
    assert tail_bound(3, 10_000) > tail_bound(3, 100_000)


@pytest.mark.invariant
def test_positive_at_origin():
    for n in range(1, 5):
        assert a_zero(n, 1).value.real > 0


def test_domain_errors():
    with pytest.raises(DomainError):
        a_global(2, 1, [0.3, 0, 0.1j, 0])
    with pytest.raises(ValueError):
        a_global(2, 1, [0, 0, 0])


def test_euler_grid_matches_direct_product():
    grid = EulerGrid(2, exact_limit=200, tail_limit=100_000)
    centers = [0.1j, 0.1j, 0.4j, 0.4j]
    # distinct radii per contour, as in the contour engine
    zs = [np.array([c + 0.01 * (1 + 0.01 * m) * np.exp(1j * t) for t in (0.3, 1.9)]) for m, c in enumerate(centers)]
    got = grid(zs, centers)
    for i in range(2):
        z = [v[i] for v in zs]
        want = a_global(2, 1, z, 100_000).value
        assert abs(got[i] - want) < 5e-6


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.sampled_from([2, 3, 7, 101]), st.floats(-0.2, 0.2), st.floats(-1, 1))
def test_local_conjugation(n, p, re, im):
    z = np.array([complex(re, im * (j + 1) / 3) for j in range(2 * n)])
    z[n:] += 0.05j * np.arange(n)
    assert abs(a_local_alt(p, np.conj(z)) - np.conj(a_local_alt(p, z))) < 1e-12
