import math

import numpy as np
import pytest

from momlab.cfkrs import MomParams
from momlab.rmt import (
    HaarSample,
    char_poly_abs2beta,
    ks_exact,
    mom_group,
    sample_haar,
    window_moment_rmt,
)
from momlab.specfun import fk_coefficient


def traces(group, N, n, power=1, seed=0):
    out = np.empty(n, dtype=complex)
    for i in range(n):
        s = sample_haar(group, N, (seed, i))
        out[i] = np.sum(np.exp(1j * power * s.all_phases()))
    return out


def within(values, want, nsig):
    mean = values.mean()
    err = values.std(ddof=1) / math.sqrt(values.size)
    return abs(mean - want) <= nsig * err


def test_unitary_trace_moments():
    tr = traces("unitary", 2, 10_000)
    assert within(np.abs(tr) ** 2, 1.0, 5)
    assert within(tr.real, 0.0, 4) and within(tr.imag, 0.0, 4)


@pytest.mark.invariant
def test_unitary_u3_second_power_trace():
    tr2 = traces("unitary", 3, 10_000, power=2, seed=1)
    assert within(np.abs(tr2) ** 2, 2.0, 5)


def test_symplectic_and_orthogonal_trace_moments():
    # E tr A = 0 (Sp) and E tr A^2 = -1 (Sp), 1 (SO(2N), N >= 2)
    sp = traces("symplectic", 3, 4000, seed=2)
    assert within(sp.real, 0.0, 5)
    sp2 = traces("symplectic", 3, 4000, power=2, seed=2)
    assert within(sp2.real, -1.0, 5)
    so2 = traces("special_orthogonal_even", 3, 4000, power=2, seed=3)
    assert within(so2.real, 1.0, 5)


@pytest.mark.invariant
def test_unitary_phases_uniform():
    phases = np.concatenate([sample_haar("unitary", 4, (5, i)).phases for i in range(2500)])
    counts, _ = np.histogram(phases, bins=20, range=(0, 2 * np.pi))
    expected = phases.size / 20
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    assert chi2 < 43.8  # 19 degrees of freedom, p = 0.001


@pytest.mark.invariant
@pytest.mark.parametrize("group", ["special_orthogonal_even", "symplectic"])
def test_paired_phases(group):
    s = sample_haar(group, 6, 11)
    assert s.phases.size == 6
    assert np.all((s.phases >= 0) & (s.phases <= np.pi))
    full = s.all_phases()
    assert np.allclose(np.sort(full), np.sort(-full))


def test_sample_haar_validation():
    with pytest.raises(ValueError):
        sample_haar("orthogonal", 4, 0)
    with pytest.raises(ValueError):
        sample_haar("unitary", 0, 0)
    with pytest.raises(ValueError):
        sample_haar("unitary", 513, 0)


def test_char_poly_examples():
    one = HaarSample("unitary", np.array([0.0]), 1)
    assert char_poly_abs2beta(one, math.pi, 1) == pytest.approx(4.0)
    pair = HaarSample("unitary", np.array([0.0, 0.0]), 2)
    assert char_poly_abs2beta(pair, math.pi / 2, 1) == pytest.approx(4.0)
    s = sample_haar("unitary", 5, 9)
    theta = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(char_poly_abs2beta(s, theta, 2), char_poly_abs2beta(s, theta, 1) ** 2)


def test_window_moment_rmt():
    for phi in (0.0, 1.3, 4.0):
        assert window_moment_rmt(HaarSample("unitary", np.array([phi]), 1), 1) == pytest.approx(2.0, abs=1e-14)
    s = sample_haar("symplectic", 8, 4)
    n = 32 * 8
    assert abs(window_moment_rmt(s, 2, n) / window_moment_rmt(s, 2, 2 * n) - 1) < 1e-8
    with pytest.raises(ValueError):
        window_moment_rmt(s, 1, 16)


def test_window_mean_is_n_plus_one():
    N = 5
    vals = np.array([window_moment_rmt(sample_haar("unitary", N, (8, i)), 1) for i in range(10_000)])
    assert within(vals, N + 1, 3)


@pytest.mark.invariant
@pytest.mark.parametrize("beta, N", [(1, 8), (1, 32), (2, 8), (2, 32)])
def test_fubini_against_keating_snaith(beta, N):
    est = mom_group("unitary", N, MomParams(1, beta), 4000, seed=beta * 100 + N)
    assert abs(est.value - ks_exact(N, beta)) <= 3 * est.stderr


@pytest.mark.invariant
def test_mom_group_deterministic():
    p = MomParams(2, 1)
    a = mom_group("symplectic", 4, p, 50, seed=3, workers=1)
    b = mom_group("symplectic", 4, p, 50, seed=3, workers=3)
    c = mom_group("symplectic", 4, p, 50, seed=3)
    assert a.value == b.value == c.value and a.stderr == b.stderr
    assert mom_group("symplectic", 4, p, 50, seed=4).value != a.value


def test_ks_exact():
    for N in (1, 7, 100):
        assert ks_exact(N, 1) == N + 1
    assert ks_exact(2, 2) == 20
    assert abs(ks_exact(1000, 1) / 1000 / fk_coefficient(1) - 1) <= 1e-3
    # non-integer beta goes through log-Gamma sums
    want = math.prod(math.gamma(j) * math.gamma(j + 3.0) / math.gamma(j + 1.5) ** 2 for j in range(1, 6))
    assert ks_exact(5, 1.5) == pytest.approx(want, rel=1e-12)
    with pytest.raises(ValueError):
        ks_exact(1001, 1)
    with pytest.raises(ValueError):
        ks_exact(10, 7)


def test_ks_exact_large_n_ratio_beta2():
    # slow convergence of the N^{beta^2} asymptotic; only a loose check
    assert abs(ks_exact(1000, 2) / 1000**4 / fk_coefficient(2) - 1) < 0.02
