import math

import numpy as np
import pytest

from momlab.cfkrs import MomParams
from momlab.empirical import (
    EmpiricalConfig,
    MomentEstimate,
    m_beta_empirical,
    mom_zeta,
    panel_width,
    stratum_uniform,
    window_moment,
)
from momlab.fit import fit_power_law
from momlab.quad import gauss_legendre
from momlab.specfun import EULER_GAMMA, DomainError, zeta_critical


def test_window_moment_self_refinement():
    a = window_moment(0.0, 1, EmpiricalConfig(order=16, check_refinement=False))
    b = window_moment(0.0, 1, EmpiricalConfig(order=32, check_refinement=False))
    assert a > 0 and abs(a - b) < 1e-6


def test_window_moment_panel_halving():
    cfg = EmpiricalConfig(check_refinement=False)
    a = window_moment(100.0, 2, cfg)
    # same rule on panels half as wide
    x, w = gauss_legendre(16)
    edges = np.arange(0, 2 * math.ceil(1 / panel_width(101.0)) + 1) / (2 * math.ceil(1 / panel_width(101.0)))
    nodes = (100 + 0.5 * (edges[1:] + edges[:-1])[:, None] + 0.5 * np.diff(edges)[:, None] * x).ravel()
    weights = (0.5 * np.diff(edges)[:, None] * w).ravel()
    b = float(np.sum(weights * np.abs(zeta_critical(nodes)) ** 4))
    assert abs(a - b) <= 1e-5 * b


def test_window_moment_domain():
    with pytest.raises(DomainError):
        window_moment(-1.0, 1)
    with pytest.raises(DomainError):
        window_moment(49_999.5, 1)
    with pytest.raises(DomainError):
        window_moment(1.0, 0)


def test_fubini_window_average():
    # int_0^{T-1} W(t) dt = int_0^T |zeta|^2 min(h, 1, T - h) dh
    T = 40.0
    cfg = EmpiricalConfig(check_refinement=False)
    x, w = gauss_legendre(16)
    edges = np.linspace(0, T - 1, 157)
    ts = (0.5 * (edges[1:] + edges[:-1])[:, None] + 0.5 * np.diff(edges)[:, None] * x).ravel()
    ws = (0.5 * np.diff(edges)[:, None] * w).ravel()
    lhs = sum(wt * window_moment(t, 1, cfg) for t, wt in zip(ts, ws))
    # kinks of the weight at h = 1 and h = T - 1 are panel edges
    edges = np.concatenate([np.linspace(0, 1, 9), np.linspace(1, T - 1, 313)[1:], np.linspace(T - 1, T, 9)[1:]])
    hs = (0.5 * (edges[1:] + edges[:-1])[:, None] + 0.5 * np.diff(edges)[:, None] * x).ravel()
    hw = (0.5 * np.diff(edges)[:, None] * w).ravel()
    rhs = float(np.sum(hw * np.abs(zeta_critical(hs)) ** 2 * np.minimum(np.minimum(hs, 1.0), T - hs)))
    assert abs(lhs - rhs) <= 1e-8 * rhs


@pytest.mark.invariant
def test_moment_estimate_contract():
    with pytest.raises(ValueError):
        MomentEstimate(-1.0, 0.1, 100, "x", 0, None, 10.0)
    with pytest.raises(ValueError):
        MomentEstimate(1.0, -0.1, 100, "x", 0, None, 10.0)


def test_stratum_draws_are_keyed():
    assert stratum_uniform(3, 17) == stratum_uniform(3, 17)
    assert stratum_uniform(3, 17) != stratum_uniform(3, 18)


@pytest.mark.invariant
def test_mom_zeta_deterministic_and_jensen():
    T, n, seed = 2000.0, 100, 11
    one = mom_zeta(MomParams(1, 1), T, n, seed)
    again = mom_zeta(MomParams(1, 1), T, n, seed, EmpiricalConfig(workers=3))
    assert one.value == again.value and one.stderr == again.stderr
    for k in (2, 3):
        kth = mom_zeta(MomParams(k, 1), T, n, seed)
        assert kth.value >= one.value**k - 3 * (kth.stderr + k * one.value ** (k - 1) * one.stderr)
    assert one.stderr > 0 and one.value > 0
    assert one.method == "stratified-monte-carlo"


def test_mom_zeta_k1_second_moment():
    T = 5000.0
    est = mom_zeta(MomParams(1, 1), T, 200, 5)
    want = math.log(T / (2 * math.pi)) + 2 * EULER_GAMMA - 1
    assert abs(est.value - want) <= max(3 * est.stderr, 0.03 * want)


def test_mom_zeta_preconditions():
    with pytest.raises(ValueError):
        mom_zeta(MomParams(1, 1), 100.0, 50, 0)
    with pytest.raises(DomainError):
        mom_zeta(MomParams(1, 1), 5e4, 100, 0)


@pytest.mark.invariant
@pytest.mark.slow
def test_stratified_stderr_halves():
    a = mom_zeta(MomParams(1, 1), 5000.0, 100, 3)
    b = mom_zeta(MomParams(1, 1), 5000.0, 400, 3)
    assert 0.8 * 2 <= a.stderr / b.stderr <= 1.2 * 2


@pytest.mark.slow
def test_second_moment_mean():
    T = 5000.0
    want = math.log(T / (2 * math.pi)) + 2 * EULER_GAMMA - 1
    assert abs(m_beta_empirical(1, T) / want - 1) <= 0.03


def test_m_beta_order_doubling():
    a = m_beta_empirical(1, 300.0, EmpiricalConfig(order=16, check_refinement=False))
    b = m_beta_empirical(1, 300.0, EmpiricalConfig(order=32, check_refinement=False))
    assert abs(a / b - 1) < 1e-4


@pytest.mark.slow
def test_fourth_moment_mean_leading_term():
    T = 5000.0
    lead = math.log(T / (2 * math.pi)) ** 4 / (2 * math.pi**2)
    assert abs(m_beta_empirical(2, T) / lead - 1) <= 0.35


@pytest.mark.invariant
@pytest.mark.slow
def test_window_length_robustness():
    grid = [1e3, 3e3, 1e4]
    exps = []
    for window in (1.0, 0.5):
        cfg = EmpiricalConfig(window=window)
        pts = [(math.log(T / (2 * math.pi)), mom_zeta(MomParams(2, 1), T, 200, 21, cfg).value) for T in grid]
        exps.append(fit_power_law(pts).exponent)
    assert abs(exps[1] / exps[0] - 1) < 0.10
