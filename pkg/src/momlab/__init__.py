"""Moments of moments of the Riemann zeta function, the shifted-moment
predictor, and random-matrix analogues."""

__version__ = "0.1.0"

from .cfkrs import CfkrsConfig, MomParams, ShiftVector, gamma_coeff, leading_prediction, mom_p, p_decomposed, p_direct, psi
from .empirical import EmpiricalConfig, MomentEstimate, mom_zeta, window_moment
from .fit import FitResult, expected_exponent, fit_power_law
from .rmt import GROUPS, char_poly_abs2beta, ks_exact, mom_group, sample_haar, window_moment_rmt

__all__ = [
    "CfkrsConfig", "MomParams", "ShiftVector", "gamma_coeff", "leading_prediction", "mom_p", "p_decomposed",
    "p_direct", "psi", "EmpiricalConfig", "MomentEstimate", "mom_zeta", "window_moment", "FitResult",
    "expected_exponent", "fit_power_law", "GROUPS", "char_poly_abs2beta", "ks_exact", "mom_group",
    "sample_haar", "window_moment_rmt", "__version__",
]
