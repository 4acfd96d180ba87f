"""Elliptic uniformization toolkit for the dispersionless Pfaff-KP and Pfaff-Toda hierarchies."""

from .curves import solve_modulus, solve_tau_kp, solve_tau_toda, toda_data_from_F, uniformization_from_F
from .elliptic import KPCurveData, TodaCurveData, UniformPoint
from .numerics import Bracket, Tolerance, central_diff, find_root_monotone
from .report import ResidualReport
from .series import TruncatedSeries, series_arith, s_of_series, theta_ratio_of_series
from .theta import ModularParam, theta, theta_constants, theta_deriv

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "KPCurveData",
    "ModularParam",
    "ResidualReport",
    "TodaCurveData",
    "Tolerance",
    "TruncatedSeries",
    "UniformPoint",
    "__version__",
    "central_diff",
    "find_root_monotone",
    "s_of_series",
    "series_arith",
    "solve_modulus",
    "solve_tau_kp",
    "solve_tau_toda",
    "theta",
    "theta_constants",
    "theta_deriv",
    "theta_ratio_of_series",
    "toda_data_from_F",
    "uniformization_from_F",
]
