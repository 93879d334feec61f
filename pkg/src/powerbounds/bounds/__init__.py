"""Spectral upper bounds on alpha_k and lower bounds on chi_k."""

from __future__ import annotations

from .closed import (
    bound_cvetkovic,
    bound_elphick_wocjan_classic,
    bound_haemers_extended,
    bound_hoffman,
    bound_inertial_general,
    bound_ratio_chi_k,
    bound_ratio_general,
    bounds_corollary22,
    bounds_walk_regular,
    chi_from_alpha,
    greedy_quadratic_second_inertial,
    repair_second_inertial,
    second_inertial_value,
    sum_polynomial,
)
from .optimize import (
    SolverFailure,
    default_big_m,
    max_g_polynomial,
    milp_inertia_per_vertex,
    milp_inertia_walk_regular,
    milp_second_inertial,
    minor_polynomial,
)
from .report import BoundError, BoundReport, Certificate, round_alpha, round_chi

__all__ = [
    "BoundError", "BoundReport", "Certificate", "SolverFailure",
    "bound_cvetkovic", "bound_elphick_wocjan_classic", "bound_haemers_extended", "bound_hoffman",
    "bound_inertial_general", "bound_ratio_chi_k", "bound_ratio_general", "bounds_corollary22",
    "bounds_walk_regular", "chi_from_alpha", "default_big_m", "greedy_quadratic_second_inertial",
    "max_g_polynomial", "milp_inertia_per_vertex", "milp_inertia_walk_regular", "milp_second_inertial",
    "minor_polynomial", "repair_second_inertial", "round_alpha", "round_chi", "second_inertial_value",
    "sum_polynomial",
]
