"""Pressure and entropy estimation for finitely generated map families.

Cover/packing brackets for seven pressure kinds, skew-product lifts,
pointwise measure entropies, and Bowen-equation dimension roots, with
closed-form engines for affine model systems and a certified grid
engine everywhere else.
"""

from .balls import BallSpec, ball_contains, separation_distance, \
    vitali_disjointify
from .dimension import DimensionResult, bowen_root, expansion_field, \
    unstable_multipotential
from .errors import AnalyticUnavailable, DepthTooLarge, InfeasibleCover, \
    ParseError, PresslabError, UnderResolved
from .lift import LiftPoint, check_lift_inequalities, lift_birkhoff_sum, \
    lift_pressure_estimate, lifted_potential, skew_apply
from .localent import LocalEntropyEstimate, MeasureModel, \
    ProductMeasureModel, ball_measure, dirac_measure, empirical_measure, \
    lebesgue_measure, local_amalgamated_entropy, marginal_bound_check, \
    parse_measure
from .potentials import MultiPotential, constant_potential, \
    coordinate_potential, parse_potential, random_potential, zero_potential
from .pressure import KINDS, Extrapolation, PressureEstimate, \
    estimate_pressure, extrapolate, lipschitz_check, min_cover_cost, \
    packing_bound, sweep_estimates, trajectory_shift_check, \
    verify_inequality_chain
from .systems import BerendVerdict, SemigroupSystem, berend_check, \
    closed_form_entropies, conjugacy_example_report, parse_system, \
    zoo_systems
from .words import Word, WordPool, all_words, consecutive_sum, \
    constant_rule, dn_distance, explicit_rule, orbit, periodic_rule

__version__ = "0.1.0"

__all__ = [
    "AnalyticUnavailable", "BallSpec", "BerendVerdict", "DepthTooLarge",
    "DimensionResult", "Extrapolation", "InfeasibleCover", "KINDS",
    "LiftPoint", "LocalEntropyEstimate", "MeasureModel", "MultiPotential",
    "ParseError", "PresslabError", "PressureEstimate",
    "ProductMeasureModel", "SemigroupSystem", "UnderResolved", "Word",
    "WordPool", "all_words", "ball_contains", "ball_measure",
    "berend_check", "bowen_root", "check_lift_inequalities",
    "closed_form_entropies", "conjugacy_example_report",
    "consecutive_sum", "constant_potential", "constant_rule",
    "coordinate_potential", "dirac_measure", "dn_distance",
    "empirical_measure", "estimate_pressure", "expansion_field",
    "explicit_rule", "extrapolate", "lebesgue_measure",
    "lift_birkhoff_sum", "lift_pressure_estimate", "lifted_potential",
    "lipschitz_check", "local_amalgamated_entropy",
    "marginal_bound_check", "min_cover_cost", "orbit", "packing_bound",
    "parse_measure", "parse_potential", "parse_system",
    "periodic_rule", "random_potential", "separation_distance",
    "skew_apply", "sweep_estimates", "trajectory_shift_check",
    "unstable_multipotential", "vitali_disjointify",
    "verify_inequality_chain", "zero_potential", "zoo_systems",
    "__version__",
]
