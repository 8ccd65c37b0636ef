"""Risk minimizers, one per loss family."""

from .config import ConvergenceError, SolverConfig, SolverError, UnboundedObjectiveError
from .hinge import hinge_lp, minimize_hinge, solve_hinge
from .linalg import SingularMatrixError, solve_linear_system
from .simplex import InfeasibleError, LPProblem, UnboundedError, simplex_solve
from .smooth import minimize_smooth_convex
from .squares import (
    canonical_direction,
    fld,
    fld_expected_direction,
    least_squares,
    normal_equations,
    within_class_scatter,
)
from .zero_one import (
    ExactSearchTooLarge,
    anneal_zero_one,
    minimize_zero_one_exact,
    minimize_zero_one_stochastic,
)

__all__ = [
    "ConvergenceError", "SolverConfig", "SolverError", "UnboundedObjectiveError",
    "hinge_lp", "minimize_hinge", "solve_hinge",
    "SingularMatrixError", "solve_linear_system",
    "InfeasibleError", "LPProblem", "UnboundedError", "simplex_solve",
    "minimize_smooth_convex",
    "canonical_direction", "fld", "fld_expected_direction", "least_squares",
    "normal_equations", "within_class_scatter",
    "ExactSearchTooLarge", "anneal_zero_one", "minimize_zero_one_exact",
    "minimize_zero_one_stochastic",
]
