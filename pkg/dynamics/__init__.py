"""
Time integration of the modified Kuramoto-Sivashinsky equation.
"""

from .etdrk4 import ETDRK4Coefficients, etdrk4_coefficients, etdrk4_step
from .mkse_solver import (
    NONLINEARITIES,
    BlowUpError,
    SolverConfig,
    SolverConfigError,
    TrajectoryState,
    initial_state,
    integrate,
    linear_symbol,
    nonlinear_term,
    step,
)


__all__ = [
    "NONLINEARITIES",
    "BlowUpError",
    "ETDRK4Coefficients",
    "SolverConfig",
    "SolverConfigError",
    "TrajectoryState",
    "etdrk4_coefficients",
    "etdrk4_step",
    "initial_state",
    "integrate",
    "linear_symbol",
    "nonlinear_term",
    "step",
]
