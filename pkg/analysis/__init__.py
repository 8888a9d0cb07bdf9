"""
Trajectory statistics, closed-form bounds and inequality checks.
"""

from .analytic_bounds import (
    BoundDomainError,
    BoundSet,
    bound_crest_avg,
    bound_J0,
    bound_J1,
    bound_J2_2d,
    bound_ratio_avg,
    bound_set,
    bound_sup,
    bound_time_avg_J1_J2_J3_2d,
)
from .inequality_lab import (
    REGISTRY,
    InequalityCheck,
    InequalityDomainError,
    InequalityViolation,
    UnknownCheckError,
    check_agmon_general,
    check_du_sup,
    check_ladder,
    check_ladyzhenskaya_improved,
    check_sup_embedding_1d,
    check_sup_embedding_2d,
    minimize_slack,
    run_suite,
)
from .observables import (
    InsufficientTailError,
    ObservableRow,
    ObservableSeries,
    TailStatistics,
    ZeroEnergyError,
    crest_time_average,
    energy_budget,
    fit_power_law,
    record,
    tail_stats,
    time_average_ratios,
)
from .special_functions import CATALAN, dirichlet_beta, zeta


__all__ = [
    "CATALAN",
    "REGISTRY",
    "BoundDomainError",
    "BoundSet",
    "InequalityCheck",
    "InequalityDomainError",
    "InequalityViolation",
    "InsufficientTailError",
    "ObservableRow",
    "ObservableSeries",
    "TailStatistics",
    "UnknownCheckError",
    "ZeroEnergyError",
    "bound_crest_avg",
    "bound_J0",
    "bound_J1",
    "bound_J2_2d",
    "bound_ratio_avg",
    "bound_set",
    "bound_sup",
    "bound_time_avg_J1_J2_J3_2d",
    "check_agmon_general",
    "check_du_sup",
    "check_ladder",
    "check_ladyzhenskaya_improved",
    "check_sup_embedding_1d",
    "check_sup_embedding_2d",
    "crest_time_average",
    "dirichlet_beta",
    "energy_budget",
    "fit_power_law",
    "minimize_slack",
    "record",
    "run_suite",
    "tail_stats",
    "time_average_ratios",
    "zeta",
]
