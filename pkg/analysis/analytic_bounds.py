"""
Closed-form time-asymptotic bounds for the modified Kuramoto-Sivashinsky
equation as functions of dimension d, bifurcation parameter lambda and
torus side L.

Overbar quantities (J0_bar, J1_bar, ...) bound the limit superior of the
corresponding observable; angle-bracket quantities bound time averages.
"""

import math
from dataclasses import asdict, dataclass

from analysis.special_functions import CATALAN, ZETA_2


J1_PREFACTOR_2D = (
    5.0 / 3.0 + (5.0 / 6.0) * 4.0 ** (14.0 / 5.0) * (6.0 / math.pi) ** (3.0 / 5.0)
) ** (1.0 / 3.0)
AGMON_CONSTANT = {1: 1.0, 2: 1.0 / math.sqrt(math.pi)}


class BoundDomainError(ValueError):
    """Raised for parameters outside the domain of a bound formula."""

    def __init__(self, parameter: str, value, problem: str):
        super().__init__(f"{parameter}={value}: {problem}")
        self.parameter = parameter
        self.value = value


def _check_params(lam: float, L: float, d: int | None = None) -> None:
    if d is not None and d not in (1, 2):
        raise BoundDomainError("d", d, "dimension must be 1 or 2")
    if not (math.isfinite(lam) and lam > 0):
        raise BoundDomainError("lambda", lam, "bounds hold for lambda > 0")
    if not (math.isfinite(L) and L > 0):
        raise BoundDomainError("L", L, "side length must be positive")


def _growth_1d(lam: float) -> float:
    return (24.0 * lam + 13.0) / 11.0


def bound_J0(d: int, lam: float, L: float) -> float:
    """Asymptotic energy bound J0_bar = L^d (lambda + 1/4)."""
    _check_params(lam, L, d)
    return L**d * (lam + 0.25)


def bound_J1(d: int, lam: float, L: float) -> float:
    """
    Asymptotic bound on J1.

    1D: sqrt((24 lambda + 13)/11) J0_bar. 2D: a fixed prefactor times J0_bar.
    """
    J0_bar = bound_J0(d, lam, L)
    if d == 1:
        return math.sqrt(_growth_1d(lam)) * J0_bar
    return J1_PREFACTOR_2D * J0_bar


def bound_J2_2d(lam: float, L: float) -> float:
    """Asymptotic bound on J2 in two dimensions."""
    J0_bar = bound_J0(2, lam, L)
    bracket = (
        108.0
        + 4.0 * lam**2
        + 108.0 * (5.0 / math.sqrt(math.pi)) ** 4 * J0_bar**2
        + 108.0 * (78.0 / math.pi) ** 4 * J0_bar**4
    )
    return J0_bar**1.5 * math.sqrt(bracket)


def bound_sup(d: int, lam: float, L: float) -> float:
    """
    Asymptotic bound on the sup-norm.

    1D uses the zeta(2) embedding constant. 2D uses the sharp lattice
    constant at eps = 1, (L / 2 pi^2) (zeta(2) beta(2))^(1/2), with
    zeta(2) beta(2) = pi^2 K / 6.
    """
    _check_params(lam, L, d)
    if d == 1:
        first = L * math.pi / 24.0 * (4.0 * lam + 1.0) * math.sqrt(_growth_1d(lam))
        return math.sqrt(first) + math.sqrt(4.0 * lam + 1.0) / 2.0
    return (
        sup_embedding_constant_2d(L) * math.sqrt(bound_J2_2d(lam, L))
        + math.sqrt(bound_J0(2, lam, L)) / L
    )


def sup_embedding_constant_2d(L: float) -> float:
    """Coefficient of ||Laplacian u||_2 in the 2D sup-norm embedding at eps = 1."""
    return L / (2.0 * math.pi**2) * math.sqrt(ZETA_2 * CATALAN)


def bound_time_avg_J1_J2_J3_2d(lam: float, L: float) -> tuple[float, float, float]:
    """
    Bounds on the time averages <J1>, <J2>, <J3> in two dimensions.

    Returns:
        tuple: (<J1> bound, <J2> bound, <J3> bound)
    """
    J0_bar = bound_J0(2, lam, L)
    root = math.sqrt(2.0 * lam + 1.0)
    J2_avg = (2.0 * lam + 1.0) * J0_bar
    J1_avg = root * J0_bar
    J3_avg = J1_avg * (
        lam + root * (1.0 + math.sqrt(24.0 / math.pi) * L * math.sqrt(lam + 0.25))
    )
    return J1_avg, J2_avg, J3_avg


def bound_ratio_avg(d: int, lam: float, L: float) -> float:
    """
    Bound on the time-averaged ratio that controls the crest factor.

    1D bounds <(J1/J0)^2>; 2D bounds <J2/J0>.
    """
    _check_params(lam, L, d)
    if d == 1:
        return _growth_1d(lam)
    J1_avg, _, J3_avg = bound_time_avg_J1_J2_J3_2d(lam, L)
    return (
        (2.0 * lam + 1.0)
        + (156.0 / math.pi) * J1_avg
        + (10.0 / math.sqrt(math.pi)) * J3_avg**0.25 * J1_avg**0.25
    )


def bound_crest_avg(d: int, lam: float, L: float) -> float:
    """
    Bound on the time-averaged crest factor, 1 + (pure distortion bound).

    1D: 1 + L^(1/2) <(J1/J0)^2>^(1/8) with c(1) = 1.
    2D: 1 + c(2) L <J2/J0>^(1/4) with c(2) = 1/sqrt(pi).
    """
    ratio = bound_ratio_avg(d, lam, L)
    if d == 1:
        return 1.0 + AGMON_CONSTANT[1] * math.sqrt(L) * ratio**0.125
    return 1.0 + AGMON_CONSTANT[2] * L * ratio**0.25


@dataclass(frozen=True)
class BoundSet:
    """Every applicable bound for one (d, lambda, L); 2D-only entries are None in 1D."""

    d: int
    lam: float
    L: float
    J0_bound: float
    J1_bound: float
    J2_bound: float | None
    sup_bound: float
    crest_avg_bound: float
    ratio_avg_bound: float
    J1_time_avg_bound: float | None
    J2_time_avg_bound: float | None
    J3_time_avg_bound: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def bound_set(d: int, lam: float, L: float) -> BoundSet:
    """Assemble the BoundSet for (d, lambda, L)."""
    _check_params(lam, L, d)
    J2_bound = None
    averages: tuple[float | None, float | None, float | None] = (None, None, None)
    if d == 2:
        J2_bound = bound_J2_2d(lam, L)
        averages = bound_time_avg_J1_J2_J3_2d(lam, L)
    return BoundSet(
        d=d,
        lam=lam,
        L=L,
        J0_bound=bound_J0(d, lam, L),
        J1_bound=bound_J1(d, lam, L),
        J2_bound=J2_bound,
        sup_bound=bound_sup(d, lam, L),
        crest_avg_bound=bound_crest_avg(d, lam, L),
        ratio_avg_bound=bound_ratio_avg(d, lam, L),
        J1_time_avg_bound=averages[0],
        J2_time_avg_bound=averages[1],
        J3_time_avg_bound=averages[2],
    )
