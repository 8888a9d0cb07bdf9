"""
Randomized verification of the functional inequalities behind the bounds.

Every check returns an InequalityCheck with lhs <= rhs expected; a check
passes when slack >= -tol * max(|lhs|, |rhs|).
"""

import math
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from analysis.analytic_bounds import AGMON_CONSTANT
from analysis.special_functions import dirichlet_beta, zeta
from spectral.fields import (
    DEFAULT_REFINE,
    SpectralField,
    dealiased_product,
    fluctuation,
    gradient,
    random_field,
    refined_samples,
    reflect_modes,
    sobolev_seminorm,
    sup_norm_estimate,
)
from spectral.grid import Grid
from utils.logger import setup_logger


logger = setup_logger("inequality_lab")

TOLERANCE = 1e-12
VIOLATION_RATIO = 1.0 - 1e-9
MAX_LADDER_ORDER = 4.0
LADYZHENSKAYA_CONSTANT = 6.0 / math.pi
DU_SUP_CONSTANT = 1.0 / math.sqrt(math.pi)
PROBE_BAND = 3
RESTART_EVERY = 50


class InequalityDomainError(ValueError):
    """Raised when a check is called outside its parameter domain."""


class UnknownCheckError(KeyError):
    """Raised for a check name missing from the registry."""


class InequalityViolation(AssertionError):
    """Raised when an inequality fails beyond tolerance."""

    def __init__(self, name: str, seed, lhs: float, rhs: float):
        super().__init__(
            f"{name} violated for seed {seed}: lhs={lhs:.12g} > rhs={rhs:.12g}"
        )
        self.name = name
        self.seed = seed


@dataclass(frozen=True)
class InequalityCheck:
    """Outcome of evaluating one inequality lhs <= rhs on one field."""

    name: str
    lhs: float
    rhs: float
    field_descriptor: dict = field(default_factory=dict, compare=False)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def relative_slack(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.slack / scale if scale > 0 else 0.0

    @property
    def ratio(self) -> float:
        """rhs / lhs, infinite when lhs vanishes."""
        return self.rhs / self.lhs if self.lhs > 0 else math.inf

    def passed(self, tol: float = TOLERANCE) -> bool:
        return self.slack >= -tol * max(abs(self.lhs), abs(self.rhs))


def _require_dimension(phi: SpectralField, d: int, name: str) -> None:
    if phi.grid.d != d:
        raise InequalityDomainError(f"{name} needs a {d}D field, got d={phi.grid.d}")


def _require_zero_mean(phi: SpectralField, name: str) -> None:
    norm = math.sqrt(sobolev_seminorm(phi, 0))
    if abs(phi.mean) > 1e-12 * norm:
        raise InequalityDomainError(
            f"{name} needs a zero-mean field, mean is {phi.mean:.3e}"
        )


def quartic_integral(phi: SpectralField) -> float:
    """int phi^4 over the torus, exact for band-limited phi."""
    cube = dealiased_product([phi, phi, phi])
    return phi.grid.volume * float(np.sum(np.conj(phi.coeffs) * cube.coeffs).real)


def check_ladder(phi: SpectralField, p: float, q: float, r: float) -> InequalityCheck:
    """
    Interpolation J_p <= J_{p+r}^{q/(r+q)} J_{p-q}^{r/(r+q)} on the fluctuation.

    Raises:
        InequalityDomainError: Unless p >= q > 0, r >= 0 and p + r <= 4
    """
    if not (p >= q > 0 and r >= 0 and p + r <= MAX_LADDER_ORDER):
        raise InequalityDomainError(
            f"ladder needs p >= q > 0, r >= 0, p + r <= {MAX_LADDER_ORDER}; "
            f"got p={p}, q={q}, r={r}"
        )
    prime = fluctuation(phi)
    lhs = sobolev_seminorm(prime, p)
    rhs = sobolev_seminorm(prime, p + r) ** (q / (r + q)) * sobolev_seminorm(
        prime, p - q
    ) ** (r / (r + q))
    return InequalityCheck(f"ladder({p:g},{q:g},{r:g})", lhs, rhs)


def check_sup_embedding_1d(
    phi: SpectralField, eps: float, refine: int = DEFAULT_REFINE
) -> InequalityCheck:
    """
    ||phi||_inf <= (zeta(1+eps)/pi)^(1/2) ||(-Laplacian)^((1+eps)/4) phi||_2
    + L^(-1/2) J0^(1/2).

    The constant is the sharp one for the torus of side 2 pi.
    """
    _require_dimension(phi, 1, "sup embedding 1D")
    if not eps > 0:
        raise InequalityDomainError(f"eps must be > 0, got {eps}")
    lhs = sup_norm_estimate(phi, refine)
    derivative = math.sqrt(sobolev_seminorm(phi, (1.0 + eps) / 2.0))
    mean_term = math.sqrt(sobolev_seminorm(phi, 0) / phi.grid.L)
    rhs = math.sqrt(zeta(1.0 + eps) / math.pi) * derivative + mean_term
    return InequalityCheck(f"sup_embedding_1d(eps={eps:g})", lhs, rhs)


def sup_embedding_coefficient_2d(L: float, eps: float) -> float:
    """[4 zeta(1+eps) beta(1+eps)]^(1/2) L^(-1) (L/2 pi)^(1+eps)."""
    s = 1.0 + eps
    return math.sqrt(4.0 * zeta(s) * dirichlet_beta(s)) / L * (L / (2.0 * math.pi)) ** s


def check_sup_embedding_2d(
    phi: SpectralField, eps: float, refine: int = DEFAULT_REFINE
) -> InequalityCheck:
    """||phi||_inf <= coefficient * ||(-Laplacian)^((1+eps)/2) phi||_2 for zero-mean 2D phi."""
    _require_dimension(phi, 2, "sup embedding 2D")
    _require_zero_mean(phi, "sup embedding 2D")
    if not eps > 0:
        raise InequalityDomainError(f"eps must be > 0, got {eps}")
    lhs = sup_norm_estimate(phi, refine)
    rhs = sup_embedding_coefficient_2d(phi.grid.L, eps) * math.sqrt(
        sobolev_seminorm(phi, 1.0 + eps)
    )
    return InequalityCheck(f"sup_embedding_2d(eps={eps:g})", lhs, rhs)


def check_ladyzhenskaya_improved(phi: SpectralField) -> InequalityCheck:
    """int phi^4 <= (6/pi) int phi^2 int |grad phi|^2 for zero-mean 2D phi."""
    _require_dimension(phi, 2, "Ladyzhenskaya")
    _require_zero_mean(phi, "Ladyzhenskaya")
    lhs = quartic_integral(phi)
    rhs = LADYZHENSKAYA_CONSTANT * sobolev_seminorm(phi, 0) * sobolev_seminorm(phi, 1)
    return InequalityCheck("ladyzhenskaya_improved", lhs, rhs)


def check_du_sup(phi: SpectralField, refine: int = DEFAULT_REFINE) -> InequalityCheck:
    """||Du||_inf <= (1/sqrt pi) J3^(1/4) J1^(1/4) for zero-mean 2D phi."""
    _require_dimension(phi, 2, "gradient sup estimate")
    _require_zero_mean(phi, "gradient sup estimate")
    J1 = sobolev_seminorm(phi, 1)
    if J1 <= 0:
        raise InequalityDomainError("gradient sup estimate needs J1 > 0")
    magnitude = np.sqrt(sum(refined_samples(part, refine) ** 2 for part in gradient(phi)))
    lhs = float(np.max(magnitude))
    rhs = DU_SUP_CONSTANT * sobolev_seminorm(phi, 3) ** 0.25 * J1**0.25
    return InequalityCheck("du_sup", lhs, rhs)


def check_agmon_general(
    phi: SpectralField, n: int, refine: int = DEFAULT_REFINE
) -> InequalityCheck:
    """
    ||u||_inf <= L^(-d/2) J0^(1/2) + c(n) (J0')^((2n-d)/4n) J_n^(d/4n).

    Supported pairs are (d, n) = (1, 1) with c = 1 and (2, 2) with c = 1/sqrt(pi).
    """
    d = phi.grid.d
    if (d, n) not in ((1, 1), (2, 2)):
        raise InequalityDomainError(f"unsupported (d, n) = ({d}, {n}) for Agmon check")
    J0 = sobolev_seminorm(phi, 0)
    J0_prime = sobolev_seminorm(fluctuation(phi), 0)
    lhs = sup_norm_estimate(phi, refine)
    rhs = phi.grid.volume ** -0.5 * math.sqrt(J0) + AGMON_CONSTANT[d] * J0_prime ** (
        (2 * n - d) / (4 * n)
    ) * sobolev_seminorm(phi, n) ** (d / (4 * n))
    return InequalityCheck(f"agmon(d={d},n={n})", lhs, rhs)


@dataclass(frozen=True)
class RegisteredCheck:
    """A named check with the field family it is exercised on."""

    name: str
    d: int
    zero_mean: bool
    evaluate: Callable[[SpectralField], InequalityCheck]


SUITE_GRIDS = {1: Grid(d=1, N=64, L=2.0 * math.pi), 2: Grid(d=2, N=32, L=5.0)}


def _build_registry() -> dict[str, RegisteredCheck]:
    entries = []
    for d in (1, 2):
        for p, q, r in ((1, 1, 2), (2, 2, 2), (1, 1, 1)):
            entries.append(
                RegisteredCheck(
                    f"ladder_{p}{q}{r}_{d}d",
                    d,
                    True,
                    partial(check_ladder, p=p, q=q, r=r),
                )
            )
    for eps in (0.5, 1.0, 2.0):
        entries.append(
            RegisteredCheck(
                f"sup_embedding_1d_eps{eps:g}",
                1,
                False,
                partial(check_sup_embedding_1d, eps=eps),
            )
        )
        entries.append(
            RegisteredCheck(
                f"sup_embedding_2d_eps{eps:g}",
                2,
                True,
                partial(check_sup_embedding_2d, eps=eps),
            )
        )
    entries.append(
        RegisteredCheck("ladyzhenskaya_improved", 2, True, check_ladyzhenskaya_improved)
    )
    entries.append(RegisteredCheck("du_sup", 2, True, check_du_sup))
    entries.append(RegisteredCheck("agmon_1d", 1, False, partial(check_agmon_general, n=1)))
    entries.append(RegisteredCheck("agmon_2d", 2, False, partial(check_agmon_general, n=2)))
    return {entry.name: entry for entry in entries}


REGISTRY = _build_registry()


def registered_check(name: str) -> RegisteredCheck:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownCheckError(name) from None


def suite_field(entry: RegisteredCheck, seed: int) -> tuple[SpectralField, dict]:
    """
    Random trigonometric polynomial for one (check, seed) pair.

    Modes are limited to |k| <= N/4 - 1 so that quartic products are
    resolved exactly after padding.
    """
    grid = SUITE_GRIDS[entry.d]
    decay = 1.5 + 0.5 * (seed % 4)
    band = grid.N // 4 - 1
    phi = random_field(grid, seed, amplitude=1.0, decay=decay, band=band)
    if entry.zero_mean:
        phi = fluctuation(phi)
    return phi, {"seed": seed, "decay": decay, "band": band}


def evaluate_check(name: str, seed: int) -> InequalityCheck:
    entry = registered_check(name)
    phi, descriptor = suite_field(entry, seed)
    return replace(entry.evaluate(phi), name=name, field_descriptor=descriptor)


@dataclass(frozen=True)
class CheckSummary:
    """Suite outcome for one registered check."""

    name: str
    evaluated: int
    violations: tuple[int, ...]
    min_relative_slack: float
    worst_seed: int


def _summarize_check(name: str, seeds: tuple[int, ...], tol: float) -> CheckSummary:
    violations = []
    worst = (math.inf, -1)
    for seed in seeds:
        result = evaluate_check(name, seed)
        if not result.passed(tol):
            violations.append(seed)
        if result.relative_slack < worst[0]:
            worst = (result.relative_slack, seed)
    return CheckSummary(
        name=name,
        evaluated=len(seeds),
        violations=tuple(violations),
        min_relative_slack=worst[0],
        worst_seed=worst[1],
    )


def run_suite(
    seeds: Iterable[int],
    names: Iterable[str] | None = None,
    tol: float = TOLERANCE,
    workers: int = 1,
) -> list[CheckSummary]:
    """
    Evaluate every requested check on every seed.

    Args:
        seeds: Field seeds
        names: Registered check names, all of them by default
        tol: Relative tolerance
        workers: Process count; checks are distributed across workers

    Returns:
        list[CheckSummary]: One summary per check, in registry order
    """
    seed_tuple = tuple(seeds)
    selected = list(names) if names is not None else list(REGISTRY)
    for name in selected:
        registered_check(name)
    logger.info(f"Running {len(selected)} checks on {len(seed_tuple)} seeds")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summaries = list(
                pool.map(
                    _summarize_check,
                    selected,
                    [seed_tuple] * len(selected),
                    [tol] * len(selected),
                )
            )
    else:
        summaries = [_summarize_check(name, seed_tuple, tol) for name in selected]

    for summary in summaries:
        if summary.violations:
            logger.error(f"{summary.name}: {len(summary.violations)} violations")
    return summaries


def _low_mode_noise(grid: Grid, rng: np.random.Generator, zero_mean: bool) -> np.ndarray:
    raw = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    noise = (raw + np.conj(reflect_modes(raw))) / 2.0
    noise[np.sqrt(grid.mode_norm_squared) > PROBE_BAND] = 0.0
    noise[grid.nyquist_mask] = 0.0
    if zero_mean:
        noise[(0,) * grid.d] = 0.0
    return noise


def minimize_slack(
    check_name: str, budget: int, seed: int, step_size: float = 0.1
) -> InequalityCheck:
    """
    Search low-mode fields for the smallest ratio rhs/lhs of a check.

    Starts from the single mode cos(2 pi x / L), perturbs the best field so
    far and restarts from a random low-mode field every few iterations.

    Raises:
        UnknownCheckError: For an unregistered name
        InequalityViolation: If a ratio below 1 - 1e-9 is found
    """
    entry = registered_check(check_name)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    grid = SUITE_GRIDS[entry.d]
    rng = np.random.default_rng(seed)

    start = np.zeros(grid.shape, dtype=np.complex128)
    start[(1,) + (0,) * (grid.d - 1)] = 0.5
    start[(-1,) + (0,) * (grid.d - 1)] = 0.5

    def evaluate(coeffs: np.ndarray, label: str) -> InequalityCheck:
        result = entry.evaluate(SpectralField(grid, coeffs))
        result = replace(
            result, name=check_name, field_descriptor={"seed": seed, "origin": label}
        )
        if result.ratio < VIOLATION_RATIO:
            raise InequalityViolation(check_name, seed, result.lhs, result.rhs)
        return result

    best = evaluate(start, "single-mode")
    current_coeffs, current = start, best
    for iteration in range(1, budget):
        if iteration % RESTART_EVERY == 0:
            candidate = _low_mode_noise(grid, rng, entry.zero_mean)
            label = f"restart-{iteration}"
        else:
            scale = step_size * float(np.max(np.abs(current_coeffs)))
            candidate = current_coeffs + scale * _low_mode_noise(grid, rng, entry.zero_mean)
            label = f"perturb-{iteration}"
        if not np.any(candidate):
            continue
        trial = evaluate(candidate, label)
        if iteration % RESTART_EVERY == 0 or trial.ratio < current.ratio:
            current_coeffs, current = candidate, trial
        if trial.ratio < best.ratio:
            best = trial

    logger.debug(f"{check_name}: best ratio {best.ratio:.12g} after {budget} evaluations")
    return best
