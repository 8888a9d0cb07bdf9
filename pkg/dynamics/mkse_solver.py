import math
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from dynamics.etdrk4 import ETDRK4Coefficients, etdrk4_coefficients, etdrk4_step
from spectral.fields import (
    DEFAULT_PADDING,
    DEFAULT_REFINE,
    SpectralField,
    dealiased_product,
    gradient,
    hermitian_part,
    is_power_of_two,
    random_field,
)
from spectral.grid import Grid
from utils.logger import setup_logger


logger = setup_logger("mkse_solver")

NONLINEARITIES = ("full", "cubic-only", "none")
STEP_TOLERANCE = 1e-9

Observer = Callable[[float, SpectralField], None]


class SolverConfigError(ValueError):
    """Invalid solver configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, problem: str):
        super().__init__(f"{field_name}: {problem}")
        self.field = field_name


class BlowUpError(RuntimeError):
    """
    Raised when a step produces non-finite coefficients.

    ``label`` optionally names the run, e.g. the sweep point ``lambda=2 seed=1``.
    """

    def __init__(self, time: float, max_abs_coeff: float, label: str | None = None):
        message = (
            f"non-finite coefficients at t={time:.6g} "
            f"(max |coeff| before the step: {max_abs_coeff:.6g})"
        )
        super().__init__(f"{label}: {message}" if label else message)
        self.time = time
        self.max_abs_coeff = max_abs_coeff
        self.label = label

    def __reduce__(self):
        return (type(self), (self.time, self.max_abs_coeff, self.label))


@dataclass(frozen=True)
class SolverConfig:
    """Everything that determines one trajectory."""

    grid: Grid
    lam: float
    dt: float
    t_end: float
    transient: float
    sample_every: float
    seed: int = 0
    amplitude: float = 1.0
    decay: float = 3.0
    nonlinearity: str = "full"
    padding: float = DEFAULT_PADDING
    refine: int = DEFAULT_REFINE

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise SolverConfigError("dynamics.lambda", "must be finite")
        if not self.dt > 0:
            raise SolverConfigError("dynamics.dt", f"must be > 0, got {self.dt}")
        if not self.dt < self.sample_every:
            raise SolverConfigError(
                "dynamics.dt",
                f"must be smaller than sample_every ({self.dt} >= {self.sample_every})",
            )
        if not self.sample_every <= self.transient:
            raise SolverConfigError(
                "dynamics.sample_every",
                f"must not exceed transient ({self.sample_every} > {self.transient})",
            )
        if not self.transient < self.t_end:
            raise SolverConfigError(
                "dynamics.transient",
                f"must be smaller than t_end ({self.transient} >= {self.t_end})",
            )
        ratio = self.sample_every / self.dt
        if abs(ratio - round(ratio)) > STEP_TOLERANCE * ratio:
            raise SolverConfigError(
                "dynamics.sample_every", f"must be a multiple of dt ({self.dt})"
            )
        if self.nonlinearity not in NONLINEARITIES:
            raise SolverConfigError(
                "dynamics.nonlinearity",
                f"must be one of {', '.join(NONLINEARITIES)}, got {self.nonlinearity!r}",
            )
        if not self.amplitude > 0:
            raise SolverConfigError("init.amplitude", f"must be > 0, got {self.amplitude}")
        if not self.decay > 1:
            raise SolverConfigError("init.decay", f"must be > 1, got {self.decay}")
        if not is_power_of_two(self.refine):
            raise SolverConfigError(
                "numerics.refine", f"must be a power of two >= 1, got {self.refine}"
            )

    @property
    def steps_per_sample(self) -> int:
        return int(round(self.sample_every / self.dt))

    @property
    def total_steps(self) -> int:
        return int(math.floor(self.t_end / self.dt + STEP_TOLERANCE))

    def as_dict(self) -> dict:
        """Flat echo of the configuration, in run-config vocabulary."""
        return {
            "d": self.grid.d,
            "N": self.grid.N,
            "L": self.grid.L,
            "lambda": self.lam,
            "dt": self.dt,
            "t_end": self.t_end,
            "transient": self.transient,
            "sample_every": self.sample_every,
            "nonlinearity": self.nonlinearity,
            "seed": self.seed,
            "amplitude": self.amplitude,
            "decay": self.decay,
            "padding": self.padding,
            "refine": self.refine,
        }


@dataclass(frozen=True)
class TrajectoryState:
    t: float
    u_hat: SpectralField = field(compare=False)
    step_index: int = 0


def linear_symbol(grid: Grid, lam: float) -> np.ndarray:
    """
    Fourier symbol of -Laplacian^2 - Laplacian + lambda.

    Args:
        grid: Grid
        lam: Bifurcation parameter

    Returns:
        np.ndarray: sigma(k) = lambda - rho^2 + rho with rho = (2 pi/L)^2 |k|^2
    """
    rho = grid.kappa**2 * grid.mode_norm_squared
    return lam - rho**2 + rho


def nonlinear_term(
    u_hat: SpectralField,
    grid: Grid,
    mode: str = "full",
    padding: float = DEFAULT_PADDING,
) -> SpectralField:
    """
    Transformed nonlinearity of the modified Kuramoto-Sivashinsky equation.

    ``full`` gives -u^3 - u u_x in 1D and -u^3 - u (u_x + u_y) in 2D,
    ``cubic-only`` drops the advective part and ``none`` returns zero.
    """
    grid.check_same(u_hat.grid)
    if mode == "none":
        return SpectralField.zeros(grid)
    if mode not in NONLINEARITIES:
        raise ValueError(f"unknown nonlinearity: {mode}")

    cubic = dealiased_product([u_hat, u_hat, u_hat], cutoff_factor=padding)
    if mode == "cubic-only":
        return SpectralField(grid, -cubic.coeffs)

    slope = sum(part.coeffs for part in gradient(u_hat))
    advective = dealiased_product(
        [u_hat, SpectralField(grid, slope)], cutoff_factor=padding
    )
    return SpectralField(grid, -cubic.coeffs - advective.coeffs)


@lru_cache(maxsize=16)
def _propagator(grid: Grid, lam: float, dt: float) -> ETDRK4Coefficients:
    return etdrk4_coefficients(linear_symbol(grid, lam), dt)


def step(state: TrajectoryState, cfg: SolverConfig) -> TrajectoryState:
    """
    Advance the state by one ETDRK4 step of size ``cfg.dt``.

    The result is projected onto real fields, so the state stays Hermitian
    over arbitrarily long runs.

    Raises:
        BlowUpError: If any coefficient becomes non-finite
    """
    grid = cfg.grid
    coeffs = _propagator(grid, cfg.lam, cfg.dt)

    def nonlinear(v: np.ndarray) -> np.ndarray:
        return nonlinear_term(
            SpectralField(grid, v), grid, cfg.nonlinearity, cfg.padding
        ).coeffs

    with np.errstate(over="ignore", invalid="ignore"):
        advanced = etdrk4_step(state.u_hat.coeffs, coeffs, nonlinear)

    index = state.step_index + 1
    t = index * cfg.dt
    if not np.all(np.isfinite(advanced)):
        raise BlowUpError(t, float(np.max(np.abs(state.u_hat.coeffs))))
    return TrajectoryState(
        t=t, u_hat=SpectralField(grid, hermitian_part(advanced)), step_index=index
    )


def initial_state(cfg: SolverConfig) -> TrajectoryState:
    """Random smooth initial data u_0 drawn from the config's seed."""
    u0 = random_field(cfg.grid, cfg.seed, cfg.amplitude, cfg.decay)
    return TrajectoryState(t=0.0, u_hat=u0)


def integrate(cfg: SolverConfig, observer: Observer | None = None) -> TrajectoryState:
    """
    Integrate from random initial data to ``t_end``.

    Args:
        cfg: Solver configuration
        observer: Called as observer(t, u_hat) at every multiple of sample_every,
            t = 0 included

    Returns:
        TrajectoryState: State at the last step

    Raises:
        BlowUpError: If the trajectory produces non-finite coefficients
    """
    state = initial_state(cfg)
    total = cfg.total_steps
    every = cfg.steps_per_sample
    progress_every = max(total // 10, 1)

    if observer is not None:
        observer(state.t, state.u_hat)

    for index in range(1, total + 1):
        state = step(state, cfg)
        if observer is not None and index % every == 0:
            observer(state.t, state.u_hat)
        if index % progress_every == 0:
            logger.debug(f"seed={cfg.seed} lambda={cfg.lam}: step {index}/{total}")

    return state
