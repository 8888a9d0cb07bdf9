import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import pandas as pd
from scipy import integrate, stats

from spectral.fields import (
    DEFAULT_PADDING,
    DEFAULT_REFINE,
    SpectralField,
    dealiased_product,
    sobolev_seminorm,
    sup_norm_estimate,
)
from spectral.grid import Grid


SERIES_COLUMNS = ["t", "J0", "J1", "J2", "J3", "J4", "sup", "mean", "J0_prime", "crest"]
TRACKED = SERIES_COLUMNS[1:]
MIN_TAIL_SAMPLES = 10


class InsufficientTailError(ValueError):
    """Raised when fewer than the required samples lie beyond the transient."""


class ZeroEnergyError(ValueError):
    """Raised when a crest factor is requested for a sample with J0 = 0."""

    def __init__(self, time: float):
        super().__init__(f"J0 vanishes at t={time:.6g}; crest factor undefined")
        self.time = time


@dataclass(frozen=True)
class ObservableRow:
    """Observables of one sampled state."""

    t: float
    J: tuple[float, float, float, float, float]
    sup: float
    mean: float
    J0_prime: float
    crest: float

    def as_record(self) -> dict:
        record = {"t": self.t}
        record.update({f"J{n}": value for n, value in enumerate(self.J)})
        record.update(
            sup=self.sup, mean=self.mean, J0_prime=self.J0_prime, crest=self.crest
        )
        return record


@dataclass
class ObservableSeries:
    """Time-ordered observables along one trajectory."""

    rows: list[ObservableRow] = field(default_factory=list)

    def append(self, row: ObservableRow) -> None:
        if self.rows and row.t <= self.rows[-1].t:
            raise ValueError(f"sample time {row.t} is not after {self.rows[-1].t}")
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        """Series as a DataFrame with the stable column order of SERIES_COLUMNS."""
        return pd.DataFrame([row.as_record() for row in self.rows], columns=SERIES_COLUMNS)

    @property
    def times(self) -> np.ndarray:
        return np.array([row.t for row in self.rows])

    def column(self, name: str) -> np.ndarray:
        return self.to_frame()[name].to_numpy(dtype=np.float64)


@dataclass(frozen=True)
class TailStatistics:
    """Tail maximum (limsup estimate) and trapezoid time average per observable."""

    transient: float
    samples: int
    limsup_estimate: dict[str, float]
    time_average: dict[str, float]


class PowerLawFit(NamedTuple):
    exponent: float
    prefactor: float
    r_squared: float


def record(
    u_hat: SpectralField,
    grid: Grid,
    t: float,
    refine: int = DEFAULT_REFINE,
) -> ObservableRow:
    """
    Compute the observables of one state.

    Args:
        u_hat: Spectral state
        grid: Grid of the state
        t: Sample time
        refine: Refinement factor of the sup-norm estimate

    Returns:
        ObservableRow: J_0..J_4, sup-norm, mean u*, J_0' and crest factor
    """
    grid.check_same(u_hat.grid)
    J = tuple(sobolev_seminorm(u_hat, n) for n in range(5))
    sup = sup_norm_estimate(u_hat, refine)
    mean = u_hat.mean
    J0_prime = max(J[0] - grid.volume * mean**2, 0.0)
    if J[0] > 0:
        crest = grid.volume ** 0.5 * sup / math.sqrt(J[0])
    else:
        crest = math.nan
    return ObservableRow(t=t, J=J, sup=sup, mean=mean, J0_prime=J0_prime, crest=crest)  # type: ignore[arg-type]


def _tail(series: ObservableSeries, transient: float) -> pd.DataFrame:
    frame = series.to_frame()
    tail = frame[frame["t"] > transient]
    if len(tail) < MIN_TAIL_SAMPLES:
        raise InsufficientTailError(
            f"{len(tail)} samples after transient {transient}; "
            f"need at least {MIN_TAIL_SAMPLES}"
        )
    return tail


def _trapezoid_mean(t: np.ndarray, values: np.ndarray) -> float:
    return float(integrate.trapezoid(values, t) / (t[-1] - t[0]))


def tail_stats(series: ObservableSeries, transient: float) -> TailStatistics:
    """
    Tail statistics over samples with t > transient.

    Raises:
        InsufficientTailError: With fewer than ten tail samples
    """
    tail = _tail(series, transient)
    t = tail["t"].to_numpy()
    limsup = {name: float(tail[name].max()) for name in TRACKED}
    average = {name: _trapezoid_mean(t, tail[name].to_numpy()) for name in TRACKED}
    return TailStatistics(
        transient=transient,
        samples=len(tail),
        limsup_estimate=limsup,
        time_average=average,
    )


def crest_time_average(series: ObservableSeries, transient: float) -> float:
    """
    Trapezoid time average of the crest factor over the tail.

    Raises:
        ZeroEnergyError: If J0 vanishes at a tail sample
    """
    tail = _tail(series, transient)
    empty = tail[tail["J0"] <= 0]
    if len(empty):
        raise ZeroEnergyError(float(empty["t"].iloc[0]))
    return _trapezoid_mean(tail["t"].to_numpy(), tail["crest"].to_numpy())


def time_average_ratios(series: ObservableSeries, transient: float) -> dict[str, float]:
    """
    Tail averages entering the crest-factor estimates.

    Returns:
        dict: ``ratio_J1_J0_sq`` = <(J1/J0)^2>, ``ratio_J2_J0`` = <J2/J0> and
        ``J1_avg``, ``J2_avg``, ``J3_avg``
    """
    tail = _tail(series, transient)
    empty = tail[tail["J0"] <= 0]
    if len(empty):
        raise ZeroEnergyError(float(empty["t"].iloc[0]))
    t = tail["t"].to_numpy()
    J0 = tail["J0"].to_numpy()
    return {
        "ratio_J1_J0_sq": _trapezoid_mean(t, (tail["J1"].to_numpy() / J0) ** 2),
        "ratio_J2_J0": _trapezoid_mean(t, tail["J2"].to_numpy() / J0),
        "J1_avg": _trapezoid_mean(t, tail["J1"].to_numpy()),
        "J2_avg": _trapezoid_mean(t, tail["J2"].to_numpy()),
        "J3_avg": _trapezoid_mean(t, tail["J3"].to_numpy()),
    }


def fit_power_law(xs, ys) -> PowerLawFit:
    """
    Least-squares power law y = prefactor * x^exponent in log-log coordinates.

    Args:
        xs: Positive abscissae, at least three
        ys: Positive ordinates

    Returns:
        PowerLawFit: exponent, prefactor and coefficient of determination
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be one-dimensional and of equal length")
    if len(x) < 3:
        raise ValueError(f"power-law fit needs at least 3 points, got {len(x)}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs strictly positive data")
    result = stats.linregress(np.log(x), np.log(y))
    return PowerLawFit(
        exponent=float(result.slope),
        prefactor=float(math.exp(result.intercept)),
        r_squared=float(result.rvalue**2),
    )


def energy_budget(
    u_hat: SpectralField,
    lam: float,
    mode: str = "full",
    padding: float = DEFAULT_PADDING,
) -> float:
    """
    Right-hand side of the energy identity 1/2 dJ0/dt = -J2 + J1 + lam J0 - int u^4.

    The advective term integrates to zero on the torus; ``mode="none"`` drops
    the quartic term.
    """
    budget = (
        -sobolev_seminorm(u_hat, 2)
        + sobolev_seminorm(u_hat, 1)
        + lam * sobolev_seminorm(u_hat, 0)
    )
    if mode == "none":
        return budget
    cube = dealiased_product([u_hat, u_hat, u_hat], cutoff_factor=padding)
    quartic = u_hat.grid.volume * float(np.sum(np.conj(u_hat.coeffs) * cube.coeffs).real)
    return budget - quartic
