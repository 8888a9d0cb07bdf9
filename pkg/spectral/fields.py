"""
Fourier representation of real periodic fields on the d-torus.

Coefficients are stored in FFT ordering and normalized so that the samples
satisfy u(x_j) = sum_k c_k exp(2 pi i k.x_j / L). Every product or odd
derivative leaves the Nyquist index at zero.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from spectral.grid import Grid, GridError
from utils.logger import setup_logger


logger = setup_logger("spectral")

HERMITIAN_TOLERANCE = 1e-10
DEFAULT_PADDING = 2.0
DEFAULT_REFINE = 4


class HermitianSymmetryError(ValueError):
    """Raised when coefficients do not describe a real field."""


@dataclass(frozen=True, eq=False)
class RealField:
    """Samples of a real field on the collocation grid."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        if self.samples.shape != self.grid.shape:
            raise GridError(
                f"samples shape {self.samples.shape} does not match grid "
                f"shape {self.grid.shape}"
            )

    @classmethod
    def from_function(
        cls, grid: Grid, func: Callable[..., np.ndarray]
    ) -> "RealField":
        """Sample ``func(x)`` (1D) or ``func(x, y)`` (2D) on the grid."""
        samples = np.asarray(func(*grid.coordinates()), dtype=np.float64)
        return cls(grid, np.broadcast_to(samples, grid.shape).copy())


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients of a real field, indexed by integer mode vector."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise GridError(
                f"coefficient shape {self.coeffs.shape} does not match grid "
                f"shape {self.grid.shape}"
            )

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    @property
    def mean(self) -> float:
        """Spatial average u* (the zero-mode coefficient)."""
        return float(self.coeffs[(0,) * self.grid.d].real)

    def scaled(self, factor: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * factor)


def reflect_modes(coeffs: np.ndarray) -> np.ndarray:
    """Return the array indexed at -k, i.e. ``out[k] = coeffs[-k]``."""
    out = coeffs
    for axis in range(coeffs.ndim):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out


def hermitian_defect(coeffs: np.ndarray) -> float:
    """Largest |c(k) - conj(c(-k))| relative to the largest coefficient."""
    scale = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    if scale == 0.0:
        return 0.0
    defect = np.max(np.abs(coeffs - np.conj(reflect_modes(coeffs))))
    return float(defect) / scale


def hermitian_part(coeffs: np.ndarray) -> np.ndarray:
    """Projection onto real fields: (c(k) + conj(c(-k))) / 2."""
    return (coeffs + np.conj(reflect_modes(coeffs))) / 2.0


def forward_transform(f: RealField) -> SpectralField:
    """
    Transform collocation samples to normalized Fourier coefficients.

    Args:
        f: Real field on a valid grid

    Returns:
        SpectralField: Coefficients with samples = sum_k c_k e^{2 pi i k.x/L}
    """
    n_total = f.grid.N**f.grid.d
    coeffs = np.fft.fftn(f.samples) / n_total
    return SpectralField(f.grid, coeffs)


def inverse_transform(F: SpectralField) -> RealField:
    """
    Evaluate a Hermitian field on the collocation grid.

    Args:
        F: Spectral field

    Returns:
        RealField: Real samples; the imaginary round-off is discarded

    Raises:
        HermitianSymmetryError: If the coefficients are not Hermitian to 1e-10
    """
    defect = hermitian_defect(F.coeffs)
    if defect > HERMITIAN_TOLERANCE:
        raise HermitianSymmetryError(
            f"coefficients violate Hermitian symmetry (relative defect {defect:.3e})"
        )
    n_total = F.grid.N**F.grid.d
    samples = np.fft.ifftn(F.coeffs).real * n_total
    return RealField(F.grid, samples)


def _as_multi_index(order: int | Sequence[int], d: int) -> tuple[int, ...]:
    if isinstance(order, (int, np.integer)):
        if d != 1:
            raise ValueError(f"partial derivative in {d}D needs a multi-index")
        order = (int(order),)
    index = tuple(int(n) for n in order)
    if len(index) != d or any(n < 0 for n in index):
        raise ValueError(f"invalid multi-index {order} for dimension {d}")
    return index


def partial_multiplier(grid: Grid, order: Sequence[int]) -> np.ndarray:
    """Fourier multiplier of the partial derivative with multi-index ``order``."""
    index = _as_multi_index(order, grid.d)
    real_part = np.ones(grid.shape, dtype=np.float64)
    for k, n in zip(grid.modes, index):
        if n == 0:
            continue
        wavenumber = grid.kappa * k.astype(np.float64)
        factor = np.power(wavenumber, n)
        if n % 2 == 1:
            factor = np.where(np.abs(k) == grid.nyquist, 0.0, factor)
        real_part = real_part * factor
    # i^n with n the total order
    phase = (1.0, 1j, -1.0, -1j)[sum(index) % 4]
    return real_part * phase


def laplacian_power_multiplier(grid: Grid, s: float) -> np.ndarray:
    """Multiplier ((2 pi/L)^2 |k|^2)^(s/2) of (-Laplacian)^(s/2)."""
    if s < 0:
        raise ValueError(f"fractional order must be >= 0, got {s}")
    rho = grid.kappa**2 * grid.mode_norm_squared
    return np.power(rho, s / 2.0)


def spectral_derivative(
    F: SpectralField,
    order: int | float | Sequence[int],
    kind: str = "partial",
) -> SpectralField:
    """
    Apply a Fourier-multiplier derivative.

    Args:
        F: Spectral field
        order: Multi-index n (``kind="partial"``) or real s >= 0
            (``kind="fractional-laplacian"``)
        kind: ``"partial"`` or ``"fractional-laplacian"``

    Returns:
        SpectralField: The derivative; ``fractional-laplacian`` applies
        (-Laplacian)^(s/2)
    """
    if kind == "partial":
        multiplier = partial_multiplier(F.grid, order)  # type: ignore[arg-type]
    elif kind == "fractional-laplacian":
        multiplier = laplacian_power_multiplier(F.grid, float(order))  # type: ignore[arg-type]
    else:
        raise ValueError(f"unknown derivative kind: {kind}")
    return SpectralField(F.grid, F.coeffs * multiplier)


def gradient(F: SpectralField) -> tuple[SpectralField, ...]:
    """First partial derivatives along every axis."""
    d = F.grid.d
    return tuple(
        spectral_derivative(F, tuple(int(i == axis) for i in range(d)))
        for axis in range(d)
    )


def sobolev_seminorm(F: SpectralField, s: float) -> float:
    """
    Squared H^s seminorm by Parseval.

    J_s = L^d (2 pi/L)^(2s) sum_k |k|^(2s) |c_k|^2. For s = 0 this is the
    squared L2 norm; for s > 0 the mean does not contribute.
    """
    if s < 0:
        raise ValueError(f"seminorm order must be >= 0, got {s}")
    grid = F.grid
    weights = np.power(grid.mode_norm_squared, s)
    total = float(np.sum(weights * np.abs(F.coeffs) ** 2))
    return grid.volume * grid.kappa ** (2.0 * s) * total


def padded_size(N: int, cutoff_factor: float) -> int:
    """Points per axis after zero padding, rounded up to an even count."""
    size = math.ceil(cutoff_factor * N)
    return size + (size % 2)


def _pad_axis(coeffs: np.ndarray, axis: int, size: int) -> np.ndarray:
    moved = np.moveaxis(coeffs, axis, 0)
    n = moved.shape[0]
    half = n // 2
    out = np.zeros((size,) + moved.shape[1:], dtype=np.complex128)
    out[:half] = moved[:half]
    out[size - half + 1 :] = moved[half + 1 :]
    if size > n:
        # Nyquist coefficient splits evenly between +N/2 and -N/2
        out[half] = moved[half] / 2
        out[size - half] = moved[half] / 2
    else:
        out[half] = moved[half]
    return np.moveaxis(out, 0, axis)


def _truncate_axis(coeffs: np.ndarray, axis: int, n: int) -> np.ndarray:
    moved = np.moveaxis(coeffs, axis, 0)
    size = moved.shape[0]
    half = n // 2
    out = np.zeros((n,) + moved.shape[1:], dtype=np.complex128)
    out[:half] = moved[:half]
    out[half + 1 :] = moved[size - half + 1 :]
    return np.moveaxis(out, 0, axis)


def pad_coefficients(coeffs: np.ndarray, size: int) -> np.ndarray:
    """Zero-pad coefficients to ``size`` modes per axis."""
    out = coeffs
    for axis in range(coeffs.ndim):
        out = _pad_axis(out, axis, size)
    return out


def truncate_coefficients(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Keep modes |k_i| < n/2 and zero the Nyquist index."""
    out = coeffs
    for axis in range(coeffs.ndim):
        out = _truncate_axis(out, axis, n)
    return out


def _padded_samples(coeffs: np.ndarray, size: int) -> np.ndarray:
    padded = pad_coefficients(coeffs, size)
    return np.fft.ifftn(padded).real * size**coeffs.ndim


def dealiased_product(
    factors: Sequence[SpectralField], cutoff_factor: float = DEFAULT_PADDING
) -> SpectralField:
    """
    Pointwise product of two or three fields without aliasing.

    Args:
        factors: Two or three fields on the same grid
        cutoff_factor: Padding factor, at least (len(factors) + 1) / 2

    Returns:
        SpectralField: Product truncated back to the original band

    Raises:
        GridError: If the factors live on different grids
    """
    if len(factors) not in (2, 3):
        raise ValueError(f"dealiased_product takes 2 or 3 factors, got {len(factors)}")
    minimum = (len(factors) + 1) / 2
    if cutoff_factor < minimum:
        raise ValueError(
            f"cutoff_factor {cutoff_factor} below {minimum} for {len(factors)} factors"
        )
    grid = factors[0].grid
    for other in factors[1:]:
        grid.check_same(other.grid)

    size = padded_size(grid.N, cutoff_factor)
    # repeated factors (u * u * u) are padded once
    samples: dict[int, np.ndarray] = {}
    product = np.ones((size,) * grid.d, dtype=np.float64)
    for factor in factors:
        if id(factor) not in samples:
            samples[id(factor)] = _padded_samples(factor.coeffs, size)
        product = product * samples[id(factor)]

    coeffs = np.fft.fftn(product) / size**grid.d
    return SpectralField(grid, truncate_coefficients(coeffs, grid.N))


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def refined_samples(F: SpectralField, refine: int) -> np.ndarray:
    """
    Evaluate F on the grid refined ``refine`` times per axis.

    Raises:
        ValueError: Unless refine is a power of two (1, 2, 4, ...)
    """
    if int(refine) != refine or not is_power_of_two(int(refine)):
        raise ValueError(f"refine must be a power of two >= 1, got {refine}")
    if refine == 1:
        return inverse_transform(F).samples
    return _padded_samples(F.coeffs, F.grid.N * int(refine))


def sup_norm_estimate(F: SpectralField, refine: int = DEFAULT_REFINE) -> float:
    """
    Lower estimate of the sup-norm from a zero-padded evaluation.

    Refinements are powers of two, so the evaluation grids are nested and
    the estimate is nondecreasing in refine.
    """
    return float(np.max(np.abs(refined_samples(F, refine))))


def random_field(
    grid: Grid,
    seed: int,
    amplitude: float = 1.0,
    decay: float = 3.0,
    band: float | None = None,
) -> SpectralField:
    """
    Hermitian random field with an algebraically decaying spectrum.

    Args:
        grid: Target grid
        seed: Seed for ``np.random.default_rng``
        amplitude: Magnitude of the mean mode, must be > 0
        decay: Spectral decay exponent, must be > 1
        band: Optional Euclidean cutoff; modes with |k| > band are zero

    Returns:
        SpectralField: |c_k| = amplitude (1 + |k|)^(-decay), random phases
    """
    if not amplitude > 0:
        raise ValueError(f"amplitude must be > 0, got {amplitude}")
    if not decay > 1:
        raise ValueError(f"decay must be > 1, got {decay}")

    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=grid.shape)
    # odd in k, so c(-k) = conj(c(k))
    phases = (phases - reflect_modes(phases)) / 2.0

    norm_k = np.sqrt(grid.mode_norm_squared)
    magnitude = amplitude * (1.0 + norm_k) ** (-decay)
    magnitude[grid.nyquist_mask] = 0.0
    if band is not None:
        magnitude[norm_k > band] = 0.0

    logger.debug(f"random_field seed={seed} d={grid.d} N={grid.N} band={band}")
    return SpectralField(grid, magnitude * np.exp(1j * phases))


def fluctuation(F: SpectralField) -> SpectralField:
    """Remove the mean: u' = u - u*."""
    coeffs = F.coeffs.copy()
    coeffs[(0,) * F.grid.d] = 0.0
    return SpectralField(F.grid, coeffs)
