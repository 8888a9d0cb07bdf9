import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


SUPPORTED_DIMENSIONS = (1, 2)
MIN_POINTS = 8


class GridError(ValueError):
    """Raised for an invalid grid or for fields living on different grids."""


@dataclass(frozen=True)
class Grid:
    """Uniform collocation grid on the periodic torus [0, L]^d."""

    d: int
    N: int
    L: float

    def __post_init__(self):
        if self.d not in SUPPORTED_DIMENSIONS:
            raise GridError(f"grid.d: dimension must be 1 or 2, got {self.d}")
        if self.N < MIN_POINTS or self.N & (self.N - 1) != 0:
            raise GridError(
                f"grid.N: points per axis must be a power of two >= {MIN_POINTS}, "
                f"got {self.N}"
            )
        if not (math.isfinite(self.L) and self.L > 0):
            raise GridError(f"grid.L: side length must be positive, got {self.L}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.d

    @property
    def volume(self) -> float:
        """Measure of the torus, L^d."""
        return self.L**self.d

    @property
    def kappa(self) -> float:
        """Wavenumber of the integer mode 1, 2*pi/L."""
        return 2.0 * math.pi / self.L

    @property
    def nyquist(self) -> int:
        return self.N // 2

    @cached_property
    def modes(self) -> tuple[np.ndarray, ...]:
        """
        Integer mode numbers per axis, broadcast to the full grid shape.

        Modes follow FFT ordering: 0, 1, ..., N/2-1, -N/2, ..., -1.
        """
        k = np.fft.fftfreq(self.N, d=1.0 / self.N).round().astype(np.int64)
        return tuple(np.meshgrid(*([k] * self.d), indexing="ij"))

    @cached_property
    def mode_norm_squared(self) -> np.ndarray:
        """Integer |k|^2 on the full grid (as float64)."""
        return sum(k.astype(np.float64) ** 2 for k in self.modes)

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """True wherever any axis sits on the Nyquist index."""
        mask = np.zeros(self.shape, dtype=bool)
        for k in self.modes:
            mask |= np.abs(k) == self.nyquist
        return mask

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Collocation coordinates x_j = j L / N, broadcast to the grid shape."""
        x = np.arange(self.N) * (self.L / self.N)
        return tuple(np.meshgrid(*([x] * self.d), indexing="ij"))

    def check_same(self, other: "Grid") -> None:
        """Raise GridError unless ``other`` describes the same grid."""
        if other != self:
            raise GridError(f"grid mismatch: {self} vs {other}")
