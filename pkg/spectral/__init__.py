"""
Spectral core: grids, Fourier fields, derivatives and seminorms.
"""

from .fields import (
    HermitianSymmetryError,
    RealField,
    SpectralField,
    dealiased_product,
    fluctuation,
    forward_transform,
    gradient,
    hermitian_defect,
    hermitian_part,
    inverse_transform,
    random_field,
    sobolev_seminorm,
    spectral_derivative,
    sup_norm_estimate,
)
from .grid import Grid, GridError


__all__ = [
    "Grid",
    "GridError",
    "HermitianSymmetryError",
    "RealField",
    "SpectralField",
    "dealiased_product",
    "fluctuation",
    "forward_transform",
    "gradient",
    "hermitian_defect",
    "hermitian_part",
    "inverse_transform",
    "random_field",
    "sobolev_seminorm",
    "spectral_derivative",
    "sup_norm_estimate",
]
