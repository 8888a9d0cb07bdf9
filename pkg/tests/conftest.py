"""Pytest configuration and shared fixtures."""

import math

import numpy as np
import pytest

from dynamics.mkse_solver import SolverConfig
from spectral.fields import RealField, forward_transform, random_field
from spectral.grid import Grid


TWO_PI = 2.0 * math.pi


@pytest.fixture
def grid_1d():
    """1D grid on [0, 2 pi] with 64 points."""
    return Grid(d=1, N=64, L=TWO_PI)


@pytest.fixture
def grid_2d():
    """2D grid on [0, 2 pi]^2 with 32 points per axis."""
    return Grid(d=2, N=32, L=TWO_PI)


@pytest.fixture
def odd_grid_1d():
    """1D grid whose side length is not 2 pi."""
    return Grid(d=1, N=64, L=3.0)


@pytest.fixture
def sine_1d(odd_grid_1d):
    """sin(2 pi x / L) on the odd-length grid."""
    grid = odd_grid_1d
    return forward_transform(
        RealField.from_function(grid, lambda x: np.sin(grid.kappa * x))
    )


@pytest.fixture
def random_1d(grid_1d):
    """Band-limited random 1D field (products stay alias free)."""
    return random_field(grid_1d, seed=7, band=grid_1d.N // 4 - 1)


@pytest.fixture
def random_2d(grid_2d):
    """Band-limited random 2D field (products stay alias free)."""
    return random_field(grid_2d, seed=11, band=grid_2d.N // 4 - 1)


@pytest.fixture
def short_config():
    """Short 1D run at lambda = 1 used by solver and CLI tests."""
    return SolverConfig(
        grid=Grid(d=1, N=64, L=TWO_PI),
        lam=1.0,
        dt=0.01,
        t_end=2.0,
        transient=1.0,
        sample_every=0.1,
        seed=3,
    )


@pytest.fixture
def run_config_dict():
    """Minimal valid run-config document as loaded from YAML."""
    return {
        "grid": {"d": 1, "N": 32, "L": TWO_PI},
        "dynamics": {
            "lambda": 1.0,
            "dt": 0.01,
            "t_end": 3.0,
            "transient": 1.5,
            "sample_every": 0.05,
            "nonlinearity": "full",
        },
        "init": {"seed": 0, "amplitude": 1.0, "decay": 3.0},
        "output": {"directory": "out", "formats": ["csv", "json"]},
    }
