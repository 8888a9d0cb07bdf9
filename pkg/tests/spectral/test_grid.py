"""Tests for the collocation grid."""

import math

import numpy as np
import pytest

from spectral.grid import Grid, GridError


class TestGrid:
    """Test suite for Grid."""

    @pytest.mark.unit
    @pytest.mark.spectral
    @pytest.mark.parametrize(
        "d,N,L,field",
        [
            (3, 64, 1.0, "grid.d"),
            (0, 64, 1.0, "grid.d"),
            (1, 4, 1.0, "grid.N"),
            (1, 48, 1.0, "grid.N"),
            (2, 64, 0.0, "grid.L"),
            (1, 64, -2.0, "grid.L"),
            (1, 64, float("nan"), "grid.L"),
        ],
    )
    def test_rejects_invalid_parameters(self, d, N, L, field):
        """Test that invalid grids raise GridError naming the field."""
        with pytest.raises(GridError, match=field):
            Grid(d=d, N=N, L=L)

    @pytest.mark.unit
    @pytest.mark.spectral
    def test_modes_follow_fft_ordering(self):
        """Test integer modes in FFT order."""
        grid = Grid(d=1, N=8, L=1.0)

        assert grid.modes[0].tolist() == [0, 1, 2, 3, -4, -3, -2, -1]
        assert grid.nyquist == 4

    @pytest.mark.unit
    @pytest.mark.spectral
    def test_mode_norm_squared_2d(self):
        """Test |k|^2 on a 2D grid."""
        grid = Grid(d=2, N=8, L=1.0)

        assert grid.mode_norm_squared.shape == (8, 8)
        assert grid.mode_norm_squared[1, 2] == 5.0
        assert grid.mode_norm_squared[-1, -3] == 10.0

    @pytest.mark.unit
    @pytest.mark.spectral
    def test_nyquist_mask(self):
        """Test that the mask marks any axis at N/2."""
        grid = Grid(d=2, N=8, L=1.0)

        assert grid.nyquist_mask[4, 0]
        assert grid.nyquist_mask[1, 4]
        assert not grid.nyquist_mask[3, -3]
        assert grid.nyquist_mask.sum() == 8 + 8 - 1

    @pytest.mark.unit
    @pytest.mark.spectral
    def test_geometry(self):
        """Test volume, wavenumber scale and coordinates."""
        grid = Grid(d=2, N=16, L=3.0)
        x, y = grid.coordinates()

        assert grid.volume == pytest.approx(9.0)
        assert grid.kappa == pytest.approx(2 * math.pi / 3.0)
        assert x.shape == (16, 16)
        np.testing.assert_allclose(x[:, 0], np.arange(16) * 3.0 / 16)
        np.testing.assert_allclose(y[0, :], np.arange(16) * 3.0 / 16)

    @pytest.mark.unit
    @pytest.mark.spectral
    def test_check_same(self):
        """Test grid comparison."""
        Grid(1, 16, 1.0).check_same(Grid(1, 16, 1.0))

        with pytest.raises(GridError, match="mismatch"):
            Grid(1, 16, 1.0).check_same(Grid(1, 32, 1.0))
