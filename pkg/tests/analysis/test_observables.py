"""Tests for per-sample observables and tail statistics."""

import math

import numpy as np
import pytest

from analysis.inequality_lab import check_agmon_general
from analysis.observables import (
    SERIES_COLUMNS,
    InsufficientTailError,
    ObservableRow,
    ObservableSeries,
    ZeroEnergyError,
    crest_time_average,
    energy_budget,
    fit_power_law,
    record,
    tail_stats,
    time_average_ratios,
)
from dynamics.mkse_solver import SolverConfig, initial_state, integrate, step
from spectral.fields import (
    RealField,
    SpectralField,
    fluctuation,
    forward_transform,
    inverse_transform,
    sobolev_seminorm,
)
from spectral.grid import Grid


TWO_PI = 2.0 * math.pi


def _row(t, J0=1.0, J1=1.0, J2=1.0, crest=1.5):
    return ObservableRow(
        t=t, J=(J0, J1, J2, 1.0, 1.0), sup=1.0, mean=0.0, J0_prime=J0, crest=crest
    )


def _series(times, **columns):
    series = ObservableSeries()
    for index, t in enumerate(times):
        values = {name: float(column[index]) for name, column in columns.items()}
        series.append(_row(float(t), **values))
    return series


class TestRecord:
    """Test suite for single-state observables."""

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_constant_field_has_unit_crest(self, grid_1d):
        coeffs = np.zeros(grid_1d.shape, dtype=np.complex128)
        coeffs[0] = 1.7
        row = record(SpectralField(grid_1d, coeffs), grid_1d, 0.0)

        assert row.J[0] == pytest.approx(TWO_PI * 1.7**2)
        assert row.J[1] == 0.0
        assert row.crest == pytest.approx(1.0)
        assert row.J0_prime == pytest.approx(0.0, abs=1e-12)
        assert row.mean == pytest.approx(1.7)

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_sine_crest_is_root_two(self, grid_1d):
        field = forward_transform(RealField.from_function(grid_1d, np.sin))
        row = record(field, grid_1d, 0.5)

        assert row.sup == pytest.approx(1.0, rel=1e-12)
        assert row.J[0] == pytest.approx(math.pi, rel=1e-12)
        assert row.crest == pytest.approx(math.sqrt(2.0), rel=1e-12)

    @pytest.mark.unit
    @pytest.mark.analysis
    @pytest.mark.parametrize("offset", [0.0, 0.3, -2.0])
    def test_fluctuation_energy_ignores_mean(self, grid_1d, offset):
        field = forward_transform(
            RealField.from_function(grid_1d, lambda x: np.sin(x) + offset)
        )
        row = record(field, grid_1d, 0.0)

        assert row.J0_prime == pytest.approx(math.pi, rel=1e-10)
        assert row.mean == pytest.approx(offset, abs=1e-14)

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_zero_field_crest_is_nan(self, grid_2d):
        row = record(SpectralField.zeros(grid_2d), grid_2d, 1.0)

        assert math.isnan(row.crest)
        assert row.J == (0.0, 0.0, 0.0, 0.0, 0.0)

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_seminorms_match_field_helpers(self, random_2d, grid_2d):
        row = record(random_2d, grid_2d, 0.0)

        for n in range(5):
            assert row.J[n] == pytest.approx(sobolev_seminorm(random_2d, n))


class TestObservableSeries:
    """Test suite for the series container."""

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_frame_column_order(self):
        series = _series([0.0, 0.1], J0=[1.0, 2.0])
        frame = series.to_frame()

        assert list(frame.columns) == SERIES_COLUMNS
        assert frame["J0"].tolist() == [1.0, 2.0]
        assert len(series) == 2

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_rejects_non_increasing_time(self):
        series = _series([0.0, 0.1])

        with pytest.raises(ValueError, match="not after"):
            series.append(_row(0.1))

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_column_access(self):
        series = _series([0.0, 0.5, 1.0], J1=[3.0, 4.0, 5.0])

        np.testing.assert_array_equal(series.column("J1"), [3.0, 4.0, 5.0])
        np.testing.assert_array_equal(series.times, [0.0, 0.5, 1.0])


class TestTailStatistics:
    """Test suite for tail maxima and time averages."""

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_periodic_average_and_maximum(self):
        t = np.arange(2001) * math.pi / 100.0
        series = _series(t, J0=2.0 + np.sin(t))

        stats = tail_stats(series, transient=-1.0)

        assert stats.samples == 2001
        assert stats.time_average["J0"] == pytest.approx(2.0, abs=1e-12)
        assert stats.limsup_estimate["J0"] == pytest.approx(3.0, abs=1e-14)

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_transient_is_excluded(self):
        t = np.linspace(0.0, 2.0, 21)
        J0 = np.where(t <= 1.0, 100.0, 1.0)
        stats = tail_stats(_series(t, J0=J0), transient=1.0)

        assert stats.samples == 10
        assert stats.limsup_estimate["J0"] == 1.0
        assert stats.time_average["J0"] == pytest.approx(1.0)

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_short_tail_raises(self):
        t = np.linspace(0.0, 1.0, 11)
        with pytest.raises(InsufficientTailError, match="at least 10"):
            tail_stats(_series(t), transient=0.5)

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_crest_average(self):
        t = np.linspace(0.0, 3.0, 31)
        crest = 2.0 + 0.0 * t
        assert crest_time_average(_series(t, crest=crest), 1.0) == pytest.approx(2.0)

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_crest_average_rejects_zero_energy(self):
        t = np.linspace(0.0, 3.0, 31)
        J0 = np.ones_like(t)
        J0[25] = 0.0
        with pytest.raises(ZeroEnergyError) as excinfo:
            crest_time_average(_series(t, J0=J0), 1.0)
        assert excinfo.value.time == pytest.approx(t[25])

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_ratio_averages(self):
        t = np.linspace(0.0, 3.0, 31)
        series = _series(t, J0=2.0 + 0.0 * t, J1=4.0 + 0.0 * t, J2=6.0 + 0.0 * t)

        ratios = time_average_ratios(series, 1.0)

        assert ratios["ratio_J1_J0_sq"] == pytest.approx(4.0)
        assert ratios["ratio_J2_J0"] == pytest.approx(3.0)
        assert ratios["J1_avg"] == pytest.approx(4.0)
        assert ratios["J3_avg"] == pytest.approx(1.0)


class TestFitPowerLaw:
    """Test suite for log-log least squares."""

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_exact_power_law(self):
        x = np.array([1.0, 2.0, 4.0, 8.0])
        fit = fit_power_law(x, 3.0 * x**2)

        assert fit.exponent == pytest.approx(2.0)
        assert fit.prefactor == pytest.approx(3.0)
        assert fit.r_squared == pytest.approx(1.0)

    @pytest.mark.unit
    @pytest.mark.analysis
    @pytest.mark.parametrize(
        "xs,ys,message",
        [
            ([1.0, 2.0], [1.0, 2.0], "at least 3"),
            ([1.0, 2.0, 3.0], [1.0, 0.0, 3.0], "positive"),
            ([1.0, 2.0, 3.0], [1.0, 2.0], "equal length"),
        ],
    )
    def test_invalid_input(self, xs, ys, message):
        with pytest.raises(ValueError, match=message):
            fit_power_law(xs, ys)


class TestEnergyBudget:
    """Test suite for the energy identity."""

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_sine_budget_without_nonlinearity(self, odd_grid_1d, sine_1d):
        kappa = odd_grid_1d.kappa
        J0 = odd_grid_1d.L / 2.0
        expected = (-kappa**4 + kappa**2 + 0.5) * J0

        assert energy_budget(sine_1d, 0.5, mode="none") == pytest.approx(expected)

    @pytest.mark.unit
    @pytest.mark.analysis
    @pytest.mark.parametrize("d,N,L", [(1, 64, TWO_PI), (2, 32, 7.0)])
    def test_matches_finite_difference(self, d, N, L):
        """Test 1/2 dJ0/dt against a central difference along a trajectory."""
        cfg = SolverConfig(
            grid=Grid(d=d, N=N, L=L),
            lam=1.0,
            dt=1e-4,
            t_end=0.2,
            transient=0.1,
            sample_every=0.01,
            seed=5,
        )
        state = initial_state(cfg)
        for _ in range(500):
            state = step(state, cfg)
        before = sobolev_seminorm(state.u_hat, 0)
        middle = step(state, cfg)
        after = sobolev_seminorm(step(middle, cfg).u_hat, 0)

        derivative = (after - before) / (2.0 * cfg.dt) / 2.0
        budget = energy_budget(middle.u_hat, cfg.lam)
        scale = sum(sobolev_seminorm(middle.u_hat, n) for n in range(3))

        assert abs(derivative - budget) <= 1e-4 * scale


class TestTrajectoryObservables:
    """Test suite for observables sampled along real trajectories."""

    @pytest.fixture(params=[(1, 64, TWO_PI), (2, 32, 5.0)], ids=["1d", "2d"])
    def samples(self, request):
        d, N, L = request.param
        cfg = SolverConfig(
            grid=Grid(d=d, N=N, L=L),
            lam=1.0,
            dt=0.01,
            t_end=5.0,
            transient=2.5,
            sample_every=0.25,
            seed=4,
        )
        states = []
        integrate(cfg, lambda t, u: states.append((record(u, cfg.grid, t, cfg.refine), u)))
        return cfg, states

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_mean_matches_quadrature(self, samples):
        """Test u* against the sample average of the physical field."""
        _, states = samples
        for row, u in states:
            physical = inverse_transform(u).samples
            scale = max(float(np.max(np.abs(physical))), 1.0)
            assert row.mean == pytest.approx(float(np.mean(physical)), abs=1e-12 * scale)
            assert row.mean == u.coeffs.flat[0].real

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_fluctuation_energy_identity(self, samples):
        """Test J0' + L^d u*^2 = J0 and J0' = J0 of the fluctuation on every row."""
        cfg, states = samples
        for row, u in states:
            J0 = row.J[0]
            assert row.J0_prime + cfg.grid.volume * row.mean**2 == pytest.approx(J0, rel=1e-12)
            assert row.J0_prime == pytest.approx(
                sobolev_seminorm(fluctuation(u), 0), rel=1e-10, abs=1e-12 * J0
            )

    @pytest.mark.unit
    @pytest.mark.analysis
    def test_agmon_holds_on_every_sample(self, samples):
        """Test the Agmon inequality with n = d on every recorded state."""
        cfg, states = samples
        for row, u in states:
            check = check_agmon_general(u, n=cfg.grid.d, refine=cfg.refine)
            assert check.passed(), f"t={row.t}: {check.lhs} > {check.rhs}"
            assert check.lhs == pytest.approx(row.sup)
