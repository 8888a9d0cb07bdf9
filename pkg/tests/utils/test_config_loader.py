"""Tests for run-config loading and validation."""

import copy
import math

import pytest
import yaml

from utils.config_loader import (
    ConfigError,
    load_run_config,
    load_settings,
    parse_run_config,
)


def _with(document, section, **values):
    changed = copy.deepcopy(document)
    changed.setdefault(section, {}).update(values)
    return changed


class TestParseRunConfig:
    """Test suite for document validation."""

    @pytest.mark.unit
    @pytest.mark.utils
    def test_valid_document(self, run_config_dict):
        config = parse_run_config(run_config_dict)

        assert config.solver.grid.N == 32
        assert config.solver.lam == 1.0
        assert config.solver.steps_per_sample == 5
        assert config.solver.refine == 4
        assert config.solver.padding == 2.0
        assert config.output.formats == ("csv", "json")
        assert config.sweep is None
        assert config.document == run_config_dict

    @pytest.mark.unit
    @pytest.mark.utils
    def test_defaults_per_dimension(self):
        config = parse_run_config({"grid": {"d": 2}})

        assert config.solver.grid.N == 64
        assert config.solver.grid.L == pytest.approx(2.0 * math.pi)
        assert config.solver.dt == 0.01
        assert config.solver.t_end == 100.0
        assert config.solver.transient == 50.0
        assert config.output.formats == ("csv", "json", "svg")

    @pytest.mark.unit
    @pytest.mark.utils
    @pytest.mark.parametrize(
        "section,values,field_name",
        [
            ("dynamics", {"dt": 0.05}, "dynamics.dt"),
            ("dynamics", {"lambda": "big"}, "dynamics.lambda"),
            ("dynamics", {"nonlinearity": "quadratic"}, "dynamics.nonlinearity"),
            ("dynamics", {"transient": 2.8}, "dynamics.transient"),
            ("dynamics", {"sample_every": 0.055}, "dynamics.sample_every"),
            ("grid", {"N": 48}, "grid.N"),
            ("grid", {"L": -1.0}, "grid.L"),
            ("grid", {"d": 3}, "grid.d"),
            ("init", {"decay": 0.5}, "init.decay"),
            ("init", {"seed": 1.5}, "init.seed"),
            ("output", {"formats": ["pdf"]}, "output.formats"),
            ("sweep", {"values": [1.0, 2.0]}, "sweep.values"),
            ("sweep", {"parameter": "N", "values": [1, 2, 3]}, "sweep.parameter"),
            ("sweep", {"values": [1, 2, 3], "seeds": []}, "sweep.seeds"),
            ("numerics", {"padding": 1.5}, "numerics.padding"),
            ("numerics", {"refine": 3}, "numerics.refine"),
            ("numerics", {"refine": 0}, "numerics.refine"),
        ],
    )
    def test_field_errors(self, run_config_dict, section, values, field_name):
        with pytest.raises(ConfigError) as excinfo:
            parse_run_config(_with(run_config_dict, section, **values))

        assert excinfo.value.field == field_name
        assert str(excinfo.value).startswith(f"{field_name}: ")

    @pytest.mark.unit
    @pytest.mark.utils
    def test_dt_error_names_dt(self, run_config_dict):
        with pytest.raises(ConfigError, match="dt"):
            parse_run_config(_with(run_config_dict, "dynamics", dt=0.05))

    @pytest.mark.unit
    @pytest.mark.utils
    def test_unknown_section(self, run_config_dict):
        document = dict(run_config_dict, plots={"dpi": 300})

        with pytest.raises(ConfigError, match="plots: unknown section"):
            parse_run_config(document)

    @pytest.mark.unit
    @pytest.mark.utils
    def test_missing_dimension(self):
        with pytest.raises(ConfigError, match="grid.d: required"):
            parse_run_config({"dynamics": {"lambda": 1.0}})

    @pytest.mark.unit
    @pytest.mark.utils
    def test_top_level_must_be_mapping(self):
        with pytest.raises(ConfigError, match="document"):
            parse_run_config(["grid"])


class TestSweepPoints:
    """Test suite for per-point solver configs."""

    @pytest.mark.unit
    @pytest.mark.utils
    def test_lambda_sweep(self, run_config_dict):
        document = dict(run_config_dict, sweep={"values": [0.5, 1.0, 2.0], "seeds": [0, 1]})
        config = parse_run_config(document)
        point = config.with_point(2.0, 1)

        assert config.sweep.parameter == "lambda"
        assert point.lam == 2.0
        assert point.seed == 1
        assert point.grid == config.solver.grid

    @pytest.mark.unit
    @pytest.mark.utils
    def test_side_length_sweep(self, run_config_dict):
        document = dict(run_config_dict, sweep={"parameter": "L", "values": [3.0, 6.0, 12.0]})
        config = parse_run_config(document)
        point = config.with_point(6.0, 0)

        assert point.grid.L == 6.0
        assert point.lam == config.solver.lam
        assert config.sweep.seeds == (0,)

    @pytest.mark.unit
    @pytest.mark.utils
    def test_point_without_sweep(self, run_config_dict):
        with pytest.raises(ConfigError, match="sweep"):
            parse_run_config(run_config_dict).with_point(1.0, 0)


class TestLoadFiles:
    """Test suite for reading YAML files."""

    @pytest.mark.unit
    @pytest.mark.utils
    def test_load_from_file(self, tmp_path, run_config_dict):
        path = tmp_path / "run.yaml"
        path.write_text(yaml.safe_dump(run_config_dict), encoding="utf-8")

        assert load_run_config(path).solver.t_end == 3.0

    @pytest.mark.unit
    @pytest.mark.utils
    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("grid: [d: 1\n", encoding="utf-8")

        with pytest.raises(ConfigError, match="not valid YAML"):
            load_run_config(path)

    @pytest.mark.unit
    @pytest.mark.utils
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as excinfo:
            load_run_config(tmp_path / "absent.yaml")
        assert excinfo.value.field == "document"

    @pytest.mark.unit
    @pytest.mark.utils
    def test_settings_defaults(self):
        settings = load_settings()

        assert settings["defaults"]["grid"]["N"][1] == 128
        assert settings["inequality_suite"]["seeds"] == 1000
        assert settings["reports"]["margin_tolerance"] == 1e-6

    @pytest.mark.unit
    @pytest.mark.utils
    def test_shipped_configs_are_valid(self):
        from utils.config_loader import SETTINGS_PATH

        for path in sorted((SETTINGS_PATH.parent / "configs").glob("*.yaml")):
            load_run_config(path)
