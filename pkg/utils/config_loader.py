"""
Run-config loading and validation.

Run configs are YAML documents with the sections ``grid``, ``dynamics``,
``init``, ``sweep`` and ``output``. Missing fields fall back to the
``defaults`` section of the root ``config.yaml``; every violated constraint
raises ConfigError naming the offending ``section.field``.
"""

import copy
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from analysis.observables import MIN_TAIL_SAMPLES
from dynamics.mkse_solver import NONLINEARITIES, SolverConfig, SolverConfigError
from spectral.fields import is_power_of_two
from spectral.grid import Grid, GridError
from utils.logger import setup_logger


logger = setup_logger("config_loader")

SETTINGS_PATH = Path(__file__).resolve().parent.parent / "config.yaml"
SWEEP_PARAMETERS = ("lambda", "L")
OUTPUT_FORMATS = ("csv", "json", "svg")
MIN_SWEEP_POINTS = 3
SECTIONS = ("grid", "dynamics", "init", "numerics", "sweep", "output")


class ConfigError(ValueError):
    """Invalid run config; ``field`` is the dotted name of the offending entry."""

    def __init__(self, field_name: str, problem: str):
        super().__init__(f"{field_name}: {problem}")
        self.field = field_name


@dataclass(frozen=True)
class SweepSpec:
    """Swept parameter, its values and the seeds run at every value."""

    parameter: str
    values: tuple[float, ...]
    seeds: tuple[int, ...]


@dataclass(frozen=True)
class OutputSpec:
    directory: Path
    formats: tuple[str, ...]


@dataclass(frozen=True)
class RunConfigFile:
    """A validated run config together with the document it was built from."""

    solver: SolverConfig
    output: OutputSpec
    sweep: SweepSpec | None = None
    document: dict = field(default_factory=dict, compare=False)

    def with_point(self, value: float, seed: int) -> SolverConfig:
        """Solver config of one sweep point."""
        if self.sweep is None:
            raise ConfigError("sweep", "section missing")
        solver = self.solver
        grid = solver.grid
        if self.sweep.parameter == "L":
            grid = Grid(d=grid.d, N=grid.N, L=value)
            lam = solver.lam
        else:
            lam = value
        return SolverConfig(
            grid=grid,
            lam=lam,
            dt=solver.dt,
            t_end=solver.t_end,
            transient=solver.transient,
            sample_every=solver.sample_every,
            seed=seed,
            amplitude=solver.amplitude,
            decay=solver.decay,
            nonlinearity=solver.nonlinearity,
            padding=solver.padding,
            refine=solver.refine,
        )


def load_settings(path: Path | str | None = None) -> dict:
    """
    Load the application settings file.

    Args:
        path: Settings YAML, the root config.yaml by default

    Returns:
        dict: Parsed settings

    Raises:
        ConfigError: If the file is missing or not YAML
    """
    settings_path = Path(path) if path is not None else SETTINGS_PATH
    try:
        with open(settings_path, encoding="utf-8") as handle:
            settings = yaml.safe_load(handle) or {}
    except OSError as e:
        raise ConfigError("settings", f"cannot read {settings_path}: {e.strerror}") from e
    except yaml.YAMLError as e:
        raise ConfigError("settings", f"not valid YAML ({e})") from e
    logger.debug(f"Loaded settings from {settings_path}")
    return settings


def _per_dimension(value: Any, d: int) -> Any:
    if isinstance(value, dict):
        return value.get(d, value.get(str(d)))
    return value


def _number(section: str, key: str, value: Any) -> float:
    name = f"{section}.{key}"
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise ConfigError(name, f"expected a number, got {value!r}")
    number = float(value)
    if not math.isfinite(number):
        raise ConfigError(name, f"must be finite, got {value!r}")
    return number


def _integer(section: str, key: str, value: Any) -> int:
    name = f"{section}.{key}"
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    return value


def _section(document: dict, name: str) -> dict:
    value = document.get(name, {})
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(name, f"expected a mapping, got {type(value).__name__}")
    return value


def _grid(section: dict, defaults: dict) -> Grid:
    if "d" not in section:
        raise ConfigError("grid.d", "required")
    d = _integer("grid", "d", section["d"])
    N = _integer("grid", "N", section.get("N", _per_dimension(defaults["N"], d)))
    L = _number("grid", "L", section.get("L", defaults["L"]))
    try:
        return Grid(d=d, N=N, L=L)
    except GridError as e:
        field_name, _, problem = str(e).partition(": ")
        raise ConfigError(field_name, problem) from e


def _solver(document: dict, defaults: dict) -> SolverConfig:
    grid = _grid(_section(document, "grid"), defaults["grid"])
    d = grid.d
    dynamics = _section(document, "dynamics")
    init = _section(document, "init")
    numerics = _section(document, "numerics")
    base = defaults["dynamics"]

    t_end = _number(
        "dynamics", "t_end", dynamics.get("t_end", _per_dimension(base["t_end"], d))
    )
    transient = dynamics.get("transient", t_end * base["transient_fraction"])
    nonlinearity = dynamics.get("nonlinearity", base["nonlinearity"])
    if nonlinearity not in NONLINEARITIES:
        raise ConfigError(
            "dynamics.nonlinearity",
            f"must be one of {', '.join(NONLINEARITIES)}, got {nonlinearity!r}",
        )
    refine = _integer(
        "numerics", "refine", numerics.get("refine", defaults["numerics"]["refine"])
    )
    if not is_power_of_two(refine):
        raise ConfigError("numerics.refine", f"must be a power of two >= 1, got {refine}")
    padding = _number(
        "numerics", "padding", numerics.get("padding", defaults["numerics"]["padding"])
    )
    if padding < 2.0:
        raise ConfigError("numerics.padding", f"must be >= 2 for cubic terms, got {padding}")

    try:
        solver = SolverConfig(
            grid=grid,
            lam=_number("dynamics", "lambda", dynamics.get("lambda", base["lambda"])),
            dt=_number("dynamics", "dt", dynamics.get("dt", _per_dimension(base["dt"], d))),
            t_end=t_end,
            transient=_number("dynamics", "transient", transient),
            sample_every=_number(
                "dynamics", "sample_every", dynamics.get("sample_every", base["sample_every"])
            ),
            seed=_integer("init", "seed", init.get("seed", defaults["init"]["seed"])),
            amplitude=_number(
                "init", "amplitude", init.get("amplitude", defaults["init"]["amplitude"])
            ),
            decay=_number("init", "decay", init.get("decay", defaults["init"]["decay"])),
            nonlinearity=nonlinearity,
            padding=padding,
            refine=refine,
        )
    except SolverConfigError as e:
        raise ConfigError(e.field, str(e).partition(": ")[2]) from e

    tail_samples = math.floor((solver.t_end - solver.transient) / solver.sample_every + 1e-9)
    if tail_samples < MIN_TAIL_SAMPLES:
        raise ConfigError(
            "dynamics.transient",
            f"leaves {tail_samples} samples before t_end; need at least {MIN_TAIL_SAMPLES}",
        )
    return solver


def _sweep(section: dict) -> SweepSpec:
    parameter = section.get("parameter", "lambda")
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(
            "sweep.parameter",
            f"must be one of {', '.join(SWEEP_PARAMETERS)}, got {parameter!r}",
        )
    values = section.get("values")
    if not isinstance(values, list) or len(values) < MIN_SWEEP_POINTS:
        raise ConfigError("sweep.values", f"need a list of at least {MIN_SWEEP_POINTS} values")
    numbers = tuple(_number("sweep", "values", value) for value in values)
    if parameter == "L" and any(value <= 0 for value in numbers):
        raise ConfigError("sweep.values", "side lengths must be positive")
    if len(set(numbers)) != len(numbers):
        raise ConfigError("sweep.values", "values must be distinct")

    seeds = section.get("seeds", [0])
    if not isinstance(seeds, list) or not seeds:
        raise ConfigError("sweep.seeds", "need a non-empty list of seeds")
    return SweepSpec(
        parameter=parameter,
        values=numbers,
        seeds=tuple(_integer("sweep", "seeds", seed) for seed in seeds),
    )


def _output(section: dict, defaults: dict) -> OutputSpec:
    directory = section.get("directory", defaults["directory"])
    if not isinstance(directory, str) or not directory:
        raise ConfigError("output.directory", "expected a non-empty path")
    formats = section.get("formats", defaults["formats"])
    if not isinstance(formats, list):
        raise ConfigError("output.formats", "expected a list")
    unknown = [name for name in formats if name not in OUTPUT_FORMATS]
    if unknown:
        raise ConfigError(
            "output.formats",
            f"unknown format {unknown[0]!r}; choose from {', '.join(OUTPUT_FORMATS)}",
        )
    return OutputSpec(directory=Path(directory), formats=tuple(formats))


def parse_run_config(document: Any, settings: dict | None = None) -> RunConfigFile:
    """
    Validate a run-config document.

    Args:
        document: Parsed YAML mapping
        settings: Application settings, loaded from config.yaml by default

    Returns:
        RunConfigFile: Validated configuration

    Raises:
        ConfigError: For the first invalid or inconsistent field
    """
    if not isinstance(document, dict):
        raise ConfigError("document", "expected a mapping at the top level")
    unknown = sorted(set(document) - set(SECTIONS))
    if unknown:
        raise ConfigError(unknown[0], "unknown section")
    defaults = (settings if settings is not None else load_settings())["defaults"]

    solver = _solver(document, defaults)
    sweep = _sweep(_section(document, "sweep")) if document.get("sweep") else None
    output = _output(_section(document, "output"), defaults["output"])
    return RunConfigFile(
        solver=solver, output=output, sweep=sweep, document=copy.deepcopy(document)
    )


def load_run_config(path: Path | str, settings: dict | None = None) -> RunConfigFile:
    """
    Read and validate a run-config file.

    Raises:
        ConfigError: If the file is unreadable, not YAML, or invalid
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("document", f"cannot read {path}: {e.strerror}") from e
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError("document", f"not valid YAML ({e})") from e

    config = parse_run_config(document, settings)
    logger.info(f"Loaded run config {path} (d={config.solver.grid.d})")
    return config
