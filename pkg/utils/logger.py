import logging
import sys


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

_configured: set[str] = set()
_format = LOG_FORMAT


def setup_logger(name: str, level: str = "INFO") -> logging.Logger:
    """
    Create (or fetch) a named logger writing to stderr.

    Args:
        name: Logger name, usually the module role ("mkse_solver", "sweep_cli")
        level: Initial level name

    Returns:
        logging.Logger: Configured logger
    """
    logger = logging.getLogger(name)
    if name not in _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_format))
        logger.addHandler(handler)
        logger.propagate = False
        _configured.add(name)
    logger.setLevel(level.upper())
    return logger


def set_global_level(level: str, fmt: str | None = None) -> None:
    """
    Apply one level to every logger created through setup_logger.

    Args:
        level: Level name
        fmt: Optional record format; also used by loggers created later
    """
    global _format
    if fmt is not None:
        _format = fmt
    for name in _configured:
        logger = logging.getLogger(name)
        logger.setLevel(level.upper())
        if fmt is not None:
            for handler in logger.handlers:
                handler.setFormatter(logging.Formatter(fmt))


def log_run_start(logger: logging.Logger, label: str, params: dict) -> None:
    """Log the start of a simulation run."""
    rendered = ", ".join(f"{key}={value}" for key, value in params.items())
    logger.info(f"Starting run {label}: {rendered}")


def log_run_complete(
    logger: logging.Logger, label: str, samples: int, wall_time: float
) -> None:
    """Log a finished run with its sample count and wall time."""
    logger.info(f"Run {label} complete: {samples} samples in {wall_time:.2f}s")


def log_blow_up(logger: logging.Logger, label: str, error: Exception) -> None:
    """Log a trajectory that produced non-finite coefficients."""
    logger.error(f"Run {label} blew up: {error}")


def log_bound_verdicts(logger: logging.Logger, label: str, rows: list[dict]) -> None:
    """
    Log one line per bound comparison.

    Failing gated rows go out at WARNING, everything else at INFO.
    """
    for row in rows:
        message = (
            f"{label} {row['name']}: observed={row['observed']:.6g} "
            f"bound={row['bound']:.6g} margin={row['margin']:.3g} "
            f"verdict={row['verdict']}"
        )
        if row["verdict"] == "fail" and row.get("gated", True):
            logger.warning(message)
        else:
            logger.info(message)


def log_sweep_point(
    logger: logging.Logger, parameter: str, value: float, seed: int, status: str
) -> None:
    """Log the outcome of one (value, seed) point of a sweep."""
    logger.info(f"Sweep point {parameter}={value} seed={seed}: {status}")
