import json
import os
import re
from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd

from utils.logger import setup_logger
from utils.reports import SCHEMA_VERSION


# Initialize logger
logger = setup_logger("file_utils")

CSV_FLOAT_FORMAT = "%.17g"


def sanitize_filename(filename):
    """Sanitize filename for safe file system usage."""
    # Replace problematic characters with underscores
    filename = re.sub(r'[<>:"/\\|?*\s]', "_", filename)

    # Remove control characters
    filename = re.sub(r"[\x00-\x1f\x7f]", "", filename)

    # Limit length
    if len(filename) > 255:
        name, ext = os.path.splitext(filename)
        filename = name[: 255 - len(ext)] + ext

    # Ensure it doesn't start with a dot (hidden file)
    if filename.startswith("."):
        filename = "_" + filename[1:]

    return filename


def run_directory_name(parameter: str, value: float, seed: int) -> str:
    """Directory name of one sweep point, e.g. ``lambda_0.5_seed_3``."""
    return sanitize_filename(f"{parameter}_{value:g}_seed_{seed}")


def format_wall_time(seconds):
    """Format a duration in human readable form."""
    if seconds < 60:
        return f"{seconds:.1f} s"
    minutes, seconds = divmod(seconds, 60)
    if minutes < 60:
        return f"{int(minutes)} min {seconds:.0f} s"
    hours, minutes = divmod(minutes, 60)
    return f"{int(hours)} h {int(minutes)} min"


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def write_json(path: Path, document: dict) -> Path:
    """Write a JSON document with sorted keys; numpy scalars become plain numbers."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(document, indent=2, sort_keys=True, default=_json_default) + "\n",
        encoding="utf-8",
    )
    logger.debug(f"Wrote {path}")
    return path


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Write a CSV with a header row and round-trip float precision."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"Wrote {path} ({len(frame)} rows)")
    return path


def create_run_metadata(config: dict, version: str, wall_time: float, samples: int) -> dict:
    """
    Metadata document of one run.

    Args:
        config: Flat echo of the solver configuration
        version: Code version
        wall_time: Seconds spent integrating
        samples: Number of recorded samples

    Returns:
        dict: Flat key/value metadata with the schema version
    """
    return {
        "schema_version": SCHEMA_VERSION,
        "code_version": version,
        "created": datetime.now().isoformat(timespec="seconds"),
        "wall_time_seconds": wall_time,
        "wall_time": format_wall_time(wall_time),
        "samples": samples,
        "config": config,
    }
