"""
Log-log SVG plots of sweep results.
"""

from pathlib import Path

import matplotlib


matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from utils.logger import setup_logger


logger = setup_logger("plotting")

# Fixed hash salt and no date stamp keep repeated renders identical.
matplotlib.rcParams["svg.hashsalt"] = "mkse-lab"


def plot_loglog(
    x,
    curves: dict[str, np.ndarray],
    path: Path,
    xlabel: str,
    ylabel: str,
    title: str | None = None,
) -> Path:
    """
    Write a log-log plot of one or more curves as SVG.

    Args:
        x: Abscissae shared by every curve
        curves: Label -> ordinates; non-positive points are dropped
        path: Output file
        xlabel: Axis label
        ylabel: Axis label
        title: Optional title

    Returns:
        Path: The written file
    """
    x = np.asarray(x, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    try:
        for label, values in curves.items():
            y = np.asarray(values, dtype=np.float64)
            keep = (x > 0) & np.isfinite(y) & (y > 0)
            if not np.any(keep):
                logger.warning(f"Nothing to plot for {label}")
                continue
            ax.loglog(x[keep], y[keep], marker="o", label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.grid(True, which="both", alpha=0.3)
        if ax.get_legend_handles_labels()[0]:
            ax.legend()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.debug(f"Wrote plot {path}")
    return path
