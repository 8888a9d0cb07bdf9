"""
Cross-cutting helpers: logging, run configs, reports, tables, plots and files.

Only the logger is re-exported; spectral, dynamics and analysis import it
while they initialize. Import the other helpers from their modules.
"""

from .logger import LOG_FORMAT, set_global_level, setup_logger


__all__ = ["LOG_FORMAT", "set_global_level", "setup_logger"]
