"""
Pipe-delimited tables for terminal output.
"""

import math

import pandas as pd

from analysis.analytic_bounds import bound_set


BOUND_COLUMNS = [
    "d",
    "lambda",
    "L",
    "J0_bar",
    "J1_bar",
    "J2_bar",
    "sup_bar",
    "crest_avg",
    "J1_avg",
    "J2_avg",
    "J3_avg",
]


def format_cell(value) -> str:
    """Render one cell; missing values are blank and floats use 7 significant digits."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if isinstance(value, float):
        return f"{value:.7g}"
    return str(value).replace("|", "\\|")


def dataframe_to_table(df: pd.DataFrame) -> list[str]:
    """Convert a DataFrame to pipe-table lines (header, separator, rows)."""
    if df.empty:
        return ["*No rows*"]

    headers = [str(column) for column in df.columns]
    lines = ["| " + " | ".join(headers) + " |"]
    lines.append("| " + " | ".join(["---"] * len(headers)) + " |")
    for row in df.itertuples(index=False):
        lines.append("| " + " | ".join(format_cell(value) for value in row) + " |")
    return lines


def bounds_table(d: int, lams, sides) -> pd.DataFrame:
    """
    Every bound for the Cartesian product of lambda and L values.

    Rows are ordered by lambda, then L; 2D-only columns are empty in 1D.

    Raises:
        BoundDomainError: For a non-positive lambda or L
    """
    records = []
    for lam in lams:
        for L in sides:
            bounds = bound_set(d, lam, L)
            records.append(
                {
                    "d": d,
                    "lambda": float(lam),
                    "L": float(L),
                    "J0_bar": bounds.J0_bound,
                    "J1_bar": bounds.J1_bound,
                    "J2_bar": bounds.J2_bound,
                    "sup_bar": bounds.sup_bound,
                    "crest_avg": bounds.crest_avg_bound,
                    "J1_avg": bounds.J1_time_avg_bound,
                    "J2_avg": bounds.J2_time_avg_bound,
                    "J3_avg": bounds.J3_time_avg_bound,
                }
            )
    return pd.DataFrame(records, columns=BOUND_COLUMNS)
