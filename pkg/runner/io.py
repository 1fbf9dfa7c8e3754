"""CSV writers for experiment tables"""

from pathlib import Path
from typing import Sequence

import pandas as pd

from .registry import Row

FLOAT_FORMAT = "%.12g"


def rows_to_frame(rows: Sequence[Row], columns: Sequence[str]) -> pd.DataFrame:
    missing = [c for c in columns if rows and c not in rows[0]]
    if missing:
        raise KeyError(f"Rows lack declared columns {missing}")
    return pd.DataFrame(list(rows), columns=list(columns))


def rows_to_csv(rows: Sequence[Row], columns: Sequence[str]) -> str:
    """Fixed float format and line endings so equal rows give equal bytes."""
    return rows_to_frame(rows, columns).to_csv(
        index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )


def read_table(path: Path | str) -> pd.DataFrame:
    return pd.read_csv(path)
