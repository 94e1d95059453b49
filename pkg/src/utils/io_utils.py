"""
CSV emission helpers.
"""

import io
from pathlib import Path
from typing import Optional

import pandas as pd

FLOAT_FORMAT = "%.6g"
UNDEFINED = "undefined"


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, na_rep=UNDEFINED, lineterminator="\n")
    return buffer.getvalue()


def write_frame(frame: pd.DataFrame, output_path: Optional[str | Path] = None) -> str:
    """Write ``frame`` as CSV to ``output_path`` and return the text.

    Floats carry 6 significant digits and missing values are written as ``undefined``.
    """
    text = frame_to_csv_text(frame)
    if output_path is not None:
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return text
