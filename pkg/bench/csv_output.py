"""
CSV and JSON emission of benchmark results.
"""

import logging
from pathlib import Path
from typing import List, Union

import pandas as pd

from city.serialization import write_json

from .aggregate import Summary
from .runner import ROW_COLUMNS, ResultTable

logger = logging.getLogger(__name__)

ROWS_FILE = "rows.csv"
SUMMARY_FILE = "summary.csv"
SUMMARY_JSON_FILE = "summary.json"


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    # repr-precision floats, dot decimals, "\n" line ends
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def emit_csv(table: ResultTable, summary: Summary, output_dir: Union[str, Path]) -> List[Path]:
    """
    Write rows.csv and summary.csv.

    Re-emitting the same table and summary yields byte-identical files.

    Raises:
        OSError: Directory not writable
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [
        _write_frame(table.sorted().to_frame(), out / ROWS_FILE),
        _write_frame(summary.to_frame(), out / SUMMARY_FILE),
    ]
    logger.info("wrote %s", ", ".join(str(p) for p in written))
    return written


def emit_summary_json(summary: Summary, output_dir: Union[str, Path]) -> Path:
    """Mean, deviation, confidence half-width and percent differences as JSON."""
    return write_json(summary.to_dict(), Path(output_dir) / SUMMARY_JSON_FILE)


def read_rows(path: Union[str, Path]) -> ResultTable:
    """
    Load a rows.csv back into a ResultTable.

    Raises:
        OSError: File missing or unreadable
        ValueError: Columns differ from the rows.csv layout
    """
    frame = pd.read_csv(path, keep_default_na=True, dtype={"violations": str})
    if list(frame.columns) != ROW_COLUMNS:
        raise ValueError(f"{path} does not have the rows.csv columns {ROW_COLUMNS}")
    return ResultTable.from_frame(frame)
