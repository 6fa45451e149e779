"""
Result tables as CSV or aligned text
"""

import csv
import logging
from pathlib import Path
from typing import List, Literal, Optional, Union

import pandas as pd

from ..errors import ContractViolation
from .grid import GridCellResult
from .results import AggregateResult
from .templates import render_aligned_table

logger = logging.getLogger(__name__)

TableFormat = Literal["csv", "text"]
COLUMNS = ["preset", "dataset", "mean", "std", "n", "epoch_time", "reference_mean"]
GRID_COLUMNS = ["rank", "config", "status", "mean_val", "mean", "std", "n", "epoch_time", "error"]
FLOAT_FORMAT = "%.6f"


def results_frame(results: List[AggregateResult]) -> pd.DataFrame:
    """One row per (preset, dataset), sorted by both"""
    rows = [
        {
            "preset": r.preset,
            "dataset": r.dataset,
            "mean": r.mean_accuracy,
            "std": r.std_accuracy,
            "n": r.n_seeds,
            "epoch_time": r.mean_epoch_seconds,
            "reference_mean": r.reference_mean,
        }
        for r in results
    ]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    frame["reference_mean"] = frame["reference_mean"].astype("float64")
    return frame.sort_values(["preset", "dataset"], kind="mergesort").reset_index(drop=True)


def _render(frame: pd.DataFrame, fmt: TableFormat, title: str) -> str:
    if fmt == "csv":
        return frame.to_csv(
            index=False,
            float_format=FLOAT_FORMAT,
            quoting=csv.QUOTE_MINIMAL,
            lineterminator="\n",
            na_rep="",
        )
    if fmt != "text":
        raise ContractViolation(f"Unknown table format {fmt!r}")
    cells = []
    for record in frame.itertuples(index=False):
        row = []
        for value in record:
            if pd.isna(value):
                row.append("")
            elif isinstance(value, float):
                row.append(FLOAT_FORMAT % value)
            else:
                row.append(str(value))
        cells.append(row)
    return render_aligned_table(list(frame.columns), cells, title)


def _write(text: str, path: Optional[Union[str, Path]]):
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote table {path}")


def emit_table(
    results: List[AggregateResult],
    fmt: TableFormat = "csv",
    path: Optional[Union[str, Path]] = None,
    title: str = "",
) -> str:
    """Render results and optionally write them to path"""
    if not results:
        raise ContractViolation("No results to tabulate")
    text = _render(results_frame(results), fmt, title)
    _write(text, path)
    return text


def grid_frame(cells: List[GridCellResult]) -> pd.DataFrame:
    """Cells in rank order, failed cells last"""
    rows = []
    for rank, cell in enumerate(cells, start=1):
        result = cell.result
        rows.append(
            {
                "rank": rank,
                "config": cell.key,
                "status": cell.status,
                "mean_val": result.mean_val_accuracy if result else None,
                "mean": result.mean_accuracy if result else None,
                "std": result.std_accuracy if result else None,
                "n": result.n_seeds if result else None,
                "epoch_time": result.mean_epoch_seconds if result else None,
                "error": cell.error or "",
            }
        )
    frame = pd.DataFrame(rows, columns=GRID_COLUMNS)
    frame["n"] = frame["n"].astype("Int64")
    return frame


def emit_grid_table(
    cells: List[GridCellResult],
    fmt: TableFormat = "csv",
    path: Optional[Union[str, Path]] = None,
    title: str = "",
) -> str:
    if not cells:
        raise ContractViolation("No grid cells to tabulate")
    text = _render(grid_frame(cells), fmt, title)
    _write(text, path)
    return text


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path)
