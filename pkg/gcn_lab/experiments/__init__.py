from .grid import GridCell, GridCellResult, SweepGrid, apply_cell, load_grid, rank_cells, run_grid
from .presets import CATALOG, Preset, PresetCatalog, get_preset, is_confidence_preset, preset_names
from .replicate import replicate, write_reports
from .results import (
    COMPETITOR_ACCURACY,
    REFERENCE_ACCURACY,
    REFERENCE_EPOCH_SECONDS,
    AggregateResult,
    load_run_reports,
    reference_mean,
    timing_order_holds,
)
from .runner import JobOutcome, RunJob, report_path, run_job, run_jobs
from .tables import emit_grid_table, emit_table, read_table, results_frame
from .templates import TEMPLATES, ReportTemplates, render_aligned_table

__all__ = [
    "AggregateResult",
    "CATALOG",
    "COMPETITOR_ACCURACY",
    "GridCell",
    "GridCellResult",
    "JobOutcome",
    "Preset",
    "PresetCatalog",
    "REFERENCE_ACCURACY",
    "REFERENCE_EPOCH_SECONDS",
    "ReportTemplates",
    "RunJob",
    "SweepGrid",
    "TEMPLATES",
    "apply_cell",
    "emit_grid_table",
    "emit_table",
    "get_preset",
    "is_confidence_preset",
    "load_grid",
    "load_run_reports",
    "preset_names",
    "rank_cells",
    "read_table",
    "reference_mean",
    "render_aligned_table",
    "replicate",
    "report_path",
    "results_frame",
    "run_grid",
    "run_job",
    "run_jobs",
    "timing_order_holds",
    "write_reports",
]
