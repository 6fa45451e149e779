"""
Multi-seed replication of a preset
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

from ..errors import ConfigurationError, TrainingDivergedError
from ..graphio import Dataset
from ..training import RunReport, TrainConfig
from .presets import get_preset
from .results import AggregateResult
from .runner import RunJob, report_path, run_jobs

logger = logging.getLogger(__name__)


def write_reports(reports: List[RunReport], runs_dir: Union[str, Path], label: str) -> List[Path]:
    """Timed reports under runs/<label>/<dataset>/<seed>.report"""
    return [
        report.write(report_path(runs_dir, label, report.dataset, report.seed), include_timing=True)
        for report in reports
    ]


def replicate(
    preset: str,
    dataset: Dataset,
    n_seeds: int,
    jobs: Optional[int] = None,
    runs_dir: Optional[Union[str, Path]] = None,
    base_train: Optional[TrainConfig] = None,
) -> AggregateResult:
    """
    Train a preset with seeds 0..n_seeds-1 and aggregate test accuracy

    Raises:
        ConfigurationError: unknown preset or fewer than two seeds
        TrainingDivergedError: any seed diverged
    """
    spec = get_preset(preset)
    if n_seeds < 2:
        raise ConfigurationError(f"Replication needs at least 2 seeds, got {n_seeds}")

    job_list = [
        RunJob(spec.name, spec.model, spec.train_config(seed, base_train), dataset)
        for seed in range(n_seeds)
    ]
    logger.info(f"Replicating {spec.name} on {dataset.name} with {n_seeds} seeds")
    outcomes = run_jobs(job_list, jobs)
    for outcome in outcomes:
        if not outcome.ok:
            raise TrainingDivergedError(outcome.diverged_epoch or 0, outcome.diverged_loss)

    reports = [outcome.report for outcome in outcomes]
    if runs_dir is not None:
        write_reports(reports, runs_dir, spec.name)
    result = AggregateResult.from_reports(reports, spec.name, dataset.name)
    logger.info(
        f"{spec.name} on {dataset.name}: {100 * result.mean_accuracy:.2f} "
        f"± {100 * result.std_accuracy:.2f} over {n_seeds} seeds"
    )
    return result
