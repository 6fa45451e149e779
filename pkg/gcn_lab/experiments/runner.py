"""
Bounded worker pool for independent training runs
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

from ..errors import TrainingDivergedError
from ..graphio import Dataset
from ..layers import ModelConfig
from ..training import RunReport, TrainConfig, train

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunJob:
    """One (config, seed) training run"""

    label: str
    model: ModelConfig
    train: TrainConfig
    dataset: Dataset


@dataclass(frozen=True)
class JobOutcome:
    label: str
    seed: int
    report: Optional[RunReport] = None
    error: Optional[str] = None
    diverged_epoch: Optional[int] = None
    diverged_loss: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.report is not None


def run_job(job: RunJob) -> JobOutcome:
    """Train one job; divergence is captured rather than raised"""
    try:
        report = train(job.model, job.train, job.dataset, preset=job.label)
    except TrainingDivergedError as e:
        logger.warning(f"{job.label} seed {job.train.seed}: {e}")
        return JobOutcome(job.label, job.train.seed, error=str(e), diverged_epoch=e.epoch,
                          diverged_loss=e.loss)
    return JobOutcome(job.label, job.train.seed, report=report)


def default_workers() -> int:
    return os.cpu_count() or 1


def run_jobs(jobs: Sequence[RunJob], max_workers: Optional[int] = None) -> List[JobOutcome]:
    """
    Run jobs on at most max_workers processes

    Outcomes come back in job order whatever the completion order.
    """
    workers = min(max_workers or default_workers(), len(jobs))
    if workers <= 1:
        return [run_job(job) for job in jobs]
    logger.info(f"Running {len(jobs)} job(s) on {workers} worker(s)")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_job, jobs))


def report_path(runs_dir: Union[str, Path], label: str, dataset: str, seed: int) -> Path:
    return Path(runs_dir) / label / dataset / f"{seed}.report"
