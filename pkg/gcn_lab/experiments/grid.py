"""
Hyperparameter grid sweeps

Each cell fixes the hidden activation, the width of every hidden layer and
the loss variant; cells are ranked by mean validation accuracy, then lower
mean epoch time, then config key.
"""

import itertools
import logging
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import ConfigurationError
from ..graphio import Dataset
from ..layers import ModelConfig
from ..training import TrainConfig
from ..training.report import LossVariant
from .replicate import write_reports
from .results import AggregateResult
from .runner import RunJob, run_jobs

logger = logging.getLogger(__name__)

SweepActivation = Literal["relu", "relu6", "elu", "selu"]
SweepHidden = Literal[16, 32, 48, 64, 80, 96, 100, 112, 200]


class GridCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    activation: SweepActivation
    hidden: int
    loss_variant: LossVariant

    @property
    def key(self) -> str:
        return f"{self.activation}-h{self.hidden}-{self.loss_variant}"


class SweepGrid(BaseModel):
    """Axes of a sweep; the cell count is the product of the axis sizes"""

    model_config = ConfigDict(frozen=True)

    activations: List[SweepActivation] = Field(min_length=1)
    hidden_sizes: List[SweepHidden] = Field(min_length=1)
    loss_variants: List[LossVariant] = Field(min_length=1)
    seeds_per_cell: int = Field(default=2, ge=2)
    base_preset: str = "GCN"

    @property
    def cell_count(self) -> int:
        return len(self.activations) * len(self.hidden_sizes) * len(self.loss_variants)

    def cells(self) -> List[GridCell]:
        return [
            GridCell(activation=a, hidden=h, loss_variant=v)
            for a, h, v in itertools.product(self.activations, self.hidden_sizes,
                                             self.loss_variants)
        ]


def load_grid(path: Union[str, Path]) -> SweepGrid:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Grid file not found: {path}")
    try:
        return SweepGrid.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ConfigurationError(f"Invalid sweep grid {path}: {e}") from None


class GridCellResult(BaseModel):
    """Outcome of one cell; failed cells carry the error instead of a result"""

    cell: GridCell
    status: Literal["ok", "failed"]
    result: Optional[AggregateResult] = None
    error: Optional[str] = None

    @property
    def key(self) -> str:
        return self.cell.key


def apply_cell(base: ModelConfig, cell: GridCell) -> ModelConfig:
    """Set every hidden layer's width and activation from the cell"""
    data = base.model_dump()
    last = len(data["layers"]) - 1
    for i, layer in enumerate(data["layers"]):
        if i < last:
            layer["out_dim"] = cell.hidden
            layer["activation"] = {"type": "base", "kind": cell.activation}
        if i > 0:
            layer["in_dim"] = cell.hidden
    return ModelConfig.model_validate(data)


def rank_cells(results: List[GridCellResult]) -> List[GridCellResult]:
    ok = [r for r in results if r.status == "ok"]
    failed = [r for r in results if r.status == "failed"]
    ok.sort(key=lambda r: (-(r.result.mean_val_accuracy or 0.0), r.result.mean_epoch_seconds,
                           r.key))
    failed.sort(key=lambda r: r.key)
    return ok + failed


def run_grid(
    grid: SweepGrid,
    base_cfg: ModelConfig,
    dataset: Dataset,
    jobs: Optional[int] = None,
    runs_dir: Optional[Union[str, Path]] = None,
    base_train: Optional[TrainConfig] = None,
    label: Optional[str] = None,
) -> List[GridCellResult]:
    """
    Train every cell seeds_per_cell times and rank the cells

    A cell with any diverged seed is recorded as failed.
    """
    label = label or grid.base_preset
    base_train = base_train or TrainConfig()
    cells = grid.cells()
    job_list = []
    for cell in cells:
        model = apply_cell(base_cfg, cell)
        for seed in range(grid.seeds_per_cell):
            tcfg = base_train.model_copy(update={"seed": seed, "loss_variant": cell.loss_variant})
            job_list.append(RunJob(f"{label}-{cell.key}", model, tcfg, dataset))
    logger.info(f"Sweeping {len(cells)} cell(s) x {grid.seeds_per_cell} seed(s) on {dataset.name}")
    outcomes = run_jobs(job_list, jobs)

    results = []
    for i, cell in enumerate(cells):
        chunk = outcomes[i * grid.seeds_per_cell : (i + 1) * grid.seeds_per_cell]
        failures = [o for o in chunk if not o.ok]
        if failures:
            results.append(GridCellResult(cell=cell, status="failed", error=failures[0].error))
            continue
        reports = [o.report for o in chunk]
        if runs_dir is not None:
            write_reports(reports, runs_dir, f"{label}-{cell.key}")
        aggregate = AggregateResult.from_reports(reports, f"{label}-{cell.key}", dataset.name,
                                                 config_key=cell.key)
        results.append(GridCellResult(cell=cell, status="ok", result=aggregate))

    ranked = rank_cells(results)
    if ranked and ranked[0].status == "ok":
        best = ranked[0]
        logger.info(f"Best cell {best.key}: val accuracy {best.result.mean_val_accuracy:.4f}")
    return ranked
