"""
Aggregated results and published reference numbers
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from ..errors import ConfigurationError
from ..graphio.stats import reference_key
from ..training import RunReport
from .presets import CATALOG

logger = logging.getLogger(__name__)

# Published (mean, std) test accuracy in percent, keyed by preset then dataset
REFERENCE_ACCURACY: Dict[str, Dict[str, Tuple[float, float]]] = {
    "GCN": {"citeseer": (69.4, 0.4), "cora": (80.9, 0.4), "pubmed": (76.8, 0.2),
            "coraml": (85.7, 0.3)},
    "OpGCN": {"citeseer": (70.1, 0.7), "cora": (80.3, 0.4), "pubmed": (79.1, 0.3),
              "coraml": (85.3, 0.4)},
    "ConvGCN": {"citeseer": (70.1, 0.3), "cora": (80.1, 0.2), "pubmed": (79.0, 0.2),
                "coraml": (84.3, 0.3)},
    "CCGCN": {"citeseer": (53.1, 0.6), "cora": (55.3, 2.4), "pubmed": (71.1, 0.7),
              "coraml": (63.3, 0.4)},
    "DGCN": {"citeseer": (70.9, 0.7), "cora": (82.1, 1.2), "pubmed": (79.1, 0.4),
             "coraml": (86.3, 0.3)},
    "ConfGCN": {"citeseer": (72.7, 0.8), "cora": (82.0, 0.3), "pubmed": (79.5, 0.5),
                "coraml": (86.5, 0.3)},
    "OpConfGCN": {"citeseer": (70.1, 1.4), "cora": (80.9, 0.8), "pubmed": (79.8, 0.4),
                  "coraml": (84.6, 0.5)},
    "ConvConfGCN": {"citeseer": (73.1, 0.2), "cora": (82.1, 0.6), "pubmed": (79.8, 0.4),
                    "coraml": (86.4, 0.3)},
    "CCConfGCN": {"citeseer": (70.8, 0.3), "cora": (82.1, 0.6), "pubmed": (78.2, 0.4),
                  "coraml": (83.4, 0.5)},
    "DConfGCN": {"citeseer": (58.03, 0.9), "cora": (81.0, 1.4), "pubmed": (78.8, 0.6),
                 "coraml": (86.9, 0.4)},
}

# Other methods' published accuracy (percent; None where not reported)
COMPETITOR_ACCURACY: Dict[str, Dict[str, Optional[float]]] = {
    "LP": {"citeseer": 45.3, "cora": 68.0, "pubmed": 63.0, "coraml": None},
    "ManiReg": {"citeseer": 60.1, "cora": 59.5, "pubmed": 70.7, "coraml": None},
    "SemiEmb": {"citeseer": 59.6, "cora": 59.0, "pubmed": 71.1, "coraml": None},
    "Feat": {"citeseer": 57.2, "cora": 57.4, "pubmed": 69.8, "coraml": None},
    "DeepWalk": {"citeseer": 43.2, "cora": 67.2, "pubmed": 65.3, "coraml": None},
    "GGNN": {"citeseer": 68.1, "cora": 77.9, "pubmed": 77.2, "coraml": None},
    "Planetoid": {"citeseer": 64.9, "cora": 75.7, "pubmed": 75.7, "coraml": None},
    "G-GCN": {"citeseer": 69.6, "cora": 81.2, "pubmed": 77.0, "coraml": 86.0},
    "GPNN": {"citeseer": 68.1, "cora": 79.0, "pubmed": 73.6, "coraml": 69.4},
    "GAT": {"citeseer": 72.5, "cora": 83.0, "pubmed": 79.0, "coraml": 83.0},
    "Dual-GCN": {"citeseer": 72.6, "cora": 83.5, "pubmed": 80.0, "coraml": None},
    "LGCN": {"citeseer": 73.4, "cora": 83.3, "pubmed": 79.7, "coraml": None},
    "Fast-GCN": {"citeseer": None, "cora": 86.0, "pubmed": 88.0, "coraml": None},
}

# Published seconds per epoch on Pubmed; hardware-dependent, only the ordering is checked
REFERENCE_EPOCH_SECONDS: Dict[str, float] = {
    "GCN": 0.8,
    "OpGCN": 0.415,
    "ConvGCN": 0.585,
    "CCGCN": 0.417,
    "DGCN": 0.662,
    "ConfGCN": 1.344,
    "OpConfGCN": 1.93,
    "ConvConfGCN": 1.96,
    "CCConfGCN": 1.93,
    "DConfGCN": 1.99,
}


def reference_mean(preset: str, dataset: str) -> Optional[float]:
    """Published mean accuracy as a fraction, if there is one"""
    if preset in CATALOG:
        preset = CATALOG.get(preset).name
    entry = REFERENCE_ACCURACY.get(preset, {}).get(reference_key(dataset))
    return entry[0] / 100.0 if entry else None


class AggregateResult(BaseModel):
    """Mean and sample standard deviation of test accuracy over seeds"""

    preset: str
    dataset: str
    mean_accuracy: float = Field(ge=0.0, le=1.0)
    std_accuracy: float = Field(ge=0.0)
    n_seeds: int = Field(ge=2)
    mean_epoch_seconds: float = Field(ge=0.0)
    mean_val_accuracy: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    config_key: Optional[str] = None

    @classmethod
    def from_reports(
        cls,
        reports: List[RunReport],
        preset: Optional[str] = None,
        dataset: Optional[str] = None,
        config_key: Optional[str] = None,
    ) -> "AggregateResult":
        if len(reports) < 2:
            raise ConfigurationError(
                f"Aggregation needs at least 2 seeds, got {len(reports)}"
            )
        accuracies = np.array([r.test_accuracy for r in reports])
        timed = [r.mean_epoch_seconds for r in reports if r.mean_epoch_seconds is not None]
        seconds = float(np.mean(timed)) if timed else 0.0
        return cls(
            preset=preset or reports[0].preset or "custom",
            dataset=dataset or reports[0].dataset,
            mean_accuracy=float(accuracies.mean()),
            std_accuracy=float(accuracies.std(ddof=1)),
            n_seeds=len(reports),
            mean_epoch_seconds=seconds,
            mean_val_accuracy=float(np.mean([r.best_val_accuracy for r in reports])),
            config_key=config_key,
        )

    @property
    def reference_mean(self) -> Optional[float]:
        return reference_mean(self.preset, self.dataset)


def load_run_reports(runs_dir: Union[str, Path]) -> List[AggregateResult]:
    """
    Aggregate a runs/<preset>/<dataset>/<seed>.report tree

    Groups with fewer than two reports are skipped with a warning.
    """
    runs_dir = Path(runs_dir)
    if not runs_dir.is_dir():
        raise FileNotFoundError(f"Runs directory not found: {runs_dir}")
    groups: Dict[Tuple[str, str], List[RunReport]] = {}
    for path in sorted(runs_dir.glob("*/*/*.report")):
        preset, dataset = path.parent.parent.name, path.parent.name
        groups.setdefault((preset, dataset), []).append(RunReport.read(path))

    results = []
    for (preset, dataset), reports in sorted(groups.items()):
        if len(reports) < 2:
            logger.warning(f"Skipping {preset}/{dataset}: only {len(reports)} report(s)")
            continue
        results.append(AggregateResult.from_reports(reports, preset, dataset))
    return results


def timing_order_holds(results: Iterable[AggregateResult], dataset: Optional[str] = None) -> bool:
    """True when every confidence preset is slower per epoch than every plain one"""
    conf, plain = [], []
    for result in results:
        if dataset is not None and reference_key(result.dataset) != reference_key(dataset):
            continue
        if result.preset not in CATALOG:
            continue
        bucket = conf if CATALOG.get(result.preset).model.confidence else plain
        bucket.append(result.mean_epoch_seconds)
    if not conf or not plain:
        raise ConfigurationError("Timing order needs both confidence and plain presets")
    return min(conf) > max(plain)
