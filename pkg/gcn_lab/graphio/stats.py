"""
Dataset statistics and the published reference values
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .dataset import Dataset

logger = logging.getLogger(__name__)

RATIO_TOLERANCE = 0.001


class DatasetStats(BaseModel):
    """Size and label summary of a dataset"""

    name: str
    nodes: int
    edges: int
    classes: int
    features: int
    label_mismatch: float = Field(ge=0.0, le=1.0)
    label_ratio: float = Field(ge=0.0, le=1.0)


REFERENCE_STATS: Dict[str, DatasetStats] = {
    "cora": DatasetStats(
        name="Cora", nodes=2708, edges=5429, classes=7, features=1433,
        label_mismatch=0.002, label_ratio=0.052,
    ),
    "coraml": DatasetStats(
        name="Cora-ML", nodes=2995, edges=8416, classes=7, features=2879,
        label_mismatch=0.018, label_ratio=0.166,
    ),
    "citeseer": DatasetStats(
        name="Citeseer", nodes=3327, edges=4372, classes=6, features=3703,
        label_mismatch=0.003, label_ratio=0.036,
    ),
    "pubmed": DatasetStats(
        name="Pubmed", nodes=19717, edges=44338, classes=3, features=500,
        label_mismatch=0.0, label_ratio=0.003,
    ),
}


def reference_key(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


def compute_stats(dataset: Dataset) -> DatasetStats:
    """
    Summarize a dataset

    Label mismatch is the fraction of edges with both endpoints in the train
    split whose endpoints carry different labels (0 when there are none).
    """
    adjacency = dataset.adjacency
    upper = adjacency.row_ids < adjacency.col_indices
    u, v = adjacency.row_ids[upper], adjacency.col_indices[upper]
    train = dataset.mask("train")
    both = train[u] & train[v]
    if both.any():
        mismatch = float(np.mean(dataset.labels[u[both]] != dataset.labels[v[both]]))
    else:
        mismatch = 0.0
    return DatasetStats(
        name=dataset.name,
        nodes=dataset.num_nodes,
        edges=int(upper.sum()),
        classes=dataset.num_classes,
        features=dataset.num_features,
        label_mismatch=mismatch,
        label_ratio=len(dataset.train_index) / dataset.num_nodes,
    )


def compare_with_reference(
    stats: DatasetStats, reference: Optional[DatasetStats] = None
) -> Dict[str, Tuple[float, float]]:
    """
    Cells that differ from the reference statistics

    Counts must match exactly, fractions within RATIO_TOLERANCE.

    Returns:
        {cell: (expected, actual)}; empty when everything matches or no
        reference exists for the dataset
    """
    if reference is None:
        reference = REFERENCE_STATS.get(reference_key(stats.name))
    if reference is None:
        return {}
    deviations = {}
    for cell in ("nodes", "edges", "classes", "features"):
        expected, actual = getattr(reference, cell), getattr(stats, cell)
        if expected != actual:
            deviations[cell] = (expected, actual)
    for cell in ("label_mismatch", "label_ratio"):
        expected, actual = getattr(reference, cell), getattr(stats, cell)
        if abs(expected - actual) > RATIO_TOLERANCE:
            deviations[cell] = (expected, actual)
    if deviations:
        logger.warning(f"{stats.name} deviates from reference statistics in {sorted(deviations)}")
    return deviations
