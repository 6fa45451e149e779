"""
Dataset container for transductive node classification
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from pydantic import BaseModel, Field

from ..errors import ConfigurationError, ContractViolation
from ..tensorcore import SparseMatrix

logger = logging.getLogger(__name__)

UNLABELED = -1
SPLITS = ("train", "val", "test")


class DatasetMeta(BaseModel):
    """Contents of meta.json"""

    name: str
    num_nodes: int = Field(ge=1)
    num_features: int = Field(ge=1)
    num_classes: int = Field(ge=2)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Graph, sparse features, labels and the train/val/test node sets"""

    name: str
    adjacency: SparseMatrix
    features: SparseMatrix
    labels: np.ndarray
    num_classes: int
    train_index: np.ndarray
    val_index: np.ndarray
    test_index: np.ndarray
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        for split in SPLITS:
            index = np.unique(np.asarray(getattr(self, f"{split}_index"), dtype=np.int64))
            index.setflags(write=False)
            object.__setattr__(self, f"{split}_index", index)
        self.validate()

    @property
    def num_nodes(self) -> int:
        return self.adjacency.rows

    @property
    def num_features(self) -> int:
        return self.features.cols

    @property
    def num_edges(self) -> int:
        """Undirected edge count"""
        return self.adjacency.nnz // 2

    def split_index(self, split: str) -> np.ndarray:
        if split not in SPLITS:
            raise ConfigurationError(f"Unknown split {split!r}; expected one of {list(SPLITS)}")
        return getattr(self, f"{split}_index")

    def validate(self):
        """Check the structural invariants; raises ContractViolation"""
        n = self.num_nodes
        adjacency = self.adjacency
        if adjacency.shape != (n, n):
            raise ContractViolation(f"Adjacency must be square, got {adjacency.shape}")
        if np.any(adjacency.row_ids == adjacency.col_indices):
            raise ContractViolation("Adjacency has self-loops")
        if not adjacency.is_symmetric():
            raise ContractViolation("Adjacency is not symmetric")
        if self.features.rows != n:
            raise ContractViolation(f"Features have {self.features.rows} rows for {n} nodes")
        if self.labels.shape != (n,):
            raise ContractViolation(f"Labels have shape {self.labels.shape} for {n} nodes")
        if self.num_classes < 2:
            raise ContractViolation(f"Need at least 2 classes, got {self.num_classes}")
        labeled = self.labels[self.labels != UNLABELED]
        if np.any(labeled < 0) or np.any(labeled >= self.num_classes):
            raise ContractViolation("Label outside 0..num_classes-1")
        missing = sorted(set(range(self.num_classes)) - set(labeled.tolist()))
        if missing:
            raise ContractViolation(f"Classes without any labeled node: {missing}")

        for split in SPLITS:
            index = self.split_index(split)
            if index.size and (index.min() < 0 or index.max() >= n):
                raise ContractViolation(f"{split} index outside 0..{n - 1}")
        if np.any(self.labels[self.train_index] == UNLABELED):
            raise ContractViolation("Train split contains unlabeled nodes")
        for a, b in (("train", "val"), ("train", "test"), ("val", "test")):
            overlap = np.intersect1d(self.split_index(a), self.split_index(b))
            if overlap.size:
                raise ContractViolation(f"{a} and {b} splits share {overlap.size} node(s)")

    def mask(self, split: str) -> np.ndarray:
        """Boolean mask of a split"""
        mask = np.zeros(self.num_nodes, dtype=bool)
        mask[self.split_index(split)] = True
        return mask

    def permute(self, permutation: np.ndarray) -> "Dataset":
        """Relabel node i as permutation[i]"""
        permutation = np.asarray(permutation, dtype=np.int64)
        labels = np.empty_like(self.labels)
        labels[permutation] = self.labels
        return Dataset(
            name=self.name,
            adjacency=self.adjacency.permute(permutation),
            features=self.features.permute_rows(permutation),
            labels=labels,
            num_classes=self.num_classes,
            train_index=permutation[self.train_index],
            val_index=permutation[self.val_index],
            test_index=permutation[self.test_index],
            metadata=dict(self.metadata),
        )
