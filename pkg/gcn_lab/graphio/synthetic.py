"""
Small generated datasets and the standard transductive split
"""

import logging
from typing import Dict, Optional

import numpy as np

from ..tensorcore import SparseMatrix
from .dataset import UNLABELED, Dataset

logger = logging.getLogger(__name__)


def standard_split(
    labels: np.ndarray,
    num_classes: int,
    rng: np.random.Generator,
    per_class: int = 20,
    num_val: int = 500,
    num_test: int = 1000,
) -> Dict[str, np.ndarray]:
    """
    Labeled-per-class training nodes, then validation and test nodes

    Labeled nodes are visited in one random order: the first `per_class`
    of every class go to train, the following ones fill val and then test.
    """
    labels = np.asarray(labels)
    order = rng.permutation(np.flatnonzero(labels != UNLABELED))
    taken = np.zeros(num_classes, dtype=np.int64)
    train, rest = [], []
    for node in order:
        cls = labels[node]
        if taken[cls] < per_class:
            taken[cls] += 1
            train.append(node)
        else:
            rest.append(node)
    short = np.flatnonzero(taken < per_class)
    if short.size:
        logger.warning(f"Classes {short.tolist()} have fewer than {per_class} labeled nodes")
    return {
        "train": np.sort(np.array(train, dtype=np.int64)),
        "val": np.sort(np.array(rest[:num_val], dtype=np.int64)),
        "test": np.sort(np.array(rest[num_val : num_val + num_test], dtype=np.int64)),
    }


def edges_to_adjacency(edges, num_nodes: int) -> SparseMatrix:
    """Symmetric 0/1 adjacency from an undirected edge list"""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    edges = edges[edges[:, 0] != edges[:, 1]]
    if len(edges):
        edges = np.unique(np.sort(edges, axis=1), axis=0)
    rows = np.concatenate((edges[:, 0], edges[:, 1]))
    cols = np.concatenate((edges[:, 1], edges[:, 0]))
    return SparseMatrix.from_coo(rows, cols, None, (num_nodes, num_nodes))


def toy_dataset() -> Dataset:
    """
    Two cliques joined by one edge

    Nodes 0-2 form a triangle of class 0, nodes 3-4 an edge of class 1,
    and 2-3 bridges them. One training label per class.
    """
    adjacency = edges_to_adjacency([(0, 1), (0, 2), (1, 2), (3, 4), (2, 3)], 5)
    return Dataset(
        name="toy",
        adjacency=adjacency,
        features=SparseMatrix.identity(5),
        labels=np.array([0, 0, 0, 1, 1]),
        num_classes=2,
        train_index=np.array([0, 4]),
        val_index=np.array([1]),
        test_index=np.array([2, 3]),
    )


def random_dataset(
    num_nodes: int,
    num_features: int,
    num_classes: int,
    rng: np.random.Generator,
    edge_probability: float = 0.1,
    name: str = "random",
    split_sizes: Optional[Dict[str, int]] = None,
) -> Dataset:
    """Erdős–Rényi graph with binary features and a small labeled split"""
    upper = np.triu(rng.random((num_nodes, num_nodes)) < edge_probability, k=1)
    adjacency = edges_to_adjacency(np.argwhere(upper), num_nodes)
    dense_features = (rng.random((num_nodes, num_features)) < 0.3).astype(np.float64)
    dense_features[np.arange(num_nodes), rng.integers(0, num_features, num_nodes)] = 1.0
    features = SparseMatrix.from_dense(dense_features).row_normalize()
    labels = np.arange(num_nodes) % num_classes
    labels = labels[rng.permutation(num_nodes)]
    sizes = split_sizes or {"per_class": 1, "val": num_nodes // 4, "test": num_nodes // 4}
    split = standard_split(
        labels, num_classes, rng, sizes["per_class"], sizes["val"], sizes["test"]
    )
    return Dataset(
        name=name,
        adjacency=adjacency,
        features=features,
        labels=labels,
        num_classes=num_classes,
        train_index=split["train"],
        val_index=split["val"],
        test_index=split["test"],
    )
