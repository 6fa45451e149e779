"""
Local clustering coefficients

CC_i = delta_i / (k_i (k_i - 1)), where delta_i counts ordered pairs of
connected neighbors of i (twice the triangles through i). Nodes with
fewer than two neighbors get 0.
"""

import logging

import numpy as np

from ..errors import ContractViolation
from ..tensorcore import SparseMatrix

logger = logging.getLogger(__name__)


def _check_simple_undirected(adjacency: SparseMatrix):
    if adjacency.rows != adjacency.cols:
        raise ContractViolation(f"Adjacency must be square, got {adjacency.shape}")
    if not adjacency.is_symmetric():
        raise ContractViolation("Clustering coefficients need a symmetric adjacency")
    if np.any(adjacency.row_ids == adjacency.col_indices):
        raise ContractViolation("Clustering coefficients need a zero diagonal")


def triangle_pairs(adjacency: SparseMatrix) -> np.ndarray:
    """Per node, the number of ordered neighbor pairs that are themselves connected"""
    _check_simple_undirected(adjacency)
    offsets, columns = adjacency.row_offsets, adjacency.col_indices
    delta = np.zeros(adjacency.rows, dtype=np.int64)
    for u, v in zip(adjacency.row_ids, columns):
        if u >= v:
            continue
        # sorted rows make the intersection a merge
        common = np.intersect1d(
            columns[offsets[u] : offsets[u + 1]],
            columns[offsets[v] : offsets[v + 1]],
            assume_unique=True,
        )
        # a triangle reaches each of its nodes through two edges, one ordered pair each
        delta[u] += len(common)
        delta[v] += len(common)
    return delta


def local_clustering_coefficients(adjacency: SparseMatrix) -> np.ndarray:
    """Per-node local clustering coefficient in [0, 1]"""
    delta = triangle_pairs(adjacency)
    degree = adjacency.degrees().astype(np.float64)
    cc = np.zeros(adjacency.rows)
    eligible = degree >= 2
    cc[eligible] = delta[eligible] / (degree[eligible] * (degree[eligible] - 1.0))
    mean = cc.mean() if cc.size else 0.0
    logger.debug(f"Clustering coefficients for {adjacency.rows} nodes, mean {mean:.4f}")
    return cc
