"""
Confidence loss terms

    L_label  = cross-entropy of softmax(mu_v) against Y_v over labeled training nodes
    L_smooth = sum over undirected edges of d(u, v)
    L_reg    = sum of all precisions

total = L_label + lambda_smooth L_smooth + lambda_reg L_reg
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import ContractViolation
from ..graphio import Dataset
from ..tensorcore import SparseMatrix, Tape
from .state import PRECISION_FLOOR, ConfidenceState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfidenceLossTerms:
    label: float
    smooth: float
    reg: float
    total: float


@dataclass(frozen=True)
class ConfidenceLossNodes:
    """Tape node ids of the loss terms"""

    label: int
    smooth: int
    reg: int
    total: int


def undirected_edges(adjacency: SparseMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Each undirected edge once, as (u, v) with u < v"""
    upper = adjacency.row_ids < adjacency.col_indices
    return adjacency.row_ids[upper], adjacency.col_indices[upper]


def confidence_loss_nodes(
    tape: Tape,
    mu: int,
    raw_precision: int,
    labels: np.ndarray,
    train_index: np.ndarray,
    edges: Tuple[np.ndarray, np.ndarray],
    lambda_smooth: float,
    lambda_reg: float,
) -> ConfidenceLossNodes:
    """Record the weighted confidence loss on a tape"""
    if lambda_smooth < 0 or lambda_reg < 0:
        raise ContractViolation(
            f"Loss weights must be non-negative, got {lambda_smooth} and {lambda_reg}"
        )
    precision = tape.softplus(raw_precision, offset=PRECISION_FLOOR)
    label = tape.softmax_cross_entropy(mu, labels, train_index)
    smooth = tape.edge_mahalanobis(mu, precision, *edges)
    reg = tape.sum(precision)
    total = tape.add(label, tape.scale(smooth, lambda_smooth))
    total = tape.add(total, tape.scale(reg, lambda_reg))
    return ConfidenceLossNodes(label, smooth, reg, total)


def confidence_loss(
    state: ConfidenceState,
    dataset: Dataset,
    lambda_smooth: float = 1.0,
    lambda_reg: float = 0.01,
) -> ConfidenceLossTerms:
    """Evaluate the confidence loss terms for a state"""
    tape = Tape()
    nodes = confidence_loss_nodes(
        tape,
        tape.constant(state.mu),
        tape.constant(state.raw_precision),
        dataset.labels,
        dataset.train_index,
        undirected_edges(dataset.adjacency),
        lambda_smooth,
        lambda_reg,
    )

    def value(node: int) -> float:
        return float(tape.value(node)[0, 0])

    return ConfidenceLossTerms(value(nodes.label), value(nodes.smooth), value(nodes.reg),
                               value(nodes.total))
