from .influence import (
    aggregation_matrix,
    build_influence_matrix,
    influence,
    mahalanobis,
    pairwise_influence,
    restrict_to_support,
)
from .layer import confgcn_layer_forward
from .losses import (
    ConfidenceLossNodes,
    ConfidenceLossTerms,
    confidence_loss,
    confidence_loss_nodes,
    undirected_edges,
)
from .state import MU_PARAM, PRECISION_FLOOR, PRECISION_PARAM, ConfidenceState

__all__ = [
    "ConfidenceLossNodes",
    "ConfidenceLossTerms",
    "ConfidenceState",
    "MU_PARAM",
    "PRECISION_FLOOR",
    "PRECISION_PARAM",
    "aggregation_matrix",
    "build_influence_matrix",
    "confgcn_layer_forward",
    "confidence_loss",
    "confidence_loss_nodes",
    "influence",
    "mahalanobis",
    "pairwise_influence",
    "restrict_to_support",
    "undirected_edges",
]
