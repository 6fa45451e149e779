"""
Mahalanobis influence scores and the influence-weighted aggregation matrix

For nodes u, v with label scores mu and diagonal precisions p,

    d(u, v) = sum_i (mu_u,i - mu_v,i)^2 (p_u,i + p_v,i)
    r(u, v) = 1 / (d(u, v) + epsilon)

Scores are recomputed from the current state on every forward pass and
enter the layer as constants.
"""

import logging
from typing import Optional

import numpy as np

from ..errors import ContractViolation, DimensionError
from ..layers.config import ConfidenceConfig
from ..tensorcore import SparseMatrix
from ..topology import augmented_support, normalize_adjacency
from .state import ConfidenceState

logger = logging.getLogger(__name__)


def mahalanobis(mu_u, mu_v, prec_u, prec_v) -> float:
    mu_u, mu_v = np.asarray(mu_u, dtype=np.float64), np.asarray(mu_v, dtype=np.float64)
    prec_u, prec_v = np.asarray(prec_u, dtype=np.float64), np.asarray(prec_v, dtype=np.float64)
    if not (mu_u.shape == mu_v.shape == prec_u.shape == prec_v.shape):
        raise DimensionError("mahalanobis", mu_u.shape, mu_v.shape)
    if np.any(prec_u <= 0) or np.any(prec_v <= 0):
        raise ContractViolation("Precisions must be strictly positive")
    diff = mu_u - mu_v
    return float((diff * diff * (prec_u + prec_v)).sum())


def influence(d: float, epsilon: float = 1.0) -> float:
    if d < 0:
        raise ContractViolation(f"Distance must be non-negative, got {d}")
    if epsilon <= 0:
        raise ContractViolation(f"Epsilon must be positive, got {epsilon}")
    return 1.0 / (d + epsilon)


def pairwise_influence(
    state: ConfidenceState, rows: np.ndarray, cols: np.ndarray, epsilon: float = 1.0
) -> np.ndarray:
    """r(u, v) for every (rows[k], cols[k]) pair"""
    if epsilon <= 0:
        raise ContractViolation(f"Epsilon must be positive, got {epsilon}")
    mu, prec = state.mu, state.precision()
    diff = mu[rows] - mu[cols]
    distance = (diff * diff * (prec[rows] + prec[cols])).sum(axis=1)
    return 1.0 / (distance + epsilon)


def build_influence_matrix(
    adjacency: SparseMatrix,
    state: ConfidenceState,
    epsilon: float = 1.0,
    normalize: bool = True,
) -> SparseMatrix:
    """Influence scores on the support of A + I, optionally row-normalized"""
    if state.shape[0] != adjacency.rows:
        raise DimensionError("build_influence_matrix", adjacency.shape, state.shape)
    support = augmented_support(adjacency)
    R = support.with_values(pairwise_influence(state, support.row_ids, support.col_indices,
                                               epsilon))
    return R.row_normalize() if normalize else R


def restrict_to_support(R: SparseMatrix, S: SparseMatrix) -> SparseMatrix:
    """
    Elementwise product R * S on the support of S

    Every stored entry of S must also be stored in R.
    """
    if R.shape != S.shape:
        raise DimensionError("restrict_to_support", R.shape, S.shape)
    width = np.int64(R.cols)
    r_keys = R.row_ids * width + R.col_indices
    s_keys = S.row_ids * width + S.col_indices
    position = np.searchsorted(r_keys, s_keys)
    found = position < len(r_keys)
    found[found] = r_keys[position[found]] == s_keys[found]
    if not np.all(found):
        raise ContractViolation(
            f"Propagation support has {int((~found).sum())} entries outside the influence support"
        )
    return S.with_values(S.values * R.values[position])


def aggregation_matrix(
    adjacency: SparseMatrix,
    state: ConfidenceState,
    params: Optional[ConfidenceConfig] = None,
    propagator: Optional[SparseMatrix] = None,
) -> SparseMatrix:
    """
    R_hat used by every confidence graph layer

    R is row-normalized over the A + I pattern first, then multiplied entry-wise
    with the support: the normalized propagator for symmetric propagation, the
    0/1 pattern of A + I for augmented propagation. The raw influence form uses
    the pattern and skips the normalization. `normalize_after_support` moves the
    row normalization after the masking instead.
    """
    params = params or ConfidenceConfig()
    late = params.normalize_after_support
    normalize_first = params.normalize and not params.raw_influence and not late
    R = build_influence_matrix(adjacency, state, params.epsilon, normalize=normalize_first)
    if params.raw_influence or params.propagation == "augmented":
        support = augmented_support(adjacency)
    else:
        if propagator is None:
            propagator = normalize_adjacency(adjacency, np.ones(adjacency.rows)).matrix
        support = propagator
    weighted = restrict_to_support(R, support)
    if late and params.normalize and not params.raw_influence:
        return weighted.row_normalize()
    return weighted
