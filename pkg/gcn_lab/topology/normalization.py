"""
Propagator construction

Turns a raw adjacency into D~^-1/2 (A + diag) D~^-1/2, with the diagonal
being either the identity or the local clustering coefficients.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import ConfigurationError, ContractViolation, DimensionError
from ..tensorcore import SparseMatrix
from .clustering import local_clustering_coefficients

logger = logging.getLogger(__name__)


class DiagMode(str, Enum):
    IDENTITY = "identity"
    CLUSTERING_COEFFICIENTS = "clustering_coefficients"


@dataclass(frozen=True)
class PropagatorMatrix:
    """Normalized augmented adjacency used by every graph layer"""

    matrix: SparseMatrix
    diag_mode: DiagMode
    degrees: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape


def build_diagonal(mode, num_nodes: int, cc: Optional[np.ndarray] = None) -> np.ndarray:
    """Diagonal values added to the adjacency: ones, or the CC vector verbatim"""
    mode = DiagMode(mode)
    if mode is DiagMode.IDENTITY:
        return np.ones(num_nodes)
    if cc is None:
        raise ConfigurationError("clustering_coefficients diagonal needs a CC vector")
    cc = np.asarray(cc, dtype=np.float64)
    if cc.shape != (num_nodes,):
        raise DimensionError("build_diagonal", (num_nodes,), cc.shape)
    return cc.copy()


def add_diagonal(adjacency: SparseMatrix, diag: np.ndarray) -> SparseMatrix:
    """A + diag(d); zero diagonal values are not stored"""
    n = adjacency.rows
    present = np.flatnonzero(diag != 0)
    rows = np.concatenate((adjacency.row_ids, present))
    cols = np.concatenate((adjacency.col_indices, present))
    values = np.concatenate((adjacency.values, diag[present]))
    return SparseMatrix.from_coo(rows, cols, values, (n, n))


def normalize_adjacency(
    adjacency: SparseMatrix, diag: np.ndarray, mode=DiagMode.IDENTITY
) -> PropagatorMatrix:
    """
    Symmetric normalization of A + diag(d)

    Rows whose augmented degree is zero (isolated nodes with a zero
    diagonal) stay all-zero.
    """
    n = adjacency.rows
    diag = np.asarray(diag, dtype=np.float64)
    if adjacency.shape != (n, n):
        raise ContractViolation(f"Adjacency must be square, got {adjacency.shape}")
    if diag.shape != (n,):
        raise DimensionError("normalize_adjacency", adjacency.shape, diag.shape)
    if np.any(diag < 0):
        raise ContractViolation("Diagonal values must be non-negative")
    if np.any(adjacency.row_ids == adjacency.col_indices):
        raise ContractViolation("Adjacency must have a zero diagonal")
    if not adjacency.is_symmetric():
        raise ContractViolation("Adjacency must be symmetric")

    augmented = add_diagonal(adjacency, diag)
    degrees = augmented.row_sums()
    inv_sqrt = np.zeros(n)
    positive = degrees > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(degrees[positive])
    empty = int(n - positive.sum())
    if empty:
        logger.info(f"{empty} node(s) with zero augmented degree keep an all-zero propagator row")
    return PropagatorMatrix(augmented.scale(inv_sqrt, inv_sqrt), DiagMode(mode), degrees)


def build_propagator(adjacency: SparseMatrix, mode=DiagMode.IDENTITY) -> PropagatorMatrix:
    """Propagator for a diagonal mode, computing clustering coefficients when needed"""
    mode = DiagMode(mode)
    cc = None
    if mode is DiagMode.CLUSTERING_COEFFICIENTS:
        cc = local_clustering_coefficients(adjacency)
    return normalize_adjacency(adjacency, build_diagonal(mode, adjacency.rows, cc), mode)


def augmented_support(adjacency: SparseMatrix) -> SparseMatrix:
    """0/1 pattern of A + I"""
    return add_diagonal(adjacency.pattern(), np.ones(adjacency.rows))


def row_stochastic_propagator(adjacency: SparseMatrix) -> SparseMatrix:
    """D~^-1 (A + I): mean aggregation over the closed neighborhood"""
    return augmented_support(adjacency).row_normalize()
