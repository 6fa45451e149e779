from .clustering import local_clustering_coefficients, triangle_pairs
from .normalization import (
    DiagMode,
    PropagatorMatrix,
    add_diagonal,
    augmented_support,
    build_diagonal,
    build_propagator,
    normalize_adjacency,
    row_stochastic_propagator,
)

__all__ = [
    "DiagMode",
    "PropagatorMatrix",
    "add_diagonal",
    "augmented_support",
    "build_diagonal",
    "build_propagator",
    "local_clustering_coefficients",
    "normalize_adjacency",
    "row_stochastic_propagator",
    "triangle_pairs",
]
