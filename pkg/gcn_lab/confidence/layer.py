"""
Influence-weighted graph layer
"""

import logging
from typing import Optional, Union

import numpy as np

from ..layers.config import ActivationSpec, BaseActivation
from ..layers.model import graph_layer
from ..tensorcore import DenseMatrix, SparseMatrix, Tape, as_dense
from ..topology import PropagatorMatrix
from .influence import restrict_to_support

logger = logging.getLogger(__name__)


def confgcn_layer_forward(
    R: SparseMatrix,
    support: Union[SparseMatrix, PropagatorMatrix],
    H,
    W,
    b,
    spec: Union[ActivationSpec, str] = "none",
    dropout: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
    normalize: bool = False,
) -> DenseMatrix:
    """
    activation(R_hat (dropout(H) W + b)) with R_hat = R * support

    Args:
        R: influence matrix over the support of A + I
        support: propagation support (the 0/1 pattern of A + I for the raw
            form, or the symmetric propagator)
        normalize: row-normalize R_hat after the elementwise product
    """
    if isinstance(support, PropagatorMatrix):
        support = support.matrix
    if isinstance(spec, str):
        spec = BaseActivation(kind=spec)
    weighted = restrict_to_support(R, support)
    if normalize:
        weighted = weighted.row_normalize()
    tape = Tape()
    H = H if isinstance(H, SparseMatrix) else as_dense(H, "H")
    out = graph_layer(
        tape,
        weighted,
        H,
        tape.constant(W),
        tape.constant(as_dense(b, "bias")),
        spec,
        dropout,
        training,
        rng,
        bias_inside=True,
    )
    return tape.value(out)
