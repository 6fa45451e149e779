"""
Activation functions and convex combinations of them
"""

import logging
from typing import Optional, Union

import numpy as np

from ..errors import ContractViolation
from ..tensorcore import Tape
from .config import (
    NEGATIVE_TOLERANCE,
    SIMPLEX_TOLERANCE,
    ActivationSpec,
    BaseActivation,
    ConvexActivation,
)

logger = logging.getLogger(__name__)


def simplex_project(c) -> np.ndarray:
    """
    Euclidean projection onto the probability simplex

    Sort-and-threshold: find the largest rho with u_rho > (sum_{j<=rho} u_j - 1) / rho
    over the descending sort u, then shift by that threshold and clip at zero.
    """
    c = np.asarray(c, dtype=np.float64).ravel()
    if c.size < 2:
        raise ContractViolation(f"Simplex projection needs at least two entries, got {c.size}")
    if not np.all(np.isfinite(c)):
        raise ContractViolation(f"Cannot project non-finite coefficients {c}")
    u = np.sort(c)[::-1]
    cssv = np.cumsum(u) - 1.0
    ind = np.arange(1, c.size + 1)
    rho = np.count_nonzero(u - cssv / ind > 0)
    theta = cssv[rho - 1] / rho
    return np.maximum(c - theta, 0.0)


def check_simplex(c) -> None:
    c = np.asarray(c, dtype=np.float64).ravel()
    if c.size < 2 or np.any(c < -NEGATIVE_TOLERANCE) or abs(c.sum() - 1.0) > SIMPLEX_TOLERANCE:
        raise ContractViolation(f"Coefficients {c.tolist()} are not on the probability simplex")


def activation_node(
    tape: Tape, x: int, spec: ActivationSpec, coefficients: Optional[int] = None
) -> int:
    """
    Record an activation on the tape

    Args:
        coefficients: tape node holding learnable convex coefficients; the
            spec's own coefficients are used when omitted
    """
    if isinstance(spec, BaseActivation):
        return tape.activation(x, spec.kind)
    if coefficients is None:
        check_simplex(spec.coefficients)
        return tape.convex_activation(x, spec.members, np.asarray(spec.coefficients))
    check_simplex(tape.value(coefficients))
    return tape.convex_activation(x, spec.members, coefficients)


def apply_activation(spec: Union[ActivationSpec, str], X, coefficients=None) -> np.ndarray:
    """Evaluate an activation spec elementwise (no gradients kept)"""
    if isinstance(spec, str):
        spec = BaseActivation(kind=spec)
    tape = Tape()
    x = tape.constant(X)
    if isinstance(spec, ConvexActivation) and coefficients is not None:
        check_simplex(coefficients)
        return tape.value(tape.convex_activation(x, spec.members, np.asarray(coefficients)))
    return tape.value(activation_node(tape, x, spec))
