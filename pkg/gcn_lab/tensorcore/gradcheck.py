"""
Finite-difference gradient checking against the tape
"""

import logging
from typing import Callable

import numpy as np

from ..errors import ContractViolation
from .matrices import DenseMatrix, as_dense
from .tape import Tape

logger = logging.getLogger(__name__)

# f(tape, parameter_node) -> scalar loss node
LossBuilder = Callable[[Tape, int], int]


def _evaluate(f: LossBuilder, value: DenseMatrix) -> float:
    tape = Tape()
    param = tape.parameter(value, "p")
    return float(tape.value(f(tape, param))[0, 0])


def finite_difference_check(f: LossBuilder, P, step: float = 1e-5) -> float:
    """
    Compare the tape gradient of f at P with central differences

    Args:
        f: builds a scalar loss on a fresh tape from the parameter node
        P: parameter value
        step: central-difference step

    Returns:
        Maximum element-wise relative error, |a-b| / max(|a|, |b|, 1e-8);
        infinite when either gradient contains NaN
    """
    if step <= 0:
        raise ContractViolation(f"Finite-difference step must be positive, got {step}")
    P = as_dense(P).copy()

    tape = Tape()
    param = tape.parameter(P, "p")
    analytic = tape.backward(f(tape, param))["p"]

    numeric = np.zeros_like(P)
    for idx in np.ndindex(*P.shape):
        original = P[idx]
        P[idx] = original + step
        upper = _evaluate(f, P)
        P[idx] = original - step
        lower = _evaluate(f, P)
        P[idx] = original
        numeric[idx] = (upper - lower) / (2.0 * step)

    if np.isnan(analytic).any() or np.isnan(numeric).any():
        logger.warning("NaN in gradient comparison")
        return float("inf")
    denominator = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    error = float(np.max(np.abs(analytic - numeric) / denominator)) if P.size else 0.0
    logger.debug(f"Finite-difference check on {P.shape}: max relative error {error:.3e}")
    return error
