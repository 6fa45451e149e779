"""
Adam with bias correction
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

import numpy as np

from ..errors import ContractViolation, DimensionError
from ..tensorcore import DenseMatrix

logger = logging.getLogger(__name__)

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


@dataclass
class AdamState:
    """First and second moments per parameter name, and the step counter"""

    first_moment: Dict[str, DenseMatrix] = field(default_factory=dict)
    second_moment: Dict[str, DenseMatrix] = field(default_factory=dict)
    t: int = 0
    beta1: float = BETA1
    beta2: float = BETA2
    epsilon: float = EPSILON


def adam_step(
    params: Dict[str, DenseMatrix],
    grads: Dict[str, DenseMatrix],
    state: AdamState,
    lr: float,
    weight_decay: float = 0.0,
    decay: Iterable[str] = (),
) -> Tuple[Dict[str, DenseMatrix], AdamState]:
    """
    One Adam update

    Args:
        params: current parameters; not modified
        grads: gradient per parameter name
        state: moments, updated in place
        lr: learning rate
        weight_decay: L2 coefficient; weight_decay * W joins the gradient of
            every name in `decay` before the moments are updated

    Returns:
        New parameter dict and the state
    """
    if lr <= 0:
        raise ContractViolation(f"Learning rate must be positive, got {lr}")
    decay = set(decay)
    unknown = decay - set(params)
    if unknown:
        raise ContractViolation(f"Weight decay on unknown parameters {sorted(unknown)}")

    state.t += 1
    bias1 = 1.0 - state.beta1 ** state.t
    bias2 = 1.0 - state.beta2 ** state.t
    updated = dict(params)
    for name, value in params.items():
        if name not in grads:
            continue
        g = grads[name]
        if g.shape != value.shape:
            raise DimensionError(f"adam_step({name})", value.shape, g.shape)
        if name in decay and weight_decay:
            g = g + weight_decay * value
        m = state.first_moment.get(name)
        v = state.second_moment.get(name)
        if m is None:
            m, v = np.zeros_like(value), np.zeros_like(value)
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * (g * g)
        state.first_moment[name], state.second_moment[name] = m, v
        updated[name] = value - lr * (m / bias1) / (np.sqrt(v / bias2) + state.epsilon)
    return updated, state
