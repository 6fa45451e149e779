"""
Elementwise functions and their derivatives
"""

from typing import Callable, Dict, Tuple

import numpy as np

ELU_ALPHA = 1.0
SELU_ALPHA = 1.6732632423543772
SELU_SCALE = 1.0507009873554805
RELU6_CAP = 6.0


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_grad(x: np.ndarray) -> np.ndarray:
    return (x > 0.0).astype(np.float64)


def relu6(x: np.ndarray) -> np.ndarray:
    return np.minimum(np.maximum(x, 0.0), RELU6_CAP)


def relu6_grad(x: np.ndarray) -> np.ndarray:
    return ((x > 0.0) & (x < RELU6_CAP)).astype(np.float64)


def elu(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0.0, x, ELU_ALPHA * np.expm1(np.minimum(x, 0.0)))


def elu_grad(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0.0, 1.0, ELU_ALPHA * np.exp(np.minimum(x, 0.0)))


def selu(x: np.ndarray) -> np.ndarray:
    return SELU_SCALE * np.where(x > 0.0, x, SELU_ALPHA * np.expm1(np.minimum(x, 0.0)))


def selu_grad(x: np.ndarray) -> np.ndarray:
    return SELU_SCALE * np.where(x > 0.0, 1.0, SELU_ALPHA * np.exp(np.minimum(x, 0.0)))


def identity(x: np.ndarray) -> np.ndarray:
    return x


def identity_grad(x: np.ndarray) -> np.ndarray:
    return np.ones_like(x)


def softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # exp of a non-positive argument only
    e = np.exp(-np.abs(x))
    return np.where(x >= 0.0, 1.0 / (1.0 + e), e / (1.0 + e))


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))


ELEMENTWISE: Dict[str, Tuple[Callable, Callable]] = {
    "relu": (relu, relu_grad),
    "relu6": (relu6, relu6_grad),
    "elu": (elu, elu_grad),
    "selu": (selu, selu_grad),
    "none": (identity, identity_grad),
}
