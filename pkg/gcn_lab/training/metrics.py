"""
Losses and metrics on logits
"""

from typing import Callable, Dict

import numpy as np

from ..errors import ContractViolation, DimensionError
from ..graphio import UNLABELED
from ..tensorcore import Tape, as_dense


def as_index(mask, num_nodes: int) -> np.ndarray:
    """Accept a boolean mask of length n or an index array"""
    mask = np.asarray(mask)
    if mask.dtype == bool:
        if mask.shape != (num_nodes,):
            raise DimensionError("mask", (num_nodes,), mask.shape)
        return np.flatnonzero(mask)
    return mask.astype(np.int64).ravel()


def _checked(logits, labels, mask):
    logits = as_dense(logits, "logits")
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (logits.shape[0],):
        raise DimensionError("labels", (logits.shape[0],), labels.shape)
    index = as_index(mask, logits.shape[0])
    if index.size == 0:
        raise ContractViolation("Empty mask")
    if np.any(labels[index] == UNLABELED):
        raise ContractViolation("Mask contains unlabeled nodes")
    return logits, labels, index


def softmax_cross_entropy(logits, labels, mask) -> float:
    """Mean -log softmax(logits)[label] over the masked nodes"""
    logits, labels, index = _checked(logits, labels, mask)
    tape = Tape()
    loss = tape.softmax_cross_entropy(tape.constant(logits), labels, index)
    return float(tape.value(loss)[0, 0])


def accuracy(logits, labels, mask) -> float:
    """Fraction of masked nodes whose argmax (lowest index on ties) is the label"""
    logits, labels, index = _checked(logits, labels, mask)
    return float(np.mean(np.argmax(logits[index], axis=1) == labels[index]))


# Both names are the same numerically stable loss
LOSS_VARIANTS: Dict[str, Callable] = {
    "softmax_ce": softmax_cross_entropy,
    "softmax_ce_v2": softmax_cross_entropy,
}
