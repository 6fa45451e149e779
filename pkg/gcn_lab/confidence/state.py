"""
Per-node label distributions and diagonal precisions
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..errors import ConfigurationError, DimensionError
from ..tensorcore import DenseMatrix, as_dense, functional as F

logger = logging.getLogger(__name__)

MU_PARAM = "confidence.mu"
PRECISION_PARAM = "confidence.raw_precision"
PRECISION_FLOOR = 1e-6
# softplus(log(e - 1)) == 1
RAW_PRECISION_INIT = float(np.log(np.e - 1.0))


@dataclass(frozen=True, eq=False)
class ConfidenceState:
    """mu and raw precision, both n x m; precision = softplus(raw) + 1e-6"""

    mu: DenseMatrix
    raw_precision: DenseMatrix

    def __post_init__(self):
        mu = as_dense(self.mu, "mu")
        raw = as_dense(self.raw_precision, "raw_precision")
        if mu.shape != raw.shape:
            raise DimensionError("ConfidenceState", mu.shape, raw.shape)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "raw_precision", raw)

    @classmethod
    def initial(cls, num_nodes: int, num_classes: int) -> "ConfidenceState":
        """Uniform start: mu = 0, precision ~ 1"""
        return cls(
            np.zeros((num_nodes, num_classes)),
            np.full((num_nodes, num_classes), RAW_PRECISION_INIT),
        )

    @classmethod
    def from_params(cls, params: Dict[str, DenseMatrix]) -> "ConfidenceState":
        try:
            return cls(params[MU_PARAM], params[PRECISION_PARAM])
        except KeyError as e:
            raise ConfigurationError(f"Missing confidence parameter {e}") from None

    @property
    def shape(self):
        return self.mu.shape

    def precision(self) -> DenseMatrix:
        return F.softplus(self.raw_precision) + PRECISION_FLOOR

    def to_params(self) -> Dict[str, DenseMatrix]:
        return {MU_PARAM: self.mu.copy(), PRECISION_PARAM: self.raw_precision.copy()}
