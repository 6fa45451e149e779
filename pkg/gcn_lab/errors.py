"""
Exceptions shared by every gcn_lab sub-package.
"""

from typing import Optional, Union
from pathlib import Path


class GcnLabError(Exception):
    """Base class for all gcn_lab errors"""


class DimensionError(GcnLabError, ValueError):
    """Operand shapes do not line up"""

    def __init__(self, operation: str, left: tuple, right: tuple):
        self.operation = operation
        self.left = tuple(left)
        self.right = tuple(right)
        super().__init__(f"{operation}: incompatible shapes {self.left} and {self.right}")


class ContractViolation(GcnLabError, ValueError):
    """A documented precondition of an operation was not met"""


class ConfigurationError(GcnLabError, ValueError):
    """Invalid or unknown configuration"""


class DatasetFormatError(GcnLabError, ValueError):
    """Malformed line in a dataset file"""

    def __init__(self, path: Union[str, Path], line: Optional[int], message: str):
        self.path = str(path)
        self.line = line
        location = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{location}: {message}")


class TrainingDivergedError(GcnLabError, RuntimeError):
    """Loss became NaN or infinite"""

    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"Training diverged at epoch {epoch}: loss={loss}")
