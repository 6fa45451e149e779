from .matrices import DenseMatrix, SparseMatrix, as_dense, dense_affine, spmm
from .tape import Tape, TapeNode, backward
from .gradcheck import finite_difference_check

__all__ = [
    "DenseMatrix",
    "SparseMatrix",
    "Tape",
    "TapeNode",
    "as_dense",
    "backward",
    "dense_affine",
    "finite_difference_check",
    "spmm",
]
