"""
Dense and sparse matrix types

Dense matrices are plain 2-D float64 numpy arrays. Sparse matrices use a
single CSR layout; every sparse input is normalized to it at the boundary.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import ContractViolation, DimensionError

logger = logging.getLogger(__name__)

DenseMatrix = np.ndarray

# Upper bound on (row entries x output columns) products materialized at once by spmm
_SPMM_BLOCK_ENTRIES = 1 << 22


def as_dense(data, name: str = "matrix") -> DenseMatrix:
    """Coerce to a C-contiguous 2-D float64 array"""
    array = np.ascontiguousarray(data, dtype=np.float64)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    if array.ndim != 2:
        raise DimensionError(f"as_dense({name})", array.shape, (None, None))
    return array


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Immutable CSR matrix"""

    rows: int
    cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        offsets = np.ascontiguousarray(self.row_offsets, dtype=np.int64)
        columns = np.ascontiguousarray(self.col_indices, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        object.__setattr__(self, "row_offsets", _readonly(offsets))
        object.__setattr__(self, "col_indices", _readonly(columns))
        object.__setattr__(self, "values", _readonly(values))
        self._validate()

    def _validate(self):
        if self.rows < 0 or self.cols < 0:
            raise ContractViolation(f"Negative sparse shape {self.shape}")
        if len(self.row_offsets) != self.rows + 1:
            raise ContractViolation(
                f"row_offsets has length {len(self.row_offsets)}, expected {self.rows + 1}"
            )
        nnz = len(self.col_indices)
        if len(self.values) != nnz:
            raise ContractViolation(f"{len(self.values)} values for {nnz} column indices")
        if self.row_offsets[0] != 0 or self.row_offsets[-1] != nnz:
            raise ContractViolation("row_offsets must start at 0 and end at nnz")
        if np.any(np.diff(self.row_offsets) < 0):
            raise ContractViolation("row_offsets must be non-decreasing")
        if nnz == 0:
            return
        if self.col_indices.min() < 0 or self.col_indices.max() >= self.cols:
            raise ContractViolation(f"Column index out of range for {self.cols} columns")
        row_ids = self.row_ids
        increasing = (np.diff(self.col_indices) > 0) | (np.diff(row_ids) != 0)
        if not np.all(increasing):
            raise ContractViolation("Column indices must be strictly increasing within a row")

    # Construction

    @classmethod
    def from_coo(
        cls,
        rows: np.ndarray,
        cols: np.ndarray,
        values: Optional[np.ndarray],
        shape: Tuple[int, int],
    ) -> "SparseMatrix":
        """Build a CSR matrix from coordinate triplets, summing duplicates"""
        n_rows, n_cols = shape
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        if values is None:
            values = np.ones(len(rows), dtype=np.float64)
        values = np.asarray(values, dtype=np.float64).ravel()
        if not (len(rows) == len(cols) == len(values)):
            raise ContractViolation("COO arrays must have equal length")
        if len(rows) and (rows.min() < 0 or rows.max() >= n_rows):
            raise ContractViolation(f"Row index out of range for {n_rows} rows")
        if len(cols) and (cols.min() < 0 or cols.max() >= n_cols):
            raise ContractViolation(f"Column index out of range for {n_cols} columns")

        order = np.lexsort((cols, rows))
        rows, cols, values = rows[order], cols[order], values[order]
        if len(rows) > 1:
            starts = np.flatnonzero(
                np.concatenate(([True], (np.diff(rows) != 0) | (np.diff(cols) != 0)))
            )
            if len(starts) < len(rows):
                values = np.add.reduceat(values, starts)
                rows, cols = rows[starts], cols[starts]

        counts = np.bincount(rows, minlength=n_rows)
        offsets = np.concatenate(([0], np.cumsum(counts)))
        return cls(n_rows, n_cols, offsets, cols, values)

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrix":
        """Keep the nonzero entries of a dense matrix"""
        dense = as_dense(dense)
        rows, cols = np.nonzero(dense)
        return cls.from_coo(rows, cols, dense[rows, cols], dense.shape)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls.diagonal(np.ones(n))

    @classmethod
    def diagonal(cls, diag: np.ndarray) -> "SparseMatrix":
        diag = np.asarray(diag, dtype=np.float64)
        n = len(diag)
        return cls(n, n, np.arange(n + 1), np.arange(n), diag.copy())

    # Views

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.values)

    @cached_property
    def row_ids(self) -> np.ndarray:
        """Row index of every stored entry"""
        return _readonly(np.repeat(np.arange(self.rows), np.diff(self.row_offsets)))

    @cached_property
    def transposed(self) -> "SparseMatrix":
        return SparseMatrix.from_coo(
            self.col_indices, self.row_ids, self.values, (self.cols, self.rows)
        )

    def transpose(self) -> "SparseMatrix":
        return self.transposed

    def to_dense(self) -> DenseMatrix:
        dense = np.zeros(self.shape)
        dense[self.row_ids, self.col_indices] = self.values
        return dense

    def row(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        """Column indices and values of row i"""
        start, end = self.row_offsets[i], self.row_offsets[i + 1]
        return self.col_indices[start:end], self.values[start:end]

    def degrees(self) -> np.ndarray:
        """Stored entries per row"""
        return np.diff(self.row_offsets)

    def row_sums(self) -> np.ndarray:
        sums = np.zeros(self.rows)
        np.add.at(sums, self.row_ids, self.values)
        return sums

    def diagonal_values(self) -> np.ndarray:
        diag = np.zeros(min(self.shape))
        on_diag = self.row_ids == self.col_indices
        diag[self.row_ids[on_diag]] = self.values[on_diag]
        return diag

    def is_symmetric(self, tol: float = 0.0) -> bool:
        if self.rows != self.cols:
            return False
        other = self.transposed
        if not np.array_equal(self.row_offsets, other.row_offsets):
            return False
        if not np.array_equal(self.col_indices, other.col_indices):
            return False
        return bool(np.all(np.abs(self.values - other.values) <= tol))

    # Derived matrices (same sparsity pattern unless stated)

    def with_values(self, values: np.ndarray) -> "SparseMatrix":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.nnz,):
            raise DimensionError("with_values", (self.nnz,), values.shape)
        return SparseMatrix(self.rows, self.cols, self.row_offsets, self.col_indices, values)

    def pattern(self) -> "SparseMatrix":
        """0/1 matrix with the same support"""
        return self.with_values(np.ones(self.nnz))

    def row_normalize(self) -> "SparseMatrix":
        """Divide each row by its sum; all-zero rows stay zero"""
        sums = self.row_sums()
        inverse = np.zeros_like(sums)
        np.divide(1.0, sums, out=inverse, where=sums != 0)
        return self.with_values(self.values * inverse[self.row_ids])

    def scale(self, left: Optional[np.ndarray] = None, right: Optional[np.ndarray] = None):
        """diag(left) @ self @ diag(right)"""
        values = self.values.copy()
        if left is not None:
            values *= np.asarray(left, dtype=np.float64)[self.row_ids]
        if right is not None:
            values *= np.asarray(right, dtype=np.float64)[self.col_indices]
        return self.with_values(values)

    def dropout(self, rate: float, rng: np.random.Generator) -> "SparseMatrix":
        """Inverted dropout on the stored entries; dropped entries are removed"""
        if rate <= 0.0:
            return self
        keep = rng.random(self.nnz) >= rate
        rows = self.row_ids[keep]
        counts = np.bincount(rows, minlength=self.rows)
        offsets = np.concatenate(([0], np.cumsum(counts)))
        return SparseMatrix(
            self.rows,
            self.cols,
            offsets,
            self.col_indices[keep],
            self.values[keep] / (1.0 - rate),
        )

    def permute(self, permutation: np.ndarray) -> "SparseMatrix":
        """Symmetric relabeling: entry (i, j) moves to (perm[i], perm[j])"""
        permutation = np.asarray(permutation, dtype=np.int64)
        return SparseMatrix.from_coo(
            permutation[self.row_ids], permutation[self.col_indices], self.values, self.shape
        )

    def permute_rows(self, permutation: np.ndarray) -> "SparseMatrix":
        permutation = np.asarray(permutation, dtype=np.int64)
        return SparseMatrix.from_coo(
            permutation[self.row_ids], self.col_indices, self.values, self.shape
        )

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


def spmm(sparse: SparseMatrix, dense: DenseMatrix) -> DenseMatrix:
    """
    Sparse-dense product S @ D

    Each output row is accumulated in stored column order, so results are
    deterministic for a fixed input.
    """
    dense = as_dense(dense)
    if sparse.cols != dense.shape[0]:
        raise DimensionError("spmm", sparse.shape, dense.shape)

    out = np.zeros((sparse.rows, dense.shape[1]))
    if sparse.nnz == 0 or dense.shape[1] == 0:
        return out

    budget = max(_SPMM_BLOCK_ENTRIES // dense.shape[1], 1)
    offsets = sparse.row_offsets
    row = 0
    while row < sparse.rows:
        limit = offsets[row] + budget
        stop = int(np.searchsorted(offsets, limit, side="right")) - 1
        stop = min(max(stop, row + 1), sparse.rows)
        _spmm_rows(sparse, dense, row, stop, out)
        row = stop
    return out


def _spmm_rows(sparse: SparseMatrix, dense: DenseMatrix, lo: int, hi: int, out: DenseMatrix):
    begin, end = sparse.row_offsets[lo], sparse.row_offsets[hi]
    if begin == end:
        return
    products = sparse.values[begin:end, None] * dense[sparse.col_indices[begin:end]]
    starts = sparse.row_offsets[lo:hi] - begin
    nonempty = np.diff(sparse.row_offsets[lo : hi + 1]) > 0
    out[lo + np.flatnonzero(nonempty)] = np.add.reduceat(products, starts[nonempty], axis=0)


def dense_affine(
    inputs: Union[DenseMatrix, SparseMatrix], weight: DenseMatrix, bias
) -> DenseMatrix:
    """inputs @ weight with bias broadcast-added to every row"""
    weight = as_dense(weight, "weight")
    bias = as_dense(bias, "bias")
    if bias.shape != (1, weight.shape[1]):
        raise DimensionError("dense_affine(bias)", weight.shape, bias.shape)
    if isinstance(inputs, SparseMatrix):
        return spmm(inputs, weight) + bias
    inputs = as_dense(inputs, "inputs")
    if inputs.shape[1] != weight.shape[0]:
        raise DimensionError("dense_affine", inputs.shape, weight.shape)
    return inputs @ weight + bias
