"""
Tests for the matrix types, the autodiff tape and gradient checking
"""

import numpy as np
import pytest

from gcn_lab.confidence import ConfidenceState, aggregation_matrix
from gcn_lab.errors import ContractViolation, DimensionError
from gcn_lab.graphio import toy_dataset
from gcn_lab.layers import BaseActivation, dense_layer, graph_layer
from gcn_lab.tensorcore import (
    SparseMatrix,
    Tape,
    as_dense,
    backward,
    dense_affine,
    finite_difference_check,
    spmm,
)
from gcn_lab.tensorcore import functional as F
from gcn_lab.topology import build_propagator


class TestSparseMatrix:
    """CSR construction and derived matrices"""

    def test_from_coo_sums_duplicates_and_sorts(self):
        S = SparseMatrix.from_coo([1, 0, 1, 1], [2, 1, 0, 2], [1.0, 2.0, 3.0, 4.0], (2, 3))
        assert S.nnz == 3
        assert S.row_offsets.tolist() == [0, 1, 3]
        assert S.col_indices.tolist() == [1, 0, 2]
        assert S.values.tolist() == [2.0, 3.0, 5.0]

    def test_dense_roundtrip(self, rng):
        dense = rng.random((5, 4)) * (rng.random((5, 4)) < 0.4)
        assert np.array_equal(SparseMatrix.from_dense(dense).to_dense(), dense)

    def test_rejects_unsorted_columns(self):
        with pytest.raises(ContractViolation):
            SparseMatrix(1, 3, np.array([0, 2]), np.array([2, 1]), np.array([1.0, 1.0]))

    def test_rejects_out_of_range_indices(self):
        with pytest.raises(ContractViolation):
            SparseMatrix.from_coo([0], [3], [1.0], (1, 3))

    def test_values_are_read_only(self):
        S = SparseMatrix.identity(3)
        with pytest.raises(ValueError):
            S.values[0] = 2.0

    def test_transpose_and_symmetry(self):
        S = SparseMatrix.from_coo([0, 1], [1, 0], [2.0, 2.0], (2, 2))
        assert S.is_symmetric()
        T = SparseMatrix.from_coo([0], [1], [1.0], (2, 2))
        assert not T.is_symmetric()
        assert np.array_equal(T.transpose().to_dense(), T.to_dense().T)

    def test_row_normalize_keeps_zero_rows(self):
        S = SparseMatrix.from_dense([[1.0, 3.0], [0.0, 0.0]])
        assert np.allclose(S.row_normalize().to_dense(), [[0.25, 0.75], [0.0, 0.0]])

    def test_dropout_is_inverted_and_drops_entries(self):
        S = SparseMatrix.from_dense(np.ones((20, 20)))
        dropped = S.dropout(0.5, np.random.default_rng(0))
        assert dropped.nnz < S.nnz
        assert np.all(dropped.values == 2.0)
        assert S.dropout(0.0, np.random.default_rng(0)) is S


class TestSpmm:
    def test_identity(self):
        D = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert np.array_equal(spmm(SparseMatrix.identity(2), D), D)

    def test_averaging_row(self):
        S = SparseMatrix.from_dense([[0.5, 0.5], [0.5, 0.5]])
        assert np.array_equal(spmm(S, np.array([[2.0], [4.0]])), [[3.0], [3.0]])

    def test_matches_dense_product(self, rng):
        dense = rng.random((30, 20)) * (rng.random((30, 20)) < 0.2)
        D = rng.standard_normal((20, 7))
        assert np.allclose(spmm(SparseMatrix.from_dense(dense), D), dense @ D, atol=1e-12)

    def test_empty_rows_and_columns(self):
        S = SparseMatrix.from_coo([2], [0], [3.0], (4, 2))
        out = spmm(S, np.array([[1.0, 2.0], [5.0, 6.0]]))
        assert out.tolist() == [[0, 0], [0, 0], [3, 6], [0, 0]]

    def test_shape_mismatch_names_both_shapes(self):
        with pytest.raises(DimensionError) as excinfo:
            spmm(SparseMatrix.identity(3), np.ones((2, 2)))
        assert "(3, 3)" in str(excinfo.value) and "(2, 2)" in str(excinfo.value)


class TestDenseAffine:
    def test_identity_input(self):
        out = dense_affine(np.eye(2), [[5.0, 6.0], [7.0, 8.0]], [0.0, 0.0])
        assert out.tolist() == [[5, 6], [7, 8]]

    def test_bias_broadcast(self):
        assert dense_affine([[1.0, 1.0]], np.eye(2), [10.0, 10.0]).tolist() == [[11, 11]]

    def test_sparse_input(self):
        X = SparseMatrix.from_dense([[1.0, 0.0], [0.0, 2.0]])
        out = dense_affine(X, [[1.0], [1.0]], [1.0])
        assert out.tolist() == [[2.0], [3.0]]

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            dense_affine(np.ones((2, 3)), np.ones((2, 2)), [0.0, 0.0])


class TestFunctional:
    def test_relu6_clamps(self):
        assert F.relu6(np.array([-1.0, 3.0, 10.0])).tolist() == [0.0, 3.0, 6.0]

    def test_zero_fixed_points(self):
        for fn in (F.elu, F.selu, F.relu, F.relu6):
            assert fn(np.array([0.0]))[0] == 0.0
        assert F.relu(np.array([-5.0]))[0] == 0.0

    def test_log_softmax_is_stable(self):
        out = F.log_softmax(np.array([[1000.0, 0.0]]))
        assert np.isfinite(out).all()
        assert out[0, 0] == pytest.approx(0.0)


class TestTape:
    """Reverse-mode gradients"""

    def test_sum_gradient_is_ones(self):
        tape = Tape()
        W = tape.parameter(np.array([[1.0, 2.0], [3.0, 4.0]]), "W")
        grads = backward(tape, tape.sum(W))
        assert np.array_equal(grads["W"], np.ones((2, 2)))

    def test_non_scalar_loss_rejected(self):
        tape = Tape()
        W = tape.parameter(np.ones((2, 2)), "W")
        with pytest.raises(ContractViolation):
            tape.backward(W)

    def test_fan_out_accumulates(self):
        tape = Tape()
        x = tape.parameter(np.array([[3.0]]), "x")
        loss = tape.add(tape.scale(x, 2.0), tape.square(x))
        assert tape.backward(loss)["x"][0, 0] == pytest.approx(2.0 + 6.0)

    def test_unused_parameter_gets_zeros(self):
        tape = Tape()
        x = tape.parameter(np.ones((1, 2)), "x")
        tape.parameter(np.ones((3, 1)), "unused")
        grads = tape.backward(tape.sum(x))
        assert np.array_equal(grads["unused"], np.zeros((3, 1)))

    def test_duplicate_parameter_name(self):
        tape = Tape()
        tape.parameter(np.ones((1, 1)), "p")
        with pytest.raises(ContractViolation):
            tape.parameter(np.ones((1, 1)), "p")

    def test_matmul_dimension_error(self):
        tape = Tape()
        a = tape.constant(np.ones((2, 3)))
        b = tape.constant(np.ones((2, 3)))
        with pytest.raises(DimensionError):
            tape.matmul(a, b)

    def test_dropout_identity_in_eval(self):
        tape = Tape()
        x = tape.constant(np.ones((3, 3)))
        assert np.array_equal(tape.value(tape.dropout(x, 0.5, False, None)), np.ones((3, 3)))

    def test_dropout_needs_generator_in_training(self):
        tape = Tape()
        x = tape.constant(np.ones((3, 3)))
        with pytest.raises(ContractViolation):
            tape.dropout(x, 0.5, True, None)

    def test_cross_entropy_empty_mask(self):
        tape = Tape()
        logits = tape.constant(np.zeros((2, 2)))
        with pytest.raises(ContractViolation):
            tape.softmax_cross_entropy(logits, np.array([0, 1]), np.array([], dtype=int))


class TestFiniteDifferences:
    """Tape gradients against central differences"""

    def test_squared_product(self, rng):
        X = rng.standard_normal((3, 2))

        def loss(tape, w):
            return tape.sum(tape.square(tape.matmul(tape.constant(X), w)))

        assert finite_difference_check(loss, rng.standard_normal((2, 2))) < 1e-6

    def test_convex_activation_coefficients(self, rng):
        X = rng.standard_normal((4, 3))

        def loss(tape, c):
            mixed = tape.convex_activation(tape.constant(X), ["elu", "selu"], c)
            return tape.sum(tape.square(mixed))

        assert finite_difference_check(loss, np.array([[0.3, 0.7]])) < 1e-6

    def test_edge_mahalanobis(self, rng):
        mu = rng.standard_normal((4, 2))
        rows, cols = np.array([0, 1, 2]), np.array([1, 2, 3])

        def loss(tape, raw):
            precision = tape.softplus(raw, offset=1e-6)
            return tape.edge_mahalanobis(tape.constant(mu), precision, rows, cols)

        assert finite_difference_check(loss, rng.standard_normal((4, 2))) < 1e-5

    def test_two_layer_gcn_cross_entropy(self, rng):
        dataset = toy_dataset()
        P = build_propagator(dataset.adjacency).matrix
        X = rng.standard_normal((5, 3))
        W1 = rng.standard_normal((3, 4))
        W2 = rng.standard_normal((4, 2))
        b1 = rng.standard_normal((1, 4)) * 0.1
        b2 = rng.standard_normal((1, 2)) * 0.1
        labels, train = dataset.labels, np.array([0, 1, 3, 4])

        values = {"W1": W1, "W2": W2, "b1": b1, "b2": b2}

        def loss_wrt(name):
            def loss(tape, p):
                nodes = {k: p if k == name else tape.constant(v) for k, v in values.items()}
                hidden = tape.activation(
                    tape.add_bias(
                        tape.spmm(P, tape.matmul(tape.constant(X), nodes["W1"])), nodes["b1"]
                    ),
                    "elu",
                )
                logits = tape.add_bias(tape.spmm(P, tape.matmul(hidden, nodes["W2"])), nodes["b2"])
                return tape.softmax_cross_entropy(logits, labels, train)

            return loss

        for name, value in values.items():
            assert finite_difference_check(loss_wrt(name), value) < 1e-4, name

    def test_rejects_nonpositive_step(self):
        with pytest.raises(ContractViolation):
            finite_difference_check(lambda tape, p: tape.sum(p), np.ones((1, 1)), step=0.0)

    def test_nan_gives_infinite_error(self):
        def loss(tape, p):
            return tape.sum(tape.matmul(p, tape.constant(np.array([[np.nan]]))))

        assert finite_difference_check(loss, np.ones((1, 1))) == float("inf")


KINKS = {"relu": [0.0], "relu6": [0.0, 6.0], "selu": [0.0], "elu": [], "none": []}


def away_from_kinks(values: np.ndarray, kind: str, margin: float = 0.05) -> np.ndarray:
    """Shift entries that sit within `margin` of a non-differentiable point"""
    values = values.copy()
    for kink in KINKS[kind]:
        close = np.abs(values - kink) < margin
        values[close] += 2 * margin
    return values


def bias_off_kinks(pre: np.ndarray, kind: str, rng, margin: float = 0.05) -> np.ndarray:
    """Per-column bias that keeps every entry of pre + bias `margin` away from the kinks"""
    bias = np.zeros((1, pre.shape[1]))
    for j in range(pre.shape[1]):
        for _ in range(100):
            candidate = rng.uniform(-1.0, 7.0)
            column = pre[:, j] + candidate
            if all(np.abs(column - kink).min() > margin for kink in KINKS[kind]):
                bias[0, j] = candidate
                break
    return bias


class TestGradientSweep:
    """Finite differences across activations, layers and random shapes"""

    @pytest.mark.parametrize("kind", ["relu", "relu6", "selu", "elu", "none"])
    def test_activation_away_from_kinks(self, rng, kind):
        P = away_from_kinks(rng.uniform(-4.0, 10.0, (6, 5)), kind)
        C = 1.0 + rng.random((6, 5))

        def loss(tape, p):
            return tape.sum(tape.matmul(tape.activation(p, kind), tape.constant(C.T)))

        assert finite_difference_check(loss, P) < 1e-6

    @pytest.mark.parametrize("kind", ["elu", "selu", "relu6"])
    def test_dense_layer(self, rng, kind):
        X = rng.standard_normal((5, 4))
        W = rng.standard_normal((4, 3))
        values = {"W": W, "b": bias_off_kinks(X @ W, kind, rng)}
        spec = BaseActivation(kind=kind)

        def loss_wrt(name):
            def loss(tape, p):
                nodes = {k: p if k == name else tape.constant(v) for k, v in values.items()}
                out = dense_layer(tape, tape.constant(X), nodes["W"], nodes["b"], spec)
                return tape.sum(tape.square(out))

            return loss

        for name in ("W", "b"):
            assert finite_difference_check(loss_wrt(name), values[name]) < 1e-4, name

    def test_confidence_graph_layer(self, rng):
        dataset = toy_dataset()
        state = ConfidenceState(rng.standard_normal((5, 2)), rng.standard_normal((5, 2)))
        R_hat = aggregation_matrix(dataset.adjacency, state)
        H = rng.standard_normal((5, 3))
        values = {"W": rng.standard_normal((3, 4)), "b": rng.standard_normal((1, 4))}
        spec = BaseActivation(kind="elu")

        def loss_wrt(name):
            def loss(tape, p):
                nodes = {k: p if k == name else tape.constant(v) for k, v in values.items()}
                out = graph_layer(tape, R_hat, tape.constant(H), nodes["W"], nodes["b"], spec,
                                  bias_inside=True)
                return tape.sum(tape.square(out))

            return loss

        for name in ("W", "b"):
            assert finite_difference_check(loss_wrt(name), values[name]) < 1e-5, name

    def test_training_dropout_with_fixed_mask(self, rng):
        X = rng.standard_normal((6, 4))
        C = rng.standard_normal((3, 6))

        def loss(tape, w):
            dropped = tape.dropout(tape.constant(X), 0.5, True, np.random.default_rng(11))
            return tape.sum(tape.square(tape.matmul(tape.constant(C), tape.matmul(dropped, w))))

        assert finite_difference_check(loss, rng.standard_normal((4, 2))) < 1e-6

    @pytest.mark.parametrize("seed", range(24))
    def test_random_shapes(self, seed):
        rng = np.random.default_rng(seed)
        n, k, m = (int(v) for v in rng.integers(1, 8, 3))
        classes = int(rng.integers(2, 6))
        A = SparseMatrix.from_dense(rng.random((n, n)) * (rng.random((n, n)) < 0.5))
        X = rng.standard_normal((n, k))
        labels = rng.integers(0, classes, n)
        index = np.arange(n)
        values = {
            "W1": rng.standard_normal((k, m)),
            "b1": rng.standard_normal((1, m)),
            "W2": rng.standard_normal((m, classes)),
        }

        def loss_wrt(name):
            def loss(tape, p):
                nodes = {key: p if key == name else tape.constant(v)
                         for key, v in values.items()}
                hidden = tape.activation(
                    tape.add_bias(tape.spmm(A, tape.matmul(tape.constant(X), nodes["W1"])),
                                  nodes["b1"]),
                    "elu",
                )
                logits = tape.matmul(hidden, nodes["W2"])
                return tape.softmax_cross_entropy(logits, labels, index)

            return loss

        for name, value in values.items():
            assert finite_difference_check(loss_wrt(name), value) < 1e-4, (seed, name)


def test_as_dense_promotes_vectors():
    assert as_dense([1.0, 2.0]).shape == (1, 2)
