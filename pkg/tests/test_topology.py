"""
Tests for clustering coefficients and propagator construction
"""

import itertools

import networkx as nx
import numpy as np
import pytest

from gcn_lab.errors import ConfigurationError, ContractViolation
from gcn_lab.graphio import edges_to_adjacency
from gcn_lab.tensorcore import SparseMatrix, spmm
from gcn_lab.topology import (
    DiagMode,
    augmented_support,
    build_diagonal,
    build_propagator,
    local_clustering_coefficients,
    normalize_adjacency,
    row_stochastic_propagator,
    triangle_pairs,
)

TRIANGLE = edges_to_adjacency([(0, 1), (1, 2), (0, 2)], 3)
PATH = edges_to_adjacency([(0, 1), (1, 2)], 3)


def brute_force_cc(dense: np.ndarray) -> np.ndarray:
    n = len(dense)
    cc = np.zeros(n)
    for i in range(n):
        neighbors = np.flatnonzero(dense[i])
        k = len(neighbors)
        if k < 2:
            continue
        linked = sum(dense[a, b] > 0 for a, b in itertools.permutations(neighbors, 2))
        cc[i] = linked / (k * (k - 1))
    return cc


class TestClusteringCoefficients:
    def test_triangle(self):
        assert local_clustering_coefficients(TRIANGLE).tolist() == [1.0, 1.0, 1.0]

    def test_path(self):
        assert local_clustering_coefficients(PATH).tolist() == [0.0, 0.0, 0.0]

    def test_toy_graph(self, toy):
        cc = local_clustering_coefficients(toy.adjacency)
        assert cc == pytest.approx([1.0, 1.0, 1.0 / 3.0, 0.0, 0.0])
        assert triangle_pairs(toy.adjacency).tolist() == [2, 2, 2, 0, 0]

    def test_isolated_nodes_get_zero(self):
        adjacency = edges_to_adjacency([(0, 1)], 4)
        assert local_clustering_coefficients(adjacency).tolist() == [0.0] * 4

    @pytest.mark.parametrize("seed", range(30))
    def test_random_graphs_match_oracles(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 51))
        graph = nx.gnp_random_graph(n, float(rng.uniform(0.05, 0.5)), seed=seed)
        adjacency = edges_to_adjacency(list(graph.edges()), n)
        cc = local_clustering_coefficients(adjacency)
        assert np.array_equal(cc, brute_force_cc(adjacency.to_dense()))
        expected = nx.clustering(graph)
        assert cc == pytest.approx([expected[i] for i in range(n)], abs=1e-12)

    def test_asymmetric_input_rejected(self):
        with pytest.raises(ContractViolation):
            local_clustering_coefficients(SparseMatrix.from_coo([0], [1], None, (2, 2)))

    def test_self_loop_rejected(self):
        with pytest.raises(ContractViolation):
            local_clustering_coefficients(SparseMatrix.identity(2))


class TestDiagonal:
    def test_identity(self):
        assert build_diagonal(DiagMode.IDENTITY, 4).tolist() == [1.0, 1.0, 1.0, 1.0]

    def test_cc_values_verbatim(self):
        assert build_diagonal("clustering_coefficients", 3,
                              local_clustering_coefficients(TRIANGLE)).tolist() == [1, 1, 1]
        assert build_diagonal("clustering_coefficients", 3,
                              local_clustering_coefficients(PATH)).tolist() == [0, 0, 0]

    def test_cc_mode_needs_vector(self):
        with pytest.raises(ConfigurationError):
            build_diagonal(DiagMode.CLUSTERING_COEFFICIENTS, 3)


class TestNormalization:
    def test_single_edge(self):
        P = normalize_adjacency(edges_to_adjacency([(0, 1)], 2), np.ones(2))
        assert np.allclose(P.matrix.to_dense(), [[0.5, 0.5], [0.5, 0.5]])

    def test_isolated_node(self):
        P = normalize_adjacency(SparseMatrix.from_coo([], [], None, (1, 1)), np.ones(1))
        assert P.matrix.to_dense().tolist() == [[1.0]]

    def test_triangle_with_cc_diagonal(self):
        P = build_propagator(TRIANGLE, DiagMode.CLUSTERING_COEFFICIENTS)
        assert np.allclose(P.matrix.to_dense(), np.full((3, 3), 1.0 / 3.0))

    def test_cc_mode_equals_identity_on_cliques(self):
        cliques = edges_to_adjacency([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6)
        identity = build_propagator(cliques, DiagMode.IDENTITY).matrix.to_dense()
        cc = build_propagator(cliques, DiagMode.CLUSTERING_COEFFICIENTS).matrix.to_dense()
        assert np.array_equal(identity, cc)

    def test_zero_degree_row_stays_zero(self):
        adjacency = edges_to_adjacency([(0, 1)], 3)
        P = normalize_adjacency(adjacency, np.array([1.0, 1.0, 0.0]))
        assert P.matrix.to_dense()[2].tolist() == [0.0, 0.0, 0.0]

    def test_symmetric_and_matches_dense_formula(self, small_random):
        A = small_random.adjacency
        P = build_propagator(A).matrix
        assert P.is_symmetric(tol=1e-15)
        dense = A.to_dense() + np.eye(A.rows)
        inv_sqrt = 1.0 / np.sqrt(dense.sum(axis=1))
        assert np.allclose(P.to_dense(), inv_sqrt[:, None] * dense * inv_sqrt[None, :])

    def test_sqrt_degree_is_fixed_point(self, small_random):
        A = small_random.adjacency
        root = np.sqrt(A.row_sums() + 1.0)[:, None]
        assert np.allclose(spmm(build_propagator(A).matrix, root), root, atol=1e-12)

    def test_negative_diagonal_rejected(self):
        with pytest.raises(ContractViolation):
            normalize_adjacency(PATH, np.array([1.0, -1.0, 1.0]))

    def test_augmented_support_and_mean_aggregation(self):
        assert augmented_support(PATH).to_dense().tolist() == [[1, 1, 0], [1, 1, 1], [0, 1, 1]]
        mean = row_stochastic_propagator(PATH).to_dense()
        assert mean.sum(axis=1) == pytest.approx([1.0, 1.0, 1.0])
        assert mean[1].tolist() == pytest.approx([1 / 3, 1 / 3, 1 / 3])
