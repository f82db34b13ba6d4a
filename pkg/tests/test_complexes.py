import math

import numpy as np
import pytest

from lgzlab import (
    Graph,
    InfeasibleError,
    PointCloud,
    ValidationError,
    build_epsilon_graph,
    clique_density,
    enumerate_cliques,
    grover_cost_model,
    load_edge_list,
    load_point_cloud,
    sample_clique_rejection,
    save_edge_list,
)
from conftest import random_graph_seeded
from oracles import brute_force_cliques


class TestEpsilonGraph:
    def test_line_points(self):
        cloud = PointCloud([[0.0], [3.0], [10.0]])
        g = build_epsilon_graph(cloud, 3.0)
        assert g.sorted_edges() == [(0, 1)]

    def test_zero_epsilon_distinct_points(self):
        cloud = PointCloud([[0.0], [1.0], [2.0]])
        assert build_epsilon_graph(cloud, 0.0).edge_count == 0

    def test_zero_epsilon_coincident_points(self):
        # coincident points are distinct vertices at distance zero
        cloud = PointCloud([[1.0, 2.0], [1.0, 2.0]])
        assert build_epsilon_graph(cloud, 0.0).sorted_edges() == [(0, 1)]

    def test_unit_square_forms_cycle(self, unit_square):
        g = build_epsilon_graph(unit_square, 1.0)
        assert g.sorted_edges() == [(0, 1), (0, 3), (1, 2), (2, 3)]
        # the sqrt(2) diagonals appear at a larger scale
        g2 = build_epsilon_graph(unit_square, 1.5)
        assert g2.edge_count == 6

    def test_empty_cloud_rejected(self):
        with pytest.raises(ValidationError, match="empty input"):
            build_epsilon_graph(PointCloud([]), 1.0)

    def test_negative_epsilon_rejected(self, unit_square):
        with pytest.raises(ValidationError):
            build_epsilon_graph(unit_square, -0.5)

    def test_monotone_in_epsilon(self):
        rng = np.random.default_rng(99)
        cloud = PointCloud(rng.normal(size=(9, 3)))
        previous = frozenset()
        for eps in (0.5, 1.0, 1.8, 3.0):
            edges = build_epsilon_graph(cloud, eps).edges
            assert previous <= edges
            previous = edges


class TestGraphType:
    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError, match="self-loop"):
            Graph.from_edges(3, [(1, 1)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValidationError):
            Graph.from_edges(3, [(0, 3)])

    def test_edges_canonicalized(self):
        g = Graph.from_edges(3, [(2, 0), (0, 2), (1, 0)])
        assert g.sorted_edges() == [(0, 1), (0, 2)]


class TestEnumerateCliques:
    def test_triangle_edges(self, k3):
        cs = enumerate_cliques(k3, 1)
        assert cs.members == (3, 5, 6)
        assert cs.chi == 3
        assert cs.bitstrings() == ["011", "101", "110"]

    def test_triangle_has_one_2_simplex(self, k3):
        cs = enumerate_cliques(k3, 2)
        assert cs.members == (7,)
        assert cs.chi == 1

    def test_cycle_has_no_triangles(self, c4):
        assert enumerate_cliques(c4, 2).members == ()

    def test_vertices_always_cliques(self):
        g = Graph.from_edges(5, [])
        assert enumerate_cliques(g, 0).members == (1, 2, 4, 8, 16)

    def test_k_out_of_range(self, k3):
        with pytest.raises(ValidationError):
            enumerate_cliques(k3, 3)
        with pytest.raises(ValidationError):
            enumerate_cliques(k3, -1)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_brute_force(self, seed):
        g = random_graph_seeded(9, 0.45, seed)
        for k in range(g.n):
            expected = brute_force_cliques(g.n, g.edges, k)
            assert list(enumerate_cliques(g, k).members) == expected

    def test_members_are_complete_subgraphs(self):
        g = random_graph_seeded(10, 0.5, 123)
        for k in range(4):
            for mask in enumerate_cliques(g, k).members:
                verts = [v for v in range(g.n) if mask >> v & 1]
                assert all(
                    g.has_edge(u, v)
                    for i, u in enumerate(verts)
                    for v in verts[i + 1 :]
                )


class TestCliqueDensity:
    def test_complete_graph(self, k4):
        assert clique_density(k4, 1) == 1.0

    def test_cycle(self, c4):
        expected = len(brute_force_cliques(4, c4.edges, 1)) / math.comb(4, 2)
        assert clique_density(c4, 1) == pytest.approx(expected)
        assert clique_density(c4, 1) == pytest.approx(4 / 6)

    def test_empty_graph(self):
        assert clique_density(Graph.from_edges(4, []), 1) == 0.0


class TestRejectionSampling:
    def test_complete_graph_always_accepts(self, k4):
        for seed in range(20):
            mask, trials = sample_clique_rejection(k4, 1, seed)
            assert trials == 1
            assert bin(mask).count("1") == 2

    def test_uniform_over_cycle_edges(self, c4):
        edges = brute_force_cliques(4, c4.edges, 1)
        counts = {m: 0 for m in edges}
        m_total = 4000
        for seed in range(m_total):
            mask, _ = sample_clique_rejection(c4, 1, seed)
            counts[mask] += 1
        sigma = math.sqrt(0.25 * 0.75 / m_total)
        for mask in edges:
            assert abs(counts[mask] / m_total - 0.25) <= 3 * sigma

    def test_acceptance_rate_tracks_density(self, c4):
        total_trials = sum(
            sample_clique_rejection(c4, 1, seed)[1] for seed in range(600)
        )
        rate = 600 / total_trials
        sigma = math.sqrt((4 / 6) * (2 / 6) / total_trials)
        assert abs(rate - 4 / 6) <= 4 * sigma

    def test_no_cliques_fails_after_cap(self, c4):
        with pytest.raises(InfeasibleError, match="no clique"):
            sample_clique_rejection(c4, 2, 0, max_trials=250)

    def test_deterministic_under_seed(self, c4):
        a = sample_clique_rejection(c4, 1, 7)
        b = sample_clique_rejection(c4, 1, 7)
        assert a == b


class TestGroverCostModel:
    def test_complete_graph(self, k4):
        cost = grover_cost_model(4, 1, 6)
        assert cost.grover_queries == pytest.approx(1.0)
        assert cost.rejection_expected_trials == pytest.approx(1.0)

    def test_triangle_plus_isolated_vertex(self):
        cost = grover_cost_model(4, 1, 3)
        assert cost.rejection_expected_trials == pytest.approx(2.0)

    def test_cycle(self):
        cost = grover_cost_model(4, 1, 4)
        assert cost.grover_queries == pytest.approx(math.sqrt(1.5))

    def test_zero_cliques_rejected(self):
        with pytest.raises(ValidationError):
            grover_cost_model(4, 2, 0)


class TestFileFormats:
    def test_edge_list_round_trip(self, tmp_path, c4):
        path = tmp_path / "g.txt"
        save_edge_list(c4, path)
        assert load_edge_list(path) == c4

    def test_edge_list_rejects_bad_header(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("vertices 4\n0 1\n")
        with pytest.raises(ValidationError, match="header"):
            load_edge_list(path)

    def test_edge_list_rejects_duplicates(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("n 3\n0 1\n1 0\n")
        with pytest.raises(ValidationError, match="duplicate"):
            load_edge_list(path)

    def test_edge_list_rejects_out_of_range(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("n 3\n0 5\n")
        with pytest.raises(ValidationError, match="out of range"):
            load_edge_list(path)

    def test_point_cloud_round_trip(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("0.0,0.5\n1.25,-3.0\n")
        cloud = load_point_cloud(path)
        assert cloud.n == 2 and cloud.dim == 2
        assert cloud.points[1, 1] == -3.0

    def test_point_cloud_rejects_ragged_rows(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("0.0,0.5\n1.25\n")
        with pytest.raises(ValidationError, match="coordinates"):
            load_point_cloud(path)

    def test_point_cloud_rejects_non_numeric(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("0.0,abc\n")
        with pytest.raises(ValidationError, match="non-numeric"):
            load_point_cloud(path)
