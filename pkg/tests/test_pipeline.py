import io
import json
import math

import numpy as np
import pytest

from lgzlab import (
    PointCloud,
    RunConfig,
    ValidationError,
    barcode_profile,
    benchmark,
    named_graph,
    random_graph,
    resource_estimate,
    t_for_threshold,
)


class TestResourceEstimate:
    def test_sparse_access_anchor(self):
        report = resource_estimate(80, "sparse_access", r=9, t=30)
        assert report.qubit_count == 200

    def test_local_trotter_anchor(self):
        assert resource_estimate(80, "local_trotter", t=30).qubit_count == 110

    def test_single_qubit_register_anchor(self):
        assert resource_estimate(80, "single_qubit_register").qubit_count == 81

    def test_lcu_formula(self):
        report = resource_estimate(80, "lcu", m=1000, t=30)
        assert report.qubit_count == 80 + math.ceil(math.log2(1000)) + 30

    def test_counter_register_formula(self):
        assert resource_estimate(80, "counter_register", t=30).qubit_count == 80 + 5

    def test_missing_m_for_lcu(self):
        with pytest.raises(ValidationError, match="missing m"):
            resource_estimate(80, "lcu", t=30)

    def test_missing_parameters(self):
        with pytest.raises(ValidationError):
            resource_estimate(80, "sparse_access", t=30)
        with pytest.raises(ValidationError):
            resource_estimate(80, "local_trotter")

    def test_unknown_mode(self):
        with pytest.raises(ValidationError, match="unknown mode"):
            resource_estimate(80, "magic")

    def test_threshold_helper(self):
        assert t_for_threshold(1e-9) == 30
        assert t_for_threshold(2**-10) == 10
        with pytest.raises(ValidationError):
            t_for_threshold(2.0)


class TestBarcodeProfile:
    def test_unit_square_beta1_window(self, unit_square):
        profile = barcode_profile(unit_square, [0.9, 1.0, 1.5], 1)
        beta1 = [row[1] for row in profile.betti]
        assert beta1 == [0, 1, 0]
        beta0 = [row[0] for row in profile.betti]
        assert beta0 == [4, 1, 1]

    def test_single_point(self):
        cloud = PointCloud([[0.0, 0.0]])
        profile = barcode_profile(cloud, [0.1, 1.0, 5.0], 2)
        for row in profile.betti:
            assert row == (1, 0, 0)

    def test_two_far_points_below_gap(self):
        cloud = PointCloud([[0.0], [10.0]])
        profile = barcode_profile(cloud, [1.0], 0)
        assert profile.betti[0][0] == 2

    def test_beta0_non_increasing(self):
        # growing the scale can only merge components
        rng = np.random.default_rng(4)
        cloud = PointCloud(rng.normal(size=(8, 2)))
        profile = barcode_profile(cloud, [0.3, 0.8, 1.4, 2.5, 5.0], 0)
        beta0 = [row[0] for row in profile.betti]
        assert all(later <= earlier for earlier, later in zip(beta0, beta0[1:]))

    def test_oversize_cells_skipped(self, unit_square):
        profile = barcode_profile(unit_square, [1.5], 1, max_basis=3)
        assert profile.betti[0][1] is None
        buffer = io.StringIO()
        profile.to_csv(buffer)
        assert "skipped" in buffer.getvalue()

    def test_unsorted_scales_rejected(self, unit_square):
        with pytest.raises(ValidationError, match="ascending"):
            barcode_profile(unit_square, [1.0, 0.5], 1)

    def test_csv_shape(self, unit_square):
        profile = barcode_profile(unit_square, [0.9, 1.0], 2)
        buffer = io.StringIO()
        profile.to_csv(buffer)
        lines = buffer.getvalue().strip().splitlines()
        assert lines[0] == "epsilon,edges,betti_0,betti_1,betti_2"
        assert len(lines) == 3


class TestNamedAndRandomGraphs:
    def test_named_instances(self):
        assert named_graph("c4").edge_count == 4
        assert named_graph("k5").edge_count == 10
        assert named_graph("p4").edge_count == 3
        assert named_graph("e7").edge_count == 0

    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            named_graph("q3")

    def test_random_graph_deterministic(self):
        a = random_graph(8, 0.5, 123)
        b = random_graph(8, 0.5, 123)
        c = random_graph(8, 0.5, 124)
        assert a == b
        assert a != c


class TestRunConfig:
    def test_round_trips_through_json(self):
        config = RunConfig(
            named_graphs=("c4", "k4"),
            k_values=(1, 2),
            epsilon_grid=(0.5, 1.0),
            t=9,
            seed=77,
            output="out.json",
        )
        assert RunConfig.from_json(config.to_json()) == config

    def test_round_trips_through_file(self, tmp_path):
        config = RunConfig(named_graphs=("p3",), b=0.25, delta=0.1)
        path = tmp_path / "config.json"
        config.save(path)
        assert RunConfig.load(path) == config

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValidationError, match="unknown config keys"):
            RunConfig.from_json('{"bogus": 1}')

    def test_malformed_json_rejected(self):
        with pytest.raises(ValidationError, match="malformed"):
            RunConfig.from_json("{not json")


class TestBenchmark:
    def test_cycle_suite(self):
        config = RunConfig(named_graphs=("c4",), k_values=(1,), t=6, seed=5)
        report = benchmark(config)
        cell = report["cells"][0]
        assert cell["status"] == "ok"
        assert cell["betti"] == 1
        assert cell["chi"] == 4
        assert cell["density"] == pytest.approx(2 / 3)
        assert abs(cell["lgz_estimate"] - 0.25) <= 0.05
        assert cell["llsd_within_contract"]

    def test_complete_graph_figures(self):
        config = RunConfig(named_graphs=("k4",), k_values=(1,), t=6, seed=3)
        cell = benchmark(config)["cells"][0]
        assert cell["density"] == 1.0
        assert cell["grover_queries"] == pytest.approx(1.0)

    def test_empty_dimension_marked(self):
        config = RunConfig(named_graphs=("c4",), k_values=(2,), seed=1)
        cell = benchmark(config)["cells"][0]
        assert cell["status"] == "empty"

    def test_random_family_agreement(self):
        config = RunConfig(
            random_n=8,
            random_p=0.9,
            random_count=12,
            k_values=(2,),
            t=9,
            seed=11,
        )
        report = benchmark(config)
        summary = report["summary"]
        assert summary["usable_cells"] >= 10
        assert summary["lgz_within_target_fraction"] >= 0.95

    def test_deterministic_reruns(self):
        config = RunConfig(named_graphs=("c4", "k4"), k_values=(0, 1), t=6, seed=9)
        first = json.dumps(benchmark(config), sort_keys=True)
        second = json.dumps(benchmark(config), sort_keys=True)
        assert first == second

    def test_no_instances_rejected(self):
        with pytest.raises(ValidationError, match="no instances"):
            benchmark(RunConfig())
