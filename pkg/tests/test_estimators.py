import math

import numpy as np
import pytest

from lgzlab import (
    InfeasibleError,
    NoiseModel,
    SparseHermitian,
    ValidationError,
    abne_estimate,
    combinatorial_laplacian,
    eigencount_exact,
    eigencount_stochastic,
    hoeffding_sample_count,
    llsd_estimate,
    numerical_rank,
    pad_laplacian,
    renyi_entropy,
    spectral_entropy,
    subtrace_estimate,
)
from conftest import random_graph_seeded
from oracles import exact_subtrace


@pytest.fixture
def path_gamma(p3):
    return pad_laplacian(p3, 1)


class TestEigencountExact:
    def test_padded_path(self, path_gamma):
        assert eigencount_exact(path_gamma, 0.0, 0.5) == pytest.approx(1 / 3)

    def test_identity(self):
        h = SparseHermitian.from_dense(np.eye(4))
        assert eigencount_exact(h, 0.0, 0.5) == 0.0

    def test_zero_matrix(self):
        h = SparseHermitian.from_dense(np.zeros((5, 5)))
        assert eigencount_exact(h, 0.0, 0.1) == 1.0

    def test_closed_interval(self):
        h = SparseHermitian.from_dense(np.diag([0.0, 0.5, 1.0]))
        assert eigencount_exact(h, 0.5, 1.0) == pytest.approx(2 / 3)
        assert eigencount_exact(h, 0.0, 0.5) == pytest.approx(2 / 3)

    def test_bad_interval(self, path_gamma):
        with pytest.raises(ValidationError):
            eigencount_exact(path_gamma, 1.0, 0.5)


class TestLlsd:
    def test_half_kernel(self, diag_half):
        est = llsd_estimate(diag_half, 0.1, 0.05, 0.02, 0.9, 11)
        assert abs(est.value - 0.5) <= 0.02
        assert est.M == hoeffding_sample_count(0.02, 0.9)

    def test_zero_matrix_is_all_low(self):
        h = SparseHermitian.from_dense(np.zeros((4, 4)))
        est = llsd_estimate(h, 0.2, 0.05, 0.05, 0.9, 0)
        assert est.value == 1.0

    def test_scaled_padded_path(self, path_gamma):
        h = path_gamma.scaled(1 / 3)
        est = llsd_estimate(h, 0.1, 0.05, 0.02, 0.9, 5)
        assert abs(est.value - 1 / 3) <= 0.02 + 1e-12

    def test_two_sided_contract(self, diag_half):
        # the estimate must sit between the counts at b and b + delta
        b, delta, eps = 0.1, 0.08, 0.02
        lower = eigencount_exact(diag_half, 0.0, b)
        upper = eigencount_exact(diag_half, 0.0, b + delta)
        hits = 0
        trials = 20
        for seed in range(trials):
            value = llsd_estimate(diag_half, b, delta, eps, 0.9, seed).value
            hits += lower - eps <= value <= upper + eps
        assert hits >= 18

    def test_delta_below_achievable_resolution(self, diag_half):
        with pytest.raises(InfeasibleError):
            llsd_estimate(diag_half, 0.1, 1e-9, 0.05, 0.9, 0)

    def test_explicit_t_too_coarse(self, diag_half):
        with pytest.raises(InfeasibleError):
            llsd_estimate(diag_half, 0.1, 0.01, 0.05, 0.9, 0, t=4)

    def test_mu_must_exceed_half(self, diag_half):
        with pytest.raises(ValidationError):
            llsd_estimate(diag_half, 0.1, 0.05, 0.05, 0.4, 0)


class TestNumericalRank:
    def test_identity_full_rank(self):
        h = SparseHermitian.from_dense(np.eye(3))
        est = numerical_rank(h, 0.5, 0.1, 0.05, 0.9, 2)
        assert est.value == pytest.approx(1.0, abs=0.05)

    def test_half_rank(self, diag_half):
        est = numerical_rank(diag_half, 0.5, 0.1, 0.05, 0.9, 3)
        assert abs(est.value - 0.5) <= 0.05

    def test_zero_matrix(self):
        h = SparseHermitian.from_dense(np.zeros((4, 4)))
        est = numerical_rank(h, 0.2, 0.05, 0.05, 0.9, 4)
        assert est.value == 0.0

    def test_complements_llsd_exactly(self, diag_half):
        low = llsd_estimate(diag_half, 0.3, 0.05, 0.03, 0.9, 21)
        high = numerical_rank(diag_half, 0.3, 0.05, 0.03, 0.9, 21)
        assert low.value + high.value == 1.0
        assert low.M == high.M


class TestAbne:
    def test_path_no_holes(self, p3):
        est = abne_estimate(p3, 1, 0.5, 0.2, 0.02, 0.9, 19)
        assert est.value <= 0.03
        assert est.details["amplification"] == pytest.approx(1.5)

    def test_dense_graph_padding_is_identity(self, k4):
        # density one: the padded operator is the Laplacian itself
        est = abne_estimate(k4, 1, 0.4, 0.2, 0.05, 0.9, 23)
        inner = llsd_estimate(
            combinatorial_laplacian(k4, 1), 0.4, 0.2, 0.05, 0.9, 23
        )
        assert est.details["density"] == 1.0
        assert est.value == pytest.approx(inner.value)

    def test_cycle_estimates_quarter(self, c4):
        est = abne_estimate(c4, 1, 0.5, 0.3, 0.02, 0.95, 31)
        target = 1 / 4
        assert abs(est.value - target) <= est.details["epsilon_effective"] + 0.02

    def test_no_cliques_rejected(self, c4):
        with pytest.raises(ValidationError, match="empty basis"):
            abne_estimate(c4, 2, 0.5, 0.1, 0.05, 0.9, 0)

    def test_low_density_warning(self):
        g = random_graph_seeded(7, 0.35, 8)
        est = abne_estimate(g, 2, 0.4, 0.2, 0.05, 0.9, 3)
        assert est.details["density"] < 0.1
        assert est.details["low_density_warning"]

    def test_value_clipped_to_unit_interval(self, p3):
        for seed in range(10):
            est = abne_estimate(p3, 1, 0.5, 0.2, 0.05, 0.9, seed)
            assert 0.0 <= est.value <= 1.0


class TestSubtrace:
    def test_zero_matrix(self):
        h = SparseHermitian.from_dense(np.zeros((4, 4)))
        est = subtrace_estimate(h, 1.0, 8, 0.05, 0.05, 0.9, 7)
        assert est.value == 0.0

    def test_half_point_mass(self):
        h = SparseHermitian.from_dense(np.diag([0.5] * 4))
        est = subtrace_estimate(h, 1.0, 8, 0.01, 0.02, 0.9, 13)
        oracle = exact_subtrace(h.eigenvalues(), 1.0)
        tolerance = (1.0 / 8) / 2 + 0.02 * 1.0 * 9
        assert abs(est.value - oracle) <= tolerance

    def test_scaled_padded_path(self, path_gamma):
        h = path_gamma.scaled(1 / 3)
        # stop below the top eigenvalue so only the 1/3 mode contributes
        est = subtrace_estimate(h, 0.9, 16, 0.01, 0.01, 0.9, 17)
        oracle = exact_subtrace(h.eigenvalues(), 0.9)
        assert oracle == pytest.approx((1 / 3) / 3)
        budget = est.details["bin_width"] + 0.9 * 17 * 0.01
        assert abs(est.value - oracle) <= budget

    def test_cost_accumulates_all_calls(self, diag_half):
        est = subtrace_estimate(diag_half, 1.0, 4, 0.05, 0.05, 0.9, 3)
        assert est.M == 5 * hoeffding_sample_count(0.05, 0.9)

    def test_bad_bins(self, diag_half):
        with pytest.raises(ValidationError):
            subtrace_estimate(diag_half, 1.0, 0, 0.05, 0.05, 0.9, 0)


class TestSpectralEntropy:
    def test_uniform_two_point(self):
        h = SparseHermitian.from_dense(np.diag([0.5, 0.5]))
        report = spectral_entropy(h)
        assert report.entropy == pytest.approx(math.log(2.0), abs=1e-12)
        assert report.alpha == 1.0

    def test_rank_one_projector(self):
        h = SparseHermitian.from_dense(np.diag([1.0, 0.0, 0.0]))
        assert spectral_entropy(h).entropy == pytest.approx(0.0, abs=1e-12)

    def test_padded_path_closed_form(self, path_gamma):
        report = spectral_entropy(path_gamma)
        expected = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
        assert report.entropy == pytest.approx(expected, abs=1e-10)

    def test_zero_trace_rejected(self):
        h = SparseHermitian.from_dense(np.zeros((3, 3)))
        with pytest.raises(ValidationError, match="zero trace"):
            spectral_entropy(h)

    def test_sampled_mode_converges(self, path_gamma):
        # exact phases: eigenvalues {0, 1/3, 1} with scale 3/4 sit on bins
        model = NoiseModel(t=6, delta=4 * 2**-6 / 0.75, mu=0.25, scale=0.75)
        report = spectral_entropy(path_gamma, "sampled", 30000, 5, model=model)
        expected = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
        assert abs(report.entropy - expected) <= 0.05
        assert report.method == "sampled"
        assert report.M == 30000

    def test_sampled_needs_budget(self, path_gamma):
        with pytest.raises(ValidationError, match="budget"):
            spectral_entropy(path_gamma, "sampled", None, 0)

    def test_bits_conversion(self):
        h = SparseHermitian.from_dense(np.diag([0.5, 0.5]))
        report = spectral_entropy(h).in_bits()
        assert report.entropy == pytest.approx(1.0, abs=1e-12)
        assert report.base == "bits"


class TestRenyiEntropy:
    def test_uniform_alpha_two(self):
        h = SparseHermitian.from_dense(np.diag([0.25] * 4))
        report = renyi_entropy(h, 2.0)
        assert report.entropy == pytest.approx(math.log(4.0), abs=1e-12)

    def test_rank_one_projector_any_alpha(self):
        h = SparseHermitian.from_dense(np.diag([1.0, 0.0]))
        for alpha in (0.5, 2.0, 3.0):
            assert renyi_entropy(h, alpha).entropy == pytest.approx(0.0, abs=1e-12)

    def test_padded_path_alpha_two(self, path_gamma):
        report = renyi_entropy(path_gamma, 2.0)
        assert report.entropy == pytest.approx(math.log(8 / 5), abs=1e-10)

    def test_alpha_one_redirects(self, path_gamma):
        with pytest.raises(ValidationError, match="spectral_entropy"):
            renyi_entropy(path_gamma, 1.0)

    def test_alpha_zero_counts_support(self, path_gamma):
        assert renyi_entropy(path_gamma, 0.0).entropy == pytest.approx(math.log(2.0))

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            lam = np.abs(rng.normal(size=6))
            h = SparseHermitian.from_dense(np.diag(lam))
            values = [renyi_entropy(h, a).entropy for a in (0.5, 2.0, 3.0)]
            assert values[0] >= values[1] - 1e-12
            assert values[1] >= values[2] - 1e-12

    def test_entropy_bounds(self, path_gamma):
        dim_log = math.log(path_gamma.dim)
        assert 0.0 <= spectral_entropy(path_gamma).entropy <= dim_log
        for alpha in (0.5, 2.0, 3.0):
            assert 0.0 <= renyi_entropy(path_gamma, alpha).entropy <= dim_log

    def test_sampled_mode(self, path_gamma):
        model = NoiseModel(t=6, delta=4 * 2**-6 / 0.75, mu=0.25, scale=0.75)
        report = renyi_entropy(path_gamma, 2.0, "sampled", 30000, 5, model=model)
        assert abs(report.entropy - math.log(8 / 5)) <= 0.05


class TestEigencountStochastic:
    def test_half_kernel(self, diag_half):
        est = eigencount_stochastic(diag_half, 0.1, 200, 64, 17)
        assert abs(est.value - 0.5) <= 0.05
        assert est.cost == 200 * 64 * diag_half.nnz

    def test_zero_matrix(self):
        h = SparseHermitian.from_dense(np.zeros((4, 4)))
        est = eigencount_stochastic(h, 0.3, 100, 16, 1)
        assert abs(est.value - 1.0) <= 0.05

    def test_identity_above_threshold(self):
        h = SparseHermitian.from_dense(np.eye(8))
        est = eigencount_stochastic(h, 0.5, 200, 32, 2)
        assert abs(est.value - 0.0) <= 0.05

    def test_converges_with_degree(self, diag_half):
        exact = eigencount_exact(diag_half, 0.0, 0.1)
        coarse = abs(eigencount_stochastic(diag_half, 0.1, 30, 64, 5).value - exact)
        fine = abs(eigencount_stochastic(diag_half, 0.1, 300, 64, 5).value - exact)
        assert fine <= coarse + 1e-9

    def test_dense_rotation(self):
        rng = np.random.default_rng(9)
        basis, _ = np.linalg.qr(rng.normal(size=(32, 32)))
        lam = np.concatenate([np.zeros(8), np.linspace(0.5, 1.0, 24)])
        h = SparseHermitian.from_dense(basis @ np.diag(lam) @ basis.T)
        est = eigencount_stochastic(h, 0.1, 300, 64, 3)
        assert abs(est.value - 0.25) <= 0.05

    def test_bad_parameters(self, diag_half):
        with pytest.raises(ValidationError):
            eigencount_stochastic(diag_half, 0.1, 0, 8, 0)
        with pytest.raises(ValidationError):
            eigencount_stochastic(diag_half, 0.1, 10, 0, 0)
