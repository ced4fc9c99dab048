import json
import math

import numpy as np
import pytest
from scipy.special import gammaln

from simplexlearn.evaluation import match_vertices
from simplexlearn.geometry import DegenerateSimplexError, Simplex
from simplexlearn.ica import (
    align_signed_permutation,
    clear_c_pn_cache,
    compute_c_pn,
    ica_estimate,
    lp_symmetric_difference,
    reduce_lp_to_ica,
    reduce_simplex_to_ica,
    separation_index,
    signed_permutation_deviation,
)
from simplexlearn.sampling import (
    SampleMatrix,
    generalized_gaussian_std,
    sample_lp_ball,
    sample_simplex,
    substream,
)


@pytest.fixture(autouse=True)
def fresh_cpn_cache():
    clear_c_pn_cache()
    yield
    clear_c_pn_cache()


def exponential_mixture(a: np.ndarray, shift: np.ndarray, t: int, seed: int) -> np.ndarray:
    rng = substream(seed, 600)
    sources = rng.exponential(1.0, size=(t, a.shape[1]))
    return sources @ a.T + shift


class TestIcaEstimate:
    def test_unmixes_exponential_sources(self):
        rng = substream(0, 601)
        a = rng.standard_normal((3, 3))
        x = exponential_mixture(a, rng.standard_normal(3), 100_000, seed=1)
        est = ica_estimate(x, seed=0)
        g = est.separating @ a
        assert separation_index(g) <= 0.05
        assert signed_permutation_deviation(g) <= 0.1
        assert all(est.converged)
        assert est.contrast == ["skew", "skew", "skew"]

    def test_separating_whitens_the_input(self):
        rng = substream(0, 602)
        a = rng.standard_normal((3, 3))
        x = exponential_mixture(a, np.zeros(3), 50_000, seed=2)
        est = ica_estimate(x, seed=0)
        centered = x - x.mean(axis=0)
        cov = (centered.T @ centered) / x.shape[0]
        assert np.abs(est.separating @ cov @ est.separating.T - np.eye(3)).max() <= 1e-8

    def test_mixing_inverts_separating(self):
        x = exponential_mixture(np.eye(2), np.zeros(2), 20_000, seed=3)
        est = ica_estimate(x, seed=0)
        assert np.abs(est.separating @ est.mixing - np.eye(2)).max() <= 1e-10

    def test_symmetric_sources_use_kurtosis(self):
        rng = substream(0, 603)
        a = rng.standard_normal((3, 3))
        sources = rng.uniform(-math.sqrt(3), math.sqrt(3), size=(100_000, 3))
        est = ica_estimate(sources @ a.T, seed=0)
        assert est.contrast == ["kurtosis", "kurtosis", "kurtosis"]
        assert separation_index(est.separating @ a) <= 0.05

    def test_degenerate_covariance_rejected(self):
        line = np.outer(substream(0, 604).standard_normal(500), np.array([1.0, 2.0]))
        with pytest.raises(DegenerateSimplexError):
            ica_estimate(line)

    def test_non_convergence_is_flagged_not_raised(self):
        x = exponential_mixture(np.eye(3), np.zeros(3), 5000, seed=4)
        est = ica_estimate(x, seed=0, max_sweeps=1)
        assert not all(est.converged)


class TestSimplexReduction:
    def test_recovers_triangle_vertices(self):
        rng = substream(0, 605)
        truth = Simplex(rng.standard_normal((3, 2)))
        sm = sample_simplex(truth, 200_000, 30)
        red = reduce_simplex_to_ica(sm, seed=0)
        assert red.vertices.shape == (3, 2)
        assert match_vertices(truth.vertices, red.vertices).max_error <= 0.05

    def test_recovers_segment_endpoints(self):
        pts = substream(3, 606).uniform(2.0, 5.0, size=(100_000, 1))
        sm = SampleMatrix(points=pts, seed=3, source="segment")
        red = reduce_simplex_to_ica(sm, seed=1)
        ends = np.sort(red.vertices.ravel())
        assert abs(ends[0] - 2.0) <= 0.05
        assert abs(ends[1] - 5.0) <= 0.05

    def test_deterministic(self):
        rng = substream(1, 605)
        truth = Simplex(rng.standard_normal((3, 2)))
        sm = sample_simplex(truth, 50_000, 31)
        a = reduce_simplex_to_ica(sm, seed=5)
        b = reduce_simplex_to_ica(sm, seed=5)
        assert (a.vertices == b.vertices).all()


class TestLpReduction:
    def test_axis_aligned_cross_polytope(self):
        a = np.diag([2.0, 1.0])
        ball = sample_lp_ball(2, 1.0, 200_000, 40)
        sm = SampleMatrix(points=ball.points @ a.T, seed=ball.seed, source="test")
        red = reduce_lp_to_ica(sm, 1.0, seed=0)
        assert signed_permutation_deviation(np.linalg.inv(a) @ red.mixing) <= 0.1
        assert lp_symmetric_difference(a, red.mixing, 1.0, seed=0) <= 0.1

    def test_p2_identifies_only_the_ellipsoid(self):
        rng = substream(9, 607)
        a = rng.standard_normal((2, 2))
        ball = sample_lp_ball(2, 2.0, 200_000, 50)
        sm = SampleMatrix(points=ball.points @ a.T, seed=ball.seed, source="test")
        red = reduce_lp_to_ica(sm, 2.0, seed=0)
        gram_true = a @ a.T
        rel = np.abs(red.mixing @ red.mixing.T - gram_true).max() / np.abs(gram_true).max()
        assert rel <= 0.05
        assert "rotation invariant" in red.estimate.permutation_note

    def test_source_scale_divided_out(self):
        # identity map, p = 3: recovered mixing should be near a signed
        # permutation with unit entries, not generalized_gaussian_std(3)
        ball = sample_lp_ball(2, 3.0, 200_000, 51)
        red = reduce_lp_to_ica(ball, 3.0, seed=0)
        assert signed_permutation_deviation(red.mixing) <= 0.1
        assert generalized_gaussian_std(3.0) != pytest.approx(1.0, abs=0.1)


class TestCpn:
    def test_euclidean_disc_value(self):
        est = compute_c_pn(2.0, 2, samples=200_000, seed=0)
        assert abs(est.value - 0.5) <= 5.0 * est.std_error
        assert est.std_error <= 1e-3 * est.value

    def test_cross_polytope_value(self):
        est = compute_c_pn(1.0, 2, samples=200_000, seed=0)
        assert abs(est.value - 1.0 / math.sqrt(6.0)) <= 5.0 * est.std_error

    def test_gamma_function_identity(self):
        # c_pn^2 = std^2 * Gamma(n/p + 1) / Gamma((n+2)/p + 1) restated
        # through the source normal form, for p = 3, n = 4
        p, n = 3.0, 4
        est = compute_c_pn(p, n, samples=400_000, seed=1)
        closed = generalized_gaussian_std(p) * math.exp(
            0.5 * (gammaln(n / p + 1.0) - gammaln((n + 2.0) / p + 1.0))
        )
        assert abs(est.value - closed) <= 5.0 * est.std_error

    def test_memory_cache_returns_same_object(self):
        a = compute_c_pn(2.0, 3, samples=100_000, seed=0)
        b = compute_c_pn(2.0, 3, samples=100_000, seed=0)
        assert a is b

    def test_file_cache_round_trip(self, tmp_path):
        path = str(tmp_path / "cpn.json")
        first = compute_c_pn(2.0, 3, samples=100_000, seed=0, cache_path=path)
        with open(path) as fh:
            stored = json.load(fh)
        assert "p=2,n=3" in stored
        clear_c_pn_cache()
        # different seed would change a recomputed value; a file hit keeps it
        again = compute_c_pn(2.0, 3, samples=100_000, seed=999, cache_path=path)
        assert again.value == first.value
        assert again.samples == first.samples

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            compute_c_pn(2.0, 3, samples=0)


class TestSeparationIndex:
    def test_zero_on_scaled_signed_permutation(self):
        g = np.array([[0.0, -2.0, 0.0], [3.0, 0.0, 0.0], [0.0, 0.0, 0.5]])
        assert separation_index(g) == 0.0

    def test_scale_invariant(self):
        rng = substream(0, 608)
        g = rng.standard_normal((4, 4))
        assert separation_index(3.0 * g) == pytest.approx(separation_index(g))

    def test_bounded_by_one(self):
        assert separation_index(np.ones((5, 5))) <= 1.0

    def test_one_by_one(self):
        assert separation_index(np.array([[7.0]])) == 0.0

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            separation_index(np.ones((2, 3)))


class TestSignedPermutationTools:
    def test_align_recovers_construction(self):
        g = np.array([[0.1, 0.98], [-1.02, 0.05]])
        perm, signs = align_signed_permutation(g)
        assert perm.tolist() == [1, 0]
        assert signs.tolist() == [1.0, -1.0]

    def test_deviation_of_crafted_matrix(self):
        g = np.array([[0.1, 0.98], [-1.02, 0.05]])
        assert signed_permutation_deviation(g) == pytest.approx(0.1)

    def test_exact_signed_permutation_has_zero_deviation(self):
        g = np.array([[0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        assert signed_permutation_deviation(g) == 0.0


class TestLpSymmetricDifference:
    def test_identical_maps(self):
        a = substream(0, 609).standard_normal((3, 3))
        assert lp_symmetric_difference(a, a, 2.0, mc_points=20_000, seed=0) <= 1e-4

    def test_shrunken_copy_closed_form(self):
        a = np.diag([1.0, 2.0])
        value = lp_symmetric_difference(a, 0.9 * a, 1.0, mc_points=200_000, seed=0)
        assert value == pytest.approx(1.0 - 0.81, abs=0.006)

    def test_deterministic(self):
        a = np.eye(2)
        b = np.diag([1.1, 0.9])
        x = lp_symmetric_difference(a, b, 2.0, mc_points=10_000, seed=7)
        y = lp_symmetric_difference(a, b, 2.0, mc_points=10_000, seed=7)
        assert x == y
