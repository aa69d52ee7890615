import numpy as np
import pytest

from riskbandit import (
    BanditProblem,
    EmpiricalResample,
    UniformSegment,
    gen_battery_synthetic,
    gen_from_matrix,
    gen_mixture,
    gen_proof_of_concept,
)
from riskbandit.generators import gen_mixture_arms
from riskbandit.rng import make_rng


class TestBanditProblem:
    def test_from_arms_derived_fields(self):
        arms = [
            EmpiricalResample(values=(0.2, 0.8)),   # mean 0.5, inf 0.2
            EmpiricalResample(values=(0.3, 0.5)),   # mean 0.4, inf 0.3
        ]
        problem = BanditProblem.from_arms(arms)
        assert problem.k == 2
        assert problem.best_mean_arm == 0
        assert problem.mu_star == pytest.approx(0.5)
        assert problem.a_star == 0.2
        assert np.allclose(problem.margins_mean, [0.0, 0.1])
        assert np.allclose(problem.margins_min, [0.1, 0.0])
        assert problem.lower_bound_A is None

    def test_margins_always_non_negative(self):
        problem = gen_mixture(4, make_rng(2))
        assert np.all(problem.margins_mean >= 0)
        assert np.all(problem.margins_min >= 0)
        assert problem.margins_mean[problem.best_mean_arm] == 0.0

    def test_mean_tie_takes_lowest_index(self):
        arms = [EmpiricalResample(values=(0.4, 0.6)), EmpiricalResample(values=(0.5,))]
        assert BanditProblem.from_arms(arms).best_mean_arm == 0

    def test_needs_two_arms(self):
        with pytest.raises(ValueError, match="at least 2 arms"):
            BanditProblem.from_arms([EmpiricalResample(values=(0.5,))])

    def test_arrays_read_only(self, poc_problem):
        with pytest.raises(ValueError):
            poc_problem.means[0] = 0.0
        with pytest.raises(ValueError):
            poc_problem.margins_min[0] = 1.0


class TestProofOfConcept:
    def test_default_shape(self, poc_problem):
        assert poc_problem.k == 20
        assert poc_problem.best_mean_arm == 0
        assert poc_problem.mu_star == pytest.approx(0.5)
        assert poc_problem.a_star == pytest.approx(0.499)
        # widest segment is the last arm: radius 0.001 + 0.4
        assert poc_problem.lower_bound_A == pytest.approx(1.0 / 0.802, abs=1e-12)

    def test_two_arm_worked_values(self):
        problem = gen_proof_of_concept(k=2, mu_star=0.5, a_star=0.499, delta_max=0.05, r_max=0.1)
        first, second = problem.arms
        assert isinstance(first, UniformSegment)
        assert first.center == pytest.approx(0.5)
        assert first.radius == pytest.approx(0.001)
        assert second.center == pytest.approx(0.45)
        assert second.radius == pytest.approx(0.101)
        assert problem.infima[1] == pytest.approx(0.349)
        assert problem.margins_mean[1] == pytest.approx(0.05)
        assert problem.margins_min[1] == pytest.approx(0.15)

    def test_affine_gap_schedule(self, poc_problem):
        k = poc_problem.k
        s = np.arange(k) / (k - 1)
        np.testing.assert_allclose(poc_problem.margins_mean, s * 0.05, atol=1e-12)
        np.testing.assert_allclose(
            poc_problem.margins_min - poc_problem.margins_mean, s * 0.4, atol=1e-12
        )

    def test_flat_mean_profile_allowed(self):
        problem = gen_proof_of_concept(k=5, delta_max=0.0, r_max=0.3)
        assert np.all(problem.margins_mean == 0.0)
        assert problem.best_mean_arm == 0
        assert np.all(problem.margins_min[1:] > 0)

    def test_support_escape_names_arm(self):
        with pytest.raises(ValueError, match="arm 2"):
            gen_proof_of_concept(k=2, mu_star=0.5, a_star=0.05, delta_max=0.05, r_max=0.5)

    def test_parameter_validation(self):
        with pytest.raises(ValueError, match="at least 2"):
            gen_proof_of_concept(k=1)
        with pytest.raises(ValueError, match="a_star"):
            gen_proof_of_concept(a_star=0.6)
        with pytest.raises(ValueError, match="a_star"):
            gen_proof_of_concept(a_star=0.0)
        with pytest.raises(ValueError, match="delta_max"):
            gen_proof_of_concept(delta_max=-0.01)
        with pytest.raises(ValueError, match="r_max"):
            gen_proof_of_concept(r_max=-0.1)


class TestMixtureGenerator:
    def test_spec_parameter_ranges(self):
        arms = gen_mixture_arms(500, make_rng(0))
        assert len(arms) == 500
        for arm in arms:
            assert 0.0 <= arm.floor < 0.05
            n = len(arm.weights)
            assert 1 <= n <= 4
            assert len(arm.means) == len(arm.stds) == n
            assert all(0.12 <= s <= 0.5 for s in arm.stds)
            assert all(0.0 <= m <= 1.0 for m in arm.means)
            assert sum(arm.weights) == pytest.approx(1.0, abs=1e-9)

    def test_deterministic_given_seed(self):
        a = gen_mixture(2, make_rng(5))
        b = gen_mixture(2, make_rng(5))
        assert a.arms == b.arms
        assert np.array_equal(a.means, b.means)
        assert np.array_equal(a.infima, b.infima)

    def test_distinct_across_seeds(self):
        assert gen_mixture_arms(2, make_rng(1)) != gen_mixture_arms(2, make_rng(2))

    def test_no_density_bound(self):
        assert gen_mixture(3, make_rng(9)).lower_bound_A is None


class TestMatrixGenerator:
    def test_basic(self):
        problem = gen_from_matrix([[0.1, 0.9], [0.4, 0.6, 0.5]])
        assert problem.k == 2
        assert isinstance(problem.arms[0], EmpiricalResample)
        assert problem.means[0] == pytest.approx(0.5)
        assert problem.infima[1] == 0.4

    def test_out_of_range_names_row(self):
        with pytest.raises(ValueError, match="arm row 1"):
            gen_from_matrix([[0.1, 0.9], [0.4, 1.6]])

    def test_rescale(self):
        problem = gen_from_matrix([[2.0, 6.0], [4.0, 4.0]], rescale=True)
        assert problem.arms[0].values == (0.0, 1.0)
        assert problem.arms[1].values == (0.5, 0.5)

    def test_constant_matrix_rescales_to_half(self):
        problem = gen_from_matrix([[3.0, 3.0], [3.0]], rescale=True)
        assert problem.arms[0].values == (0.5, 0.5)
        assert problem.arms[1].values == (0.5,)

    def test_row_count_and_empty_rows(self):
        with pytest.raises(ValueError, match="at least 2 arm rows"):
            gen_from_matrix([[0.5, 0.5]])
        with pytest.raises(ValueError, match="row 1 is empty"):
            gen_from_matrix([[0.5], []])


class TestBatterySynthetic:
    def test_shape_and_range(self):
        rows = gen_battery_synthetic(5, 30, make_rng(4))
        assert len(rows) == 5
        assert all(len(row) == 30 for row in rows)
        flat = [v for row in rows for v in row]
        assert min(flat) == 0.0
        assert max(flat) == 1.0

    def test_deterministic(self):
        assert gen_battery_synthetic(3, 10, make_rng(7)) == gen_battery_synthetic(3, 10, make_rng(7))

    def test_arms_differ(self):
        rows = gen_battery_synthetic(4, 25, make_rng(11))
        assert len({tuple(r) for r in rows}) > 1

    def test_feeds_matrix_generator(self):
        problem = gen_from_matrix(gen_battery_synthetic(3, 20, make_rng(2)))
        assert problem.k == 3

    def test_validation(self):
        with pytest.raises(ValueError, match="at least 2 arms"):
            gen_battery_synthetic(1, 10, make_rng(0))
        with pytest.raises(ValueError, match="realization"):
            gen_battery_synthetic(3, 0, make_rng(0))
