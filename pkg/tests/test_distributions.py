import math

import numpy as np
import pytest

from riskbandit import (
    DegenerateMixtureError,
    EmpiricalResample,
    TruncatedGaussianMixture,
    UniformSegment,
    analytic_cvar,
    analytic_mean,
    essential_infimum,
    quantile_value,
    sample,
    sample_many,
)
from riskbandit.distributions import load_reward_matrix
from riskbandit.rng import make_rng


class TestUniformSegment:
    def test_closed_forms(self):
        seg = UniformSegment(center=0.5, radius=0.5)
        assert analytic_mean(seg) == 0.5
        assert essential_infimum(seg) == 0.0
        assert quantile_value(seg, 0.5) == 0.5
        assert quantile_value(seg, 0.1) == pytest.approx(0.1)
        assert analytic_cvar(seg, 1.0) == 0.5
        assert analytic_cvar(seg, 0.5) == 0.25

    def test_narrow_segment(self):
        seg = UniformSegment(center=0.5, radius=0.001)
        assert analytic_mean(seg) == 0.5
        assert essential_infimum(seg) == pytest.approx(0.499)

    def test_cvar_approaches_infimum(self):
        seg = UniformSegment(center=0.5, radius=0.1)
        assert analytic_cvar(seg, 1e-9) == pytest.approx(essential_infimum(seg), abs=1e-9)

    def test_support_containment(self):
        seg = UniformSegment(center=0.6, radius=0.3)
        draws = sample_many(seg, make_rng(1), 100_000)
        assert draws.min() >= seg.low
        assert draws.max() <= seg.high

    def test_validation(self):
        with pytest.raises(ValueError, match="radius"):
            UniformSegment(center=0.5, radius=0.0)
        with pytest.raises(ValueError, match="escapes"):
            UniformSegment(center=0.9, radius=0.2)
        with pytest.raises(ValueError, match="escapes"):
            UniformSegment(center=0.1, radius=0.2)

    def test_tail_probability_linear_in_epsilon(self):
        # P(X <= a + eps) = eps / (2 radius) >= A * eps with A = 1/(2 radius)
        seg = UniformSegment(center=0.5, radius=0.25)
        draws = sample_many(seg, make_rng(7), 200_000)
        for eps in (0.05, 0.1, 0.2):
            frac = np.mean(draws <= seg.low + eps)
            assert frac == pytest.approx(eps / (2 * seg.radius), abs=0.01)


class TestEmpiricalResample:
    def test_exact_statistics(self):
        er = EmpiricalResample(values=(0.2, 0.4))
        assert analytic_mean(er) == pytest.approx(0.3)
        assert essential_infimum(er) == 0.2
        er3 = EmpiricalResample(values=(0.9, 0.1, 0.5))
        assert essential_infimum(er3) == 0.1

    def test_quantile_rank_convention(self):
        er = EmpiricalResample(values=(0.1, 0.2, 0.3, 0.4))
        assert quantile_value(er, 0.5) == 0.2
        assert quantile_value(er, 1.0) == 0.4
        assert quantile_value(er, 0.01) == 0.1

    def test_cvar(self):
        er = EmpiricalResample(values=(0.1, 0.5, 0.9))
        assert analytic_cvar(er, 1.0) == pytest.approx(0.5)
        assert analytic_cvar(er, 1e-6) == 0.1
        assert analytic_cvar(er, 0.4) == pytest.approx(0.3)

    def test_single_value_resample(self):
        er = EmpiricalResample(values=(0.3,))
        assert sample(er, make_rng(0)) == 0.3
        draws = sample_many(er, make_rng(1), 1000)
        assert np.all(draws == 0.3)

    def test_samples_are_members(self):
        er = EmpiricalResample(values=(0.1, 0.4, 0.8))
        draws = sample_many(er, make_rng(2), 5000)
        assert set(np.unique(draws)) <= {0.1, 0.4, 0.8}

    def test_validation(self):
        with pytest.raises(ValueError, match="at least one"):
            EmpiricalResample(values=())
        with pytest.raises(ValueError, match="outside"):
            EmpiricalResample(values=(0.5, 1.2))


def _phi(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _truncated_mixture_mean(mix):
    """Independent closed-form oracle via the truncated-normal mean formula."""
    num = 0.0
    den = 0.0
    for w, mu, sd in zip(mix.weights, mix.means, mix.stds):
        lo = (mix.floor - mu) / sd
        hi = (1.0 - mu) / sd
        mass = _cdf(hi) - _cdf(lo)
        comp_mean = mu + sd * (_phi(lo) - _phi(hi)) / mass
        num += w * mass * comp_mean
        den += w * mass
    return num / den


class TestTruncatedGaussianMixture:
    def test_validation(self):
        with pytest.raises(ValueError, match="floor"):
            TruncatedGaussianMixture(floor=1.0, weights=(1.0,), means=(0.5,), stds=(0.2,))
        with pytest.raises(ValueError, match="length"):
            TruncatedGaussianMixture(floor=0.0, weights=(1.0,), means=(0.5, 0.6), stds=(0.2,))
        with pytest.raises(ValueError, match="sum to 1"):
            TruncatedGaussianMixture(floor=0.0, weights=(0.5, 0.4), means=(0.5, 0.6), stds=(0.2, 0.2))
        with pytest.raises(ValueError, match="positive"):
            TruncatedGaussianMixture(floor=0.0, weights=(1.0,), means=(0.5,), stds=(0.0,))
        with pytest.raises(ValueError, match="positive"):
            TruncatedGaussianMixture(
                floor=0.0, weights=(1.0, 0.0), means=(0.5, 0.6), stds=(0.2, 0.2)
            )
        with pytest.raises(ValueError, match="component"):
            TruncatedGaussianMixture(floor=0.0, weights=(), means=(), stds=())

    def test_support_containment(self):
        mix = TruncatedGaussianMixture(
            floor=0.03, weights=(0.7, 0.3), means=(0.2, 0.9), stds=(0.3, 0.15)
        )
        draws = sample_many(mix, make_rng(5), 100_000)
        assert draws.min() >= 0.03
        assert draws.max() <= 1.0
        assert essential_infimum(mix) == 0.03

    def test_symmetric_single_component_mean(self):
        # symmetric truncation about the mean keeps the mean at 0.5
        mix = TruncatedGaussianMixture(floor=0.0, weights=(1.0,), means=(0.5,), stds=(0.12,))
        assert analytic_mean(mix) == pytest.approx(0.5, abs=0.002)
        draws = sample_many(mix, make_rng(11), 1_000_000)
        assert draws.mean() == pytest.approx(0.5, abs=0.002)

    def test_mean_against_closed_form(self):
        for seed in range(3):
            rng = make_rng(seed)
            mix = TruncatedGaussianMixture(
                floor=float(rng.uniform(0, 0.05)),
                weights=(0.25, 0.75),
                means=(float(rng.uniform(0, 1)), float(rng.uniform(0, 1))),
                stds=(float(rng.uniform(0.12, 0.5)), float(rng.uniform(0.12, 0.5))),
            )
            assert analytic_mean(mix) == pytest.approx(_truncated_mixture_mean(mix), abs=0.003)

    def test_cvar_monotone_and_consistent(self):
        mix = TruncatedGaussianMixture(
            floor=0.01, weights=(0.5, 0.5), means=(0.3, 0.8), stds=(0.2, 0.15)
        )
        alphas = [0.01, 0.05, 0.2, 0.5, 1.0]
        values = [analytic_cvar(mix, a) for a in alphas]
        assert all(lo <= hi for lo, hi in zip(values, values[1:]))
        assert values[-1] == pytest.approx(analytic_mean(mix), abs=1e-12)
        for a in alphas:
            assert analytic_cvar(mix, a) <= quantile_value(mix, a)
            assert analytic_cvar(mix, a) >= mix.floor

    def test_determinism(self):
        mix = TruncatedGaussianMixture(
            floor=0.02, weights=(0.4, 0.6), means=(0.4, 0.7), stds=(0.2, 0.3)
        )
        a = sample_many(mix, make_rng(9), 10_000)
        b = sample_many(mix, make_rng(9), 10_000)
        assert np.array_equal(a, b)

    def test_degenerate_mixture_raises(self):
        # essentially all mass far below the acceptance window
        mix = TruncatedGaussianMixture(floor=0.0, weights=(1.0,), means=(-500.0,), stds=(0.01,))
        with pytest.raises(DegenerateMixtureError):
            sample_many(mix, make_rng(0), 10)

    def test_from_components(self):
        mix = TruncatedGaussianMixture.from_components(0.01, [(0.3, 0.4, 0.2), (0.7, 0.6, 0.3)])
        assert mix.weights == (0.3, 0.7)
        assert mix.means == (0.4, 0.6)
        assert mix.stds == (0.2, 0.3)


class TestAlphaValidation:
    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5])
    def test_out_of_range(self, alpha):
        seg = UniformSegment(center=0.5, radius=0.5)
        with pytest.raises(ValueError, match="alpha"):
            quantile_value(seg, alpha)
        with pytest.raises(ValueError, match="alpha"):
            analytic_cvar(seg, alpha)


class TestSampleDispatch:
    def test_negative_count(self):
        with pytest.raises(ValueError, match="non-negative"):
            sample_many(UniformSegment(center=0.5, radius=0.5), make_rng(0), -1)

    def test_unknown_spec_type(self):
        with pytest.raises(TypeError):
            sample_many(object(), make_rng(0), 3)
        with pytest.raises(TypeError):
            analytic_mean(object())


class TestLoadRewardMatrix:
    def test_variable_row_lengths(self, tmp_path):
        path = tmp_path / "rewards.csv"
        path.write_text("0.1,0.2,0.3\n\n0.5,0.6\n")
        rows = load_reward_matrix(path)
        assert rows == [[0.1, 0.2, 0.3], [0.5, 0.6]]

    def test_parse_error_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.1,0.2\n0.3,oops\n")
        with pytest.raises(ValueError, match="line 2"):
            load_reward_matrix(path)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "inf.csv"
        path.write_text("0.1,inf\n0.3,0.4\n")
        with pytest.raises(ValueError, match="non-finite"):
            load_reward_matrix(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("\n\n")
        with pytest.raises(ValueError, match="no reward rows"):
            load_reward_matrix(path)
