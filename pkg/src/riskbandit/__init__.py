"""Risk-aware multi-armed bandit simulation toolkit.

Policies that optimise the lower tail of the reward (max-min and tail-mean
lower confidence bounds) next to classical baselines, the problem generators
to stress them, closed-form regret bounds, and a seeded, reproducible
benchmark harness with a CLI front end.
"""

from .distributions import (
    ArmSpec,
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
from .estimators import ArmStats, tail_count
from .exceptions import ConfigError, DegenerateMixtureError, UndefinedStatisticError
from .generators import (
    BanditProblem,
    gen_battery_synthetic,
    gen_from_matrix,
    gen_mixture,
    gen_proof_of_concept,
)
from .harness import (
    RegretCurve,
    RegretLedger,
    RunConfig,
    SweepCell,
    aggregate_regret,
    run_episode,
    run_many,
    sorted_final_regret,
    sorted_reward_cdf,
    sweep,
)
from .policies import (
    MIN,
    MVLCB,
    ExpExp,
    MaRaB,
    PolicyConfig,
    PolicyState,
    UCB,
    expexp_tau,
    marab_index,
    min_index,
    mvlcb_index,
    select_arm,
    ucb_index,
)
from .theory import (
    BoundInputs,
    BoundResult,
    LemmaCheck,
    MarginCheck,
    margin_assumption_check,
    min_regret_bound,
    min_regret_bound_aligned,
    min_tail_check,
    min_tail_check_any,
    ucb_regret_bound,
)

__version__ = "0.1.0"

__all__ = [
    "ArmSpec",
    "ArmStats",
    "BanditProblem",
    "BoundInputs",
    "BoundResult",
    "ConfigError",
    "DegenerateMixtureError",
    "EmpiricalResample",
    "ExpExp",
    "LemmaCheck",
    "MIN",
    "MVLCB",
    "MaRaB",
    "MarginCheck",
    "PolicyConfig",
    "PolicyState",
    "RegretCurve",
    "RegretLedger",
    "RunConfig",
    "SweepCell",
    "TruncatedGaussianMixture",
    "UCB",
    "UndefinedStatisticError",
    "UniformSegment",
    "aggregate_regret",
    "analytic_cvar",
    "analytic_mean",
    "essential_infimum",
    "expexp_tau",
    "gen_battery_synthetic",
    "gen_from_matrix",
    "gen_mixture",
    "gen_proof_of_concept",
    "margin_assumption_check",
    "marab_index",
    "min_index",
    "min_regret_bound",
    "min_regret_bound_aligned",
    "min_tail_check",
    "min_tail_check_any",
    "mvlcb_index",
    "quantile_value",
    "run_episode",
    "run_many",
    "sample",
    "sample_many",
    "select_arm",
    "sorted_final_regret",
    "sorted_reward_cdf",
    "sweep",
    "tail_count",
    "ucb_index",
    "ucb_regret_bound",
]
