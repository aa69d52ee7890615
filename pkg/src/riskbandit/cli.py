"""Command-line front end.

Four subcommands:

* ``run``   -- execute an experiment spec: every (policy, instance, run)
  cell, then per policy a regret-curve file, a sorted-reward file, and a
  sorted-final-regret file, plus ``summary.json``.
* ``sweep`` -- expand each policy's sweep grid against the first problem
  instance; one output row per grid cell, plus ``sweep_summary.json``.
* ``bound`` -- evaluate the closed-form regret bounds from a JSON inputs
  document and print JSON.
* ``check-lemma`` -- Monte Carlo check of the minimum tail inequality for
  uniform-segment arms; prints JSON with a pass flag.

Exit codes: 0 success, 1 validation failure (bad flags, bad spec, bad
inputs), 2 runtime failure.  Outputs are deterministic: re-running a command
with the same spec rewrites byte-identical files, except the ``timing``
field of the summaries.  Every artifact embeds the resolved config and the
master seed.  CSV files start with ``# riskbandit-csv 1`` comment lines; the
JSON output format (``--format json``) carries the same rows.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from .config import (
    ExperimentSpec,
    build_problem,
    load_experiment_spec,
    resolve_policy,
    resolved_config_dict,
)
from .exceptions import ConfigError, DegenerateMixtureError
from .generators import BanditProblem
from .harness import (
    RunConfig,
    aggregate_regret,
    run_many,
    sorted_final_regret,
    sorted_reward_cdf,
    sweep,
)
from .rng import EPISODE_DOMAIN, derive_seed, validate_seed
from .theory import (
    BoundInputs,
    BoundResult,
    min_regret_bound,
    min_regret_bound_aligned,
    min_tail_check,
    min_tail_check_any,
    ucb_regret_bound,
)
from .distributions import UniformSegment

CSV_SCHEMA = "riskbandit-csv 1"
JSON_SCHEMA = "riskbandit-json 1"


# ---------------------------------------------------------------------------
# output helpers


def _fmt_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _sanitize(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in label)


def _write_table(out_dir: Path, stem: str, fmt: str, header: list[str], rows, meta: dict) -> Path:
    """Write one table as CSV (comment preamble + header + rows) or JSON."""
    rows = [list(r) for r in rows]
    if fmt == "csv":
        path = out_dir / f"{stem}.csv"
        lines = [f"# {CSV_SCHEMA}"]
        for key, value in meta.items():
            lines.append(f"# {key}={value}")
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_fmt_cell(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
    else:
        path = out_dir / f"{stem}.json"
        doc = {"schema": JSON_SCHEMA, **meta, "columns": header, "rows": rows}
        path.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {path}")
    return path


def _meta(spec: ExperimentSpec, threads: int) -> dict:
    config = resolved_config_dict(spec, threads)
    # out and threads are execution details; embedding them would break the
    # byte-identity of reruns into a different directory or pool size
    del config["out"], config["threads"]
    return {"seed": spec.seed, "config": json.dumps(config, sort_keys=True, separators=(",", ":"))}


def _resolve_threads(flag: int | None, spec_threads: int | None) -> int:
    if flag is not None:
        value = flag
    elif os.environ.get("RISKBANDIT_THREADS"):
        raw = os.environ["RISKBANDIT_THREADS"]
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"RISKBANDIT_THREADS: expected an integer, got {raw!r}") from None
    elif spec_threads is not None:
        value = spec_threads
    else:
        value = os.cpu_count() or 1
    if value < 1:
        raise ConfigError(f"threads: must be >= 1, got {value}")
    return value


def _apply_overrides(spec: ExperimentSpec, args) -> ExperimentSpec:
    if args.seed is not None:
        try:
            spec.seed = validate_seed(args.seed)
        except ValueError as exc:
            raise ConfigError(f"--seed: {exc}") from None
    if args.out is not None:
        spec.out = args.out
    if args.format is not None:
        spec.format = args.format
    return spec


def _write_summary(out_dir: Path, name: str, payload: dict) -> None:
    path = out_dir / name
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_run(args) -> int:
    started = datetime.now(timezone.utc).isoformat()
    clock = time.perf_counter()
    spec = _apply_overrides(load_experiment_spec(args.spec), args)
    threads = _resolve_threads(args.threads, spec.threads)
    out_dir = Path(spec.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = _meta(spec, threads)

    policy_stats = {}
    for entry in spec.policies:
        ledgers = []
        per_instance_final = []
        for inst in range(spec.instances):
            problem = build_problem(spec.problem, spec.seed, inst)
            policy = resolve_policy(entry, problem.k, spec.horizon)
            cfg = RunConfig(
                problem=problem,
                policy=policy,
                horizon=spec.horizon,
                seed=derive_seed(spec.seed, EPISODE_DOMAIN, inst),
                n_runs=spec.runs,
            )
            batch = run_many(cfg, threads=threads)
            ledgers.extend(batch)
            per_instance_final.append(sum(led.regret[-1] for led in batch) / len(batch))

        label = _sanitize(entry.label)
        curve = aggregate_regret(ledgers)
        _write_table(
            out_dir,
            f"regret_curve_{label}",
            spec.format,
            ["t", "mean_theoretical_regret", "mean_empirical_regret", "std"],
            zip(
                (int(t) for t in curve.t),
                (float(v) for v in curve.mean_regret),
                (float(v) for v in curve.mean_regret_emp),
                (float(v) for v in curve.std_regret),
            ),
            meta,
        )
        cdf = sorted_reward_cdf(ledgers)
        _write_table(
            out_dir,
            f"sorted_rewards_{label}",
            spec.format,
            ["rank", "mean_reward"],
            ((rank + 1, float(v)) for rank, v in enumerate(cdf)),
            meta,
        )
        finals = sorted_final_regret(per_instance_final)
        _write_table(
            out_dir,
            f"sorted_final_regret_{label}",
            spec.format,
            ["rank", "mean_final_regret"],
            ((rank + 1, float(v)) for rank, v in enumerate(finals)),
            meta,
        )
        policy_stats[entry.label] = {
            "mean_final_regret": float(curve.mean_regret[-1]),
            "mean_final_regret_emp": float(curve.mean_regret_emp[-1]),
        }

    _write_summary(
        out_dir,
        "summary.json",
        {
            "schema": JSON_SCHEMA,
            "command": "run",
            "seed": spec.seed,
            "config": resolved_config_dict(spec, threads),
            "policies": policy_stats,
            "timing": {
                "started_at": started,
                "wall_seconds": round(time.perf_counter() - clock, 3),
            },
        },
    )
    return 0


def cmd_sweep(args) -> int:
    started = datetime.now(timezone.utc).isoformat()
    clock = time.perf_counter()
    spec = _apply_overrides(load_experiment_spec(args.spec), args)
    threads = _resolve_threads(args.threads, spec.threads)
    out_dir = Path(spec.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = _meta(spec, threads)

    problem = build_problem(spec.problem, spec.seed, 0)
    cell_counts = {}
    for entry in spec.policies:
        policy = resolve_policy(entry, problem.k, spec.horizon)
        base = RunConfig(
            problem=problem,
            policy=policy,
            horizon=spec.horizon,
            seed=derive_seed(spec.seed, EPISODE_DOMAIN, 0),
            n_runs=spec.runs,
        )
        grid = entry.sweep or {}
        cells = sweep(base, grid, threads=threads)
        param_names = list(grid)
        _write_table(
            out_dir,
            f"sweep_{_sanitize(entry.label)}",
            spec.format,
            param_names + ["mean_final_regret", "mean_final_regret_emp", "std_final_regret"],
            (
                [cell.params[n] for n in param_names]
                + [cell.mean_final_regret, cell.mean_final_regret_emp, cell.std_final_regret]
                for cell in cells
            ),
            meta,
        )
        cell_counts[entry.label] = len(cells)

    _write_summary(
        out_dir,
        "sweep_summary.json",
        {
            "schema": JSON_SCHEMA,
            "command": "sweep",
            "seed": spec.seed,
            "config": resolved_config_dict(spec, threads),
            "cells": cell_counts,
            "timing": {
                "started_at": started,
                "wall_seconds": round(time.perf_counter() - clock, 3),
            },
        },
    )
    return 0


_BOUND_KEYS = {
    "n_arms",
    "density_floor",
    "max_mean_gap",
    "min_infimum_gap",
    "t",
    "delta",
    "mean_gaps",
    "epsilon",
    "n_optimal",
}


def _bound_result_dict(result: BoundResult) -> dict:
    return {
        "high_prob": result.high_prob,
        "expectation": result.expectation,
        "note": result.note,
    }


def cmd_bound(args) -> int:
    try:
        with open(args.inputs) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read inputs {args.inputs}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {args.inputs}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{args.inputs}: expected a JSON object")
    for key in doc:
        if key not in _BOUND_KEYS:
            raise ConfigError(f"{args.inputs}: unknown key {key!r}")
    if "mean_gaps" in doc:
        if not isinstance(doc["mean_gaps"], list):
            raise ConfigError(f"{args.inputs}: mean_gaps must be a list")
        doc["mean_gaps"] = tuple(float(g) for g in doc["mean_gaps"])
    try:
        inputs = BoundInputs(**doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{args.inputs}: {exc}") from None

    output = {
        "inputs": {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(inputs).items()},
        "min_policy": _bound_result_dict(min_regret_bound(inputs)),
        "min_policy_aligned": _bound_result_dict(min_regret_bound_aligned(inputs)),
        "ucb": (
            ucb_regret_bound(inputs.mean_gaps, inputs.t) if inputs.mean_gaps is not None else None
        ),
    }
    print(json.dumps(output, indent=2))
    return 0


def cmd_check_lemma(args) -> int:
    if args.trials < 1:
        raise ConfigError(f"--trials: must be >= 1, got {args.trials}")
    if args.t < 0:
        raise ConfigError(f"--t: must be >= 0, got {args.t}")
    if args.epsilon <= 0:
        raise ConfigError(f"--epsilon: must be positive, got {args.epsilon}")
    if args.arms < 1:
        raise ConfigError(f"--arms: must be >= 1, got {args.arms}")
    try:
        seed = validate_seed(args.seed)
    except ValueError as exc:
        raise ConfigError(f"--seed: {exc}") from None
    try:
        segment = UniformSegment(center=args.center, radius=args.radius)
    except ValueError as exc:
        raise ConfigError(f"--center/--radius: {exc}") from None

    from .rng import make_rng

    rng = make_rng(seed)
    if args.arms == 1:
        check = min_tail_check(segment, args.t, args.epsilon, args.trials, rng)
    else:
        problem = BanditProblem.from_arms(
            [segment] * args.arms, lower_bound_A=1.0 / (2.0 * segment.radius)
        )
        check = min_tail_check_any(problem, args.t, args.epsilon, args.trials, rng)

    print(
        json.dumps(
            {
                "arms": args.arms,
                "center": args.center,
                "radius": args.radius,
                "t": args.t,
                "epsilon": args.epsilon,
                "trials": args.trials,
                "seed": seed,
                "empirical_prob": check.empirical_prob,
                "bound": check.bound,
                "std_error": check.std_error,
                "passed": check.passed,
            },
            indent=2,
        )
    )
    return 0


# ---------------------------------------------------------------------------
# parser / entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskbandit",
        description="Risk-aware bandit benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec_flags(p):
        p.add_argument("--spec", required=True, help="experiment spec (YAML)")
        p.add_argument("--out", help="output directory (overrides spec)")
        p.add_argument("--seed", type=int, help="master seed (overrides spec)")
        p.add_argument("--threads", type=int, help="worker threads (overrides spec and env)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (overrides spec)")

    p_run = sub.add_parser("run", help="run all (policy, instance, run) cells of a spec")
    add_spec_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="expand policy sweep grids, one row per cell")
    add_spec_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_bound = sub.add_parser("bound", help="evaluate closed-form regret bounds from JSON inputs")
    p_bound.add_argument("--inputs", required=True, help="JSON file of bound inputs")
    p_bound.set_defaults(func=cmd_bound)

    p_lemma = sub.add_parser("check-lemma", help="Monte Carlo check of the minimum tail bound")
    p_lemma.add_argument("--center", type=float, required=True)
    p_lemma.add_argument("--radius", type=float, required=True)
    p_lemma.add_argument("--arms", type=int, default=1, help="identical arms (default 1)")
    p_lemma.add_argument("--t", type=int, required=True, help="draws per arm")
    p_lemma.add_argument("--epsilon", type=float, required=True)
    p_lemma.add_argument("--trials", type=int, required=True)
    p_lemma.add_argument("--seed", type=int, default=0)
    p_lemma.set_defaults(func=cmd_check_lemma)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on flag errors; that is a validation failure here
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DegenerateMixtureError, OSError, RuntimeError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
