"""Time the compiled episode kernels against their interpreted twins.

Every kernel produced by ``maybe_jit`` carries the original Python function
as ``.py_func``, so both paths can be timed in one process.  Reported per
episode, median over repeats, after one untimed warm-up call per path.

Usage::

    python3 benchmarks/bench_kernels.py [--arms 20] [--horizon 2000] [--repeats 5]
"""

import argparse
import statistics
import time

from riskbandit import kernels
from riskbandit._jit import jit_enabled
from riskbandit.rng import make_rng

CASES = [
    ("episode_ucb", lambda r: (r, 0.001)),
    ("episode_min", lambda r: (r,)),
    ("episode_marab", lambda r: (r, 0.001, 0.05)),
    ("episode_mvlcb", lambda r: (r, 1.0, 0.001)),
    ("episode_expexp", lambda r: (r, 1.0, r.shape[0] * 10)),
]


def _time(fn, args, repeats):
    fn(*args)
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--arms", type=int, default=20)
    parser.add_argument("--horizon", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rewards = make_rng(args.seed).random((args.arms, args.horizon))
    print(
        f"arms={args.arms} horizon={args.horizon} repeats={args.repeats} "
        f"jit={'on' if jit_enabled() else 'off (RISKBANDIT_JIT)'}"
    )
    header = f"{'kernel':<16} {'compiled ms':>12} {'python ms':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, build in CASES:
        fn = getattr(kernels, name)
        fn_args = build(rewards)
        compiled = _time(fn, fn_args, args.repeats)
        interpreted = _time(fn.py_func, fn_args, args.repeats)
        ratio = interpreted / compiled if compiled > 0 else float("inf")
        print(f"{name:<16} {compiled * 1e3:>12.3f} {interpreted * 1e3:>12.3f} {ratio:>8.1f}x")


if __name__ == "__main__":
    main()
