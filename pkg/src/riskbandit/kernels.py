"""Compiled episode loops.

Each kernel plays one full episode of one policy against a pre-drawn reward
table ``rewards`` of shape ``(k, horizon)``: entry ``[i, u]`` is the reward
the environment would hand out on the ``u``-th pull of arm ``i``.  Drawing
the table up front keeps the kernels free of RNG state and makes episodes
with a shared table directly comparable across policies.

Kernels return ``(chosen, reward_seq)``: the 1-based round ``t`` pulled arm
``chosen[t-1]`` and observed ``reward_seq[t-1]``.

The arithmetic here intentionally mirrors :mod:`riskbandit.estimators` and
:mod:`riskbandit.policies` operation for operation (same summation order,
same running-sum means, same guarded ceil), so a kernel episode reproduces
the object-layer episode bit for bit.  Compilation is controlled by the
``RISKBANDIT_JIT`` environment variable (see :mod:`riskbandit._jit`); the
interpreted fallback runs the same source.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import maybe_jit
from ._util import CEIL_EPS


@maybe_jit
def _insert_sorted(buf, n, x):
    # insertion point after any equal values, like bisect.insort
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if buf[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    for j in range(n, lo, -1):
        buf[j] = buf[j - 1]
    buf[lo] = x


@maybe_jit
def episode_ucb(rewards, c):
    k, horizon = rewards.shape
    chosen = np.empty(horizon, dtype=np.int64)
    reward_seq = np.empty(horizon, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    run_sum = np.zeros(k, dtype=np.float64)
    for t in range(1, horizon + 1):
        if t <= k:
            a = t - 1
        else:
            log_t = math.log(t)
            best = -math.inf
            a = 0
            for i in range(k):
                idx = run_sum[i] / counts[i] + c * math.sqrt(log_t / counts[i])
                if idx > best:
                    best = idx
                    a = i
        x = rewards[a, counts[a]]
        run_sum[a] += x
        counts[a] += 1
        chosen[t - 1] = a
        reward_seq[t - 1] = x
    return chosen, reward_seq


@maybe_jit
def episode_min(rewards):
    k, horizon = rewards.shape
    chosen = np.empty(horizon, dtype=np.int64)
    reward_seq = np.empty(horizon, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    mins = np.full(k, 2.0)
    for t in range(1, horizon + 1):
        if t <= k:
            a = t - 1
        else:
            best = -math.inf
            a = 0
            for i in range(k):
                if mins[i] > best:
                    best = mins[i]
                    a = i
        x = rewards[a, counts[a]]
        if x < mins[a]:
            mins[a] = x
        counts[a] += 1
        chosen[t - 1] = a
        reward_seq[t - 1] = x
    return chosen, reward_seq


@maybe_jit
def episode_marab(rewards, c, alpha):
    k, horizon = rewards.shape
    chosen = np.empty(horizon, dtype=np.int64)
    reward_seq = np.empty(horizon, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    hist = np.empty((k, horizon), dtype=np.float64)  # per-arm sorted rewards
    for t in range(1, horizon + 1):
        if t <= k:
            a = t - 1
        else:
            tail_t = int(math.ceil(t * alpha - CEIL_EPS))
            if tail_t < 1:
                tail_t = 1
            log_tail = math.log(tail_t)
            best = -math.inf
            a = 0
            for i in range(k):
                n_alpha = int(math.ceil(alpha * counts[i] - CEIL_EPS))
                if n_alpha < 1:
                    n_alpha = 1
                s = 0.0
                for j in range(n_alpha):
                    s += hist[i, j]
                idx = s / n_alpha - c * math.sqrt(log_tail / n_alpha)
                if idx > best:
                    best = idx
                    a = i
        x = rewards[a, counts[a]]
        _insert_sorted(hist[a], counts[a], x)
        counts[a] += 1
        chosen[t - 1] = a
        reward_seq[t - 1] = x
    return chosen, reward_seq


@maybe_jit
def episode_mvlcb(rewards, rho, delta):
    k, horizon = rewards.shape
    chosen = np.empty(horizon, dtype=np.int64)
    reward_seq = np.empty(horizon, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    run_sum = np.zeros(k, dtype=np.float64)
    m2 = np.zeros(k, dtype=np.float64)
    log_inv_delta = math.log(1.0 / delta)
    for t in range(1, horizon + 1):
        if t <= k:
            a = t - 1
        else:
            best = math.inf
            a = 0
            for i in range(k):
                mean = run_sum[i] / counts[i]
                var = m2[i] / counts[i]
                width = (5.0 + rho) * math.sqrt(log_inv_delta / (2.0 * counts[i]))
                idx = var - rho * mean - width
                if idx < best:
                    best = idx
                    a = i
        x = rewards[a, counts[a]]
        cnt = counts[a]
        prev_mean = run_sum[a] / cnt if cnt > 0 else 0.0
        run_sum[a] += x
        cnt += 1
        counts[a] = cnt
        m2[a] += (x - prev_mean) * (x - run_sum[a] / cnt)
        chosen[t - 1] = a
        reward_seq[t - 1] = x
    return chosen, reward_seq


@maybe_jit
def episode_expexp(rewards, rho, tau):
    k, horizon = rewards.shape
    chosen = np.empty(horizon, dtype=np.int64)
    reward_seq = np.empty(horizon, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    run_sum = np.zeros(k, dtype=np.float64)
    m2 = np.zeros(k, dtype=np.float64)
    frozen = -1
    for t in range(1, horizon + 1):
        if t <= tau:
            a = (t - 1) % k
        else:
            a = -1
            for i in range(k):  # guard against tau < k: finish initialisation first
                if counts[i] == 0:
                    a = i
                    break
            if a < 0:
                if frozen < 0:
                    best = math.inf
                    frozen = 0
                    for i in range(k):
                        mv = m2[i] / counts[i] - rho * (run_sum[i] / counts[i])
                        if mv < best:
                            best = mv
                            frozen = i
                a = frozen
        x = rewards[a, counts[a]]
        cnt = counts[a]
        prev_mean = run_sum[a] / cnt if cnt > 0 else 0.0
        run_sum[a] += x
        cnt += 1
        counts[a] = cnt
        m2[a] += (x - prev_mean) * (x - run_sum[a] / cnt)
        chosen[t - 1] = a
        reward_seq[t - 1] = x
    return chosen, reward_seq
