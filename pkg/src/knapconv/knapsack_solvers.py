"""Knapsack solvers built on the convolution stack, plus the classic DP oracle.

Profiles are lists ``p`` with ``p[x]`` the best value of a packing of total size
at most ``x``.  Randomized solvers take a :class:`SolverConfig`; their output is
a deterministic function of the inputs and ``cfg.seed``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .bounded_conv import _bounded_unchecked
from .knapsack_conv import UNBOUNDED, Item, KnapsackInstance, as_items, greedy_order, knapsack_conv
from .maxplus_core import INT64_MAX, DomainError, MaxPlusOverflowError, check_int64
from .rng import DEFAULT_SEED, stream
from .vector_power import fast_power


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the randomized solvers.

    ``C`` and ``repetitions`` left as ``None`` pick per-solver defaults.
    ``naive_cutoff`` is handed to the prediction routine inside every knapsack
    convolution.
    """

    C: int | None = None
    repetitions: int | None = None
    seed: int = DEFAULT_SEED
    naive_cutoff: int = 0

    def __post_init__(self):
        if self.C is not None and self.C < 1:
            raise DomainError("C must be >= 1")
        if self.repetitions is not None and self.repetitions < 1:
            raise DomainError("repetitions must be >= 1")


def default_C(t: int) -> int:
    return max(4, math.ceil(math.log2(t + 2)) + 2)


def _cap_value_bound(t, items):
    bound = 0
    for s, v, m in items:
        copies = t // s if m == UNBOUNDED else min(m, t // s)
        bound += copies * v
    if bound > INT64_MAX:
        raise MaxPlusOverflowError("achievable value may exceed the signed 64-bit range")


# ---------------------------------------------------------------- classic DP

def _bounded_item(dp: np.ndarray, s: int, v: int, m: int) -> np.ndarray:
    """Add up to ``m`` copies of ``(s, v)`` with a sliding-window max per residue."""
    out = dp.copy()
    t = len(dp) - 1
    for r in range(min(s, t + 1)):
        seq = dp[r::s].tolist()
        win = deque()  # indices j with decreasing seq[j] - j*v
        res = []
        for k, val in enumerate(seq):
            key = val - k * v
            while win and seq[win[-1]] - win[-1] * v <= key:
                win.pop()
            win.append(k)
            if win[0] < k - m:
                win.popleft()
            j = win[0]
            res.append(seq[j] + (k - j) * v)
        out[r::s] = res
    return out


def _unbounded_item(dp: np.ndarray, s: int, v: int) -> np.ndarray:
    out = dp.copy()
    for r in range(min(s, len(dp))):
        seq = dp[r::s]
        ramp = np.arange(len(seq), dtype=np.int64) * v
        out[r::s] = np.maximum.accumulate(seq - ramp) + ramp
    return out


def classic_dp(t: int, items) -> list:
    """Exact profile over capacities ``0..t`` in ``O(n t)``; any multiplicities."""
    if t < 0:
        raise DomainError("capacity must be non-negative")
    items = as_items(items)
    _cap_value_bound(t, items)
    dp = np.zeros(t + 1, dtype=np.int64)
    for s, v, m in items:
        if s > t or v == 0:
            continue
        if m == UNBOUNDED or m >= t // s:
            dp = _unbounded_item(dp, s, v)
        elif m == 1:
            dp[s:] = np.maximum(dp[s:], dp[:-s] + v)
        else:
            dp = _bounded_item(dp, s, v, m)
    return [int(x) for x in dp]


# ------------------------------------------------------- bounded-value 0/1 path

def _single_item_profile(cap: int, items) -> list:
    best = [0] * (cap + 1)
    for s, v, _ in items:
        if s <= cap and v > best[s]:
            best[s] = v
    for x in range(1, cap + 1):
        if best[x - 1] > best[x]:
            best[x] = best[x - 1]
    return best


def _extend(p: list, length: int) -> list:
    if len(p) >= length:
        return p[:length]
    return p + [p[-1]] * (length - len(p))


def _elementwise_max(ps: list, length: int) -> list:
    out = [0] * length
    for p in ps:
        for i, x in enumerate(_extend(p, length)):
            if x > out[i]:
                out[i] = x
    return out


def bounded_solution_knapsack(t: int, items, cfg: SolverConfig = SolverConfig(), _path=()) -> list:
    """Profile of packings that use few items (Monte Carlo).

    Each of ``C`` rounds throws the items into ``C**2`` lists, keeps the best
    single item of every list per capacity and max-plus multiplies the lists.
    A packing whose items land in distinct lists is found exactly.
    """
    items = [it for it in as_items(items) if it.size <= t and it.value > 0]
    if not items:
        return [0] * (t + 1)
    if len(items) == 1:
        return _single_item_profile(t, items)
    C = cfg.C or default_C(t)
    reps = []
    for rep in range(C):
        rng = stream(cfg.seed, "solution", *_path, rep)
        owner = rng.integers(0, C * C, size=len(items))
        groups: dict = {}
        for it, o in zip(items, owner.tolist()):
            groups.setdefault(o, []).append(it)
        acc = None
        for o in sorted(groups):
            vec = _single_item_profile(t, groups[o])
            if acc is None:
                acc = vec
            else:
                acc = _bounded_unchecked(acc, vec, max(acc[-1], vec[-1]))[:t + 1]
        reps.append(acc)
    return _elementwise_max(reps, t + 1)


def _merge_tree(parts: list, t: int, cfg: SolverConfig) -> tuple:
    """Balanced pairwise knapsack convolution of ``(items, profile)`` parts."""
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    li, lp = _merge_tree(parts[:mid], t, cfg)
    ri, rp = _merge_tree(parts[mid:], t, cfg)
    merged = knapsack_conv(KnapsackInstance(len(lp) - 1, li), KnapsackInstance(len(rp) - 1, ri), lp, rp,
                           strict=False, naive_cutoff=cfg.naive_cutoff)
    return li + ri, merged[:t + 1]


def bounded_range_knapsack(t: int, items, r1: int, r2: int, cfg: SolverConfig = SolverConfig(), _path=()) -> list:
    """Profile for items whose sizes all lie in ``[r1, r2]`` with ``r2 <= 2 r1``."""
    items = [it for it in as_items(items) if it.size <= t and it.value > 0]
    if r1 < 1 or r2 < r1 or r2 > 2 * r1:
        raise DomainError("need 1 <= r1 <= r2 <= 2 r1")
    for it in items:
        if not r1 <= it.size <= r2:
            raise DomainError(f"item size {it.size} outside [{r1}, {r2}]")
    if not items:
        return [0] * (t + 1)
    C = cfg.C or default_C(t)
    lists = max(1, -(-t // r1))
    cap = min(t, C * r2)
    reps = []
    for rep in range(C):
        rng = stream(cfg.seed, "range", *_path, rep)
        owner = rng.integers(0, lists, size=len(items))
        groups: dict = {}
        for it, o in zip(items, owner.tolist()):
            groups.setdefault(o, []).append(it)
        parts = []
        for o in sorted(groups):
            prof = bounded_solution_knapsack(cap, groups[o], cfg, _path + (rep, o))
            parts.append((groups[o], prof))
        reps.append(_merge_tree(parts, t, cfg)[1])
    return _elementwise_max(reps, t + 1)


def knapsack_via_conv(t: int, items, cfg: SolverConfig = SolverConfig()) -> list:
    """0/1 knapsack profile in roughly ``v_max * t`` time (Monte Carlo).

    Items are grouped by size into ``[2**(i-1), 2**i - 1]``, each group is
    solved by :func:`bounded_range_knapsack`, and the group profiles are merged
    by knapsack convolution.
    """
    if t < 0:
        raise DomainError("capacity must be non-negative")
    items = as_items(items)
    for it in items:
        if it.mult != 1:
            raise DomainError("knapsack_via_conv takes 0/1 items only")
    useful = [it for it in items if it.size <= t and it.value > 0]
    buckets: dict = {}
    for it in useful:
        buckets.setdefault(it.size.bit_length(), []).append(it)
    parts = []
    for i in sorted(buckets):
        r1, r2 = 1 << (i - 1), (1 << i) - 1
        prof = bounded_range_knapsack(t, buckets[i], r1, max(r1, r2), cfg, ("bucket", i))
        parts.append((buckets[i], prof))
    if not parts:
        return [0] * (t + 1)
    acc_items, acc = parts[0]
    for its, prof in parts[1:]:
        acc = knapsack_conv(KnapsackInstance(len(acc) - 1, acc_items), KnapsackInstance(len(prof) - 1, its),
                            acc, prof, strict=False, naive_cutoff=cfg.naive_cutoff)[:t + 1]
        acc_items = acc_items + its
    out = _extend(acc, t + 1)
    assert out[0] == 0 and all(p <= q for p, q in zip(out, out[1:])), "profile must be non-decreasing from 0"
    return out


# ------------------------------------------------------------------ unbounded

def unbounded_via_power(t: int, items, **kw) -> list:
    """Unbounded knapsack profile as the ``t``-th power of the best-item vector."""
    if t < 0:
        raise DomainError("capacity must be non-negative")
    items = as_items(items)
    a = [0] * (t + 1)
    for s, v, _ in items:
        if s <= t and v > a[s]:
            a[s] = v
    _cap_value_bound(t, [Item(s, v, UNBOUNDED) for s, v, _ in items])
    if t == 0:
        return [0]
    return fast_power(a, t, prefix_cap=t + 1, e_max=max(a), **kw)


# ---------------------------------------------------------- small item sizes

@dataclass(frozen=True)
class WindowedProfile:
    """A profile known only on capacities ``offset .. offset + len(values) - 1``."""

    offset: int
    values: tuple

    @property
    def hi(self) -> int:
        return self.offset + len(self.values) - 1

    def at_most(self, x: int) -> int:
        """Best known value with capacity ``<= x`` (0 if the window starts above ``x``)."""
        if x < self.offset:
            return 0
        return int(max(self.values[:x - self.offset + 1]))


def _window_merge(p: WindowedProfile, q: WindowedProfile, lo: int, hi: int) -> WindowedProfile:
    full_lo, full_hi = p.offset + q.offset, p.hi + q.hi
    hi = min(hi, full_hi)
    lo = min(max(lo, full_lo), hi)
    hi = max(hi, lo)
    out = np.full(hi - lo + 1, -1, dtype=np.int64)
    pv = np.asarray(p.values, dtype=np.int64)
    qv = np.asarray(q.values, dtype=np.int64)
    if len(pv) > len(qv):
        p, q, pv, qv = q, p, qv, pv
    for i, val in enumerate(pv.tolist()):
        # q index j lands on capacity p.offset + i + q.offset + j
        base = p.offset + i + q.offset
        j0 = max(0, lo - base)
        j1 = min(len(qv) - 1, hi - base)
        if j0 > j1:
            continue
        seg = out[base + j0 - lo: base + j1 - lo + 1]
        np.maximum(seg, qv[j0:j1 + 1] + val, out=seg)
    # capacities not reachable as a sum inside the windows inherit from the left
    np.maximum.accumulate(out, out=out)
    out[out < 0] = 0
    return WindowedProfile(lo, tuple(out.tolist()))


def knapsack_small_sizes(t: int, items, cfg: SolverConfig = SolverConfig(), return_window: bool = False):
    """Optimum at capacity ``t`` for 0/1 items of small size (Monte Carlo).

    Items go into ``ceil(t / s_max)`` random buckets, each solved exactly up to
    ``(C + 2) s_max``.  Buckets are merged pairwise; a group covering a
    fraction ``p`` of the buckets keeps only capacities within
    ``C sqrt(s_max p t) + s_max`` of ``p t``, where the optimum's share lands
    with high probability.
    """
    if t < 0:
        raise DomainError("capacity must be non-negative")
    items = [it for it in as_items(items) if it.value > 0 and it.size <= t]
    for it in items:
        if it.mult != 1:
            raise DomainError("knapsack_small_sizes takes 0/1 items only")
    total_v = sum(it.value for it in items)
    if total_v > INT64_MAX:
        raise MaxPlusOverflowError("sum of values exceeds the signed 64-bit range")
    if sum(it.size for it in items) <= t:
        return (total_v, WindowedProfile(t, (total_v,))) if return_window else total_v
    n = len(items)
    s_max = max(it.size for it in items)
    C = cfg.C if cfg.C is not None else 40 * math.log(n + 2)
    reps = cfg.repetitions or 2
    n_buckets = max(1, -(-t // s_max))
    bucket_cap = min(t, math.ceil((C + 2) * s_max))

    best, best_win = -1, None
    for rep in range(reps):
        rng = stream(cfg.seed, "small", rep)
        owner = rng.integers(0, n_buckets, size=n).tolist()
        groups = [[] for _ in range(n_buckets)]
        for it, o in zip(items, owner):
            groups[o].append(it)
        level = []
        for g in groups:
            cap = min(bucket_cap, sum(it.size for it in g))
            level.append((1, WindowedProfile(0, tuple(classic_dp(cap, g)))))
        while len(level) > 1:
            nxt = []
            for k in range(0, len(level) - 1, 2):
                (c1, p1), (c2, p2) = level[k], level[k + 1]
                cnt = c1 + c2
                mu = t * cnt / n_buckets
                half = C * math.sqrt(s_max * mu) + s_max
                lo = max(0, math.floor(mu - half))
                hi = min(t, math.ceil(mu + half))
                nxt.append((cnt, _window_merge(p1, p2, lo, hi)))
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        win = level[0][1]
        val = win.at_most(t)
        if val > best:
            best, best_win = val, win
    return (best, best_win) if return_window else best


def _binary_split(count: int) -> list:
    """Group sizes 1, 2, 4, ... plus a remainder, summing to ``count``."""
    out, k = [], 1
    while count > 0:
        take = min(k, count)
        out.append(take)
        count -= take
        k <<= 1
    return out


def expand_copies(t: int, items, literal: bool = False) -> list:
    """0/1 items standing for up to ``min(m, t // s)`` copies of each item."""
    out = []
    for s, v, m in as_items(items):
        copies = t // s if m == UNBOUNDED else min(m, t // s)
        if copies <= 0:
            continue
        groups = [1] * copies if literal else _binary_split(copies)
        out.extend(Item(s * g, v * g, 1) for g in groups)
    return out


def unbounded_small_sizes(t: int, items, cfg: SolverConfig = SolverConfig(), literal: bool = False) -> int:
    """Unbounded optimum at ``t``: best item per size, copied, then the 0/1 solver."""
    champs: dict = {}
    for s, v, _ in as_items(items):
        if s not in champs or v > champs[s]:
            champs[s] = v
    return knapsack_small_sizes(t, expand_copies(t, [Item(s, v, UNBOUNDED) for s, v in champs.items()], literal), cfg)


def _ratio_best(items) -> int:
    best = 0
    for i in range(1, len(items)):
        s, v = items[i][0], items[i][1]
        sb, vb = items[best][0], items[best][1]
        if v * sb > vb * s:
            best = i
    return best


def knapsack_infinite_mult(t: int, items, cfg: SolverConfig = SolverConfig()) -> int:
    """Unbounded optimum at ``t``; time independent of ``t`` beyond ``s_max**2``.

    Some optimum uses fewer than ``s_H`` items other than the best-ratio item
    ``H``, so all but about ``s_max**2`` of the capacity goes to copies of ``H``.
    """
    if t < 0:
        raise DomainError("capacity must be non-negative")
    items = [Item(it.size, it.value, UNBOUNDED) for it in as_items(items)]
    if not items:
        return 0
    s_max = max(it.size for it in items)
    h = items[_ratio_best(items)]
    cnt = max(0, (t - s_max * s_max) // h.size)
    rest = t - cnt * h.size
    base = check_int64(cnt * h.value)
    if len(items) <= s_max:
        tail = classic_dp(rest, items)[rest]
    else:
        tail = unbounded_small_sizes(rest, items, cfg)
    return check_int64(base + tail)


def knapsack_given_mult(t: int, items, cfg: SolverConfig = SolverConfig()) -> int:
    """Optimum at ``t`` with finite multiplicities.

    A greedy fill of ``t - s_max**2`` decides most copies: every item the greedy
    takes ``b`` copies of appears at least ``b - s_max`` times in some optimum.
    Those copies are committed and the small remainder is solved exactly.
    """
    if t < 0:
        raise DomainError("capacity must be non-negative")
    items = as_items(items)
    for it in items:
        if it.unbounded:
            raise DomainError("knapsack_given_mult needs finite multiplicities")
    if not items:
        return 0
    s_max = max(it.size for it in items)
    room = max(0, t - s_max * s_max)
    commit = [0] * len(items)
    for i in greedy_order([(it.size, it.value) for it in items]):
        s, v, m = items[i]
        b = min(m, room // s)
        room -= b * s
        commit[i] = max(0, b - s_max)
        if b != m:
            break
    surplus = check_int64(sum(c * it.value for c, it in zip(commit, items)))
    rest = t - sum(c * it.size for c, it in zip(commit, items))
    reduced = [Item(it.size, it.value, it.mult - c) for c, it in zip(commit, items) if it.mult - c > 0]
    if len(reduced) <= s_max:
        tail = classic_dp(rest, reduced)[rest]
    else:
        tail = knapsack_small_sizes(rest, expand_copies(rest, reduced), cfg)
    return check_int64(surplus + tail)
