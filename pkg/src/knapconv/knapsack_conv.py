"""Knapsack convolution: merging two solution profiles with a certificate.

The greedy fractional optimum is within one item value of the integral one, so
for two instances ``A`` and ``B`` the merged greedy (fractional) profile ``c'``
tells, for every capacity split ``(i, j)``, whether ``a_i + b_j`` can possibly
be optimal.  The splits that survive form monotone intervals with error
``4 * v_max``, which is exactly what :func:`conv_via_prediction` needs.

Fractional values are handled as ``(numerator, denominator)`` pairs with the
denominator an item size, and compared by clearing denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cmp_to_key
from fractions import Fraction
from typing import NamedTuple, Sequence

from .maxplus_core import DomainError
from .prediction import UncertainSolution, conv_via_prediction

UNBOUNDED = math.inf


class Item(NamedTuple):
    size: int
    value: int
    mult: float = 1  # an int, or UNBOUNDED

    @property
    def unbounded(self) -> bool:
        return self.mult == UNBOUNDED


@dataclass(frozen=True)
class KnapsackInstance:
    capacity: int
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(as_items(self.items)))
        if self.capacity < 0:
            raise DomainError("capacity must be non-negative")

    @property
    def v_max(self) -> int:
        return max((it.value for it in self.items), default=0)

    @property
    def s_max(self) -> int:
        return max((it.size for it in self.items), default=0)


def as_items(items) -> list:
    out = []
    for it in items:
        if not isinstance(it, Item):
            it = Item(*it)
        s, v, m = it
        if int(s) != s or s < 1:
            raise DomainError(f"item size must be a positive integer, got {s!r}")
        if int(v) != v or v < 0:
            raise DomainError(f"item value must be a non-negative integer, got {v!r}")
        if m != UNBOUNDED and (int(m) != m or m < 1):
            raise DomainError(f"multiplicity must be a positive integer or unbounded, got {m!r}")
        out.append(Item(int(s), int(v), m if m == UNBOUNDED else int(m)))
    return out


def _ratio_cmp(p, q) -> int:
    (sp, vp, ip), (sq, vq, iq) = p, q
    lhs, rhs = vp * sq, vq * sp
    if lhs != rhs:
        return -1 if lhs > rhs else 1
    if sp != sq:
        return -1 if sp < sq else 1
    return (ip > iq) - (ip < iq)


def greedy_order(items: Sequence) -> list:
    """Indices sorted by value/size descending, then smaller size, then index."""
    keyed = [(it[0], it[1], i) for i, it in enumerate(items)]
    keyed.sort(key=cmp_to_key(_ratio_cmp))
    return [i for _, _, i in keyed]


@dataclass
class FracProfile:
    """Exact fractional optimum at every integer capacity ``0..t``."""

    nums: list
    dens: list

    def __len__(self):
        return len(self.nums)

    def value(self, x: int) -> Fraction:
        return Fraction(self.nums[x], self.dens[x])

    def values(self) -> list:
        return [Fraction(p, q) for p, q in zip(self.nums, self.dens)]


def _greedy_profile(items, order, t) -> FracProfile:
    nums = [0] * (t + 1)
    dens = [1] * (t + 1)
    x = 0
    total = 0
    for idx in order:
        if x >= t:
            break
        s, v = items[idx][0], items[idx][1]
        top = min(x + s, t)
        for cap in range(x + 1, top + 1):
            nums[cap] = total * s + v * (cap - x)
            dens[cap] = s
        x += s
        total += v
    for cap in range(x + 1, t + 1):
        nums[cap] = total
    return FracProfile(nums, dens)


def greedy_fractional_profile(inst: KnapsackInstance) -> FracProfile:
    items = [(it.size, it.value) for it in inst.items]
    return _greedy_profile(items, greedy_order(items), inst.capacity)


@dataclass
class FracConv:
    """Merged greedy for two instances.

    ``value(x) == a_frac(Fa[x]) + b_frac(Fb[x])``; ``Fa_inv[i]`` is the
    smallest capacity at which ``i`` units of A have been taken.
    """

    a_frac: FracProfile
    b_frac: FracProfile
    Fa: list
    Fb: list
    Fa_inv: list

    def value(self, x: int) -> Fraction:
        return self.a_frac.value(self.Fa[x]) + self.b_frac.value(self.Fb[x])

    def values(self) -> list:
        return [self.value(x) for x in range(len(self.Fa))]


def _padded(items, cap):
    # a zero-value filler guarantees the instance can fill its whole capacity
    return [(it[0], it[1]) for it in items] + [(max(cap, 1), 0)]


def fractional_conv_profile(A: KnapsackInstance, B: KnapsackInstance) -> FracConv:
    ta, tb = A.capacity, B.capacity
    ia = _padded(A.items, ta)
    ib = _padded(B.items, tb)
    oa = greedy_order(ia)
    ob = greedy_order(ib)
    a_frac = _greedy_profile(ia, oa, ta)
    b_frac = _greedy_profile(ib, ob, tb)

    merged = [(s, v, 0, i) for i, (s, v) in enumerate(ia)] + [(s, v, 1, len(ia) + i) for i, (s, v) in enumerate(ib)]
    merged.sort(key=cmp_to_key(lambda p, q: _ratio_cmp((p[0], p[1], p[3]), (q[0], q[1], q[3]))))

    T = ta + tb
    Fa = [0] * (T + 1)
    Fb = [0] * (T + 1)
    used = [0, 0]
    caps = (ta, tb)
    x = 0
    for s, _v, owner, _i in merged:
        take = min(s, caps[owner] - used[owner])
        for _ in range(take):
            x += 1
            used[owner] += 1
            Fa[x], Fb[x] = used
        if x >= T:
            break
    Fa_inv = [0] * (ta + 1)
    seen = 0
    for y in range(T + 1):
        if Fa[y] == seen:
            Fa_inv[seen] = y
            seen += 1
            if seen > ta:
                break
    return FracConv(a_frac, b_frac, Fa, Fb, Fa_inv)


def _gap_at_most(fc: FracConv, i: int, y: int, bound: int) -> bool:
    """``c'(i+y) - a'(i) - b'(y) <= bound``, exactly."""
    af, bf = fc.a_frac, fc.b_frac
    x = i + y
    p1, q1 = af.nums[fc.Fa[x]], af.dens[fc.Fa[x]]
    p2, q2 = bf.nums[fc.Fb[x]], bf.dens[fc.Fb[x]]
    p3, q3 = af.nums[i], af.dens[i]
    p4, q4 = bf.nums[y], bf.dens[y]
    # multiply through by q1*q2*q3*q4 > 0
    q12, q34 = q1 * q2, q3 * q4
    return (p1 * q2 + p2 * q1) * q34 - (p3 * q4 + p4 * q3) * q12 <= bound * q12 * q34


def build_uncertain_intervals(A: KnapsackInstance, B: KnapsackInstance,
                              fc: FracConv | None = None) -> UncertainSolution:
    """Certificate of error ``4 * v_max`` for convolving the profiles of A and B.

    For each ``i`` the gap ``g_i(y) = c'(i+y) - a'(i) - b'(y)`` is zero at
    ``y = Fa_inv[i] - i``, non-increasing before it and non-decreasing after,
    so the set ``{y : g_i(y) <= 2 v_max}`` is an interval found by two binary
    searches.
    """
    if fc is None:
        fc = fractional_conv_profile(A, B)
    v = max(A.v_max, B.v_max)
    bound = 2 * v
    ta, tb = A.capacity, B.capacity
    xs, ys = [], []
    for i in range(ta + 1):
        peak = fc.Fa_inv[i] - i
        lo, hi = 0, peak  # smallest y in [0, peak] with gap <= bound
        while lo < hi:
            mid = (lo + hi) // 2
            if _gap_at_most(fc, i, mid, bound):
                hi = mid
            else:
                lo = mid + 1
        xs.append(lo)
        lo, hi = peak, tb  # largest y in [peak, tb] with gap <= bound
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if _gap_at_most(fc, i, mid, bound):
                lo = mid
            else:
                hi = mid - 1
        ys.append(lo)
    u = UncertainSolution(xs, ys, 4 * v)
    assert u.is_monotone(), "knapsack certificate intervals are not monotone"
    return u


def knapsack_conv(A: KnapsackInstance, B: KnapsackInstance, a: Sequence, b: Sequence, *,
                  strict: bool = True, naive_cutoff: int = 0, backend: str | None = None,
                  trace: list | None = None) -> list:
    """``a * b`` where ``a`` and ``b`` are the solution profiles of ``A`` and ``B``.

    The capacities of ``A`` and ``B`` are taken from the profile lengths.  When
    the profiles are only approximate (as inside the randomized solvers) pass
    ``strict=False``: the result is then never above the true convolution.
    """
    a = list(a)
    b = list(b)
    A = KnapsackInstance(len(a) - 1, A.items)
    B = KnapsackInstance(len(b) - 1, B.items)
    u = build_uncertain_intervals(A, B)
    return conv_via_prediction(a, b, u, strict=strict, naive_cutoff=naive_cutoff, backend=backend,
                               trace=trace)
