"""Powers ``a^{*k}`` of a value-bounded vector via self-made certificates.

With entries of ``a`` in ``[0, e]``, two adjacent powers ``hi = a^{*ceil(k/2)}``
and ``lo = a^{*floor(k/2)}`` always have an optimal split whose two parts
differ by at most ``e``.  Comparing prefix maxima of ``hi`` and ``lo`` then
gives a certificate for the prediction routine.  Only ``O(log k)`` distinct
exponents are ever needed.

The margin used is ``E = max(e, drop(hi), drop(lo))`` where ``drop`` is the
largest fall below an earlier maximum.  Within the first ``|a|`` entries a
power never falls by more than ``e``, so for prefix-truncated powers (the
knapsack use) ``E == e``.  Past that point a power can fall further, e.g.
``[5, 0, 0]`` squared is ``[10, 5, 5, 0, 0]``, and the wider margin keeps the
certificate valid.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from itertools import accumulate
from typing import Sequence

from .maxplus_core import DomainError, as_vector, is_finite
from .prediction import UncertainSolution, conv_via_prediction


def _check_bounded(a, e_max):
    for x in a:
        if not is_finite(x) or x < 0 or x > e_max:
            raise DomainError(f"power inputs must be integers in [0, {e_max}], got {x!r}")


def weakly_monotone(b: Sequence, e_max: int) -> bool:
    """True iff ``b_j >= b_i - e_max`` whenever ``j > i``."""
    best = None
    for x in b:
        if best is not None and x < best - e_max:
            return False
        if best is None or x > best:
            best = x
    return True


def max_drop(b: Sequence) -> int:
    """Largest ``b_i - b_j`` over ``i < j`` (0 for non-decreasing vectors)."""
    best = None
    d = 0
    for x in b:
        if best is not None and best - x > d:
            d = best - x
        if best is None or x > best:
            best = x
    return d


def power_certificate(hi: Sequence, lo: Sequence, e_max: int) -> UncertainSolution:
    """Intervals ``bl_j`` within ``2E`` of ``bh_i`` on the prefix maxima, error ``5E``."""
    E = max(e_max, max_drop(hi), max_drop(lo))
    bh = list(accumulate(hi, max))
    bl = list(accumulate(lo, max))
    xs = [bisect_left(bl, v - 2 * E) for v in bh]
    ys = [bisect_right(bl, v + 2 * E) - 1 for v in bh]
    return UncertainSolution(xs, ys, 5 * E)


def fast_power_step(hi: Sequence, lo: Sequence, e_max: int, **kw) -> list:
    """``hi * lo`` for adjacent powers of a vector with entries in ``[0, e_max]``."""
    hi = as_vector(hi, "hi")
    lo = as_vector(lo, "lo")
    return conv_via_prediction(hi, lo, power_certificate(hi, lo, e_max), **kw)


def fast_power(a: Sequence, k: int, prefix_cap: int | None = None,
               e_max: int | None = None, **kw) -> list:
    """The ``k``-th (max,+) power of ``a``.

    With ``prefix_cap = L`` every intermediate power is cut to its first ``L``
    entries, which requires ``a[0] == 0``.  ``e_max`` defaults to ``max(a)``.
    Extra keyword arguments go to :func:`conv_via_prediction`.
    """
    a = as_vector(a, "a")
    if k < 1:
        raise DomainError("k must be >= 1")
    if e_max is None:
        e_max = max(a) if all(is_finite(x) for x in a) else 0
    _check_bounded(a, e_max)
    if prefix_cap is not None:
        if prefix_cap < 1:
            raise DomainError("prefix_cap must be positive")
        if a[0] != 0:
            raise DomainError("prefix truncation needs a[0] == 0")

    def cut(v):
        return v if prefix_cap is None else v[:prefix_cap]

    memo = {0: [0], 1: cut(a)}

    def go(m):
        if m in memo:
            return memo[m]
        hi, lo = go((m + 1) // 2), go(m // 2)
        res = cut(fast_power_step(hi, lo, e_max, **kw))
        assert weakly_monotone(res[:len(a)], e_max), "power fell by more than e_max within |a|"
        memo[m] = res
        return res

    return list(go(k))
