"""Exact convolution from an interval certificate (an "uncertain solution").

Row ``i`` of ``a`` comes with an interval ``[x_i, y_i]`` of ``b`` indices where
``a_i + b_j`` is within ``e_max`` of the optimum, and the intervals are
monotone.  Splitting ``b`` into dyadic blocks and taking, for each block, the
rows whose interval covers it yields subproblems with distortion at most
``e_max``; each is solved by the distorted-convolution kernel.  Per round the selected
rows sum to at most ``2n``, and there are ``log n + 1`` rounds.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Sequence

from .distorted_conv import _blocked, check_distortion
from .maxplus_core import NEG_INF, DomainError, as_vector, naive_conv


@dataclass(frozen=True)
class UncertainSolution:
    """Monotone intervals ``[x[i], y[i]]`` (empty when ``y[i] == x[i] - 1``)."""

    x: tuple
    y: tuple
    e_max: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        object.__setattr__(self, "y", tuple(int(v) for v in self.y))
        if len(self.x) != len(self.y):
            raise DomainError("x and y must have equal length")
        if self.e_max < 0:
            raise DomainError("e_max must be non-negative")

    def __len__(self):
        return len(self.x)

    def is_monotone(self) -> bool:
        return all(p <= q for p, q in zip(self.x, self.x[1:])) and all(
            p <= q for p, q in zip(self.y, self.y[1:]))

    @classmethod
    def universal(cls, len_a: int, len_b: int, e_max: int) -> "UncertainSolution":
        return cls((0,) * len_a, (len_b - 1,) * len_a, e_max)


Interval = tuple  # (lo, hi), empty when hi < lo


def projection(u: UncertainSolution, alpha: int, beta: int) -> Interval:
    """Rows ``i`` with ``x_i <= alpha`` and ``y_i >= beta``, as ``(lo, hi)``."""
    if alpha > beta or alpha < 0:
        raise DomainError("projection needs 0 <= alpha <= beta")
    hi = bisect_right(u.x, alpha) - 1
    lo = bisect_left(u.y, beta)
    if hi < lo:
        return (lo, lo - 1)
    return (lo, hi)


def projection_diff(u: UncertainSolution, q1: tuple, q2: tuple) -> Interval:
    """``P(q1) \\ P(q2)`` for disjoint query blocks, which is always one interval."""
    (a1, b1), (a2, b2) = q1, q2
    if not (b1 < a2 or b2 < a1):
        raise DomainError("projection_diff needs disjoint query intervals")
    l1, h1 = projection(u, a1, b1)
    l2, h2 = projection(u, a2, b2)
    if h1 < l1:
        return (l1, l1 - 1)
    if h2 < l2 or h2 < l1 or l2 > h1:
        return (l1, h1)
    left = (l1, min(h1, l2 - 1))
    right = (max(l1, h2 + 1), h1)
    left_ok = left[1] >= left[0]
    right_ok = right[1] >= right[0]
    if left_ok and right_ok:
        raise DomainError("difference is not an interval; certificate is not monotone")
    if left_ok:
        return left
    if right_ok:
        return right
    return (l1, l1 - 1)


def validate_uncertain(a: Sequence, b: Sequence, u: UncertainSolution) -> bool:
    """Check monotonicity, accuracy and witness coverage against the naive oracle."""
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    if len(u) != len(a) or not u.is_monotone():
        return False
    for x, y in zip(u.x, u.y):
        if y >= x:
            if x < 0 or y >= len(b):
                return False
        elif y != x - 1:
            return False
    c = naive_conv(a, b)
    e = u.e_max
    for i, (x, y) in enumerate(zip(u.x, u.y)):
        for j in range(max(x, 0), min(y, len(b) - 1) + 1):
            if a[i] + b[j] < c[i + j] - e:
                return False
    for k, ck in enumerate(c):
        if ck == NEG_INF:
            continue
        found = False
        for j in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            if u.x[j] <= k - j <= u.y[j] and a[j] + b[k - j] == ck:
                found = True
                break
        if not found:
            return False
    return True


def approx_from_uncertain(a: Sequence, b: Sequence, u: UncertainSolution) -> list:
    """Per output index, one certified pair located by binary search.

    Each entry is within ``e_max`` below the true convolution.  Rows are
    searched for one whose interval contains ``k - i``: ``x_i + i`` and
    ``y_i + i`` are strictly increasing, so the rows with ``x_i + i <= k`` form a
    prefix, those with ``y_i + i >= k`` a suffix, and any row in both works.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    lx = [x + i for i, x in enumerate(u.x)]
    ly = [y + i for i, y in enumerate(u.y)]
    out = []
    for k in range(len(a) + len(b) - 1):
        hi = bisect_right(lx, k) - 1
        lo = bisect_left(ly, k)
        if hi < lo:
            raise DomainError(f"no certified pair for output index {k}")
        pick = lo
        out.append(a[pick] + b[k - pick])
    return out


@dataclass
class RoundStats:
    round: int
    n: int = 0  # padded length the bounds refer to
    ell_a: int = 0
    ell_b: int = 0
    ell_c: int = 0
    blocks: int = 0
    row_hits: dict = field(default_factory=dict, repr=False)


def _pow2_at_least(m: int) -> int:
    n = 1
    while n < m:
        n <<= 1
    return n


def conv_via_prediction(a: Sequence, b: Sequence, u: UncertainSolution, *,
                        strict: bool = True, check: bool = False,
                        trace: list | None = None, backend: str | None = None,
                        naive_cutoff: int = 0) -> list:
    """Exact ``a*b`` given a valid certificate ``u`` for the pair.

    Parameters
    ----------
    strict
        Passed to :func:`distorted_conv`.  With ``False`` a wrong certificate
        never raises and never overestimates; it may only miss pairs.
    check
        Verify each subproblem's distortion with the quadratic checker.
    trace
        If a list is given, one :class:`RoundStats` per round is appended.
    naive_cutoff
        Subproblems with ``|slice| * |block|`` at or below this are convolved
        directly.  ``0`` routes everything through the distorted kernel.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    if len(u) != len(a):
        raise DomainError("certificate length differs from |a|")
    la, lb = len(a), len(b)
    n = _pow2_at_least(max(la, lb))
    q = n - lb
    a_pad = a + [NEG_INF] * (n - la)
    b_pad = b + [NEG_INF] * q
    ux = list(u.x) + [n - q] * (n - la)
    uy = list(u.y) + [n - q - 1] * (n - la)
    up = UncertainSolution(ux, uy, u.e_max)
    e = u.e_max

    c = [NEG_INF] * (2 * n - 1)
    log_n = n.bit_length() - 1
    for s in range(log_n + 1):
        size = n >> s
        stats = RoundStats(s, n)
        for i in range(1 << s):
            alpha, beta = i * size, (i + 1) * size - 1
            if s == 0:
                gamma, delta = projection(up, alpha, beta)
            else:
                sib = i ^ 1
                gamma, delta = projection_diff(up, (alpha, beta), (sib * size, (sib + 1) * size - 1))
            if delta < gamma:
                continue
            a_slice = a_pad[gamma:delta + 1]
            b_block = b_pad[alpha:beta + 1]
            stats.blocks += 1
            stats.ell_a += len(a_slice)
            stats.ell_b += len(b_block)
            stats.ell_c += len(a_slice) + len(b_block) - 1
            for r in range(gamma, delta + 1):
                stats.row_hits[r] = stats.row_hits.get(r, 0) + 1
            if check and not check_distortion(a_slice, b_block, e):
                raise AssertionError(f"round {s} block {i}: distortion exceeds {e}")
            if len(a_slice) * len(b_block) <= naive_cutoff or (
                    not strict and (NEG_INF in a_slice or NEG_INF in b_block)):
                piece = naive_conv(a_slice, b_block)
            else:
                piece = _blocked(a_slice, b_block, e, strict, backend)
            off = alpha + gamma
            for j, v in enumerate(piece, start=off):
                if v > c[j]:
                    c[j] = v
        assert stats.ell_a <= 2 * n, f"round {s}: ell_a={stats.ell_a} > 2n"
        assert stats.ell_c <= 3 * n, f"round {s}: ell_c={stats.ell_c} > 3n"
        assert all(h <= 2 for h in stats.row_hits.values()), f"round {s}: a row used more than twice"
        if trace is not None:
            trace.append(stats)
    return c[:la + lb - 1]
