"""Tree separability: cut a tree into parts of sizes ``m`` and ``n - m`` as cheaply as possible.

The cost of a bipartition is the total weight of the edges it cuts.  Solvers
return the whole profile over ``m = 0..n``.

Subtree profiles ``P_v[i]`` hold the cheapest cut inside ``T(v)`` when exactly
``i`` of its vertices share ``v``'s side (``P_v[0]`` is ``+inf``).  A child
``u`` hanging from ``v`` by an edge of weight ``w`` contributes
``min(P_u[k], P_u[|T(u)| - k] + w)`` for ``k`` vertices on ``v``'s side, and
contributions combine by (min,+) convolution.

The MaxCov gadget at the bottom turns "does ``a*b`` exceed ``c`` anywhere?"
into a separability threshold question.  That gives an end-to-end
cross-check of the convolution code against the tree solvers.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounded_conv import _bounded_unchecked
from .maxplus_core import (
    INT64_MAX,
    NEG_INF,
    POS_INF,
    DomainError,
    MaxPlusOverflowError,
    as_vector,
    check_range64,
    naive_conv,
    naive_min_conv,
)

STRATEGIES = ("naive-dp", "spine")


@dataclass(frozen=True)
class WeightedTree:
    """An undirected tree on vertices ``0..n-1``; weights are ints >= 0 or ``POS_INF``."""

    n: int
    edges: tuple
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise DomainError("a tree needs at least one vertex")
        edges = []
        for e in self.edges:
            u, v, w = e
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise DomainError(f"bad edge {e!r}")
            if w != POS_INF:
                if isinstance(w, float):
                    if not w.is_integer():
                        raise DomainError(f"non-integer weight {w!r}")
                    w = int(w)
                if w < 0 or w > INT64_MAX:
                    raise DomainError(f"weight {w} outside [0, 2^63)")
            edges.append((int(u), int(v), w))
        if len(edges) != n - 1:
            raise DomainError(f"a tree on {n} vertices has {n - 1} edges, got {len(edges)}")
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        adj = [[] for _ in range(n)]
        for u, v, w in edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                raise DomainError("edges contain a cycle")
            parent[ru] = rv
            adj[u].append((v, w))
            adj[v].append((u, w))
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "adj", tuple(tuple(sorted(x)) for x in adj))

    @property
    def d_max(self) -> int:
        return max((len(x) for x in self.adj), default=0)

    @property
    def w_max(self) -> int:
        return max((w for _, _, w in self.edges if w != POS_INF), default=0)

    def cut_weight(self, side) -> int:
        s = set(side)
        total = 0
        for u, v, w in self.edges:
            if (u in s) != (v in s):
                total += w
        return total

    def cut_count(self, side) -> int:
        s = set(side)
        return sum((u in s) != (v in s) for u, v, _ in self.edges)


def _check_total(tree: WeightedTree):
    if sum(w for _, _, w in tree.edges if w != POS_INF) > INT64_MAX:
        raise MaxPlusOverflowError("total edge weight exceeds the signed 64-bit range")


# -------------------------------------------------------------------- oracle

def brute_profile(tree: WeightedTree) -> list:
    """Exhaustive separability profile over all vertex subsets (``n <= 22``)."""
    n = tree.n
    if n > 22:
        raise DomainError("brute force is limited to n <= 22")
    _check_total(tree)
    best = [POS_INF] * (n + 1)
    # complements cut the same edges, so vertex n-1 can stay out of the subset
    total = 1 << (n - 1)
    chunk = 1 << 18
    for start in range(0, total, chunk):
        mask = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cost = np.zeros(mask.size, dtype=np.int64)
        blocked = np.zeros(mask.size, dtype=bool)
        size = np.zeros(mask.size, dtype=np.int64)
        for v in range(n - 1):
            size += (mask >> v) & 1
        for u, v, w in tree.edges:
            cut = ((mask >> u) ^ (mask >> v)) & 1
            if w == POS_INF:
                blocked |= cut.astype(bool)
            else:
                cost += cut * w
        for k in range(n):
            sel = (size == k) & ~blocked
            if sel.any():
                c = int(cost[sel].min())
                if c < best[k]:
                    best[k] = c
    for k in range(n + 1):
        best[k] = min(best[k], best[n - k])
    return best


def brute_separability(tree: WeightedTree, m: int) -> int:
    if not 0 <= m <= tree.n:
        raise DomainError(f"m must lie in [0, {tree.n}]")
    return brute_profile(tree)[m]


# ----------------------------------------------------------- (min,+) kernels

MinConv = Callable[[list, list], list]


def _bounded_min_conv(bound: int) -> MinConv:
    """(min,+) over values in ``[0, bound]`` or ``+inf``, through the max-plus kernel.

    ``x -> bound - x`` maps the values into ``[0, bound]``; entries that come
    back above ``bound`` are returned as ``+inf``.
    """

    def conv(p, q):
        fp = [NEG_INF if x == POS_INF else bound - x for x in p]
        fq = [NEG_INF if x == POS_INF else bound - x for x in q]
        r = _bounded_unchecked(fp, fq, bound)
        out = []
        for x in r:
            if x == NEG_INF:
                out.append(POS_INF)
            else:
                y = 2 * bound - x
                out.append(y if y <= bound else POS_INF)
        return out

    return conv


def _reflect(p: list) -> list:
    return p[::-1]


def _vmin(p: list, q: list) -> list:
    return [x if x <= y else y for x, y in zip(p, q)]


def _child_term(p: list, w) -> list:
    s = len(p) - 1
    return [min(p[k], p[s - k] + w) for k in range(s + 1)]


# ------------------------------------------------------------------ DP core

def _rooted(tree: WeightedTree, root: int = 0):
    """Parent, parent-edge weight and a preorder of the tree rooted at ``root``."""
    n = tree.n
    parent = [-1] * n
    pw = [0] * n
    order = [root]
    seen = [False] * n
    seen[root] = True
    for v in order:
        for u, w in tree.adj[v]:
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                pw[u] = w
                order.append(u)
    return parent, pw, order


def _naive_dp(tree: WeightedTree, mc: MinConv, clamp) -> list:
    parent, pw, order = _rooted(tree)
    prof: list = [None] * tree.n
    for v in reversed(order):
        cur = [POS_INF, 0]
        for u, _ in tree.adj[v]:
            if u == parent[v]:
                continue
            cur = clamp(mc(cur, _child_term(prof[u], pw[u])))
            prof[u] = None
        prof[v] = cur
    return prof[order[0]]


def _huffman(parts: list, mc: MinConv, clamp) -> list:
    """Merge profiles shortest-first, keeping the total merge length near-linear."""
    heap = [(len(p), i, p) for i, p in enumerate(parts)]
    heapq.heapify(heap)
    tick = len(parts)
    while len(heap) > 1:
        _, _, p = heapq.heappop(heap)
        _, _, q = heapq.heappop(heap)
        r = clamp(mc(p, q))
        heapq.heappush(heap, (len(r), tick, r))
        tick += 1
    return heap[0][2]


def _path_segment(own: list, weights: list, lo: int, hi: int, mc: MinConv, clamp):
    """Two-state profile of heavy-path vertices ``lo..hi``.

    Returns ``(same, diff)``: counts are of vertices on the side of vertex
    ``lo``; ``same``/``diff`` says whether vertex ``hi`` is on that side.
    """
    if lo == hi:
        p = own[lo]
        return p, [POS_INF] * len(p)
    mid = (lo + hi) // 2
    s1, d1 = _path_segment(own, weights, lo, mid, mc, clamp)
    s2, d2 = _path_segment(own, weights, mid + 1, hi, mc, clamp)
    w = weights[mid]  # edge between path vertices mid and mid+1
    out = {0: None, 1: None}
    for a, q1 in ((0, s1), (1, d1)):        # side of vertex mid
        for b in (0, 1):                    # side of vertex mid+1
            extra = w if a != b else 0
            for c, q2 in ((0, s2), (1, d2)):  # vertex hi relative to mid+1
                q2r = q2 if b == 0 else _reflect(q2)
                r = mc(q1, q2r)
                if extra:
                    r = [x + extra for x in r]
                key = b ^ c
                out[key] = r if out[key] is None else _vmin(out[key], r)
    return clamp(out[0]), clamp(out[1])


def _spine_dp(tree: WeightedTree, mc: MinConv, clamp) -> list:
    parent, pw, order = _rooted(tree)
    n = tree.n
    size = [1] * n
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    heavy = [-1] * n
    for v in order:
        best = -1
        for u, _ in tree.adj[v]:
            if u != parent[v] and (best < 0 or size[u] > size[best]):
                best = u
        heavy[v] = best
    prof: list = [None] * n
    # path heads in reverse preorder: every light child is finished before its parent's path
    for h in reversed(order):
        if parent[h] >= 0 and heavy[parent[h]] == h:
            continue
        path = [h]
        while heavy[path[-1]] >= 0:
            path.append(heavy[path[-1]])
        own, weights = [], []
        for v in path:
            parts = [[POS_INF, 0]]
            for u, _ in tree.adj[v]:
                if u != parent[v] and u != heavy[v]:
                    parts.append(_child_term(prof[u], pw[u]))
                    prof[u] = None
            own.append(_huffman(parts, mc, clamp))
            if heavy[v] >= 0:
                weights.append(pw[heavy[v]])
        same, diff = _path_segment(own, weights, 0, len(path) - 1, mc, clamp)
        prof[h] = _vmin(same, diff)
    return prof[order[0]]


def _finish(root_prof: list) -> list:
    n = len(root_prof) - 1
    return [min(root_prof[m], root_prof[n - m]) for m in range(n + 1)]


def _identity(p):
    return p


def separability_profile(tree: WeightedTree, strategy: str = "spine",
                         min_conv: MinConv | None = None) -> list:
    """Minimum cut weight for every ``m = 0..n``.

    ``strategy="naive-dp"`` merges children one by one.  ``"spine"`` walks
    heavy paths with a divide-and-conquer over each path and merges light
    children shortest-first, so the total convolution length is
    ``O(n log n)``.  ``min_conv`` defaults to the quadratic oracle.
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    _check_total(tree)
    mc = min_conv or naive_min_conv
    dp = _naive_dp if strategy == "naive-dp" else _spine_dp
    return _finish(dp(tree, mc, _identity))


def separability_bound(tree: WeightedTree) -> int:
    """``2 d_max w_max ceil(log2 n)``: no optimal cut costs more."""
    n = tree.n
    return 2 * tree.d_max * tree.w_max * math.ceil(math.log2(n)) if n > 1 else 0


def bounded_separability(tree: WeightedTree, strategy: str = "spine") -> list:
    """Separability profile with every merge done by the bounded (max,+) kernel.

    DP entries above the bound are dropped to ``+inf``.  Weights are
    non-negative, so a dropped entry can only feed answers above the bound,
    and no answer is that large.  If one came out that large anyway,
    :class:`DomainError` is raised.
    """
    for _, _, w in tree.edges:
        if w == POS_INF:
            raise DomainError("bounded_separability needs finite weights")
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    bound = separability_bound(tree)
    check_range64([2 * bound])

    def clamp(p):
        return [x if x <= bound else POS_INF for x in p]

    mc = _bounded_min_conv(bound)
    dp = _naive_dp if strategy == "naive-dp" else _spine_dp
    out = _finish(dp(tree, mc, clamp))
    for m, x in enumerate(out):
        if x > bound:
            raise DomainError(f"optimal cut for m={m} exceeds the bound {bound}")
    return out


# -------------------------------------------------------- balanced partition

def _components(tree: WeightedTree, alive: set, removed: int) -> list:
    comps = []
    seen = {removed}
    for start, _ in tree.adj[removed]:
        if start not in alive or start in seen:
            continue
        comp = [start]
        seen.add(start)
        for v in comp:
            for u, _ in tree.adj[v]:
                if u in alive and u not in seen:
                    seen.add(u)
                    comp.append(u)
        comps.append(comp)
    return comps


def find_centroid(tree: WeightedTree, vertices=None) -> int:
    """Lowest-id vertex whose removal leaves components of at most half the size."""
    alive = set(range(tree.n)) if vertices is None else set(vertices)
    if not alive:
        raise DomainError("empty vertex set")
    root = min(alive)
    parent = {root: -1}
    order = [root]
    for v in order:
        for u, _ in tree.adj[v]:
            if u in alive and u not in parent:
                parent[u] = v
                order.append(u)
    if len(order) != len(alive):
        raise DomainError("vertex set is not connected")
    total = len(order)
    size = dict.fromkeys(order, 1)
    heaviest = dict.fromkeys(order, 0)
    for v in reversed(order):
        p = parent[v]
        if p >= 0:
            size[p] += size[v]
            heaviest[p] = max(heaviest[p], size[v])
    return min(v for v in order if max(heaviest[v], total - size[v]) <= total // 2)


def centroid_partition(tree: WeightedTree, m: int) -> list:
    """A sorted list of ``m`` vertices whose side cuts few edges.

    Take the centroid's components whole, in order, while they fit.  Recurse
    into the first one that overflows.  Each level cuts at most ``d_max``
    edges and component sizes halve, so at most ``d_max * ceil(log2 n)``
    edges are cut.
    """
    n = tree.n
    if not 1 <= m < n:
        raise DomainError("centroid_partition needs 1 <= m < n")
    alive = set(range(n))
    chosen: list = []
    need = m
    while need:
        c = find_centroid(tree, alive)
        if need == len(alive):
            chosen.extend(alive)
            break
        comps = _components(tree, alive, c)
        nxt = None
        for comp in comps:
            if len(comp) <= need:
                chosen.extend(comp)
                need -= len(comp)
                if not need:
                    break
            else:
                nxt = comp
                break
        if not need:
            break
        if nxt is None:
            # every component taken; only the centroid is left to add
            chosen.append(c)
            need -= 1
            break
        alive = set(nxt)
    return sorted(chosen)


# -------------------------------------------------------------- MaxCov gadget

def maxcov_upperbound(a: Sequence, b: Sequence, c: Sequence) -> bool:
    """Whether ``(a*b)_i > c_i`` for some ``i``."""
    a, b, c = as_vector(a, "a"), as_vector(b, "b"), as_vector(c, "c")
    if len(a) != len(b) or len(c) != 2 * len(a) - 1:
        raise DomainError("need |a| == |b| == n and |c| == 2n-1")
    return any(x > y for x, y in zip(naive_conv(a, b), c))


def maxcov_gadget(a: Sequence, b: Sequence, c: Sequence, padded: bool = True):
    """Tree, part size and threshold with ``separability(m) < 3M`` iff some ``(a*b)_i > c_i``.

    Three paths leave a root: ``3n`` edges for ``a`` and for ``b``, each finite
    only on its middle third (``M - a_i``, ``M - b_i``), and ``2n - 1`` edges
    weighted ``M + c_{2n-2-i}`` for ``c``.  "Infinite" edges weigh
    ``BIG = 1 + 7 M n``.

    On the bare three-path tree (``padded=False``) the equivalence fails for
    some inputs.  ``padded=True`` hangs ``2n + 1`` extra leaves on the root by
    ``BIG`` edges, which pins the root to the large side and restores it.
    """
    a, b, c = as_vector(a, "a"), as_vector(b, "b"), as_vector(c, "c")
    n = len(a)
    if len(b) != n or len(c) != 2 * n - 1:
        raise DomainError("need |a| == |b| == n and |c| == 2n-1")
    for v in (*a, *b, *c):
        if v in (NEG_INF, POS_INF):
            raise DomainError("gadget inputs must be finite")
    M = 10 * max([1] + [abs(x) for x in (*a, *b, *c)])
    big = 1 + 7 * M * n
    check_range64([big * (10 * n + 1)])

    def A(i):
        return 1 + i

    def B(i):
        return 1 + 3 * n + i

    def C(i):
        return 1 + 6 * n + i

    edges = [(0, A(0), big), (0, B(0), big)]
    for i in range(1, 3 * n):
        k = i - n
        edges.append((A(i - 1), A(i), M - a[k] if 0 <= k < n else big))
        edges.append((B(i - 1), B(i), M - b[k] if 0 <= k < n else big))
    edges.append((0, C(0), M + c[2 * n - 2]))
    for i in range(1, 2 * n - 1):
        edges.append((C(i - 1), C(i), M + c[2 * n - 2 - i]))
    nodes, m = 8 * n, 4 * n - 1
    if padded:
        pad = 2 * n + 1
        edges.extend((0, nodes + p, big) for p in range(pad))
        nodes += pad
        m += pad
    return WeightedTree(nodes, edges), m, 3 * M
