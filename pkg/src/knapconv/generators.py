"""Seeded instance generators.

Knapsack kinds draw sizes and values uniformly from their declared ranges.
Trees are uniform labelled trees (decoded from a uniform Pruefer sequence) or,
when a degree cap is given, random recursive trees that respect the cap.
The ``certified_*`` helpers build convolution inputs together with a
certificate the fast kernels accept.
"""

from __future__ import annotations

import heapq

from .formats import format_instance, format_tree
from .knapsack_conv import UNBOUNDED, Item, KnapsackInstance
from .maxplus_core import DomainError, naive_conv
from .prediction import UncertainSolution
from .rng import stream
from .tree_separability import WeightedTree

KINDS = ("bounded-value", "bounded-size", "unbounded", "mult", "tree")

_DEFAULTS = {
    "bounded-value": dict(n=20, t=100, v_max=5, s_max=None),
    "bounded-size": dict(n=30, t=200, s_max=8, v_max=100),
    "unbounded": dict(n=10, t=200, s_max=20, v_max=20),
    "mult": dict(n=10, t=500, s_max=20, v_max=20, m_max=50),
    "tree": dict(n=10, w_max=5, d_max=None),
}


def _params(kind: str, params: dict) -> dict:
    if kind not in KINDS:
        raise DomainError(f"unknown instance kind {kind!r}")
    out = dict(_DEFAULTS[kind])
    for k, v in params.items():
        if k not in out:
            raise DomainError(f"kind {kind!r} has no parameter {k!r}")
        out[k] = v
    for k, v in out.items():
        if v is not None and (not isinstance(v, int) or v < 0):
            raise DomainError(f"parameter {k} must be a non-negative integer")
    for k in ("s_max", "m_max"):
        if out.get(k) == 0:
            raise DomainError(f"{k} must be >= 1")
    if kind == "tree" and out["n"] < 1:
        raise DomainError("a tree needs n >= 1")
    if kind == "tree" and out["d_max"] is not None and out["d_max"] < 2 and out["n"] > 2:
        raise DomainError("d_max must be >= 2 for trees with more than two vertices")
    return out


def random_instance(kind: str, seed: int, **params) -> KnapsackInstance:
    p = _params(kind, params)
    if kind == "tree":
        raise DomainError("use random_tree for trees")
    rng = stream(seed, "gen", kind)
    n, t = p["n"], p["t"]
    s_max = p["s_max"] if p["s_max"] is not None else max(1, t)
    sizes = rng.integers(1, s_max + 1, size=n).tolist()
    values = rng.integers(0, p["v_max"] + 1, size=n).tolist()
    if kind == "unbounded":
        mults = [UNBOUNDED] * n
    elif kind == "mult":
        mults = rng.integers(1, p["m_max"] + 1, size=n).tolist()
    else:
        mults = [1] * n
    return KnapsackInstance(t, [Item(s, v, m) for s, v, m in zip(sizes, values, mults)])


def pruefer_decode(seq: list, n: int) -> list:
    """Edges of the labelled tree with Pruefer sequence ``seq`` (length ``n - 2``)."""
    if n < 2:
        return []
    if len(seq) != n - 2:
        raise DomainError("a Pruefer sequence for n vertices has n - 2 entries")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def random_tree(seed: int, **params) -> WeightedTree:
    p = _params("tree", params)
    n, w_max, d_max = p["n"], p["w_max"], p["d_max"]
    rng = stream(seed, "gen", "tree")
    if d_max is None:
        pairs = pruefer_decode(rng.integers(0, n, size=max(0, n - 2)).tolist(), n)
    else:
        # attach each new vertex to a uniformly chosen vertex that still has room
        deg = [0] * n
        open_ = [0]
        pairs = []
        for v in range(1, n):
            k = int(rng.integers(0, len(open_)))
            u = open_[k]
            pairs.append((u, v))
            deg[u] += 1
            deg[v] += 1
            if deg[u] >= d_max:
                open_[k] = open_[-1]
                open_.pop()
            if deg[v] < d_max:
                open_.append(v)
    weights = rng.integers(0, w_max + 1, size=len(pairs)).tolist()
    return WeightedTree(n, [(u, v, w) for (u, v), w in zip(pairs, weights)])


def gen_instance(kind: str, params: dict | None = None, seed: int = 0) -> str:
    """File contents for a random instance; identical for identical arguments."""
    params = dict(params or {})
    if kind == "tree":
        return format_tree(random_tree(seed, **params))
    return format_instance(random_instance(kind, seed, **params))


# ------------------------------------------------------ certified inputs

def certified_distortion_pair(rng, n_a: int, n_b: int, h: int, slope_max: int = 20):
    """``(a, b, e)`` with distortion at most ``e = 2h``.

    Both vectors are one ramp ``r*i`` plus noise in ``[0, h]``: every
    cross-sum at output index ``k`` is at least ``r*k`` and the optimum is at
    most ``r*k + 2h``.
    """
    r = int(rng.integers(-slope_max, slope_max + 1))
    off_a = int(rng.integers(-50, 51))
    off_b = int(rng.integers(-50, 51))
    a = [off_a + r * i + int(x) for i, x in enumerate(rng.integers(0, h + 1, size=n_a))]
    b = [off_b + r * j + int(x) for j, x in enumerate(rng.integers(0, h + 1, size=n_b))]
    return a, b, 2 * h


def certified_uncertain(a: list, b: list) -> UncertainSolution:
    """A monotone certificate for ``a * b``, tight enough to be interesting.

    One optimal pair is picked per output index.  Row ``i`` then gets
    ``x_i`` = smallest witness column in rows ``>= i`` and ``y_i`` = largest
    witness column in rows ``<= i``, which makes both ends monotone.  The
    error bound is the largest gap actually covered.
    """
    na, nb = len(a), len(b)
    c = naive_conv(a, b)
    lo = [nb] * na
    hi = [-1] * na
    for k, ck in enumerate(c):
        for i in range(max(0, k - nb + 1), min(k, na - 1) + 1):
            if a[i] + b[k - i] == ck:
                lo[i] = min(lo[i], k - i)
                hi[i] = max(hi[i], k - i)
                break
    x, y = [0] * na, [0] * na
    run = nb - 1
    for i in range(na - 1, -1, -1):
        run = min(run, lo[i])
        x[i] = run
    run = 0
    for i in range(na):
        run = max(run, hi[i])
        y[i] = max(run, x[i])
    e = 0
    for i in range(na):
        for j in range(x[i], y[i] + 1):
            e = max(e, c[i + j] - a[i] - b[j])
    return UncertainSolution(tuple(x), tuple(y), e)
