"""Plain-text file formats.

Vector files hold whitespace-separated integers, with ``-inf`` and ``+inf``
allowed.  Instance files start with a header ``n t`` followed by ``n`` lines
``size value [mult]``; a missing ``mult`` means 1 and ``inf`` means unbounded.
Tree files start with ``n`` followed by ``n - 1`` lines ``u v w`` (``w`` may be
``inf``).  ``#`` starts a comment everywhere.
"""

from __future__ import annotations

from typing import Iterable

from .knapsack_conv import UNBOUNDED, Item, KnapsackInstance
from .maxplus_core import POS_INF, DomainError, format_ext, parse_ext
from .tree_separability import WeightedTree


def _tokens_by_line(text: str) -> list:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            rows.append(line)
    return rows


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DomainError(f"{what}: expected an integer, got {tok!r}") from None


def parse_vector(text: str) -> list:
    toks = [t for row in _tokens_by_line(text) for t in row]
    if not toks:
        raise DomainError("vector file is empty")
    try:
        return [parse_ext(t) for t in toks]
    except ValueError as exc:
        raise DomainError(f"bad vector entry: {exc}") from None


def format_vector(v: Iterable) -> str:
    return " ".join(format_ext(x) for x in v)


def parse_instance(text: str) -> KnapsackInstance:
    rows = _tokens_by_line(text)
    if not rows or len(rows[0]) != 2:
        raise DomainError("instance header must be 'n t'")
    n, t = _int(rows[0][0], "n"), _int(rows[0][1], "t")
    if n < 0:
        raise DomainError("n must be non-negative")
    body = rows[1:]
    if len(body) != n:
        raise DomainError(f"header promises {n} items, found {len(body)}")
    items = []
    for row in body:
        if len(row) not in (2, 3):
            raise DomainError(f"item line needs 'size value [mult]', got {' '.join(row)!r}")
        s, v = _int(row[0], "size"), _int(row[1], "value")
        m = 1
        if len(row) == 3:
            m = UNBOUNDED if row[2].lower() in ("inf", "+inf") else _int(row[2], "mult")
        items.append(Item(s, v, m))
    return KnapsackInstance(t, items)


def format_instance(inst: KnapsackInstance) -> str:
    lines = [f"{len(inst.items)} {inst.capacity}"]
    for s, v, m in inst.items:
        if m == 1:
            lines.append(f"{s} {v}")
        else:
            lines.append(f"{s} {v} {'inf' if m == UNBOUNDED else m}")
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> WeightedTree:
    rows = _tokens_by_line(text)
    if not rows or len(rows[0]) != 1:
        raise DomainError("tree header must be 'n'")
    n = _int(rows[0][0], "n")
    edges = []
    for row in rows[1:]:
        if len(row) != 3:
            raise DomainError(f"edge line needs 'u v w', got {' '.join(row)!r}")
        w = POS_INF if row[2].lower() in ("inf", "+inf") else _int(row[2], "weight")
        edges.append((_int(row[0], "u"), _int(row[1], "v"), w))
    return WeightedTree(n, edges)


def format_tree(tree: WeightedTree) -> str:
    lines = [str(tree.n)]
    lines += [f"{u} {v} {'inf' if w == POS_INF else w}" for u, v, w in tree.edges]
    return "\n".join(lines) + "\n"
