"""Benchmark harness: timings over a size ladder, with result checksums.

A cell is one ``(algorithm, size, seed)`` triple.  Its input is generated from
the seed, one warm-up call is discarded, and the reported time is the median of
the remaining runs (monotonic clock, nanoseconds).  Runs are interleaved:
each round times every cell of an algorithm once, so background load is shared
evenly across sizes.  Nothing runs in parallel, so cells never compete for cores.
"""

from __future__ import annotations

import csv
import gc
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Callable

from .bounded_conv import bounded_range_conv
from .distorted_conv import distorted_conv
from .generators import certified_distortion_pair, random_instance
from .knapsack_solvers import SolverConfig, classic_dp, knapsack_via_conv
from .maxplus_core import DomainError, format_ext, naive_conv
from .rng import stream

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1


class VerificationError(RuntimeError):
    """A benchmark result disagreed with its oracle."""


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _MASK
    return h


def checksum(values) -> str:
    """FNV-1a of the space-joined decimal rendering, as 16 hex digits."""
    return f"{fnv1a64(' '.join(format_ext(v) for v in values).encode()):016x}"


@dataclass
class BenchRecord:
    algorithm: str
    n: int
    t: int | None
    e_max: int | None
    seed: int
    wall_nanos: int
    result_checksum: str


@dataclass(frozen=True)
class _Case:
    run: Callable[[], list]
    oracle: Callable[[], list] | None
    t: int | None
    e_max: int | None


def _conv_inputs(n, e_max, seed):
    rng = stream(seed, "bench", "conv", n)
    return rng.integers(0, e_max + 1, size=n).tolist(), rng.integers(0, e_max + 1, size=n).tolist()


def _make_case(algo: str, n: int, seed: int, e_max: int, cfg: SolverConfig) -> _Case:
    if algo in ("bounded", "naive"):
        a, b = _conv_inputs(n, e_max, seed)
        if algo == "bounded":
            return _Case(lambda: bounded_range_conv(a, b, e_max), lambda: naive_conv(a, b), None, e_max)
        return _Case(lambda: naive_conv(a, b), None, None, e_max)
    if algo == "distorted":
        h = max(0, e_max // 2)
        a, b, e = certified_distortion_pair(stream(seed, "bench", "dist", n), n, n, h)
        return _Case(lambda: distorted_conv(a, b, e), lambda: naive_conv(a, b), None, e)
    if algo in ("classic", "knapsack-conv"):
        # n is the capacity; the item count grows with it
        inst = random_instance("bounded-value", seed, n=max(1, n // 4), t=n, v_max=e_max)
        items = inst.items
        if algo == "classic":
            return _Case(lambda: classic_dp(n, items), None, n, e_max)
        return _Case(lambda: knapsack_via_conv(n, items, cfg), lambda: classic_dp(n, items), n, e_max)
    raise DomainError(f"unknown bench algorithm {algo!r}")


BENCH_ALGOS = ("bounded", "naive", "distorted", "classic", "knapsack-conv")
VERIFY_LIMIT = 1 << 10


def _timed_once(fn) -> tuple[int, object]:
    t0 = time.perf_counter_ns()
    result = fn()
    return time.perf_counter_ns() - t0, result


def time_call(fn: Callable[[], object], runs: int) -> tuple[int, object]:
    """Median wall time over ``runs`` calls after one discarded warm-up."""
    nanos, results = _time_rounds([fn], runs)
    return nanos[0], results[0]


def _time_rounds(fns: list, runs: int) -> tuple[list, list]:
    """Median time per callable, with the runs interleaved round by round.

    Round ``r`` calls every callable once.  A slow stretch on a busy machine
    then lands on all cells alike instead of inflating one of them.
    """
    if runs < 3:
        raise DomainError("bench needs at least 3 timed runs")
    results = [fn() for fn in fns]  # warm-up, discarded from timing
    times: list = [[] for _ in fns]
    gc.collect()
    was_enabled = gc.isenabled()
    gc.disable()  # a collection landing inside one run would skew the median
    try:
        for _ in range(runs):
            for i, fn in enumerate(fns):
                dt, results[i] = _timed_once(fn)
                times[i].append(dt)
    finally:
        if was_enabled:
            gc.enable()
    return [int(statistics.median(t)) for t in times], results


def bench_suite(algorithms, sizes, seeds, *, e_max: int = 4, runs: int = 5,
                verify: bool = False, cfg: SolverConfig | None = None) -> list:
    sizes = list(sizes)
    if any(p >= q for p, q in zip(sizes, sizes[1:])):
        raise DomainError("ladder sizes must be strictly increasing")
    if not sizes or any(s < 1 for s in sizes):
        raise DomainError("ladder sizes must be positive")
    cfg = cfg or SolverConfig()
    out = []
    for algo in algorithms:
        cells = [(n, seed, _make_case(algo, n, seed, e_max, cfg)) for n in sizes for seed in seeds]
        nanos, results = _time_rounds([c.run for _, _, c in cells], runs)
        for (n, seed, case), ns, result in zip(cells, nanos, results):
            digest = checksum(result)
            if verify and case.oracle is not None and n <= VERIFY_LIMIT:
                if checksum(case.oracle()) != digest:
                    raise VerificationError(f"{algo} n={n} seed={seed} disagrees with its oracle")
            out.append(BenchRecord(algo, n, case.t, case.e_max, seed, ns, digest))
    return out


def to_json(records) -> str:
    return json.dumps([asdict(r) for r in records], indent=1)


def to_csv(records) -> str:
    buf = io.StringIO()
    fields = list(BenchRecord.__dataclass_fields__)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: ("" if v is None else v) for k, v in asdict(r).items()})
    return buf.getvalue()


def growth_ratios(records, algorithm: str) -> list:
    """Per-doubling ratios of the median time (over seeds) along the ladder."""
    by_n: dict = {}
    for r in records:
        if r.algorithm == algorithm:
            by_n.setdefault(r.n, []).append(r.wall_nanos)
    ns = sorted(by_n)
    med = [statistics.median(by_n[n]) for n in ns]
    return [q / p for p, q in zip(med, med[1:])]
