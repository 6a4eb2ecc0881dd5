"""``knapconv`` command line.

Exit codes: 0 success, 2 bad input, 3 arithmetic overflow, 4 a benchmark
result disagreed with its oracle.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .bounded_conv import bounded_range_conv
from .distorted_conv import distorted_conv
from .formats import format_vector, parse_instance, parse_tree, parse_vector
from .generators import KINDS, certified_uncertain, gen_instance
from .knapsack_conv import UNBOUNDED
from .knapsack_solvers import (
    SolverConfig,
    classic_dp,
    knapsack_given_mult,
    knapsack_infinite_mult,
    knapsack_small_sizes,
    knapsack_via_conv,
    unbounded_small_sizes,
    unbounded_via_power,
)
from .maxplus_core import POS_INF, DomainError, MaxPlusOverflowError, format_ext, naive_conv, naive_power
from .prediction import conv_via_prediction
from .rng import env_seed
from .tree_separability import (
    bounded_separability,
    brute_profile,
    separability_profile,
)
from .vector_power import fast_power

EXIT_OK, EXIT_INPUT, EXIT_OVERFLOW, EXIT_VERIFY = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse already exits 2; keep the message terse
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _finite_max(*vs) -> int:
    vals = [x for v in vs for x in v if x not in (POS_INF, -POS_INF)]
    return max(vals, default=0)


def _cfg(args) -> SolverConfig:
    return SolverConfig(C=args.c_const, repetitions=args.reps, seed=args.seed)


# ---------------------------------------------------------------- handlers

def _cmd_conv(args):
    a, b = parse_vector(_read(args.a)), parse_vector(_read(args.b))
    algo = "naive" if args.oracle else args.algo
    if algo == "naive":
        return naive_conv(a, b)
    if algo == "bounded":
        e = args.e_max if args.e_max is not None else _finite_max(a, b)
        return bounded_range_conv(a, b, e)
    if algo == "distorted":
        if args.e_max is None:
            raise DomainError("--algo distorted needs --e-max")
        return distorted_conv(a, b, args.e_max)
    # prediction: certify with the quadratic builder, then run the fast path
    return conv_via_prediction(a, b, certified_uncertain(a, b))


_KNAP_ALGOS = ("classic", "conv", "small-sizes", "unbounded-small", "infinite-mult", "given-mult", "power")


def _cmd_knapsack(args):
    inst = parse_instance(_read(args.instance))
    t, items = inst.capacity, inst.items
    algo = "classic" if args.oracle else args.algo
    cfg = _cfg(args)
    if algo == "classic":
        return classic_dp(t, items)[t]
    if algo in ("conv", "small-sizes") and any(it.mult != 1 for it in items):
        raise DomainError(f"--algo {algo} takes 0/1 items only")
    if algo == "conv":
        return knapsack_via_conv(t, items, cfg)[t]
    if algo == "small-sizes":
        return knapsack_small_sizes(t, items, cfg)
    if algo in ("infinite-mult", "unbounded-small", "power"):
        if any(it.mult != UNBOUNDED for it in items):
            raise DomainError(f"--algo {algo} needs every multiplicity to be inf")
        if algo == "power":
            return unbounded_via_power(t, items)[t]
        if algo == "unbounded-small":
            return unbounded_small_sizes(t, items, cfg)
        return knapsack_infinite_mult(t, items, cfg)
    return knapsack_given_mult(t, items, cfg)


def _cmd_power(args):
    a = parse_vector(_read(args.a))
    if args.oracle or args.algo == "naive":
        out = naive_power(a, args.k)
        return out[:args.prefix_cap] if args.prefix_cap else out
    return fast_power(a, args.k, prefix_cap=args.prefix_cap, e_max=args.e_max)


def _cmd_treesep(args):
    tree = parse_tree(_read(args.tree))
    algo = "brute" if args.oracle else args.algo
    if algo == "brute":
        prof = brute_profile(tree)
    elif algo == "bounded":
        prof = bounded_separability(tree)
    else:
        prof = separability_profile(tree, algo)
    if args.m is not None:
        if not 0 <= args.m <= tree.n:
            raise DomainError(f"--m must lie in [0, {tree.n}]")
        return prof[args.m]
    return prof


def _cmd_gen(args):
    keys = ("n", "t", "s_max", "v_max", "m_max", "w_max", "d_max")
    params = {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
    return gen_instance(args.kind, params, args.seed)


def _cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(",")]
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else [args.seed]
    algos = args.algo.split(",")
    for a in algos:
        if a not in bench.BENCH_ALGOS:
            raise DomainError(f"unknown bench algorithm {a!r}")
    recs = bench.bench_suite(algos, sizes, seeds, e_max=args.e_max if args.e_max is not None else 4,
                             runs=args.runs, verify=args.verify, cfg=_cfg(args))
    return recs


# ----------------------------------------------------------------- parser

def _common(p, algos, default):
    p.add_argument("--algo", choices=algos, default=default)
    p.add_argument("--e-max", type=int, default=None)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    p.add_argument("--c-const", type=float, default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--oracle", action="store_true", help="use the brute-force / quadratic reference")
    p.add_argument("--out", default=None, help="write the result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="knapconv", description="Bounded (max,+) convolution and knapsack solvers.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("conv", help="(max,+) convolution of two vector files")
    _common(p, ("naive", "bounded", "distorted", "prediction"), "bounded")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("knapsack", help="optimum value of an instance file")
    _common(p, _KNAP_ALGOS, "classic")
    p.add_argument("instance")

    p = sub.add_parser("power", help="k-th (max,+) power of a vector file")
    _common(p, ("naive", "fast"), "fast")
    p.add_argument("a")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--prefix-cap", type=int, default=None)

    p = sub.add_parser("treesep", help="separability profile of a tree file")
    _common(p, ("brute", "naive-dp", "spine", "bounded"), "spine")
    p.add_argument("tree")
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("gen", help="write a seeded random instance")
    _common(p, ("uniform",), "uniform")
    p.add_argument("kind", choices=KINDS)
    for flag in ("n", "t", "s-max", "v-max", "m-max", "w-max", "d-max"):
        p.add_argument(f"--{flag}", type=int, default=None)

    p = sub.add_parser("bench", help="time algorithms over a size ladder")
    _common(p, None, "bounded")
    p.set_defaults(format="json")
    p.add_argument("--sizes", default="16384,32768,65536,131072")
    p.add_argument("--seeds", default=None, help="comma-separated; defaults to --seed")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    return ap


_HANDLERS = {"conv": _cmd_conv, "knapsack": _cmd_knapsack, "power": _cmd_power,
             "treesep": _cmd_treesep, "gen": _cmd_gen, "bench": _cmd_bench}


def _render(cmd: str, args, result) -> str:
    if cmd == "gen":
        return result
    if cmd == "bench":
        return bench.to_csv(result) if args.csv else bench.to_json(result) + "\n"
    if args.format == "json":
        if isinstance(result, list):
            payload = [format_ext(x) if x in (POS_INF, -POS_INF) else x for x in result]
        else:
            payload = format_ext(result) if result in (POS_INF, -POS_INF) else result
        return json.dumps({"command": cmd, "result": payload}) + "\n"
    if isinstance(result, list):
        return format_vector(result) + "\n"
    return format_ext(result) + "\n"


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        try:
            args.seed = env_seed()
        except ValueError:
            print("knapconv: error: KNAP_SEED is not an integer", file=sys.stderr)
            return EXIT_INPUT
    try:
        text = _render(args.cmd, args, _HANDLERS[args.cmd](args))
    except bench.VerificationError as exc:
        print(f"knapconv: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (MaxPlusOverflowError, OverflowError) as exc:
        print(f"knapconv: overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (DomainError, ValueError) as exc:
        print(f"knapconv: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
