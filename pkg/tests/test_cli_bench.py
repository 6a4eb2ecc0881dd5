import json
import shutil
import subprocess
import sys

import pytest

from knapconv import bench
from knapconv.cli import run_cli
from knapconv.formats import (
    format_instance,
    format_tree,
    format_vector,
    parse_instance,
    parse_tree,
    parse_vector,
)
from knapconv.generators import gen_instance, pruefer_decode, random_instance, random_tree
from knapconv.knapsack_conv import UNBOUNDED
from knapconv.maxplus_core import NEG_INF, POS_INF, DomainError


@pytest.fixture
def files(tmp_path):
    (tmp_path / "inst.txt").write_text("2 5\n2 3\n3 4\n")
    (tmp_path / "a.vec").write_text("1 2\n")
    (tmp_path / "b.vec").write_text("3 4\n")
    return tmp_path


def run(argv, capsys):
    code = run_cli([str(x) for x in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ------------------------------------------------------------------ formats

def test_vector_format():
    assert parse_vector("1 -inf\n# note\n+inf 4") == [1, NEG_INF, POS_INF, 4]
    assert format_vector([1, NEG_INF, POS_INF]) == "1 -inf +inf"
    with pytest.raises(DomainError):
        parse_vector("# nothing\n")


def test_instance_format():
    inst = parse_instance("# demo\n3 10\n2 3\n4 5 2  # two copies\n1 1 inf\n")
    assert inst.capacity == 10
    assert [tuple(it) for it in inst.items] == [(2, 3, 1), (4, 5, 2), (1, 1, UNBOUNDED)]
    assert parse_instance(format_instance(inst)) == inst
    for bad in ("", "2 5\n1 1\n", "1 5\n1\n", "1 5\nx 1\n", "1 5\n0 1\n"):
        with pytest.raises(DomainError):
            parse_instance(bad)


def test_tree_format():
    t = parse_tree("3\n0 1 4\n1 2 inf\n")
    assert t.edges == ((0, 1, 4), (1, 2, POS_INF))
    assert parse_tree(format_tree(t)) == t


# --------------------------------------------------------------- generators

@pytest.mark.parametrize("kind", ["bounded-value", "bounded-size", "unbounded", "mult", "tree"])
def test_generation_is_deterministic_and_round_trips(kind):
    first = gen_instance(kind, {"n": 12}, seed=4)
    assert first == gen_instance(kind, {"n": 12}, seed=4)
    assert first != gen_instance(kind, {"n": 12}, seed=5)
    parsed = parse_tree(first) if kind == "tree" else parse_instance(first)
    again = format_tree(parsed) if kind == "tree" else format_instance(parsed)
    assert again == first


def test_bounded_size_respects_s_max():
    for seed in range(20):
        inst = random_instance("bounded-size", seed, n=50, s_max=3)
        assert all(1 <= it.size <= 3 for it in inst.items)


def test_tree_generators():
    t = random_tree(1, n=5)
    assert len(t.edges) == 4  # WeightedTree itself rejects disconnected edge sets
    capped = random_tree(2, n=200, d_max=3)
    assert capped.d_max <= 3
    assert sorted(map(sorted, pruefer_decode([3, 3, 3], 5))) == [[0, 3], [1, 3], [2, 3], [3, 4]]


def test_generator_validation():
    with pytest.raises(DomainError):
        gen_instance("bounded-size", {"s_max": 0})
    with pytest.raises(DomainError):
        gen_instance("tree", {"t": 3})
    with pytest.raises(DomainError):
        gen_instance("nonsense")


# ---------------------------------------------------------------------- CLI

def test_cli_examples(files, capsys):
    assert run(["knapsack", "--algo", "classic", files / "inst.txt"], capsys)[:2] == (0, "7\n")
    assert run(["conv", "--algo", "naive", files / "a.vec", files / "b.vec"], capsys)[:2] == (0, "4 5 6\n")
    code, out, err = run(["conv", "--algo", "naive", files / "missing.vec", files / "b.vec"], capsys)
    assert code == 2 and out == "" and "missing.vec" in err


@pytest.mark.parametrize("algo", ["bounded", "prediction", "naive"])
def test_cli_conv_algorithms(files, capsys, algo):
    assert run(["conv", "--algo", algo, files / "a.vec", files / "b.vec"], capsys)[1] == "4 5 6\n"


def test_cli_distorted_needs_bound(files, capsys):
    assert run(["conv", "--algo", "distorted", files / "a.vec", files / "b.vec"], capsys)[0] == 2
    assert run(["conv", "--algo", "distorted", "--e-max", "2", files / "a.vec", files / "b.vec"], capsys)[1] == "4 5 6\n"


@pytest.mark.parametrize("algo", ["conv", "small-sizes", "given-mult"])
def test_cli_knapsack_algorithms(files, capsys, algo):
    assert run(["knapsack", "--algo", algo, files / "inst.txt"], capsys)[:2] == (0, "7\n")


def test_cli_unbounded(tmp_path, capsys):
    p = tmp_path / "u.txt"
    p.write_text("2 10\n2 3 inf\n3 5 inf\n")
    for algo in ("infinite-mult", "unbounded-small", "power"):
        assert run(["knapsack", "--algo", algo, p], capsys)[1] == "16\n"
    assert run(["knapsack", "--algo", "power", "--oracle", p], capsys)[1] == "16\n"
    assert run(["knapsack", "--algo", "conv", p], capsys)[0] == 2


def test_cli_power_and_json(files, capsys):
    assert run(["power", "--k", "2", files / "a.vec"], capsys)[1] == "2 3 4\n"
    code, out, _ = run(["power", "--k", "2", "--format", "json", files / "a.vec"], capsys)
    assert code == 0 and json.loads(out) == {"command": "power", "result": [2, 3, 4]}


def test_cli_treesep(tmp_path, capsys):
    p = tmp_path / "t.txt"
    p.write_text("3\n0 1 1\n1 2 5\n")
    for algo in ("brute", "naive-dp", "spine", "bounded"):
        assert run(["treesep", "--algo", algo, p], capsys)[1] == "0 1 1 0\n"
    assert run(["treesep", "--m", "1", p], capsys)[1] == "1\n"
    assert run(["treesep", "--m", "9", p], capsys)[0] == 2


def test_cli_gen_out_file(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, stdout, _ = run(["gen", "mult", "--n", "4", "--seed", "3", "--out", out], capsys)
    assert code == 0 and stdout == ""
    assert out.read_text() == gen_instance("mult", {"n": 4}, 3)


def test_cli_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("KNAP_SEED", "17")
    from_env = run(["gen", "tree", "--n", "6"], capsys)[1]
    assert from_env == gen_instance("tree", {"n": 6}, 17)
    monkeypatch.setenv("KNAP_SEED", "oops")
    assert run(["gen", "tree"], capsys)[0] == 2


def test_cli_errors(tmp_path, capsys):
    bad = tmp_path / "bad.vec"
    bad.write_text("1 x\n")
    assert run(["conv", bad, bad], capsys)[0] == 2
    big = tmp_path / "big.vec"
    big.write_text(str(2 ** 63 - 1))
    assert run(["conv", "--algo", "naive", big, big], capsys)[0] == 3
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["conv", "--algo", "bounded", "--e-max", "1", tmp_path / "bad.vec"], capsys)[0] == 2


def test_cli_bench_json_and_csv(capsys):
    code, out, _ = run(["bench", "--algo", "bounded,naive", "--sizes", "64,128", "--seeds", "1,2",
                        "--runs", "3", "--verify"], capsys)
    assert code == 0
    recs = json.loads(out)
    assert len(recs) == 8
    assert set(recs[0]) == {"algorithm", "n", "t", "e_max", "seed", "wall_nanos", "result_checksum"}
    # same inputs, same results, whichever algorithm computed them
    by_key = {}
    for r in recs:
        by_key.setdefault((r["n"], r["seed"]), set()).add(r["result_checksum"])
    assert all(len(v) == 1 for v in by_key.values())
    code, out, _ = run(["bench", "--algo", "classic", "--sizes", "32", "--runs", "3", "--csv"], capsys)
    assert code == 0 and out.splitlines()[0] == "algorithm,n,t,e_max,seed,wall_nanos,result_checksum"


def test_bench_verification_failure(capsys, monkeypatch):
    monkeypatch.setattr(bench, "bounded_range_conv", lambda a, b, e: [0] * (len(a) + len(b) - 1))
    assert run(["bench", "--algo", "bounded", "--sizes", "16", "--runs", "3", "--verify"], capsys)[0] == 4


def test_bench_contracts():
    recs = bench.bench_suite(["bounded"], [64, 128, 256, 512], [1, 2], runs=3)
    assert len(recs) == 8
    with pytest.raises(DomainError):
        bench.bench_suite(["bounded"], [128, 64], [1])
    with pytest.raises(DomainError):
        bench.time_call(lambda: None, 2)
    # FNV-1a reference values
    assert bench.fnv1a64(b"") == 0xCBF29CE484222325
    assert bench.fnv1a64(b"a") == 0xAF63DC4C8601EC8C


def test_console_script_end_to_end(files):
    exe = shutil.which("knapconv")
    cmd = [exe] if exe else [sys.executable, "-m", "knapconv"]
    out = subprocess.run(cmd + ["knapsack", str(files / "inst.txt")], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "7\n"
