import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mstream import fixtures
from mstream.cli import main
from mstream.errors import InstanceError
from mstream.generators import random_coverage_instance, random_cut_instance, random_instance
from mstream.harness import open_instance, run_cell
from mstream.instance import dump_instance, format_rational, parse_instance, parse_rational, resolve_order
from mstream.report import emit_report

F = Fraction

BASE = {
    "elements": [{"id": "a", "weight": "1"}, {"id": "b", "weight": "2.5"}],
    "matroids": [{"type": "uniform", "k": 1}],
}


def doc(**changes):
    out = json.loads(json.dumps(BASE))
    out.update(changes)
    return out


def pointer_of(bad):
    with pytest.raises(InstanceError) as info:
        parse_instance(bad)
    return info.value.pointer


def test_parse_valid_and_empty():
    inst = parse_instance(json.dumps(BASE).encode())
    assert inst.weights() == {"a": 1, "b": F(5, 2)}
    empty = parse_instance({"elements": [], "matroids": [{"type": "uniform", "k": 0}]})
    assert empty.ids() == [] and empty.default_order() == []


@pytest.mark.parametrize("bad,pointer", [
    (doc(elements=[{"id": "a", "weight": "1"}, {"id": "a", "weight": "2"}]), "/elements/1/id"),
    (doc(elements=[{"id": "a", "weight": "-1"}]), "/elements/0/weight"),
    (doc(elements=[{"id": "a", "weight": 0.5}]), "/elements/0/weight"),
    (doc(elements=[{"id": "a", "weight": "abc"}]), "/elements/0/weight"),
    (doc(stream_order=["a"]), "/stream_order"),
    (doc(stream_order=["a", "zz"]), "/stream_order/1"),
    (doc(matroids=[]), "/matroids"),
    (doc(matroids=[{"type": "laminar"}]), "/matroids/0/type"),
    (doc(matroids=[{"type": "partition", "blocks": [["a", "q"]], "capacities": [1]}]), "/matroids/0/blocks/0/1"),
    (doc(objective={"type": "cut", "vertices": 2, "toggles": {"a": [7]}, "edge_weights": []}), "/objective/toggles/a/0"),
    (doc(objective={"type": "magic"}), "/objective/type"),
    (b"\xff\xfe", ""),
    (b"{not json", ""),
])
def test_parse_errors_carry_pointer(bad, pointer):
    assert pointer_of(bad) == pointer


def test_rationals():
    assert parse_rational("0.01", "") == F(1, 100)
    assert parse_rational("3/7", "") == F(3, 7)
    assert format_rational(F(103, 100)) == "1.03"
    assert format_rational(F(1, 3)) == "1/3"
    assert format_rational(F(5)) == "5"


@given(st.integers(0, 10**6), st.sampled_from(["linear", "coverage", "cut"]))
def test_round_trip(seed, kind):
    rng = random.Random(seed)
    inst = {"linear": random_instance, "coverage": random_coverage_instance, "cut": random_cut_instance}[kind](rng)
    once = dump_instance(parse_instance(dump_instance(inst)))
    assert dump_instance(parse_instance(once)) == once
    again = parse_instance(once)
    assert again.weights() == inst.weights()
    assert [m.rank(inst.ids()) for m in again.matroids] == [m.rank(inst.ids()) for m in inst.matroids]


def test_resolve_order():
    inst = fixtures.load("counterexample")
    assert resolve_order(inst, "file") == ["a", "b", "c", "d"]
    assert resolve_order(inst, "reverse") == ["d", "c", "b", "a"]
    assert resolve_order(inst, "shuffle:7") == resolve_order(inst, "shuffle:7")
    assert sorted(resolve_order(inst, "shuffle:7")) == ["a", "b", "c", "d"]
    for bad in ("shuffle", "shuffle:x", "backwards", ""):
        with pytest.raises(ValueError):
            resolve_order(inst, bad)


def test_fixtures_load():
    assert fixtures.load("three_matroid").weights() == {"a": 1, "x": 3, "y": 3, "z": 3, "b": 8}
    assert fixtures.load("counterexample").weights() == fixtures.counterexample().weights()
    with pytest.raises(InstanceError):
        open_instance("fixture:nope")


def test_report_bytes():
    inst = fixtures.load("counterexample")
    out = emit_report(run_cell(inst, "exact"))
    assert b'"g_alive": "103/100"' in out
    assert out == emit_report(run_cell(inst, "exact"))
    assert b"wall_time" not in out
    assert b"wall_time" in emit_report(run_cell(inst, "exact"), include_timing=True)
    empty = parse_instance({"elements": [], "matroids": [{"type": "uniform", "k": 0}] * 2})
    res = json.loads(emit_report(run_cell(empty, "exact")))["result"]
    assert res["solution"] == [] and res["solution_weight"] == "0/1"
    assert isinstance(res["peak_stack"], int)


def test_seeded_submodular_reports_identical():
    inst = random_cut_instance(random.Random(4))
    kw = dict(alpha="1.866", q="1/4", seed=11)
    assert emit_report(run_cell(inst, "submodular", "shuffle:3", **kw)) == emit_report(
        run_cell(inst, "submodular", "shuffle:3", **kw)
    )


def run_cli(args, capsys):
    code = main(args)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_cli_run_and_opt(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run_cli(["run", "--instance", "fixture:four_cycle", "--algo", "exact", "--opt", "--out", str(out)], capsys)
    assert code == 0
    res = json.loads(out.read_text())
    assert res["result"]["ratio_vs_opt"] == "4/3" and res["solution_certified"] is True
    code, text, _ = run_cli(["opt", "--instance", "fixture:four_cycle"], capsys)
    assert code == 0 and json.loads(text)["opt_weight"] == "4/1"
    code, text, _ = run_cli(["run", "--instance", "fixture:four_cycle", "--algo", "streaming", "--epsilon", "1/4"], capsys)
    assert json.loads(text)["params"]["y"] == "32/1"


def test_cli_instance_file(tmp_path, capsys):
    path = tmp_path / "inst.json"
    path.write_bytes(dump_instance(fixtures.load("counterexample")))
    code, text, _ = run_cli(["run", "--instance", str(path), "--algo", "exact", "--order", "reverse"], capsys)
    assert code == 0 and json.loads(text)["order"] == ["d", "c", "b", "a"]


def test_cli_other_commands(capsys):
    code, text, _ = run_cli(["verify-kernel", "--instance", "fixture:four_cycle", "--enumerate"], capsys)
    res = json.loads(text)
    assert code == 0 and res["verified"] and res["in_enumeration"] and res["kernel"] == ["e1", "e3"]
    code, text, _ = run_cli(["probe-conjecture", "--instance", "fixture:three_matroid", "--orders", "10", "--seed", "2"], capsys)
    res = json.loads(text)
    assert code == 0 and res["flagged"] is False and res["no_kernel_witness_file_order"] is True


@pytest.mark.parametrize("args,code", [
    (["run", "--instance", "fixture:nope", "--algo", "exact"], 2),
    (["run", "--instance", "fixture:four_cycle", "--algo", "streaming"], 2),
    (["run", "--instance", "fixture:four_cycle", "--algo", "exact", "--order", "sideways"], 2),
    (["run", "--instance", "fixture:four_cycle", "--algo", "streaming", "--alpha", "1", "--y", "3"], 2),
    (["run", "--instance", "fixture:three_matroid", "--algo", "streaming", "--epsilon", "1/2"], 2),
    (["run", "--instance", "fixture:four_cycle", "--algo", "submodular"], 2),
    (["verify-kernel", "--instance", "fixture:three_matroid"], 2),
    (["run", "--instance", "/no/such/file.json", "--algo", "exact"], 2),
])
def test_cli_exit_codes(args, code, capsys):
    got, _, err = run_cli(args, capsys)
    assert got == code and err.startswith("mstream: error:")


def test_cli_budget_exit_code(monkeypatch, capsys):
    monkeypatch.setenv("MSTREAM_ORACLE_MAX", "2")
    assert run_cli(["opt", "--instance", "fixture:four_cycle"], capsys)[0] == 4


def test_cli_console_script(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "mstream.cli", "run", "--instance", "fixture:counterexample", "--algo", "streaming-k",
         "--alpha", "1", "--y", "inf"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["algorithm"] == "streaming_k"
    proc = subprocess.run([sys.executable, "-m", "mstream.cli", "run"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_bench(tmp_path, capsys):
    path = tmp_path / "inst.json"
    path.write_bytes(dump_instance(fixtures.load("four_cycle")))
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"cells": [
        {"name": "b", "instance": "inst.json", "algo": "streaming", "epsilon": "1/2", "opt": True},
        {"name": "a", "instance": "fixture:counterexample", "algo": "exact", "order": "reverse"},
        {"name": "c", "instance": "fixture:four_cycle", "algo": "submodular", "alpha": "2", "q": "1/2", "seed": 3},
    ]}))
    code, one, _ = run_cli(["bench", "--manifest", str(manifest), "--jobs", "1"], capsys)
    code4, four, _ = run_cli(["bench", "--manifest", str(manifest), "--jobs", "4"], capsys)
    assert code == code4 == 0 and one == four
    rows = one.strip().splitlines()
    assert rows[0].startswith("name,") and [r.split(",")[0] for r in rows[1:]] == ["a", "b", "c"]
    manifest.write_text(json.dumps({"cells": [{"instance": "inst.json"}]}))
    assert run_cli(["bench", "--manifest", str(manifest)], capsys)[0] == 2
