"""Command-line interface: subcommands, exit codes, deterministic outputs."""

import json
import os
import subprocess
import sys

import pytest

from inets.cli import export_dot, main
from inets.parser import parse
from inets.systemgen import program_system
from inets.translate import attach_token, translate

PROGRAMS = os.path.join(os.path.dirname(__file__), "..", "programs")


def prog(name: str) -> str:
    return os.path.join(PROGRAMS, name)


def run_cli(*argv: str):
    proc = subprocess.run(
        [sys.executable, "-m", "inets.cli", *argv],
        capture_output=True, text=True,
        cwd=os.path.join(os.path.dirname(__file__), ".."),
        env={**os.environ, "PYTHONPATH": "src"},
    )
    return proc


def test_check_prints_type():
    p = run_cli("check", prog("add23.fun"))
    assert p.returncode == 0
    assert p.stdout.strip() == "nat"


def test_check_illtyped_exits_2():
    p = run_cli("check", prog("illtyped.fun"))
    assert p.returncode == 2
    assert "mismatch" in p.stderr


def test_parse_error_exits_2(tmp_path):
    bad = tmp_path / "bad.fun"
    bad.write_text("suc (")
    p = run_cli("check", str(bad))
    assert p.returncode == 2


def test_usage_error_exits_1():
    p = run_cli("run")
    assert p.returncode == 1


def test_eval_deep():
    p = run_cli("eval", prog("add23.fun"), "--deep")
    assert p.returncode == 0
    assert p.stdout.strip() == "suc (suc (suc (suc (suc 0))))"


def test_run_deep_add():
    p = run_cli("run", prog("add23.fun"), "--deep")
    assert p.returncode == 0
    assert p.stdout.strip() == "suc (suc (suc (suc (suc 0))))"


def test_run_check_agreement_random_seed():
    p = run_cli("run", prog("add23.fun"), "--check", "--strategy", "random",
                "--seed", "7")
    assert p.returncode == 0
    assert p.stdout.splitlines()[-1] == "AGREE"


def test_run_stats():
    p = run_cli("run", prog("mult23.fun"), "--stats")
    assert p.returncode == 0
    assert "steps:" in p.stderr
    assert "evaluation:" in p.stderr


def test_fuel_exhaustion_exit_3():
    p = run_cli("run", prog("mult23.fun"), "--fuel", "2")
    assert p.returncode == 3


def test_fun_fuel_env_override():
    proc = subprocess.run(
        [sys.executable, "-m", "inets.cli", "run", prog("mult23.fun")],
        capture_output=True, text=True,
        cwd=os.path.join(os.path.dirname(__file__), ".."),
        env={**os.environ, "PYTHONPATH": "src", "FUN_FUEL": "2"},
    )
    assert proc.returncode == 3


def test_compile_outputs(tmp_path):
    net = tmp_path / "out.json"
    dot = tmp_path / "out.dot"
    system = tmp_path / "system.txt"
    p = run_cli("compile", prog("identity.fun"), "--net", str(net),
                "--dot", str(dot), "--system", str(system))
    assert p.returncode == 0
    obj = json.loads(net.read_text())
    assert list(obj.keys()) == ["agents", "wires", "interface"]
    assert "graph net {" in dot.read_text()
    assert "symbol tok" in system.read_text()


def test_run_trace_and_net_deterministic(tmp_path):
    outs = []
    for i in (1, 2):
        tr = tmp_path / f"t{i}.jsonl"
        net = tmp_path / f"n{i}.json"
        p = run_cli("run", prog("mapsuc.fun"), "--strategy", "random",
                    "--seed", "5", "--trace", str(tr), "--net", str(net))
        assert p.returncode == 0
        outs.append((tr.read_bytes(), net.read_bytes(), p.stdout))
    assert outs[0] == outs[1]


def test_replay_reproduces_final_net(tmp_path):
    tr = tmp_path / "trace.jsonl"
    net1 = tmp_path / "n1.json"
    net2 = tmp_path / "n2.json"
    p = run_cli("run", prog("add23.fun"), "--strategy", "lifo",
                "--trace", str(tr), "--net", str(net1))
    assert p.returncode == 0
    p = run_cli("run", prog("add23.fun"), "--replay", str(tr),
                "--net", str(net2))
    assert p.returncode == 0
    assert net1.read_bytes() == net2.read_bytes()


# -- export_dot ----------------------------------------------------------------

def _dot_for(src: str, token: bool = False) -> str:
    t = parse(src)
    _, symtab = program_system(t)
    res = translate(t, symtab)
    return export_dot(attach_token(res) if token else res.net)


def _dot_parts(dot: str):
    lines = dot.splitlines()
    agents = [l for l in lines if "label=" in l and " -- " not in l and "shape" not in l]
    iface = [l for l in lines if "shape=point" in l]
    edges = [l for l in lines if " -- " in l]
    return agents, iface, edges


def test_dot_zero():
    agents, iface, edges = _dot_parts(_dot_for("0"))
    assert len(agents) == 1 and len(iface) == 1 and len(edges) == 1


def test_dot_token_zero_active_edge_bold():
    dot = _dot_for("0", token=True)
    bold = [l for l in dot.splitlines() if "style=bold" in l]
    assert len(bold) == 1
    assert "a1 -- a2" in bold[0] or "a2 -- a1" in bold[0]


def test_dot_beta_redex_counts():
    agents, _, edges = _dot_parts(_dot_for("(\\x:nat. x) 0"))
    assert len(agents) == 3
    assert len(edges) == 4
    assert not any("style=bold" in l for l in edges)
