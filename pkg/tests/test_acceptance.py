"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line.  Run with `pytest tests/test_acceptance.py -s -v`.
"""

import functools
import json
import os
import random
import subprocess
import sys
import time

from inets.engine import reduce
from inets.net import active_pairs, apply_rule, net_iso, validate
from inets.oracle import deep_eval, eval_cbn
from inets.parser import parse
from inets.session import Session, handle
from inets.systemgen import COPY, DUP, ERASE, TOK, program_system
from inets.terms import alpha_eq, pretty
from inets.translate import attach_token, readback, translate

import corpus

PROGRAMS = os.path.join(os.path.dirname(__file__), "..", "programs")


def criterion(label):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {label}")
                raise
            print(f"[PASS] {label}")
            return result
        return wrapper
    return deco


def _compile(src):
    t = parse(src)
    system, symtab = program_system(t)
    res = translate(t, symtab)
    return t, system, symtab, res


@criterion("correctness on the desk-scale corpus (weak forms, exact)")
def test_proposition_correctness_corpus():
    assert len(corpus.CORPUS) >= 25
    t0 = time.monotonic()
    agree = 0
    for prog in corpus.CORPUS:
        t, system, symtab, res = _compile(prog.source)
        report = reduce(attach_token(res), system)
        assert not report.fuel_exhausted, prog.name
        assert active_pairs(report.net) == [], prog.name
        z_net = readback(report.net, symtab)
        z_oracle = eval_cbn(t)
        assert alpha_eq(z_net, z_oracle), (
            f"{prog.name}: net gave {pretty(z_net)}, "
            f"evaluator gave {pretty(z_oracle)}"
        )
        agree += 1
    elapsed = time.monotonic() - t0
    assert agree == len(corpus.CORPUS)
    assert elapsed < 10.0, f"corpus took {elapsed:.2f}s"


@criterion("translations have no active pairs; the token adds exactly one")
def test_no_active_pairs_and_token():
    for prog in corpus.CORPUS:
        _, _, _, res = _compile(prog.source)
        assert active_pairs(res.net) == [], prog.name
        assert len(active_pairs(attach_token(res))) == 1, prog.name


ONE_STEP_INSTANCES = [
    # (source, expected after one iterator firing + management quiescence)
    ("iterlist <\\x y. cons x y> <nil> (cons 0 nil)",
     "cons 0 (iterlist <\\x y. cons x y> <nil> nil)"),
    ("iternat <\\x. suc x> <0> (suc 0)",
     "suc (iternat <\\x. suc x> <0> 0)"),
    ("iterbool <0> <suc 0> true", "0"),
    ("iterbool <0> <suc 0> false", "suc 0"),
    ("iternat <\\x. suc x> <a> 0", "a"),
    ("iterlist <\\x y. cons x y> <nil> nil", "nil"),
    ("iterlist <\\x y. cons a y> <nil> (cons 0 nil)",
     "cons a (iterlist <\\x y. cons a y> <nil> nil)"),
]


def _is_management(pair):
    return {pair.left[1], pair.right[1]} & {COPY, DUP, ERASE}


@criterion("iterator one-step law (fire, quiesce management, compare nets)")
def test_iterator_one_step_law():
    assert len(ONE_STEP_INSTANCES) >= 5
    for src, expect_src in ONE_STEP_INSTANCES:
        t, system, symtab, res = _compile(src)
        net = attach_token(res, allow_open=True)
        # token enters the iterator, token stops at the constructor, then
        # the iterator rule proper fires
        fired = None
        for _ in range(3):
            pairs = active_pairs(net)
            assert len(pairs) == 1, src
            fired = {pairs[0].left[1], pairs[0].right[1]}
            net = apply_rule(net, pairs[0], system)
        assert any(s.startswith("ItC_") for s in fired), src
        while True:
            mgmt = [p for p in active_pairs(net) if _is_management(p)]
            if not mgmt:
                break
            net = apply_rule(net, mgmt[0], system)
        _, _, symtab2, res2 = _compile(expect_src)
        want = attach_token(res2, allow_open=True)
        assert net_iso(net, want), src


@criterion("strategy irrelevance: counts and normal forms across strategies")
def test_strategy_irrelevance():
    seeds = list(range(10))
    for prog in corpus.CORPUS:
        _, system, _, res = _compile(prog.source)
        start = attach_token(res)
        base = reduce(start, system, "fifo")
        runs = [("lifo", 0)] + [("random", s) for s in seeds]
        for strategy, seed in runs:
            other = reduce(start, system, strategy, seed)
            assert other.steps == base.steps, (prog.name, strategy, seed)
            assert net_iso(other.net, base.net), (prog.name, strategy, seed)


@criterion("single-token property on every step of every corpus trace")
def test_single_token_property():
    for prog in corpus.CORPUS:
        _, system, _, res = _compile(prog.source)
        start = attach_token(res)
        assert sum(1 for s, _ in start.agents.values() if s == TOK) == 1

        def check(net, event, patch, name=prog.name):
            toks = sum(1 for sym, _ in net.agents.values() if sym == TOK)
            assert toks <= 1, (name, event.step)

        reduce(start, system, on_step=check)


@criterion("deep agreement between net reduction and the evaluator")
def test_deep_agreement():
    from inets.engine import reduce_deep
    from inets.terms import nat_lit

    for prog in corpus.CORPUS:
        if not prog.first_order:
            continue
        t = parse(prog.source)
        assert alpha_eq(reduce_deep(t), deep_eval(t)), prog.name
    # the spot checks the criterion names explicitly
    assert alpha_eq(
        reduce_deep(parse(corpus.CORPUS[8].source)), nat_lit(5)
    )
    got = reduce_deep(parse(
        "(\\f:nat->nat. \\l:list nat. iterlist <\\x y. cons (f x) y> <nil> l) "
        "(\\n:nat. suc n) (cons 0 (cons (suc 0) nil))"
    ))
    assert alpha_eq(got, parse("cons (suc 0) (cons (suc (suc 0)) nil)"))


@criterion("identical CLI invocations produce byte-identical outputs")
def test_cli_determinism(tmp_path):
    outputs = []
    for i in (1, 2):
        tr = tmp_path / f"trace{i}.jsonl"
        net = tmp_path / f"net{i}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "inets.cli", "run",
             os.path.join(PROGRAMS, "add23.fun"),
             "--strategy", "random", "--seed", "11",
             "--trace", str(tr), "--net", str(net)],
            capture_output=True, text=True,
            cwd=os.path.join(os.path.dirname(__file__), ".."),
            env={**os.environ, "PYTHONPATH": "src"},
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append((tr.read_bytes(), net.read_bytes(), proc.stdout))
    assert outputs[0] == outputs[1]


@criterion("undo soundness over 1000 randomized step/undo sequences")
def test_undo_soundness():
    from inets.engine import replay

    rng = random.Random(2024)
    sources = [
        "(\\x:nat. x) 0",
        "iterbool <0> <suc 0> false",
        "(\\m:nat. iternat <\\x. suc x> <0> m) (suc 0)",
        "(\\x:nat. iternat <\\y. suc y> <x> x) (suc 0)",
    ]
    compiled = {}
    for src in sources:
        t = parse(src)
        system, symtab = program_system(t)
        start = attach_token(translate(t, symtab))
        compiled[src] = (system, start)

    for seq in range(1000):
        src = sources[seq % len(sources)]
        system, start = compiled[src]
        s = Session()
        assert handle(s, {"cmd": "load", "source": src})["ok"]
        for _ in range(rng.randrange(2, 12)):
            pairs = handle(s, {"cmd": "pairs"})["pairs"]
            do_undo = s.history and (not pairs or rng.random() < 0.4)
            if do_undo:
                assert handle(s, {"cmd": "undo", "rev": s.revision})["ok"]
            elif pairs:
                i = rng.randrange(len(pairs))
                assert handle(
                    s, {"cmd": "step", "rev": s.revision, "pair_index": i}
                )["ok"]
        # replaying the surviving history from the initial net reproduces
        # the session's net byte for byte
        events = [e.to_json_obj() for e, _ in s.history]
        redo = replay(start, system, events)
        assert redo.net.to_json() == s.net.to_json()
