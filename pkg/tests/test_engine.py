"""Reduction engine: traces, strategies, fuel, deep reduction."""

import pytest

from inets.engine import reduce, reduce_deep, replay
from inets.net import net_iso, validate
from inets.oracle import deep_eval
from inets.parser import parse
from inets.systemgen import TOK, program_system
from inets.terms import alpha_eq, nat_lit
from inets.translate import attach_token, translate

import corpus


def _start(src: str):
    t = parse(src)
    system, symtab = program_system(t)
    return t, system, symtab, attach_token(translate(t, symtab))


def test_single_step_token_zero():
    t, system, symtab, start = _start("0")
    report = reduce(start, system)
    assert report.steps == 1
    res = translate(t, symtab)
    assert net_iso(report.net, res.net)


def test_four_step_beta_chain():
    t, system, symtab, start = _start("(\\x:nat. x) 0")
    report = reduce(start, system)
    assert [e.rule for e in report.trace] == [
        ("tok", "app"), ("tok", "lam"), ("capp", "lam"), ("tok", "zero"),
    ]
    _, _, symtab0, _ = _start("0")
    assert net_iso(report.net, translate(parse("0"), symtab0).net)


def test_iterbool_reduces_to_translated_branch():
    t, system, symtab, start = _start("iterbool <0> <suc 0> false")
    report = reduce(start, system)
    _, _, symtab2, _ = _start("suc 0")
    assert net_iso(report.net, translate(parse("suc 0"), symtab2).net)


def test_trace_is_contiguous_and_replayable():
    t, system, symtab, start = _start(corpus.CORPUS[8].source)
    report = reduce(start, system)
    assert [e.step for e in report.trace] == list(range(1, report.steps + 1))
    redo = replay(start, system, [e.to_json_obj() for e in report.trace])
    assert redo.steps == report.steps
    assert redo.net.to_json() == report.net.to_json()


def test_same_seed_same_trace():
    _, system, _, start = _start(corpus.CORPUS[9].source)
    a = reduce(start, system, "random", seed=42)
    b = reduce(start, system, "random", seed=42)
    assert [e.to_json_obj() for e in a.trace] == [e.to_json_obj() for e in b.trace]
    assert a.net.to_json() == b.net.to_json()


def test_strategy_irrelevance_sample():
    for prog in corpus.CORPUS[:6]:
        _, system, _, start = _start(prog.source)
        base = reduce(start, system, "fifo")
        for strategy, seed in [("lifo", 0), ("random", 1), ("random", 99)]:
            other = reduce(start, system, strategy, seed)
            assert other.steps == base.steps, prog.name
            assert net_iso(other.net, base.net), prog.name


def test_single_token_invariant_sample():
    for prog in corpus.CORPUS[:10]:
        _, system, _, start = _start(prog.source)

        def count_tokens(net, event, patch):
            toks = sum(1 for sym, _ in net.agents.values() if sym == TOK)
            assert toks <= 1, prog.name

        reduce(start, system, on_step=count_tokens)


def test_fuel_exhaustion_flag():
    _, system, _, start = _start(corpus.CORPUS[9].source)
    report = reduce(start, system, fuel=2)
    assert report.fuel_exhausted
    assert report.steps == 2
    assert validate(report.net) == []


def test_stats_split_evaluation_vs_management():
    _, system, _, start = _start(corpus.CORPUS[15].source)  # shared variable
    report = reduce(start, system)
    assert report.steps == report.eval_steps + report.mgmt_steps
    assert report.mgmt_steps > 0  # sharing forces copy/erase work
    assert report.per_rule.total() == report.steps


def test_reduce_deep_matches_oracle():
    t = parse(corpus.CORPUS[8].source)
    assert alpha_eq(reduce_deep(t), nat_lit(5))
    for prog in corpus.CORPUS[:12]:
        if not prog.first_order:
            continue
        t = parse(prog.source)
        assert alpha_eq(reduce_deep(t), deep_eval(t)), prog.name


def test_termination_on_corpus_within_default_fuel():
    for prog in corpus.CORPUS:
        _, system, _, start = _start(prog.source)
        report = reduce(start, system)
        assert not report.fuel_exhausted, prog.name
        assert validate(report.net) == [], prog.name


def test_shadowed_iterlist_binders_agree_with_oracle():
    # the accumulator binder shadows the head binder when names collide
    t, system, symtab, start = _start(
        "iterlist <\\a a. a> <nil> (cons (suc 0) nil)"
    )
    report = reduce(start, system)
    from inets.translate import readback
    from inets.oracle import eval_cbn
    assert alpha_eq(readback(report.net, symtab), eval_cbn(parse(
        "iterlist <\\a a. a> <nil> (cons (suc 0) nil)"
    )))


def test_iterator_binder_shadows_free_variable_of_base():
    # the step's 'a' is the binder; the base's 'a' is captured from the lambda
    src = "(\\a:nat. iternat <\\a. suc a> <a> (suc 0)) (suc (suc 0))"
    t, system, symtab, start = _start(src)
    report = reduce(start, system)
    from inets.translate import readback
    from inets.oracle import deep_eval, eval_cbn
    assert alpha_eq(readback(report.net, symtab), eval_cbn(parse(src)))
    assert alpha_eq(reduce_deep(parse(src)), deep_eval(parse(src)))
    assert alpha_eq(reduce_deep(parse(src)), nat_lit(3))
