"""Term-to-net translation, token attachment, and readback."""

import pytest

from inets.net import active_pairs, validate
from inets.oracle import eval_cbn
from inets.parser import parse
from inets.systemgen import COPY, ERASE, program_system
from inets.terms import alpha_eq, free_vars
from inets.translate import (
    GarbageComponent, NotSyntacticForm, TranslateError, attach_token,
    readback, translate,
)

import corpus


def _node_count(t):
    from inets.systemgen import term_children
    return 1 + sum(_node_count(c) for c in term_children(t))


def _compiled(src: str):
    t = parse(src)
    system, symtab = program_system(t)
    return t, system, symtab, translate(t, symtab)


def test_translate_zero_single_agent():
    _, _, _, res = _compiled("0")
    assert [sym for sym, _ in res.net.agents.values()] == ["zero"]
    assert res.net.partner(res.root) == (1, 0)


def test_translate_identity_lambda_self_wiring():
    _, _, _, res = _compiled("\\x:nat. x")
    assert [sym for sym, _ in res.net.agents.values()] == ["lam"]
    lam = next(iter(res.net.agents))
    assert res.net.partner((lam, 1)) == (lam, 2)


def test_translate_iterator_has_no_parameter_agents():
    _, _, _, res = _compiled("iterlist <\\x y. cons x y> <nil> nil")
    symbols = sorted(sym for sym, _ in res.net.agents.values())
    assert symbols == ["It_list_1", "nil"]


def test_translate_unused_binder_gets_eraser():
    _, _, _, res = _compiled("\\x:nat. 0")
    symbols = sorted(sym for sym, _ in res.net.agents.values())
    assert symbols == [ERASE, "lam", "zero"]


def test_translate_shared_variable_gets_fan():
    t, _, symtab, res = _compiled("\\f:nat -> nat. f (f 0)")
    symbols = [sym for sym, _ in res.net.agents.values()]
    assert symbols.count(COPY) == 1


def test_translate_fan_is_right_leaning_in_occurrence_order():
    _, _, _, res = _compiled("\\f:nat -> nat. f (f (f 0))")
    net = res.net
    lam = next(a for a, (s, _) in net.agents.items() if s == "lam")
    c1 = net.partner((lam, 1))
    assert net.symbol(c1[0]) == COPY and c1[1] == 0
    c2 = net.partner((c1[0], 2))
    assert net.symbol(c2[0]) == COPY and c2[1] == 0
    # second fan's outputs are plain occurrence ports
    assert net.symbol(net.partner((c2[0], 1))[0]) == "app"
    assert net.symbol(net.partner((c2[0], 2))[0]) == "app"


def test_translate_open_term_exposes_variable_ports():
    t = parse("f (g x)")
    system, symtab = program_system(t)
    res = translate(t, symtab)
    assert list(res.var_ports) == ["f", "g", "x"]
    assert res.net.interface == [res.root] + list(res.var_ports.values())
    assert validate(res.net) == []


def test_no_active_pairs_and_agent_bound_on_corpus():
    for prog in corpus.CORPUS:
        t, _, _, res = _compiled(prog.source)
        assert active_pairs(res.net) == [], prog.name
        assert validate(res.net) == [], prog.name
        assert len(res.net.agents) <= 2 * _node_count(t), prog.name


def test_attach_token_exactly_one_pair():
    for src in ["0", "\\x:nat. x", "(\\x:nat. x) 0"]:
        _, _, _, res = _compiled(src)
        assert len(active_pairs(attach_token(res))) == 1


def test_attach_token_rejects_open_terms():
    t = parse("suc x")
    _, symtab = program_system(t)
    res = translate(t, symtab)
    with pytest.raises(TranslateError, match="free variables"):
        attach_token(res)
    attach_token(res, allow_open=True)


# -- readback -----------------------------------------------------------------

def test_readback_round_trip_trivial():
    for src in ["0", "\\x:nat. suc x", "iternat <\\x. suc x> <0> (suc 0)"]:
        t, _, symtab, res = _compiled(src)
        assert alpha_eq(readback(res.net, symtab), t), src


def test_readback_round_trip_corpus():
    for prog in corpus.CORPUS:
        t, _, symtab, res = _compiled(prog.source)
        assert alpha_eq(readback(res.net, symtab), t), prog.name


def test_readback_rejects_computation_symbols():
    _, _, symtab, res = _compiled("(\\x:nat. x) 0")
    start = attach_token(res)
    with pytest.raises(NotSyntacticForm) as e:
        readback(start, symtab)
    assert "tok" in e.value.symbols


def test_readback_reports_garbage():
    _, _, symtab, res = _compiled("0")
    net = res.net.copy()
    a = net.add_agent(ERASE, 0)
    b = net.add_agent(ERASE, 0)
    net.connect((a, 0), (b, 0))
    with pytest.raises(GarbageComponent) as e:
        readback(net, symtab)
    assert e.value.agent_ids == [a, b]


def test_readback_weak_form_reconstructs_iterator_from_symtab():
    # reduce add 2 3 to weak form: suc over a live iterator agent whose
    # base port holds the substituted numeral
    from inets.engine import reduce

    t, system, symtab, res = _compiled(corpus.CORPUS[8].source)
    report = reduce(attach_token(res), system)
    z = readback(report.net, symtab)
    assert alpha_eq(z, eval_cbn(t))


def test_translate_unregistered_iterator_occurrence_fails():
    t = parse("iternat <\\x. suc x> <0> 0")
    other, symtab_other = program_system(parse("0"))
    with pytest.raises(TranslateError, match="not registered"):
        translate(t, symtab_other)
