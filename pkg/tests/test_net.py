"""Net structure: validation, active pairs, rule application, isomorphism,
and the JSON wire format."""

import random

import pytest

from inets.net import (
    Net, NoRuleForPair, active_pairs, apply_rule, apply_rule_inplace,
    net_iso, undo_patch, validate,
)
from inets.parser import parse
from inets.systemgen import ERASE, base_system, program_system
from inets.translate import attach_token, translate

import corpus


def _compiled(src: str):
    t = parse(src)
    system, symtab = program_system(t)
    return t, system, symtab, translate(t, symtab)


# -- validate -----------------------------------------------------------------

def test_validate_empty_net_with_interface_wire():
    n = Net()
    n.connect("l", "r")
    n.interface = ["l", "r"]
    assert validate(n) == []


def test_validate_unwired_aux_port():
    n = Net()
    a = n.add_agent("suc", 1)
    n.connect((a, 0), "root")
    n.interface = ["root"]
    defects = validate(n)
    assert any("unwired" in d for d in defects)


def test_validate_doubly_wired_port():
    n = Net()
    a = n.add_agent("suc", 1)
    b = n.add_agent("zero", 0)
    c = n.add_agent("zero", 0)
    n.connect((a, 0), "root")
    n.interface = ["root"]
    n.connect((a, 1), (b, 0))
    # bypass connect's guard to build the broken net
    wid = n._next_wire
    n._next_wire += 1
    n.wires[wid] = ((a, 1), (c, 0))
    defects = validate(n)
    assert any("doubly wired" in d for d in defects)


# -- active pairs -------------------------------------------------------------

def test_translation_has_no_active_pairs_on_corpus():
    for prog in corpus.CORPUS:
        _, _, _, res = _compiled(prog.source)
        assert active_pairs(res.net) == [], prog.name


def test_token_makes_exactly_one_pair():
    _, _, _, res = _compiled("0")
    start = attach_token(res)
    pairs = active_pairs(start)
    assert len(pairs) == 1
    syms = {pairs[0].left[1], pairs[0].right[1]}
    assert syms == {"tok", "zero"}


def test_two_erasers_form_a_pair():
    n = Net()
    a = n.add_agent(ERASE, 0)
    b = n.add_agent(ERASE, 0)
    n.connect((a, 0), (b, 0))
    pairs = active_pairs(n)
    assert len(pairs) == 1
    assert pairs[0].left[1] == pairs[0].right[1] == ERASE


# -- apply_rule ---------------------------------------------------------------

def test_eraser_annihilation():
    n = Net()
    a = n.add_agent(ERASE, 0)
    b = n.add_agent(ERASE, 0)
    n.connect((a, 0), (b, 0))
    out = apply_rule(n, active_pairs(n)[0], base_system())
    assert out.agents == {}
    assert out.wires == {}
    assert validate(out) == []


def test_token_constructor_restores_translation():
    _, system, symtab, res = _compiled("true")
    start = attach_token(res)
    out = apply_rule(start, active_pairs(start)[0], system)
    assert validate(out) == []
    assert net_iso(out, res.net)


def test_beta_chain_reaches_translated_zero():
    t, system, symtab, res = _compiled("(\\x:nat. x) 0")
    net = attach_token(res)
    rules = []
    for _ in range(3):
        pair = active_pairs(net)[0]
        rules.append((pair.left[1], pair.right[1]))
        net = apply_rule(net, pair, system)
    # after token, token-lambda, beta: a token sits on T[0]
    _, _, _, res0 = _compiled("0")
    assert net_iso(net, attach_token(res0))


def test_no_rule_for_pair_raises():
    n = Net()
    a = n.add_agent("copy", 2)
    b = n.add_agent("copy", 2)
    n.connect((a, 0), (b, 0))
    n.connect((a, 1), "w")
    n.connect((a, 2), "x")
    n.connect((b, 1), "y")
    n.connect((b, 2), "z")
    n.interface = ["w", "x", "y", "z"]
    with pytest.raises(NoRuleForPair) as e:
        apply_rule(n, active_pairs(n)[0], base_system())
    assert e.value.symbols == ("copy", "copy")


def test_apply_preserves_interface_and_validity():
    for prog in corpus.CORPUS[:8]:
        _, system, _, res = _compiled(prog.source)
        net = attach_token(res)
        for _ in range(30):
            pairs = active_pairs(net)
            if not pairs:
                break
            before = list(net.interface)
            net = apply_rule(net, pairs[0], system)
            assert net.interface == before
            assert validate(net) == []


def test_wire_count_bookkeeping():
    # wires = (sum of ports + interface size) / 2 after every step
    _, system, _, res = _compiled(corpus.CORPUS[8].source)
    net = attach_token(res)
    while True:
        ports = sum(arity + 1 for _, arity in net.agents.values())
        assert len(net.wires) == (ports + len(net.interface)) / 2
        pairs = active_pairs(net)
        if not pairs:
            break
        net = apply_rule(net, pairs[0], system)


def test_undo_patch_restores_exactly():
    _, system, _, res = _compiled("(\\x:nat. x) 0")
    net = attach_token(res)
    before = net.to_json()
    counters = net.counters()
    patch = apply_rule_inplace(net, active_pairs(net)[0], system)
    assert net.to_json() != before
    undo_patch(net, patch)
    assert net.to_json() == before
    assert net.counters() == counters


# -- one-step strong confluence ------------------------------------------------

def test_one_step_diamond_on_reachable_nets():
    checked = 0
    for prog in corpus.CORPUS:
        _, system, _, res = _compiled(prog.source)
        net = attach_token(res)
        for _ in range(200):
            pairs = active_pairs(net)
            if not pairs:
                break
            if len(pairs) >= 2:
                p, q = pairs[0], pairs[1]
                pq = apply_rule(apply_rule(net, p, system),
                                _find(apply_rule(net, p, system), q), system)
                qp = apply_rule(apply_rule(net, q, system),
                                _find(apply_rule(net, q, system), p), system)
                assert net_iso(pq, qp), prog.name
                checked += 1
            net = apply_rule(net, pairs[0], system)
    assert checked > 5


def _find(net, pair):
    # the residual of a pair not consumed by a disjoint step keeps its wire id
    for cand in active_pairs(net):
        if cand.wire_id == pair.wire_id:
            return cand
    raise AssertionError("residual pair disappeared")


# -- net_iso ------------------------------------------------------------------

def test_iso_reflexive_trivial():
    _, _, _, a = _compiled("0")
    _, _, _, b = _compiled("0")
    assert net_iso(a.net, b.net)


def test_iso_distinguishes_constructors():
    _, _, _, a = _compiled("0")
    _, _, _, b = _compiled("true")
    assert not net_iso(a.net, b.net)


def test_iso_invariant_under_id_permutation():
    _, _, _, res = _compiled("\\x:nat. suc x")
    net = res.net
    rng = random.Random(7)
    ids = list(net.agents)
    shuffled = ids[:]
    rng.shuffle(shuffled)
    perm = dict(zip(ids, shuffled))
    other = Net()
    other.agents = {perm[a]: net.agents[a] for a in net.agents}
    other.interface = list(net.interface)
    other._next_agent = net._next_agent

    def mv(p):
        return (perm[p[0]], p[1]) if isinstance(p, tuple) else p

    for wid, (p, q) in net.wires.items():
        other.connect(mv(p), mv(q))
    assert validate(other) == []
    assert net_iso(net, other)


def test_iso_detects_swapped_aux():
    a = Net()
    c = a.add_agent("cons", 2)
    z = a.add_agent("zero", 0)
    t = a.add_agent("true", 0)
    a.connect((c, 0), "root")
    a.connect((c, 1), (z, 0))
    a.connect((c, 2), (t, 0))
    a.interface = ["root"]

    b = Net()
    c2 = b.add_agent("cons", 2)
    z2 = b.add_agent("zero", 0)
    t2 = b.add_agent("true", 0)
    b.connect((c2, 0), "root")
    b.connect((c2, 1), (t2, 0))
    b.connect((c2, 2), (z2, 0))
    b.interface = ["root"]
    assert not net_iso(a, b)


def test_iso_equivalence_on_corpus_sample():
    nets = []
    for prog in corpus.CORPUS[:6]:
        _, _, _, res = _compiled(prog.source)
        nets.append(res.net)
    for n in nets:
        assert net_iso(n, n)
    for i, a in enumerate(nets):
        for j, b in enumerate(nets):
            assert net_iso(a, b) == net_iso(b, a)


# -- JSON ----------------------------------------------------------------------

def test_json_round_trip():
    for prog in corpus.CORPUS[:10]:
        _, system, _, res = _compiled(prog.source)
        text = res.net.to_json()
        back = Net.from_json(text, lambda sym: system.arity(sym))
        assert validate(back) == []
        assert net_iso(res.net, back)
        assert back.to_json() == text


def test_json_shape():
    _, _, _, res = _compiled("suc 0")
    obj = res.net.to_json_obj()
    assert list(obj.keys()) == ["agents", "wires", "interface"]
    assert obj["agents"] == [{"id": 1, "symbol": "suc"}, {"id": 2, "symbol": "zero"}]
    assert obj["interface"] == [["a", 1, 0]]
    assert obj["wires"] == [[["a", 1, 1], ["a", 2, 0]]]


def test_json_free_free_wire():
    n = Net()
    n.connect("l", "r")
    n.interface = ["l", "r"]
    obj = n.to_json_obj()
    assert obj["interface"] == [["free", "i0"], ["free", "i1"]]
    assert obj["wires"] == [[["free", "i0"], ["free", "i1"]]]
    back = Net.from_json_obj(obj, {})
    assert validate(back) == []
    assert net_iso(n, back)


def test_iso_disconnected_components_fall_back_to_hashing():
    # identical garbage components: equal; different garbage: not equal
    def with_garbage(symbol):
        _, _, _, res = _compiled("0")
        net = res.net.copy()
        a = net.add_agent(symbol, 0)
        b = net.add_agent(ERASE, 0)
        net.connect((a, 0), (b, 0))
        return net

    assert net_iso(with_garbage(ERASE), with_garbage(ERASE))
    assert not net_iso(with_garbage(ERASE), with_garbage("zero"))
    assert not net_iso(with_garbage(ERASE), _compiled("0")[3].net)
