"""Interaction-system construction.

base_system() is the fixed rule set: evaluation-token rules, the beta rule
between computation application and lambda, and the management (copy,
duplicate, erase) rules.  gen_system(term) adds one fresh symbol pair per
iterator occurrence together with that iterator's interaction rules, which
embed the translations of the iterator's parameter terms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .net import InteractionSystem, Net, RuleTemplate, SymbolDecl, _weld
from .terms import (
    Abs, App, Cons, IterBool, IterList, IterNat, Suc, Term, Var, free_vars,
)

# -- base symbols -----------------------------------------------------------

TOK = "tok"        # evaluation token
APP = "app"        # syntactic application, principal toward the root
CAPP = "capp"      # computation application, principal toward the function
LAM = "lam"
COPY = "copy"      # fan-out placed by the translator on shared variables
DUP = "dup"        # duplicator placed by copy rules
ERASE = "erase"

CONSTRUCTORS: list[tuple[str, str, int]] = [
    ("true", "true", 0),
    ("false", "false", 0),
    ("zero", "0", 0),
    ("nil", "nil", 0),
    ("suc", "suc", 1),
    ("cons", "cons", 2),
]
CONSTRUCTOR_IDS = [c[0] for c in CONSTRUCTORS]

BASE_DECLS = [
    SymbolDecl(TOK, "⇓", 1, "token"),
    SymbolDecl(APP, "@", 2, "syntactic-app"),
    SymbolDecl(CAPP, "@̂", 2, "computation-app"),
    SymbolDecl(LAM, "λ", 2, "lambda"),
    SymbolDecl(COPY, "c", 2, "copy"),
    SymbolDecl(DUP, "δ", 2, "duplicator"),
    SymbolDecl(ERASE, "ε", 0, "eraser"),
] + [SymbolDecl(i, d, a, "constructor") for i, d, a in CONSTRUCTORS]

_BASE_ARITY = {d.id: d.arity for d in BASE_DECLS}


# -- template construction helpers ------------------------------------------

class _TB:
    """Builds a rule replacement net; holes are named ports h1..hN.

    Endpoints passed to link() are agent ports, hole names, or ports of a
    grafted subnet referenced as ('sub', graft_id, interface_name).
    """

    def __init__(self, holes: int):
        self.net = Net()
        self.net.interface = [f"h{i}" for i in range(1, holes + 1)]
        self.links: list[tuple] = []
        self._grafts = 0

    def agent(self, sym: str, arity: int) -> int:
        return self.net.add_agent(sym, arity)

    @staticmethod
    def _end(e):
        if isinstance(e, tuple) and e and e[0] == "sub":
            return ("s", e)
        return ("p", e)

    def link(self, e1, e2) -> None:
        self.links.append((self._end(e1), self._end(e2)))

    def graft(self, sub: Net) -> int:
        """Copy a standalone net in; its interface names become symbolic ends."""
        gid = self._grafts
        self._grafts += 1
        amap = {}
        for aid in sorted(sub.agents):
            sym, arity = sub.agents[aid]
            amap[aid] = self.net.add_agent(sym, arity)

        def end(p):
            if isinstance(p, tuple):
                return ("p", (amap[p[0]], p[1]))
            return ("s", ("sub", gid, p))

        for wid in sorted(sub.wires):
            p, q = sub.wires[wid]
            self.links.append((end(p), end(q)))
        return gid

    def sub(self, gid: int, name: str):
        return ("sub", gid, name)

    def finish(self) -> Net:
        _weld(self.net, self.links)
        return self.net


def _rule(left: str, right: str, holes: int) -> tuple[RuleTemplate, _TB]:
    tb = _TB(holes)
    return RuleTemplate(left, right, tb.net), tb


# -- base rules --------------------------------------------------------------

def base_system() -> InteractionSystem:
    sys = InteractionSystem()
    for d in BASE_DECLS:
        sys.declare(d)

    # token meets syntactic application: become computation application,
    # send the token down the function wire
    r, tb = _rule(TOK, APP, 3)  # h1 observer, h2 function, h3 argument
    capp = tb.agent(CAPP, 2)
    tok = tb.agent(TOK, 1)
    tb.link((tok, 0), "h2")
    tb.link((tok, 1), (capp, 0))
    tb.link((capp, 1), "h1")
    tb.link((capp, 2), "h3")
    tb.finish()
    sys.add_rule(r)

    # token meets lambda: the lambda is a value, re-emit it facing the observer
    r, tb = _rule(TOK, LAM, 3)  # h1 observer, h2 binder, h3 body
    lam = tb.agent(LAM, 2)
    tb.link((lam, 0), "h1")
    tb.link((lam, 1), "h2")
    tb.link((lam, 2), "h3")
    tb.finish()
    sys.add_rule(r)

    # token meets a constructor: evaluation stops there
    for cid, _, arity in CONSTRUCTORS:
        r, tb = _rule(TOK, cid, 1 + arity)
        k = tb.agent(cid, arity)
        tb.link((k, 0), "h1")
        for i in range(1, arity + 1):
            tb.link((k, i), f"h{1 + i}")
        tb.finish()
        sys.add_rule(r)

    # beta: computation application meets lambda; argument into the binder
    # wire, fresh token sent down the body
    r, tb = _rule(CAPP, LAM, 4)  # h1 root, h2 argument, h3 binder, h4 body
    tok = tb.agent(TOK, 1)
    tb.link((tok, 0), "h4")
    tb.link((tok, 1), "h1")
    tb.link("h2", "h3")
    tb.finish()
    sys.add_rule(r)

    # erasure
    for sym in [APP, LAM, COPY, DUP, ERASE] + CONSTRUCTOR_IDS:
        sys.add_rule(_erase_rule(sym, _BASE_ARITY[sym]))

    # copying: a fan (or a duplicator) meets a syntax-tree node
    for sym in [LAM, APP] + CONSTRUCTOR_IDS:
        sys.add_rule(_duplicate_rule(COPY, sym, _BASE_ARITY[sym]))
        sys.add_rule(_duplicate_rule(DUP, sym, _BASE_ARITY[sym]))

    # a duplicator meets a fan that is part of the tree being copied
    r, tb = _rule(DUP, COPY, 4)  # h1,h2 dup outputs; h3,h4 fan outputs
    c1 = tb.agent(COPY, 2)
    c2 = tb.agent(COPY, 2)
    d1 = tb.agent(DUP, 2)
    d2 = tb.agent(DUP, 2)
    tb.link((c1, 0), "h1")
    tb.link((c2, 0), "h2")
    tb.link((d1, 0), "h3")
    tb.link((d2, 0), "h4")
    tb.link((d1, 1), (c1, 1))
    tb.link((d1, 2), (c2, 1))
    tb.link((d2, 1), (c1, 2))
    tb.link((d2, 2), (c2, 2))
    tb.finish()
    sys.add_rule(r)

    # duplicator pair annihilates: the two copy fronts met
    r, tb = _rule(DUP, DUP, 4)
    tb.link("h1", "h3")
    tb.link("h2", "h4")
    tb.finish()
    sys.add_rule(r)

    return sys


def _erase_rule(sym: str, arity: int) -> RuleTemplate:
    r, tb = _rule(ERASE, sym, arity)
    for i in range(1, arity + 1):
        e = tb.agent(ERASE, 0)
        tb.link((e, 0), f"h{i}")
    tb.finish()
    return r


def _duplicate_rule(copier: str, sym: str, arity: int) -> RuleTemplate:
    # holes: h1,h2 = copier outputs; h3.. = sym's aux wires
    r, tb = _rule(copier, sym, 2 + arity)
    a1 = tb.agent(sym, arity)
    a2 = tb.agent(sym, arity)
    tb.link((a1, 0), "h1")
    tb.link((a2, 0), "h2")
    for i in range(1, arity + 1):
        d = tb.agent(DUP, 2)
        tb.link((d, 0), f"h{2 + i}")
        tb.link((d, 1), (a1, i))
        tb.link((d, 2), (a2, i))
    tb.finish()
    return r


# -- per-program iterator symbols --------------------------------------------

@dataclass(frozen=True)
class IteratorDescriptor:
    kind: str                  # 'bool' | 'nat' | 'list'
    syn_id: str
    comp_id: str
    fvs: tuple[str, ...]       # free variables of the parameter terms, ordered
    binders: tuple[str, ...]   # () | (x,) | (x, y)
    params: tuple[Term, ...]   # (on_true, on_false) | (step, base)
    path: tuple[int, ...]      # occurrence position (child indices from root)

    @property
    def arity(self) -> int:
        return 1 + len(self.fvs)


class SymbolTable:
    """Maps generated iterator symbols to descriptors.

    Symbols are per occurrence, so equal iterator expressions at different
    positions get different symbols; by_path disambiguates during
    translation, by_id serves rule generation and readback.
    """

    def __init__(self) -> None:
        self.by_id: dict[str, IteratorDescriptor] = {}
        self.by_path: dict[tuple[int, ...], IteratorDescriptor] = {}

    def register(self, d: IteratorDescriptor) -> None:
        assert d.syn_id not in self.by_id and d.comp_id not in self.by_id
        self.by_id[d.syn_id] = d
        self.by_id[d.comp_id] = d
        self.by_path[d.path] = d

    def get(self, sym: str) -> IteratorDescriptor | None:
        return self.by_id.get(sym)

    def at_path(self, path: tuple[int, ...]) -> IteratorDescriptor | None:
        return self.by_path.get(path)

    def descriptors(self) -> list[IteratorDescriptor]:
        seen = []
        for sym, d in self.by_id.items():
            if sym == d.syn_id:
                seen.append(d)
        return seen


def _param_free_vars(t: Term) -> list[str]:
    """Free variables of the iterator's parameters, in first-occurrence
    order, excluding the scrutinee's contribution."""
    match t:
        case IterBool(on_true, on_false, _):
            probe = IterBool(on_true, on_false, Var("\x00"))
        case IterNat(binder, step, base, _):
            probe = IterNat(binder, step, base, Var("\x00"))
        case IterList(hb, ab, step, base, _):
            probe = IterList(hb, ab, step, base, Var("\x00"))
        case _:
            raise AssertionError("not an iterator")
    return [v for v in free_vars(probe) if v != "\x00"]


def _descriptor(t: Term, n: int, path: tuple[int, ...]) -> IteratorDescriptor:
    fvs = tuple(_param_free_vars(t))
    match t:
        case IterBool(on_true, on_false, _):
            return IteratorDescriptor(
                "bool", f"It_bool_{n}", f"ItC_bool_{n}", fvs, (),
                (on_true, on_false), path,
            )
        case IterNat(binder, step, base, _):
            return IteratorDescriptor(
                "nat", f"It_nat_{n}", f"ItC_nat_{n}", fvs, (binder,),
                (step, base), path,
            )
        case IterList(hb, ab, step, base, _):
            return IteratorDescriptor(
                "list", f"It_list_{n}", f"ItC_list_{n}", fvs, (hb, ab),
                (step, base), path,
            )
    raise AssertionError("not an iterator")


def term_children(t: Term) -> list[Term]:
    """Subterms in the fixed child order used for occurrence paths."""
    match t:
        case Abs(_, _, body):
            return [body]
        case App(fun, arg):
            return [fun, arg]
        case Suc(pred):
            return [pred]
        case Cons(head, tail):
            return [head, tail]
        case IterBool(on_true, on_false, scrutinee):
            return [on_true, on_false, scrutinee]
        case IterNat(_, step, base, scrutinee):
            return [step, base, scrutinee]
        case IterList(_, _, step, base, scrutinee):
            return [step, base, scrutinee]
        case _:
            return []


def gen_system(t: Term) -> tuple[InteractionSystem, SymbolTable]:
    """Per-program system: a fresh symbol pair and rule set for every
    iterator occurrence (distinct occurrences get distinct symbols, even
    when syntactically equal).  Compose with base_system() before use.
    """
    symtab = SymbolTable()
    occurrences: list[IteratorDescriptor] = []
    counter = 0

    def pass1(t: Term, path: tuple[int, ...]) -> None:
        nonlocal counter
        if isinstance(t, (IterBool, IterNat, IterList)):
            counter += 1
            d = _descriptor(t, counter, path)
            symtab.register(d)
            occurrences.append(d)
        for i, child in enumerate(term_children(t)):
            pass1(child, path + (i,))

    pass1(t, ())
    sys = InteractionSystem()
    for d in occurrences:
        sys.declare(SymbolDecl(d.syn_id, d.syn_id, d.arity, "iterator-syntactic"))
        sys.declare(SymbolDecl(d.comp_id, d.comp_id, d.arity, "iterator-computation"))
    for d in occurrences:
        for rule in iterator_rules(d, symtab):
            sys.add_rule(rule)
    return sys, symtab


def program_system(t: Term) -> tuple[InteractionSystem, SymbolTable]:
    """Full system for reducing translations of t: base plus generated."""
    gen, symtab = gen_system(t)
    return base_system().union(gen), symtab


# -- iterator rules -----------------------------------------------------------

def iterator_rules(d: IteratorDescriptor, symtab: SymbolTable) -> list[RuleTemplate]:
    """Token rule, one rule per constructor of the iterated type, and the
    management rows for the generated symbol pair.

    The constructor rules re-emit a token over the translation of the
    selected parameter term; the recursive cases reintroduce a syntactic
    iterator agent carrying all free-variable ports, fanning a variable
    with a fresh copy agent when both the parameter net and the
    reintroduced agent need it.
    """
    from .translate import translate  # deferred: translate builds on symtab

    rules: list[RuleTemplate] = []
    m = len(d.fvs)

    # token rule: descend into the scrutinee, computation agent waits on it
    r, tb = _rule(TOK, d.syn_id, 1 + d.arity)
    # holes: h1 observer; h2 scrutinee; h3.. fv ports
    comp = tb.agent(d.comp_id, d.arity)
    tok = tb.agent(TOK, 1)
    tb.link((tok, 0), "h2")
    tb.link((tok, 1), (comp, 0))
    tb.link((comp, 1), "h1")
    for j in range(1, m + 1):
        tb.link((comp, 1 + j), f"h{2 + j}")
    tb.finish()
    rules.append(r)

    def leaf_rule(ctor: str, param: Term, param_index: int) -> RuleTemplate:
        # computation agent meets a terminal constructor: token over the
        # translated parameter; unused fv ports are erased
        arity = _BASE_ARITY[ctor]
        r, tb = _rule(d.comp_id, ctor, d.arity + arity)
        assert arity == 0
        res = translate(param, symtab, prefix=d.path + (param_index,))
        gid = tb.graft(res.net)
        tok = tb.agent(TOK, 1)
        tb.link((tok, 0), tb.sub(gid, res.root))
        tb.link((tok, 1), "h1")
        fv_param = set(free_vars(param))
        for j, v in enumerate(d.fvs, start=1):
            if v in fv_param:
                tb.link(f"h{1 + j}", tb.sub(gid, res.var_ports[v]))
            else:
                e = tb.agent(ERASE, 0)
                tb.link(f"h{1 + j}", (e, 0))
        tb.finish()
        return r

    def recursive_rule(ctor: str) -> RuleTemplate:
        # computation agent meets suc/cons: token over the translated step
        # term, binder ports wired to the constructor's argument wires and
        # to a reintroduced syntactic iterator over the recursive argument
        step = d.params[0]
        arity = _BASE_ARITY[ctor]
        r, tb = _rule(d.comp_id, ctor, d.arity + arity)
        res = translate(step, symtab, prefix=d.path + (0,))
        gid = tb.graft(res.net)
        tok = tb.agent(TOK, 1)
        tb.link((tok, 0), tb.sub(gid, res.root))
        tb.link((tok, 1), "h1")
        it2 = tb.agent(d.syn_id, d.arity)
        fv_step = set(free_vars(step))

        if d.kind == "nat":
            x, = d.binders
            rec_hole = f"h{1 + m + 1}"  # suc's argument: the predecessor
        else:
            x, y = d.binders
            head_hole = f"h{1 + m + 1}"
            rec_hole = f"h{1 + m + 2}"
            # equal binder names: the accumulator shadows the head binder
            if x != y and x in fv_step:
                tb.link(tb.sub(gid, res.var_ports[x]), head_hole)
            else:
                e = tb.agent(ERASE, 0)
                tb.link((e, 0), head_hole)
            x = y  # the accumulator binder receives the reintroduced agent

        tb.link((it2, 1), rec_hole)
        if x in fv_step:
            tb.link(tb.sub(gid, res.var_ports[x]), (it2, 0))
        else:
            e = tb.agent(ERASE, 0)
            tb.link((e, 0), (it2, 0))
        # a free variable named like one of the binders cannot occur in the
        # step term (the binder shadows it everywhere)
        visible = fv_step - set(d.binders)
        for j, v in enumerate(d.fvs, start=1):
            if v in visible:
                c = tb.agent(COPY, 2)
                tb.link((c, 0), f"h{1 + j}")
                tb.link((c, 1), tb.sub(gid, res.var_ports[v]))
                tb.link((c, 2), (it2, 1 + j))
            else:
                tb.link(f"h{1 + j}", (it2, 1 + j))
        tb.finish()
        return r

    if d.kind == "bool":
        on_true, on_false = d.params
        rules.append(leaf_rule("true", on_true, 0))
        rules.append(leaf_rule("false", on_false, 1))
    elif d.kind == "nat":
        rules.append(leaf_rule("zero", d.params[1], 1))
        rules.append(recursive_rule("suc"))
    else:
        rules.append(leaf_rule("nil", d.params[1], 1))
        rules.append(recursive_rule("cons"))

    # management rows: erasure for both symbols, duplication only for the
    # syntactic one (computation agents are never copied in call-by-name)
    rules.append(_erase_rule(d.syn_id, d.arity))
    rules.append(_erase_rule(d.comp_id, d.arity))
    rules.append(_duplicate_rule(COPY, d.syn_id, d.arity))
    rules.append(_duplicate_rule(DUP, d.syn_id, d.arity))
    return rules


# -- system dump ---------------------------------------------------------------

def dump_system(sys: InteractionSystem, include_nets: bool = False) -> str:
    """Plain-text listing of symbols and rules, stable order."""
    lines = []
    for sym in sorted(sys.symbols):
        d = sys.symbols[sym]
        lines.append(f"symbol {d.id} ({d.display}) arity={d.arity} kind={d.kind}")
    for key in sorted(sys.rules, key=lambda k: tuple(sorted(k))):
        r = sys.rules[key]
        lines.append(
            f"rule {r.left} >< {r.right} -> agents={len(r.replacement.agents)}, "
            f"holes={r.hole_count()}"
        )
        if include_nets:
            lines.append("  " + r.replacement.to_json().strip())
    return "\n".join(lines) + "\n"
