"""Translation between terms and nets.

translate() encodes a term as a syntax-tree net with no active pairs:
variables become wires, shared variables fan out through right-leaning
copy trees, and each iterator occurrence becomes a single syntactic agent
over its scrutinee (parameter terms live in the generated rules, not in
the net).  attach_token() starts evaluation; readback() inverts the
translation on nets containing only syntactic symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

from .net import Net
from .systemgen import (
    APP, CAPP, COPY, ERASE, LAM, TOK, SymbolTable, term_children,
)
from .terms import (
    Abs, App as AppT, Cons, Fls, IterBool, IterList, IterNat, Nil, Suc,
    Term, Tru, Var, Zero, free_vars, fresh_name, rename_binder, subst,
)

Port = "tuple[int, int] | str"

ROOT = "root"


def _var_iface(name: str) -> str:
    return f"v:{name}"


class TranslateError(Exception):
    pass


@dataclass
class TranslationResult:
    net: Net
    root: str                      # interface name of the root port
    var_ports: dict[str, str]      # free variable -> interface name


def translate(t: Term, symtab: SymbolTable, prefix: tuple[int, ...] = ()) -> TranslationResult:
    """Build the syntax-tree net of t.

    prefix locates t inside the program whose symbol table is given, so
    iterator occurrences inside t resolve to their own symbols (used when
    translating iterator parameters during rule generation).
    """
    net = Net()
    occs: dict[str, list[Port]] = {}

    def fan(ports: list[Port]) -> Port:
        # right-leaning copy tree in occurrence order; the returned port
        # faces the incoming value
        if len(ports) == 1:
            return ports[0]
        c = net.add_agent(COPY, 2)
        net.connect((c, 1), ports[0])
        net.connect((c, 2), fan(ports[1:]))
        return (c, 0)

    def bind(name: str, scope_occs: dict[str, list[Port]], target: Port) -> None:
        ports = scope_occs.pop(name, [])
        if not ports:
            e = net.add_agent(ERASE, 0)
            net.connect(target, (e, 0))
        else:
            net.connect(target, fan(ports))

    def merge(parent: dict[str, list[Port]], child: dict[str, list[Port]]) -> None:
        for name, ports in child.items():
            parent.setdefault(name, []).extend(ports)

    def core(t: Term, parent: Port, path: tuple[int, ...], occs: dict[str, list[Port]]) -> None:
        match t:
            case Var(name):
                occs.setdefault(name, []).append(parent)
            case Abs(name, _, body):
                lam = net.add_agent(LAM, 2)
                net.connect(parent, (lam, 0))
                inner: dict[str, list[Port]] = {}
                core(body, (lam, 2), path + (0,), inner)
                bind(name, inner, (lam, 1))
                merge(occs, inner)
            case AppT(fun, arg):
                app = net.add_agent(APP, 2)
                net.connect(parent, (app, 0))
                core(fun, (app, 1), path + (0,), occs)
                core(arg, (app, 2), path + (1,), occs)
            case Tru():
                _leaf("true", parent)
            case Fls():
                _leaf("false", parent)
            case Zero():
                _leaf("zero", parent)
            case Nil():
                _leaf("nil", parent)
            case Suc(pred):
                s = net.add_agent("suc", 1)
                net.connect(parent, (s, 0))
                core(pred, (s, 1), path + (0,), occs)
            case Cons(head, tail):
                c = net.add_agent("cons", 2)
                net.connect(parent, (c, 0))
                core(head, (c, 1), path + (0,), occs)
                core(tail, (c, 2), path + (1,), occs)
            case IterBool(_, _, scrutinee) | IterNat(_, _, _, scrutinee) | IterList(_, _, _, _, scrutinee):
                d = symtab.at_path(prefix + path)
                if d is None:
                    raise TranslateError(
                        f"iterator occurrence at {prefix + path} is not "
                        "registered in the symbol table"
                    )
                it = net.add_agent(d.syn_id, d.arity)
                net.connect(parent, (it, 0))
                # scrutinee is aux 1, fv ports occupy aux 2..
                for j, v in enumerate(d.fvs, start=1):
                    occs.setdefault(v, []).append((it, 1 + j))
                scrut_index = len(term_children(t)) - 1
                core(scrutinee, (it, 1), path + (scrut_index,), occs)
            case _:
                raise AssertionError(f"unknown term {t!r}")

    def _leaf(sym: str, parent: Port) -> None:
        a = net.add_agent(sym, 0)
        net.connect(parent, (a, 0))

    core(t, ROOT, (), occs)
    net.interface.append(ROOT)
    var_ports: dict[str, str] = {}
    for name in free_vars(t):
        iface = _var_iface(name)
        ports = occs.pop(name, [])
        assert ports, f"missing occurrence list for free variable {name}"
        net.connect(fan(ports), iface)
        net.interface.append(iface)
        var_ports[name] = iface
    assert not occs, f"unaccounted variable occurrences: {sorted(occs)}"
    return TranslationResult(net, ROOT, var_ports)


def attach_token(r: TranslationResult, allow_open: bool = False) -> Net:
    """Wire an evaluation token onto the root; its aux port becomes the
    observer end of the interface.  The result has exactly one active pair.
    """
    if r.var_ports and not allow_open:
        raise TranslateError(
            f"cannot start evaluation: free variables {sorted(r.var_ports)}"
        )
    net = r.net.copy()
    term_root = net.partner(r.root)
    net.disconnect(net.wire_of(r.root))
    tok = net.add_agent(TOK, 1)
    net.connect((tok, 0), term_root)
    net.connect((tok, 1), r.root)
    return net


# --------------------------------------------------------------------------
# Readback
# --------------------------------------------------------------------------

class ReadbackError(Exception):
    pass


class NotSyntacticForm(ReadbackError):
    def __init__(self, symbols: list[str]):
        self.symbols = symbols
        super().__init__(
            "net not in syntactic form: computation symbols present: "
            + ", ".join(sorted(set(symbols)))
        )


class GarbageComponent(ReadbackError):
    def __init__(self, agent_ids: list[int]):
        self.agent_ids = agent_ids
        super().__init__(
            f"garbage component: agents unreachable from the root: {agent_ids}"
        )


_COMPUTATION = {TOK, CAPP}


def readback(net: Net, symtab: SymbolTable) -> Term:
    """Decode a purely syntactic net back into a term.

    Lambda binders get fresh names.  Iterator agents are rebuilt from the
    symbol table, with each parameter free variable replaced by whatever
    arrives at the corresponding port: an enclosing binder's variable, or
    a substituted value subnet, which is read back and substituted in.
    """
    if not net.interface:
        raise ReadbackError("net has no interface port to read from")

    bad = [
        sym for sym, _ in net.agents.values()
        if sym in _COMPUTATION or (symtab.get(sym) and symtab.get(sym).comp_id == sym)
    ]
    if bad:
        raise NotSyntacticForm(bad)

    iface_var: dict[str, str] = {}
    for name in net.interface[1:]:
        iface_var[name] = name[2:] if name.startswith("v:") else name

    visited: set[int] = set()
    binder_of_port: dict[tuple[int, int], str] = {}
    used_names = set(iface_var.values())
    counter = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        name = f"x{counter}"
        while name in used_names:
            counter += 1
            name = f"x{counter}"
        used_names.add(name)
        return name

    def resolve_occurrence(q) -> Term:
        # q terminates an occurrence wire; walk up any copy tree to find
        # the binder, an interface port, or a substituted value tree
        while isinstance(q, tuple) and net.symbol(q[0]) == COPY and q[1] != 0:
            visited.add(q[0])
            q = net.partner((q[0], 0))
        if isinstance(q, str):
            if q in iface_var:
                return Var(iface_var[q])
            raise ReadbackError(f"occurrence resolves to unknown free port {q}")
        aid, idx = q
        sym = net.symbol(aid)
        if sym == LAM and idx == 1:
            if (aid, 1) not in binder_of_port:
                raise ReadbackError(
                    f"occurrence resolves to binder of unvisited lambda {aid}"
                )
            return Var(binder_of_port[(aid, 1)])
        if idx == 0:
            # a value wired into the occurrence position (pending share or
            # substituted tree): read it as a term
            return read(q)
        raise ReadbackError(f"occurrence resolves to unexpected port {q}")

    def read(q) -> Term:
        if isinstance(q, str):
            if q in iface_var:
                return Var(iface_var[q])
            raise ReadbackError(f"descent reached unknown free port {q}")
        aid, idx = q
        sym = net.symbol(aid)
        if idx != 0:
            if sym == LAM and idx == 1:
                return resolve_occurrence(q)
            if sym == COPY:
                return resolve_occurrence(q)
            raise ReadbackError(
                f"descent reached aux port {idx} of {sym} agent {aid}"
            )
        if aid in visited:
            raise ReadbackError(f"agent {aid} ({sym}) reached twice from the root")
        visited.add(aid)
        if sym == LAM:
            x = fresh()
            binder_of_port[(aid, 1)] = x
            body = read(net.partner((aid, 2)))
            mate = net.partner((aid, 1))
            if isinstance(mate, tuple) and net.symbol(mate[0]) == ERASE:
                visited.add(mate[0])
            return Abs(x, None, body)
        if sym == APP:
            return AppT(read(net.partner((aid, 1))), read(net.partner((aid, 2))))
        if sym == "true":
            return Tru()
        if sym == "false":
            return Fls()
        if sym == "zero":
            return Zero()
        if sym == "nil":
            return Nil()
        if sym == "suc":
            return Suc(read(net.partner((aid, 1))))
        if sym == "cons":
            return Cons(
                read(net.partner((aid, 1))), read(net.partner((aid, 2)))
            )
        d = symtab.get(sym)
        if d is not None and d.syn_id == sym:
            scrut = read(net.partner((aid, 1)))
            values = {
                v: resolve_occurrence(net.partner((aid, 1 + j)))
                for j, v in enumerate(d.fvs, start=1)
            }
            return _rebuild_iterator(d, values, scrut)
        raise ReadbackError(f"unexpected symbol {sym} during readback")

    def _rebuild_iterator(d, values: dict[str, Term], scrut: Term) -> Term:
        value_fvs = set()
        for t in values.values():
            value_fvs.update(free_vars(t))
        # binders must collide neither with the values' free variables
        # (capture) nor with the descriptor's fv names (a step's textually
        # free occurrence of such a name belongs to the binder, and
        # substitution below must not touch it)
        binder_avoid = value_fvs | set(d.fvs)

        def apply_values(t: Term) -> Term:
            for v in d.fvs:
                if v in free_vars(t):
                    t = subst(t, v, values[v])
            return t

        if d.kind == "bool":
            return IterBool(
                apply_values(d.params[0]), apply_values(d.params[1]), scrut
            )
        if d.kind == "nat":
            x = d.binders[0]
            step = d.params[0]
            x, step = rename_binder(x, step, binder_avoid)
            return IterNat(x, apply_values(step), apply_values(d.params[1]), scrut)
        x, y = d.binders
        step = d.params[0]
        if x == y:
            # shadowed head binder has no occurrences; pick a non-capturing
            # name without substituting
            x = fresh_name(x, binder_avoid | set(free_vars(step)) | {y})
        else:
            x, step = rename_binder(x, step, binder_avoid | {y})
        y, step = rename_binder(y, step, binder_avoid | {x})
        return IterList(x, y, apply_values(step), apply_values(d.params[1]), scrut)

    term = read(net.partner(net.interface[0]))
    unreached = sorted(set(net.agents) - visited)
    if unreached:
        raise GarbageComponent(unreached)
    return term

