"""Interaction-net data structure and the generic rewrite step.

A net is a port graph: agents with one principal port (index 0) and
arity-many auxiliary ports (1..arity), wires joining exactly two ports,
and an ordered interface of named free ports.  Internally every free end
of a wire is a named port and the interface lists those names; the JSON
form collapses a name wired to an agent port into the agent port itself.

Rewriting happens only on active pairs (wires joining two principal
ports).  A rule replaces the two agents by a template net whose interface
holes are spliced onto the wires that hung off the consumed aux ports.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field

log = logging.getLogger(__name__)

# An agent port is (agent id, port index); a free port is its name.
Port = "tuple[int, int] | str"

KINDS = {
    "token", "syntactic-app", "computation-app", "lambda", "constructor",
    "copy", "duplicator", "eraser", "iterator-syntactic",
    "iterator-computation",
}


_KIND_ARITY = {"token": 1, "eraser": 0, "copy": 2, "duplicator": 2}


@dataclass(frozen=True)
class SymbolDecl:
    id: str
    display: str
    arity: int
    kind: str

    def __post_init__(self):
        assert self.kind in KINDS, self.kind
        assert self.arity >= 0
        fixed = _KIND_ARITY.get(self.kind)
        assert fixed is None or self.arity == fixed, (self.kind, self.arity)


@dataclass(frozen=True)
class ActivePair:
    wire_id: int
    left: tuple[int, str]   # (agent id, symbol id), lower agent id first
    right: tuple[int, str]


class Net:
    def __init__(self) -> None:
        self.agents: dict[int, tuple[str, int]] = {}  # id -> (symbol, arity)
        self.wires: dict[int, tuple[Port, Port]] = {}
        self.interface: list[str] = []
        self._port_wire: dict[Port, int] = {}
        self._next_agent = 1
        self._next_wire = 1

    # -- construction ------------------------------------------------------

    def add_agent(self, symbol: str, arity: int) -> int:
        aid = self._next_agent
        self._next_agent += 1
        self.agents[aid] = (symbol, arity)
        return aid

    def connect(self, p: Port, q: Port) -> int:
        assert p not in self._port_wire, f"port {p} already wired"
        assert q not in self._port_wire, f"port {q} already wired"
        assert p != q, f"cannot wire port {p} to itself"
        wid = self._next_wire
        self._next_wire += 1
        self.wires[wid] = (p, q)
        self._port_wire[p] = wid
        self._port_wire[q] = wid
        return wid

    def disconnect(self, wid: int) -> tuple[Port, Port]:
        p, q = self.wires.pop(wid)
        del self._port_wire[p]
        del self._port_wire[q]
        return p, q

    def remove_agent(self, aid: int) -> None:
        # caller must have disconnected every port first
        sym, arity = self.agents[aid]
        for idx in range(arity + 1):
            assert (aid, idx) not in self._port_wire
        del self.agents[aid]

    def partner(self, p: Port) -> Port | None:
        wid = self._port_wire.get(p)
        if wid is None:
            return None
        a, b = self.wires[wid]
        return b if a == p else a

    def wire_of(self, p: Port) -> int | None:
        return self._port_wire.get(p)

    def symbol(self, aid: int) -> str:
        return self.agents[aid][0]

    def arity(self, aid: int) -> int:
        return self.agents[aid][1]

    def copy(self) -> "Net":
        n = Net()
        n.agents = dict(self.agents)
        n.wires = dict(self.wires)
        n.interface = list(self.interface)
        n._port_wire = dict(self._port_wire)
        n._next_agent = self._next_agent
        n._next_wire = self._next_wire
        return n

    def counters(self) -> tuple[int, int]:
        return (self._next_agent, self._next_wire)

    def restore_counters(self, counters: tuple[int, int]) -> None:
        self._next_agent, self._next_wire = counters

    # -- serialization -------------------------------------------------------

    def to_json_obj(self) -> dict:
        """Canonical JSON object; field and element order are byte-stable."""
        agents = [
            {"id": aid, "symbol": self.agents[aid][0]}
            for aid in sorted(self.agents)
        ]
        iface_pos = {name: k for k, name in enumerate(self.interface)}

        def port_json(p: Port):
            if isinstance(p, tuple):
                return ["a", p[0], p[1]]
            return ["free", f"i{iface_pos[p]}"]

        wires = []
        for wid, (p, q) in self.wires.items():
            p_free = isinstance(p, str)
            q_free = isinstance(q, str)
            if p_free != q_free:
                continue  # a name wired to an agent port: shown via interface
            ends = sorted([port_json(p), port_json(q)], key=_port_sort_key)
            wires.append(ends)
        wires.sort(key=lambda w: (_port_sort_key(w[0]), _port_sort_key(w[1])))

        interface = []
        for name in self.interface:
            mate = self.partner(name)
            if isinstance(mate, tuple):
                interface.append(["a", mate[0], mate[1]])
            else:
                interface.append(["free", f"i{iface_pos[name]}"])
        return {"agents": agents, "wires": wires, "interface": interface}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":")) + "\n"

    @staticmethod
    def from_json_obj(obj: dict, arity_of) -> "Net":
        """arity_of: callable or mapping from symbol id to arity."""
        get = arity_of.get if hasattr(arity_of, "get") else arity_of
        n = Net()
        for a in obj["agents"]:
            aid, sym = a["id"], a["symbol"]
            n.agents[aid] = (sym, get(sym))
            n._next_agent = max(n._next_agent, aid + 1)
        for k, entry in enumerate(obj["interface"]):
            name = f"i{k}"
            n.interface.append(name)
            if entry[0] == "a":
                n.connect((entry[1], entry[2]), name)
        for p, q in obj["wires"]:
            def port(e):
                return (e[1], e[2]) if e[0] == "a" else e[1]
            pp, qq = port(p), port(q)
            if pp not in n._port_wire and qq not in n._port_wire:
                n.connect(pp, qq)
        return n

    @staticmethod
    def from_json(text: str, arity_of) -> "Net":
        return Net.from_json_obj(json.loads(text), arity_of)


def _port_sort_key(p):
    # agent ports before free ports, then numeric
    if p[0] == "a":
        return (0, p[1], p[2])
    return (1, p[1], 0)


# --------------------------------------------------------------------------
# Rules and systems
# --------------------------------------------------------------------------

@dataclass
class RuleTemplate:
    """Replacement for an active pair (left, right).

    The replacement net's interface names the holes "h1".."hN" in order:
    holes 1..arity(left) stand for the wires on left's aux ports, the rest
    for right's.
    """
    left: str
    right: str
    replacement: Net

    def hole_count(self) -> int:
        return len(self.replacement.interface)


class NoRuleForPair(Exception):
    def __init__(self, a: str, b: str):
        self.symbols = (a, b)
        super().__init__(f"no interaction rule for symbol pair ({a}, {b})")


class InteractionSystem:
    def __init__(self) -> None:
        self.symbols: dict[str, SymbolDecl] = {}
        self.rules: dict[frozenset[str], RuleTemplate] = {}

    def declare(self, decl: SymbolDecl) -> None:
        existing = self.symbols.get(decl.id)
        assert existing is None or existing == decl, f"redeclared {decl.id}"
        self.symbols[decl.id] = decl

    def add_rule(self, rule: RuleTemplate) -> None:
        key = frozenset((rule.left, rule.right))
        assert key not in self.rules, f"duplicate rule for {set(key)}"
        self.rules[key] = rule

    def lookup(self, a: str, b: str) -> RuleTemplate | None:
        return self.rules.get(frozenset((a, b)))

    def arity(self, sym: str) -> int:
        return self.symbols[sym].arity

    def union(self, other: "InteractionSystem") -> "InteractionSystem":
        merged = InteractionSystem()
        for d in self.symbols.values():
            merged.declare(d)
        for d in other.symbols.values():
            merged.declare(d)
        for r in self.rules.values():
            merged.add_rule(r)
        for r in other.rules.values():
            merged.add_rule(r)
        return merged


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

def validate(net: Net) -> list[str]:
    """Check structural invariants; returns a list of defects (empty = ok)."""
    defects: list[str] = []
    seen: dict[Port, str] = {}

    def touch(p: Port, where: str):
        if p in seen:
            defects.append(f"port {p} doubly wired ({seen[p]} and {where})")
        seen[p] = where

    for wid, (p, q) in net.wires.items():
        if p == q:
            defects.append(f"wire {wid} joins port {p} to itself")
        for p_ in (p, q):
            touch(p_, f"wire {wid}")
            if isinstance(p_, tuple):
                aid, idx = p_
                if aid not in net.agents:
                    defects.append(f"wire {wid} references missing agent {aid}")
                elif not (0 <= idx <= net.agents[aid][1]):
                    defects.append(
                        f"wire {wid} references port {idx} out of range "
                        f"for agent {aid}"
                    )
    for aid, (sym, arity) in net.agents.items():
        for idx in range(arity + 1):
            if (aid, idx) not in seen:
                defects.append(f"port ({aid}, {idx}) unwired ({sym})")
    names = [p for p in seen if isinstance(p, str)]
    for name in names:
        if name not in net.interface:
            defects.append(f"free port {name} not in interface")
    for name in net.interface:
        if net.interface.count(name) > 1:
            defects.append(f"interface name {name} repeated")
        if name not in seen:
            defects.append(f"interface port {name} unwired")
    # internal index consistency
    for p, wid in net._port_wire.items():
        if wid not in net.wires or p not in net.wires[wid]:
            defects.append(f"stale port index entry {p} -> {wid}")
    return defects


def active_pairs(net: Net) -> list[ActivePair]:
    """All wires joining two principal ports, ascending wire id."""
    out = []
    for wid in sorted(net.wires):
        p, q = net.wires[wid]
        if (
            isinstance(p, tuple) and isinstance(q, tuple)
            and p[1] == 0 and q[1] == 0
        ):
            ends = sorted(
                [(p[0], net.symbol(p[0])), (q[0], net.symbol(q[0]))]
            )
            out.append(ActivePair(wid, ends[0], ends[1]))
    return out


# --------------------------------------------------------------------------
# Rule application
# --------------------------------------------------------------------------

@dataclass
class Patch:
    """Everything needed to undo or replay one rule application."""
    rule_key: tuple[str, str]
    consumed: list[int]
    created: list[int]
    removed_agents: dict[int, tuple[str, int]] = field(default_factory=dict)
    removed_wires: dict[int, tuple[Port, Port]] = field(default_factory=dict)
    created_wires: list[int] = field(default_factory=list)
    counters_before: tuple[int, int] = (0, 0)


def _weld(net: Net, links: list[tuple, ]) -> list[int]:
    """Connect chains of endpoints into real wires.

    Each link joins two endpoints; an endpoint is ('p', port) for a real
    port or ('s', key) for a symbolic connector.  Real ports must occur
    exactly once, symbolic keys exactly twice.  Chains ending in two real
    ports become wires; closed symbolic loops are dropped.
    """
    adj: dict[tuple, list[tuple]] = {}
    for e1, e2 in links:
        adj.setdefault(e1, []).append(e2)
        adj.setdefault(e2, []).append(e1)
    created: list[int] = []
    visited: set[tuple] = set()
    # deterministic order: follow links as given
    for e1, e2 in links:
        for start in (e1, e2):
            if start in visited or start[0] != "p":
                continue
            # walk from a real port to the opposite real end
            visited.add(start)
            prev, cur = start, adj[start][0]
            while cur[0] != "p":
                visited.add(cur)
                nxts = [e for e in adj[cur] if e != prev]
                if not nxts:  # symbolic key used once: malformed template
                    raise AssertionError(f"dangling weld endpoint {cur}")
                prev, cur = cur, nxts[0]
            visited.add(cur)
            created.append(net.connect(start[1], cur[1]))
    return created


def apply_rule_inplace(net: Net, pair: ActivePair, system) -> Patch:
    """Fire an active pair, mutating net; returns the patch for undo/trace."""
    aid1, sym1 = pair.left
    aid2, sym2 = pair.right
    rule = system.lookup(sym1, sym2)
    if rule is None:
        raise NoRuleForPair(sym1, sym2)
    # orient the agents to the rule's (left, right) slot order
    if sym1 == rule.left and sym2 == rule.right:
        first, second = aid1, aid2
    elif sym1 == rule.right and sym2 == rule.left:
        first, second = aid2, aid1
        if sym1 == sym2:
            first, second = aid1, aid2  # symmetric pair: lower id first
    else:
        raise NoRuleForPair(sym1, sym2)

    patch = Patch(
        rule_key=(rule.left, rule.right),
        consumed=sorted([aid1, aid2]),
        created=[],
        counters_before=net.counters(),
    )

    ar1 = net.arity(first)
    hole_of_port: dict[Port, int] = {}
    for i in range(1, ar1 + 1):
        hole_of_port[(first, i)] = i
    for i in range(1, net.arity(second) + 1):
        hole_of_port[(second, i)] = ar1 + i

    # record the outer attachment of each hole before tearing down
    outer: dict[int, Port] = {}
    for p, k in hole_of_port.items():
        outer[k] = net.partner(p)

    # remove all wires touching the consumed agents, then the agents
    for aid in {first, second}:
        for idx in range(net.arity(aid) + 1):
            wid = net.wire_of((aid, idx))
            if wid is not None:
                patch.removed_wires[wid] = net.disconnect(wid)
    for aid in {first, second}:
        patch.removed_agents[aid] = net.agents[aid]
        net.remove_agent(aid)

    # instantiate the replacement with fresh agent ids
    repl = rule.replacement
    amap: dict[int, int] = {}
    for t_aid in sorted(repl.agents):
        sym, arity = repl.agents[t_aid]
        amap[t_aid] = net.add_agent(sym, arity)
    patch.created = sorted(amap.values())

    hole_index = {name: k + 1 for k, name in enumerate(repl.interface)}

    def t_end(p: Port):
        if isinstance(p, tuple):
            return ("p", (amap[p[0]], p[1]))
        return ("s", ("i", hole_index[p]))

    def o_end(p: Port):
        # the outer attachment may itself be an aux port of a consumed agent
        if isinstance(p, tuple) and p in hole_of_port:
            return ("s", ("o", hole_of_port[p]))
        return ("p", p)

    links = []
    seen_outer = set()
    for wid in sorted(repl.wires):
        p, q = repl.wires[wid]
        links.append((t_end(p), t_end(q)))
    for k in sorted(outer):
        o = outer[k]
        if isinstance(o, tuple) and o in hole_of_port:
            # the consumed agents' aux ports were wired to each other
            j = hole_of_port[o]
            key = (min(j, k), max(j, k))
            if key not in seen_outer:
                seen_outer.add(key)
                links.append((("s", ("o", k)), ("s", ("o", j))))
        else:
            links.append((("s", ("o", k)), ("p", o)))
        links.append((("s", ("o", k)), ("s", ("i", k))))
    patch.created_wires = _weld(net, links)
    return patch


def apply_rule(net: Net, pair: ActivePair, system) -> Net:
    """Pure variant: returns a rewritten copy of net."""
    out = net.copy()
    apply_rule_inplace(out, pair, system)
    return out


def undo_patch(net: Net, patch: Patch) -> None:
    for wid in patch.created_wires:
        net.disconnect(wid)
    for aid in patch.created:
        net.remove_agent(aid)
    for aid, decl in patch.removed_agents.items():
        net.agents[aid] = decl
    for wid, (p, q) in patch.removed_wires.items():
        net.wires[wid] = (p, q)
        net._port_wire[p] = wid
        net._port_wire[q] = wid
    net.restore_counters(patch.counters_before)


# --------------------------------------------------------------------------
# Rooted isomorphism
# --------------------------------------------------------------------------

def net_iso(a: Net, b: Net) -> bool:
    """Structural equality up to agent/wire identity.

    Starts a parallel traversal from corresponding interface positions;
    symbols, port indices, and wiring must match bijectively.  Components
    unreachable from the interface are compared by canonical hashing.
    """
    if len(a.interface) != len(b.interface):
        return False
    pos_a = {name: k for k, name in enumerate(a.interface)}
    pos_b = {name: k for k, name in enumerate(b.interface)}
    amap: dict[int, int] = {}
    bmap: dict[int, int] = {}
    queue: list[tuple[int, int]] = []

    def match_ports(pa: Port | None, pb: Port | None) -> bool:
        if isinstance(pa, str) or isinstance(pb, str):
            if not (isinstance(pa, str) and isinstance(pb, str)):
                return False
            return pos_a[pa] == pos_b[pb]
        if pa is None or pb is None:
            return pa is None and pb is None
        (aida, idxa), (aidb, idxb) = pa, pb
        if idxa != idxb:
            return False
        if a.symbol(aida) != b.symbol(aidb):
            return False
        if aida in amap or aidb in bmap:
            return amap.get(aida) == aidb and bmap.get(aidb) == aida
        amap[aida] = aidb
        bmap[aidb] = aida
        queue.append((aida, aidb))
        return True

    for k in range(len(a.interface)):
        if not match_ports(a.partner(a.interface[k]), b.partner(b.interface[k])):
            return False
    while queue:
        x, y = queue.pop()
        if a.arity(x) != b.arity(y):
            return False
        for idx in range(a.arity(x) + 1):
            if not match_ports(a.partner((x, idx)), b.partner((y, idx))):
                return False

    rest_a = set(a.agents) - set(amap)
    rest_b = set(b.agents) - set(bmap)
    if not rest_a and not rest_b:
        return True
    log.warning(
        "net_iso: components disconnected from the interface "
        "(%d vs %d agents); falling back to canonical hashing",
        len(rest_a), len(rest_b),
    )
    return _component_hashes(a, rest_a) == _component_hashes(b, rest_b)


def _component_hashes(net: Net, agents: set[int]) -> list[str]:
    """Canonical per-component hashes via iterated neighborhood refinement."""
    comps: list[list[int]] = []
    todo = set(agents)
    while todo:
        seed = todo.pop()
        comp = [seed]
        stack = [seed]
        while stack:
            x = stack.pop()
            for idx in range(net.arity(x) + 1):
                m = net.partner((x, idx))
                if isinstance(m, tuple) and m[0] in todo:
                    todo.remove(m[0])
                    comp.append(m[0])
                    stack.append(m[0])
        comps.append(comp)

    def comp_hash(comp: list[int]) -> str:
        label = {x: net.symbol(x) for x in comp}
        for _ in range(len(comp)):
            nxt = {}
            for x in comp:
                sig = []
                for idx in range(net.arity(x) + 1):
                    m = net.partner((x, idx))
                    if isinstance(m, tuple):
                        sig.append((idx, m[1], label.get(m[0], "?")))
                    else:
                        sig.append((idx, -1, "free"))
                nxt[x] = hashlib.sha256(
                    repr((label[x], sorted(sig))).encode()
                ).hexdigest()[:16]
            label = nxt
        return hashlib.sha256(repr(sorted(label.values())).encode()).hexdigest()

    return sorted(comp_hash(c) for c in comps)
