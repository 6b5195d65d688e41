"""Reduction engine: drives a net to normal form under a deterministic
strategy, producing a replayable trace and step statistics.

Interaction nets are strongly confluent, so the strategy changes neither
the final net (up to isomorphism) nor the step count; it only fixes the
trace.  Active-pair bookkeeping is incremental: only wires created by the
previous step are re-examined.
"""

from __future__ import annotations

import os
import random
from collections import Counter
from dataclasses import dataclass, field

from .net import ActivePair, InteractionSystem, Net, Patch, active_pairs, apply_rule_inplace
from .systemgen import CAPP, TOK, program_system
from .terms import Cons, Suc, Term

DEFAULT_FUEL = 10**6


def default_fuel() -> int:
    env = os.environ.get("FUN_FUEL")
    return int(env) if env else DEFAULT_FUEL


@dataclass(frozen=True)
class TraceEvent:
    step: int                  # 1-based, contiguous
    rule: tuple[str, str]
    consumed: tuple[int, int]
    created: tuple[int, ...]

    def to_json_obj(self) -> dict:
        return {
            "step": self.step,
            "rule": list(self.rule),
            "consumed": list(self.consumed),
            "created": list(self.created),
        }


@dataclass
class ReductionReport:
    net: Net
    steps: int
    per_rule: Counter
    eval_steps: int
    mgmt_steps: int
    fuel_exhausted: bool
    trace: list[TraceEvent] = field(default_factory=list)


class Scheduler:
    """Tracks discovered active wires; selection order is the strategy."""

    def __init__(self, net: Net, strategy: str = "fifo", seed: int = 0):
        if strategy not in ("fifo", "lifo", "random"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.net = net
        self.strategy = strategy
        self.rng = random.Random(seed)
        self.active: dict[int, ActivePair] = {}
        for pair in active_pairs(net):
            self.active[pair.wire_id] = pair

    def note_wires(self, wids: list[int]) -> None:
        for wid in wids:
            pq = self.net.wires.get(wid)
            if pq is None:
                continue
            p, q = pq
            if (
                isinstance(p, tuple) and isinstance(q, tuple)
                and p[1] == 0 and q[1] == 0
            ):
                ends = sorted(
                    [(p[0], self.net.symbol(p[0])), (q[0], self.net.symbol(q[0]))]
                )
                self.active[wid] = ActivePair(wid, ends[0], ends[1])

    def drop_wires(self, wids) -> None:
        for wid in wids:
            self.active.pop(wid, None)

    def pick(self) -> ActivePair | None:
        if not self.active:
            return None
        if self.strategy == "fifo":
            wid = next(iter(self.active))
        elif self.strategy == "lifo":
            wid = next(reversed(self.active))
        else:
            wid = self.rng.choice(sorted(self.active))
        return self.active[wid]


def _is_eval_rule(system: InteractionSystem, rule: tuple[str, str]) -> bool:
    for sym in rule:
        if sym in (TOK, CAPP):
            return True
        decl = system.symbols.get(sym)
        if decl is not None and decl.kind == "iterator-computation":
            return True
    return False


def fire(net: Net, pair: ActivePair, system: InteractionSystem,
         scheduler: Scheduler | None = None) -> Patch:
    """Apply one rule in place, keeping the scheduler's pair set current."""
    patch = apply_rule_inplace(net, pair, system)
    if scheduler is not None:
        scheduler.drop_wires(patch.removed_wires)
        scheduler.note_wires(patch.created_wires)
    return patch


def reduce(net: Net, system: InteractionSystem, strategy: str = "fifo",
           seed: int = 0, fuel: int | None = None,
           on_step=None) -> ReductionReport:
    """Reduce to normal form (or until fuel runs out), mutating a copy.

    The trace replays exactly: same strategy and seed give the same wire
    selections and, because agent ids are allocated monotonically, the
    same agent ids.
    """
    if fuel is None:
        fuel = default_fuel()
    net = net.copy()
    sched = Scheduler(net, strategy, seed)
    report = ReductionReport(net, 0, Counter(), 0, 0, False)
    while True:
        pair = sched.pick()
        if pair is None:
            return report
        if report.steps >= fuel:
            report.fuel_exhausted = True
            return report
        patch = fire(net, pair, system, sched)
        report.steps += 1
        report.per_rule[patch.rule_key] += 1
        if _is_eval_rule(system, patch.rule_key):
            report.eval_steps += 1
        else:
            report.mgmt_steps += 1
        event = TraceEvent(
            report.steps, patch.rule_key,
            tuple(patch.consumed), tuple(patch.created),
        )
        report.trace.append(event)
        if on_step is not None:
            on_step(net, event, patch)


def replay(net: Net, system: InteractionSystem,
           events: list[dict]) -> ReductionReport:
    """Re-run a recorded trace by firing the recorded agent pairs."""
    net = net.copy()
    report = ReductionReport(net, 0, Counter(), 0, 0, False)
    for ev in events:
        a, b = ev["consumed"]
        pair = None
        for cand in active_pairs(net):
            if {cand.left[0], cand.right[0]} == {a, b}:
                pair = cand
                break
        if pair is None:
            raise ValueError(
                f"trace step {ev['step']}: agents {a}, {b} are not an active pair"
            )
        patch = fire(net, pair, system)
        report.steps += 1
        report.per_rule[patch.rule_key] += 1
        report.trace.append(TraceEvent(
            report.steps, patch.rule_key,
            tuple(patch.consumed), tuple(patch.created),
        ))
    return report


def reduce_deep(t: Term, strategy: str = "fifo", seed: int = 0,
                fuel: int | None = None) -> Term:
    """Net-side analogue of deep oracle evaluation: reduce, read back, then
    recursively reduce the arguments of suc/cons by re-translating them."""
    from .translate import attach_token, readback, translate

    def run(t: Term) -> Term:
        system, symtab = program_system(t)
        start = attach_token(translate(t, symtab))
        report = reduce(start, system, strategy, seed, fuel)
        if report.fuel_exhausted:
            raise RuntimeError("reduction fuel exhausted")
        z = readback(report.net, symtab)
        if isinstance(z, Suc):
            return Suc(run(z.pred))
        if isinstance(z, Cons):
            return Cons(run(z.head), run(z.tail))
        return z

    return run(t)
