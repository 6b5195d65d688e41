"""Command-line entry point.

Subcommands: check (typecheck), eval (reference evaluator), compile
(emit net/system/dot), run (reduce and read back, optionally checking
against the evaluator), serve (interactive session protocol).

Exit codes: 0 ok, 1 usage, 2 parse/type error, 3 fuel exhausted,
4 evaluator/net disagreement, 5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import default_fuel, reduce, reduce_deep, replay
from .net import Net, NoRuleForPair, active_pairs, validate
from .oracle import FuelExhausted, deep_eval, eval_cbn
from .parser import ParseError, parse
from .systemgen import dump_system, program_system
from .terms import alpha_eq, pretty
from .translate import ReadbackError, attach_token, readback, translate
from .typecheck import TypecheckError, typecheck

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOURCE = 2
EXIT_FUEL = 3
EXIT_DISAGREE = 4
EXIT_INTERNAL = 5


def export_dot(net: Net) -> str:
    """Graphviz text for a net: one node per agent labeled symbol#id,
    active (principal-principal) wires bold, aux ends labeled with port
    indices, interface ports as point-shaped nodes."""
    lines = ["graph net {", "  node [fontsize=10];"]
    for aid in sorted(net.agents):
        sym, _ = net.agents[aid]
        lines.append(f'  a{aid} [label="{sym}#{aid}"];')
    iface_pos = {name: k for k, name in enumerate(net.interface)}
    for name in net.interface:
        lines.append(f'  i{iface_pos[name]} [shape=point, xlabel="{name}"];')

    def node(p) -> tuple[str, int | None]:
        if isinstance(p, tuple):
            return f"a{p[0]}", p[1]
        return f"i{iface_pos[p]}", None

    for wid in sorted(net.wires):
        p, q = net.wires[wid]
        (np_, ip), (nq, iq) = node(p), node(q)
        attrs = []
        labels = [str(i) for i in (ip, iq) if i not in (None, 0)]
        if labels:
            attrs.append(f'label="{",".join(labels)}"')
        if ip == 0 and iq == 0:
            attrs.append("style=bold")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {np_} -- {nq}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _load(path: str):
    with open(path, encoding="utf-8") as f:
        source = f.read()
    t = parse(source)
    ty = typecheck(t)
    return t, ty


def _compile(t):
    system, symtab = program_system(t)
    result = translate(t, symtab)
    defects = validate(result.net)
    if defects:
        raise AssertionError("translated net invalid: " + "; ".join(defects))
    return system, symtab, result


def cmd_check(args) -> int:
    t, ty = _load(args.file)
    print(ty)
    return EXIT_OK


def cmd_eval(args) -> int:
    t, _ = _load(args.file)
    fuel = args.fuel if args.fuel is not None else default_fuel()
    z = deep_eval(t, fuel) if args.deep else eval_cbn(t, fuel)
    print(pretty(z))
    return EXIT_OK


def cmd_compile(args) -> int:
    t, _ = _load(args.file)
    system, symtab, result = _compile(t)
    if args.net:
        with open(args.net, "w", encoding="utf-8") as f:
            f.write(result.net.to_json())
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as f:
            f.write(export_dot(result.net))
    if args.system:
        with open(args.system, "w", encoding="utf-8") as f:
            f.write(dump_system(system))
    if not (args.net or args.dot or args.system):
        sys.stdout.write(result.net.to_json())
    return EXIT_OK


def cmd_run(args) -> int:
    t, _ = _load(args.file)
    system, symtab, result = _compile(t)
    start = attach_token(result)
    fuel = args.fuel if args.fuel is not None else default_fuel()

    if args.replay:
        with open(args.replay, encoding="utf-8") as f:
            events = [json.loads(line) for line in f if line.strip()]
        report = replay(start, system, events)
    else:
        report = reduce(start, system, args.strategy, args.seed, fuel)
    if report.fuel_exhausted:
        print("fuel exhausted", file=sys.stderr)
        return EXIT_FUEL

    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as f:
            for ev in report.trace:
                f.write(json.dumps(ev.to_json_obj(), separators=(",", ":")) + "\n")
    if args.net:
        with open(args.net, "w", encoding="utf-8") as f:
            f.write(report.net.to_json())

    if args.deep:
        term = reduce_deep(t, args.strategy, args.seed, fuel)
    else:
        term = readback(report.net, symtab)
    print(pretty(term))

    if args.stats:
        print(f"steps: {report.steps}", file=sys.stderr)
        print(
            f"evaluation: {report.eval_steps}  management: {report.mgmt_steps}",
            file=sys.stderr,
        )
        for key in sorted(report.per_rule):
            print(f"  {key[0]} >< {key[1]}: {report.per_rule[key]}", file=sys.stderr)

    if args.check:
        expected = deep_eval(t, fuel) if args.deep else eval_cbn(t, fuel)
        if alpha_eq(term, expected):
            print("AGREE")
        else:
            print(
                f"DISAGREE: net gave {pretty(term)}, evaluator gave "
                f"{pretty(expected)}",
                file=sys.stderr,
            )
            return EXIT_DISAGREE
    return EXIT_OK


def cmd_serve(args) -> int:
    from .session import serve

    serve(args.port, source_file=args.file)
    return EXIT_OK


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="inets")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="typecheck a program and print its type")
    c.add_argument("file")
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("eval", help="run the reference call-by-name evaluator")
    c.add_argument("file")
    c.add_argument("--deep", action="store_true")
    c.add_argument("--fuel", type=int, default=None)
    c.set_defaults(fn=cmd_eval)

    c = sub.add_parser("compile", help="translate to a net without reducing")
    c.add_argument("file")
    c.add_argument("--net", help="write Net JSON here")
    c.add_argument("--dot", help="write Graphviz output here")
    c.add_argument("--system", help="write the interaction-system dump here")
    c.set_defaults(fn=cmd_compile)

    c = sub.add_parser("run", help="reduce the net and read the result back")
    c.add_argument("file")
    c.add_argument("--deep", action="store_true")
    c.add_argument("--strategy", choices=["fifo", "lifo", "random"], default="fifo")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--fuel", type=int, default=None)
    c.add_argument("--trace", help="write a JSONL trace here")
    c.add_argument("--replay", help="re-fire the pairs recorded in this trace")
    c.add_argument("--net", help="write final Net JSON here")
    c.add_argument("--stats", action="store_true")
    c.add_argument("--check", action="store_true",
                   help="also run the evaluator and report agreement")
    c.set_defaults(fn=cmd_run)

    c = sub.add_parser("serve", help="serve the interactive session protocol")
    c.add_argument("file", nargs="?", default=None)
    c.add_argument("--port", type=int, default=4270)
    c.set_defaults(fn=cmd_serve)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.fn(args)
    except (ParseError, TypecheckError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SOURCE
    except FuelExhausted:
        print("fuel exhausted", file=sys.stderr)
        return EXIT_FUEL
    except (NoRuleForPair, ReadbackError, AssertionError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
