"""Token-passing interaction nets for a small functional language with
iterators: parser, typechecker, reference evaluator, net translation,
per-program rule generation, reduction engine, and an interactive session
protocol."""

from .engine import ReductionReport, TraceEvent, reduce, reduce_deep
from .net import (
    ActivePair, InteractionSystem, Net, NoRuleForPair, RuleTemplate,
    SymbolDecl, active_pairs, apply_rule, net_iso, validate,
)
from .oracle import FuelExhausted, StuckTerm, deep_eval, eval_cbn
from .parser import ParseError, parse, parse_type
from .systemgen import (
    IteratorDescriptor, SymbolTable, base_system, dump_system, gen_system,
    iterator_rules, program_system,
)
from .terms import Term, Type, alpha_eq, free_vars, pretty, subst
from .translate import (
    ReadbackError, TranslationResult, attach_token, readback, translate,
)
from .typecheck import TypecheckError, typecheck

__all__ = [
    "ActivePair", "FuelExhausted", "InteractionSystem", "IteratorDescriptor",
    "Net", "NoRuleForPair", "ParseError", "ReadbackError", "ReductionReport",
    "RuleTemplate", "StuckTerm", "SymbolDecl", "SymbolTable", "Term",
    "TraceEvent", "TranslationResult", "Type", "TypecheckError",
    "active_pairs", "alpha_eq", "apply_rule", "attach_token", "base_system",
    "deep_eval", "dump_system", "eval_cbn", "free_vars", "gen_system",
    "iterator_rules", "net_iso", "parse", "parse_type", "pretty",
    "program_system", "readback", "reduce", "reduce_deep", "subst",
    "translate", "typecheck", "validate",
]
