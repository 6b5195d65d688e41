"""Reference big-step call-by-name evaluator.

Evaluation is weak: it stops at lambdas and at constructor heads, leaving
constructor arguments untouched.  A fuel budget bounds the number of rule
applications; the language is total on well-typed terms, so exhaustion
signals a bug (or a deliberately tiny budget in tests).
"""

from __future__ import annotations

from .terms import (
    Abs, App, Cons, Fls, IterBool, IterList, IterNat, Nil, Suc, Term,
    Tru, Var, Zero, pretty, subst,
)

DEFAULT_FUEL = 10**6


class FuelExhausted(Exception):
    pass


class StuckTerm(Exception):
    """Evaluation reached a non-value head; signals a typechecker bug."""


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, n: int):
        self.remaining = n

    def spend(self) -> None:
        if self.remaining <= 0:
            raise FuelExhausted("evaluation fuel exhausted")
        self.remaining -= 1


def is_canonical(t: Term) -> bool:
    return isinstance(t, (Abs, Tru, Fls, Zero, Suc, Nil, Cons))


def _eval(t: Term, budget: _Budget) -> Term:
    budget.spend()
    match t:
        case _ if is_canonical(t):
            return t
        case Var(name):
            raise StuckTerm(f"free variable {name} reached during evaluation")
        case App(fun, arg):
            f = _eval(fun, budget)
            if not isinstance(f, Abs):
                raise StuckTerm(f"applied non-function {pretty(f)}")
            return _eval(subst(f.body, f.name, arg), budget)
        case IterBool(on_true, on_false, scrutinee):
            b = _eval(scrutinee, budget)
            if isinstance(b, Tru):
                return _eval(on_true, budget)
            if isinstance(b, Fls):
                return _eval(on_false, budget)
            raise StuckTerm(f"iterbool scrutinee {pretty(b)} is not a boolean")
        case IterNat(binder, step, base, scrutinee):
            n = _eval(scrutinee, budget)
            if isinstance(n, Zero):
                return _eval(base, budget)
            if isinstance(n, Suc):
                rec = IterNat(binder, step, base, n.pred)
                return _eval(subst(step, binder, rec), budget)
            raise StuckTerm(f"iternat scrutinee {pretty(n)} is not a natural")
        case IterList(hb, ab, step, base, scrutinee):
            l = _eval(scrutinee, budget)
            if isinstance(l, Nil):
                return _eval(base, budget)
            if isinstance(l, Cons):
                rec = IterList(hb, ab, step, base, l.tail)
                if hb == ab:
                    # the accumulator binder shadows the head binder
                    return _eval(subst(step, ab, rec), budget)
                return _eval(subst(subst(step, hb, l.head), ab, rec), budget)
            raise StuckTerm(f"iterlist scrutinee {pretty(l)} is not a list")
    raise AssertionError(f"unknown term {t!r}")


def eval_cbn(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Evaluate a closed term to weak canonical form."""
    return _eval(t, _Budget(fuel))


def deep_eval(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """eval_cbn, then recursively evaluate under suc/cons heads.

    Lambdas are returned as-is; intended for observing full numerals,
    booleans, and lists of such in tests.
    """
    budget = _Budget(fuel)

    def go(t: Term) -> Term:
        z = _eval(t, budget)
        if isinstance(z, Suc):
            return Suc(go(z.pred))
        if isinstance(z, Cons):
            return Cons(go(z.head), go(z.tail))
        return z

    return go(t)
