"""Abstract syntax of the source language and the standard binding utilities.

Terms cover the simply-typed lambda calculus plus booleans, naturals,
lists, and one fold-style iterator per data type.  Everything here is
immutable and pure; substitution is capture-avoiding.
"""

from __future__ import annotations

from dataclasses import dataclass


# --------------------------------------------------------------------------
# Types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Bool:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class Nat:
    def __str__(self) -> str:
        return "nat"


@dataclass(frozen=True)
class ListOf:
    elem: "Type"

    def __str__(self) -> str:
        e = str(self.elem)
        if isinstance(self.elem, Arrow):
            e = f"({e})"
        return f"list {e}"


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        d = str(self.dom)
        if isinstance(self.dom, Arrow):
            d = f"({d})"
        return f"{d} -> {self.cod}"


Type = Bool | Nat | ListOf | Arrow


# --------------------------------------------------------------------------
# Terms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Abs:
    name: str
    annot: Type | None
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Tru:
    pass


@dataclass(frozen=True)
class Fls:
    pass


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Suc:
    pred: "Term"


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Cons:
    head: "Term"
    tail: "Term"


@dataclass(frozen=True)
class IterBool:
    on_true: "Term"
    on_false: "Term"
    scrutinee: "Term"


@dataclass(frozen=True)
class IterNat:
    binder: str
    step: "Term"
    base: "Term"
    scrutinee: "Term"


@dataclass(frozen=True)
class IterList:
    head_binder: str
    acc_binder: str
    step: "Term"
    base: "Term"
    scrutinee: "Term"


Term = (
    Var | Abs | App | Tru | Fls | Zero | Suc | Nil | Cons
    | IterBool | IterNat | IterList
)


def nat_lit(n: int) -> Term:
    """suc^n 0."""
    t: Term = Zero()
    for _ in range(n):
        t = Suc(t)
    return t


def list_lit(items: list[Term]) -> Term:
    t: Term = Nil()
    for item in reversed(items):
        t = Cons(item, t)
    return t


# --------------------------------------------------------------------------
# Free variables
# --------------------------------------------------------------------------

def free_vars(t: Term) -> list[str]:
    """Free variables in order of first occurrence (left-to-right preorder)."""
    out: list[str] = []

    def walk(t: Term, bound: frozenset[str]) -> None:
        match t:
            case Var(name):
                if name not in bound and name not in out:
                    out.append(name)
            case Abs(name, _, body):
                walk(body, bound | {name})
            case App(fun, arg):
                walk(fun, bound)
                walk(arg, bound)
            case Suc(pred):
                walk(pred, bound)
            case Cons(head, tail):
                walk(head, bound)
                walk(tail, bound)
            case IterBool(on_true, on_false, scrutinee):
                walk(on_true, bound)
                walk(on_false, bound)
                walk(scrutinee, bound)
            case IterNat(binder, step, base, scrutinee):
                walk(step, bound | {binder})
                walk(base, bound)
                walk(scrutinee, bound)
            case IterList(hb, ab, step, base, scrutinee):
                walk(step, bound | {hb, ab})
                walk(base, bound)
                walk(scrutinee, bound)
            case _:
                pass

    walk(t, frozenset())
    return out


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def fresh_name(base: str, avoid: set[str]) -> str:
    """base plus the least numeric suffix not in avoid (deterministic)."""
    if base not in avoid:
        return base
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


# --------------------------------------------------------------------------
# Substitution
# --------------------------------------------------------------------------

def subst(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding substitution of u for free occurrences of x in t."""
    fv_u = set(free_vars(u))

    def binder_case(name: str, body_vars: list[str]) -> bool:
        # renaming needed iff the binder would capture a free var of u
        return name in fv_u

    def go(t: Term) -> Term:
        match t:
            case Var(name):
                return u if name == x else t
            case Abs(name, annot, body):
                if name == x:
                    return t
                if binder_case(name, []) and x in free_vars(body):
                    avoid = set(free_vars(body)) | fv_u | {x}
                    name2 = fresh_name(name, avoid)
                    body = subst(body, name, Var(name2))
                    return Abs(name2, annot, go(body))
                return Abs(name, annot, go(body))
            case App(fun, arg):
                return App(go(fun), go(arg))
            case Suc(pred):
                return Suc(go(pred))
            case Cons(head, tail):
                return Cons(go(head), go(tail))
            case IterBool(on_true, on_false, scrutinee):
                return IterBool(go(on_true), go(on_false), go(scrutinee))
            case IterNat(binder, step, base, scrutinee):
                new_base = go(base)
                new_scrut = go(scrutinee)
                if binder == x:
                    return IterNat(binder, step, new_base, new_scrut)
                if binder in fv_u and x in free_vars(step):
                    avoid = set(free_vars(step)) | fv_u | {x}
                    binder2 = fresh_name(binder, avoid)
                    step = subst(step, binder, Var(binder2))
                    return IterNat(binder2, go(step), new_base, new_scrut)
                return IterNat(binder, go(step), new_base, new_scrut)
            case IterList(hb, ab, step, base, scrutinee):
                new_base = go(base)
                new_scrut = go(scrutinee)
                if x in (hb, ab):
                    return IterList(hb, ab, step, new_base, new_scrut)
                step_fv = free_vars(step)
                if x in step_fv and (hb in fv_u or ab in fv_u):
                    avoid = set(step_fv) | fv_u | {x, hb, ab}
                    hb2 = fresh_name(hb, avoid) if hb in fv_u else hb
                    avoid.add(hb2)
                    ab2 = fresh_name(ab, avoid) if ab in fv_u else ab
                    if hb2 != hb:
                        step = subst(step, hb, Var(hb2))
                    if ab2 != ab:
                        step = subst(step, ab, Var(ab2))
                    return IterList(hb2, ab2, go(step), new_base, new_scrut)
                return IterList(hb, ab, go(step), new_base, new_scrut)
            case _:
                return t

    return go(t)


def rename_binder(name: str, body: Term, avoid: set[str]) -> tuple[str, Term]:
    """Alpha-rename a binder away from avoid, returning the new pair."""
    if name not in avoid:
        return name, body
    name2 = fresh_name(name, avoid | set(free_vars(body)))
    return name2, subst(body, name, Var(name2))


# --------------------------------------------------------------------------
# Alpha-equivalence
# --------------------------------------------------------------------------

def alpha_eq(t: Term, u: Term) -> bool:
    """Equality up to consistent renaming of bound variables.

    Type annotations on lambda binders are ignored: the net runtime is
    type-erased, so readback cannot recover them and comparison against
    evaluator output must not depend on them.
    """

    def go(t: Term, u: Term, et: dict[str, int], eu: dict[str, int], depth: int) -> bool:
        match t, u:
            case Var(a), Var(b):
                da, db = et.get(a), eu.get(b)
                if da is None and db is None:
                    return a == b
                return da == db
            case Abs(a, _, tb), Abs(b, _, ub):
                return go(tb, ub, {**et, a: depth}, {**eu, b: depth}, depth + 1)
            case App(tf, ta), App(uf, ua):
                return go(tf, uf, et, eu, depth) and go(ta, ua, et, eu, depth)
            case Tru(), Tru():
                return True
            case Fls(), Fls():
                return True
            case Zero(), Zero():
                return True
            case Nil(), Nil():
                return True
            case Suc(tp), Suc(up):
                return go(tp, up, et, eu, depth)
            case Cons(th, tt), Cons(uh, ut):
                return go(th, uh, et, eu, depth) and go(tt, ut, et, eu, depth)
            case IterBool(tv, tf_, tb), IterBool(uv, uf_, ub):
                return (
                    go(tv, uv, et, eu, depth)
                    and go(tf_, uf_, et, eu, depth)
                    and go(tb, ub, et, eu, depth)
                )
            case IterNat(tx, ts, tz, tn), IterNat(ux, us, uz, un):
                return (
                    go(ts, us, {**et, tx: depth}, {**eu, ux: depth}, depth + 1)
                    and go(tz, uz, et, eu, depth)
                    and go(tn, un, et, eu, depth)
                )
            case IterList(tx, ty, tc, tn, tl), IterList(ux, uy, uc, un, ul):
                return (
                    go(
                        tc, uc,
                        {**et, tx: depth, ty: depth + 1},
                        {**eu, ux: depth, uy: depth + 1},
                        depth + 2,
                    )
                    and go(tn, un, et, eu, depth)
                    and go(tl, ul, et, eu, depth)
                )
            case _:
                return False

    return go(t, u, {}, {}, 0)


# --------------------------------------------------------------------------
# Pretty printing (inverse of the parser on annotated terms)
# --------------------------------------------------------------------------

def _atomic(t: Term) -> bool:
    return isinstance(t, (Var, Tru, Fls, Zero, Nil))


def _pp_factor(t: Term) -> str:
    # argument position of an application / of suc / of cons
    if _atomic(t):
        return pretty(t)
    return f"({pretty(t)})"


def pretty(t: Term) -> str:
    match t:
        case Var(name):
            return name
        case Abs(name, annot, body):
            ann = f":{annot}" if annot is not None else ""
            return f"\\{name}{ann}. {pretty(body)}"
        case App(fun, arg):
            # left-associated chains print without parens on the spine
            if isinstance(fun, (App, Suc, Cons)):
                fs = pretty(fun)
            elif _atomic(fun):
                fs = pretty(fun)
            else:
                fs = f"({pretty(fun)})"
            return f"{fs} {_pp_factor(arg)}"
        case Tru():
            return "true"
        case Fls():
            return "false"
        case Zero():
            return "0"
        case Suc(pred):
            return f"suc {_pp_factor(pred)}"
        case Nil():
            return "nil"
        case Cons(head, tail):
            return f"cons {_pp_factor(head)} {_pp_factor(tail)}"
        case IterBool(on_true, on_false, scrutinee):
            return (
                f"iterbool <{pretty(on_true)}> <{pretty(on_false)}> "
                f"{_pp_factor(scrutinee)}"
            )
        case IterNat(binder, step, base, scrutinee):
            return (
                f"iternat <\\{binder}. {pretty(step)}> <{pretty(base)}> "
                f"{_pp_factor(scrutinee)}"
            )
        case IterList(hb, ab, step, base, scrutinee):
            return (
                f"iterlist <\\{hb} {ab}. {pretty(step)}> <{pretty(base)}> "
                f"{_pp_factor(scrutinee)}"
            )
    raise AssertionError(f"unknown term {t!r}")
