"""One-pass typechecker.

Lambda binders must carry annotations; iterator binders are inferred from
the scrutinee and case types.  The only inference machinery is a local
metavariable for the element type of `nil`, solved by first use; a program
whose nil element type is never forced is rejected as ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Abs, App, Arrow, Bool, Cons, Fls, IterBool, IterList, IterNat,
    ListOf, Nat, Nil, Suc, Term, Tru, Type, Var, Zero, pretty,
)


class TypecheckError(Exception):
    pass


@dataclass(frozen=True)
class _Meta:
    id: int


class _Ctx:
    def __init__(self) -> None:
        self.solutions: dict[int, object] = {}
        self.next_meta = 0

    def fresh(self) -> _Meta:
        m = _Meta(self.next_meta)
        self.next_meta += 1
        return m

    def zonk(self, t):
        while isinstance(t, _Meta) and t.id in self.solutions:
            t = self.solutions[t.id]
        if isinstance(t, ListOf):
            return ListOf(self.zonk(t.elem))
        if isinstance(t, Arrow):
            return Arrow(self.zonk(t.dom), self.zonk(t.cod))
        return t

    def _occurs(self, mid: int, t) -> bool:
        t = self.zonk(t)
        if isinstance(t, _Meta):
            return t.id == mid
        if isinstance(t, ListOf):
            return self._occurs(mid, t.elem)
        if isinstance(t, Arrow):
            return self._occurs(mid, t.dom) or self._occurs(mid, t.cod)
        return False

    def unify(self, a, b, where: Term) -> None:
        a, b = self.zonk(a), self.zonk(b)
        if isinstance(a, _Meta):
            if isinstance(b, _Meta) and a.id == b.id:
                return
            if self._occurs(a.id, b):
                raise TypecheckError(f"circular type in {pretty(where)}")
            self.solutions[a.id] = b
            return
        if isinstance(b, _Meta):
            self.unify(b, a, where)
            return
        if type(a) is not type(b):
            raise TypecheckError(
                f"type mismatch in {pretty(where)}: {self.show(a)} vs {self.show(b)}"
            )
        if isinstance(a, ListOf):
            self.unify(a.elem, b.elem, where)
        elif isinstance(a, Arrow):
            self.unify(a.dom, b.dom, where)
            self.unify(a.cod, b.cod, where)

    def show(self, t) -> str:
        t = self.zonk(t)
        if isinstance(t, _Meta):
            return f"?{t.id}"
        if isinstance(t, ListOf):
            inner = self.show(t.elem)
            if isinstance(self.zonk(t.elem), Arrow):
                inner = f"({inner})"
            return f"list {inner}"
        if isinstance(t, Arrow):
            dom = self.show(t.dom)
            if isinstance(self.zonk(t.dom), Arrow):
                dom = f"({dom})"
            return f"{dom} -> {self.show(t.cod)}"
        return str(t)

    def ground(self, t, where: Term) -> Type:
        t = self.zonk(t)
        if isinstance(t, _Meta):
            raise TypecheckError(
                f"ambiguous type in {pretty(where)}: element type of nil "
                "is never determined"
            )
        if isinstance(t, ListOf):
            return ListOf(self.ground(t.elem, where))
        if isinstance(t, Arrow):
            return Arrow(self.ground(t.dom, where), self.ground(t.cod, where))
        return t


def _infer(ctx: _Ctx, env: dict[str, object], t: Term):
    match t:
        case Var(name):
            if name not in env:
                raise TypecheckError(f"unbound variable {name}")
            return env[name]
        case Abs(name, annot, body):
            if annot is None:
                raise TypecheckError(
                    f"lambda binder {name} lacks a type annotation"
                )
            cod = _infer(ctx, {**env, name: annot}, body)
            return Arrow(annot, cod)
        case App(fun, arg):
            tf = ctx.zonk(_infer(ctx, env, fun))
            ta = _infer(ctx, env, arg)
            if isinstance(tf, _Meta):
                dom, cod = ctx.fresh(), ctx.fresh()
                ctx.unify(tf, Arrow(dom, cod), t)
                tf = ctx.zonk(tf)
            if not isinstance(tf, Arrow):
                raise TypecheckError(
                    f"cannot apply non-function in {pretty(t)}: "
                    f"{pretty(fun)} has type {ctx.show(tf)}"
                )
            ctx.unify(tf.dom, ta, t)
            return tf.cod
        case Tru() | Fls():
            return Bool()
        case Zero():
            return Nat()
        case Suc(pred):
            ctx.unify(_infer(ctx, env, pred), Nat(), t)
            return Nat()
        case Nil():
            return ListOf(ctx.fresh())
        case Cons(head, tail):
            th = _infer(ctx, env, head)
            tt = _infer(ctx, env, tail)
            ctx.unify(tt, ListOf(th), t)
            return tt
        case IterBool(on_true, on_false, scrutinee):
            ctx.unify(_infer(ctx, env, scrutinee), Bool(), t)
            tv = _infer(ctx, env, on_true)
            tf = _infer(ctx, env, on_false)
            ctx.unify(tv, tf, t)
            return tv
        case IterNat(binder, step, base, scrutinee):
            ctx.unify(_infer(ctx, env, scrutinee), Nat(), t)
            tz = _infer(ctx, env, base)
            ts = _infer(ctx, {**env, binder: tz}, step)
            ctx.unify(ts, tz, t)
            return tz
        case IterList(hb, ab, step, base, scrutinee):
            tl = ctx.zonk(_infer(ctx, env, scrutinee))
            if isinstance(tl, _Meta):
                elem = ctx.fresh()
                ctx.unify(tl, ListOf(elem), t)
                tl = ctx.zonk(tl)
            if not isinstance(tl, ListOf):
                raise TypecheckError(
                    f"iterlist scrutinee must be a list in {pretty(t)}: "
                    f"got {ctx.show(tl)}"
                )
            tn = _infer(ctx, env, base)
            tc = _infer(ctx, {**env, hb: tl.elem, ab: tn}, step)
            ctx.unify(tc, tn, t)
            return tn
    raise AssertionError(f"unknown term {t!r}")


def typecheck(t: Term, env: dict[str, Type] | None = None) -> Type:
    """Return the unique type of t, or raise TypecheckError."""
    ctx = _Ctx()
    ty = _infer(ctx, dict(env or {}), t)
    return ctx.ground(ty, t)
