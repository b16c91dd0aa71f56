"""Simple type system for the coarse-grained calculus; thunks have type ``LIO τ``."""

from __future__ import annotations

from collections.abc import Sequence

from ..types import BOOL, LABEL, LIO, UNIT, Fun, LabeledT, Prod, Ref, Sum, Type, Unifier
from ..typing_errors import TypeCheckError, UnboundVariable
from .syntax import (
    App, Bind, Case, Expr, Fst, GetLabel, Inl, Inr, LabelLeq, LabelLit, LabelOf, LabelOfRef,
    Lam, New, Pair, Read, Return, Snd, Taint, ToLabeled, Unit, Unlabel, Var, Wken, Write,
    drop_env,
)
from .values import (
    Env, FunClo, InlV, InrV, LabeledV, LabelV, PairV, RefIV, RefSV, ThunkClo, UnitV, Value,
)

Ctx = tuple[Type, ...]
Path = tuple[str, ...]


class _Checker:
    def __init__(self, record: dict[Path, Type] | None = None) -> None:
        self.u = Unifier()
        self.record = record

    def expect(self, loc: Path, found: Type, expected: Type) -> None:
        if not self.u.unify(found, expected):
            raise TypeCheckError(loc, str(self.u.zonk(expected)), str(self.u.zonk(found)))

    def ref_of(self, loc: Path, t: Type) -> Ref:
        t = self.u.resolve(t)
        if not isinstance(t, Ref):
            raise TypeCheckError(loc, "reference", str(self.u.zonk(t)))
        return t

    def content(self, loc: Path, t: Type, wrap) -> Type:
        inner = self.u.fresh()
        self.expect(loc, t, wrap(inner))
        return inner

    def infer(self, ctx: Ctx, e: Expr, loc: Path) -> Type:
        t = self._infer(ctx, e, loc)
        if self.record is not None:
            self.record[loc] = t
        return t

    def _infer(self, ctx: Ctx, e: Expr, loc: Path) -> Type:
        match e:
            case Var(i):
                if not 0 <= i < len(ctx):
                    raise UnboundVariable(loc, i, len(ctx))
                return ctx[i]
            case Lam(ann, body):
                arg = ann if ann is not None else self.u.fresh()
                return Fun(arg, self.infer((arg,) + ctx, body, loc + ("body",)))
            case App(fn, arg):
                targ = self.infer(ctx, arg, loc + ("arg",))
                if isinstance(fn, Lam) and fn.ann is None:
                    return self.infer((targ,) + ctx, fn.body, loc + ("fn", "body",))
                tfn = self.infer(ctx, fn, loc + ("fn",))
                res = self.u.fresh()
                self.expect(loc, tfn, Fun(targ, res))
                return res
            case Unit():
                return UNIT
            case LabelLit():
                return LABEL
            case Pair(a, b):
                return Prod(self.infer(ctx, a, loc + ("fst",)), self.infer(ctx, b, loc + ("snd",)))
            case Fst(a) | Snd(a):
                ta = self.infer(ctx, a, loc + ("expr",))
                l, r = self.u.fresh(), self.u.fresh()
                self.expect(loc + ("expr",), ta, Prod(l, r))
                return l if isinstance(e, Fst) else r
            case Inl(other, a):
                return Sum(self.infer(ctx, a, loc + ("expr",)), other or self.u.fresh())
            case Inr(other, a):
                return Sum(other or self.u.fresh(), self.infer(ctx, a, loc + ("expr",)))
            case Case(s, left, right):
                ts = self.infer(ctx, s, loc + ("scrut",))
                l, r = self.u.fresh(), self.u.fresh()
                self.expect(loc + ("scrut",), ts, Sum(l, r))
                t1 = self.infer((l,) + ctx, left, loc + ("left",))
                t2 = self.infer((r,) + ctx, right, loc + ("right",))
                self.expect(loc + ("right",), t2, t1)
                return t1
            case LabelLeq(a, b):
                self.expect(loc + ("left",), self.infer(ctx, a, loc + ("left",)), LABEL)
                self.expect(loc + ("right",), self.infer(ctx, b, loc + ("right",)), LABEL)
                return BOOL
            case Wken(drop, a):
                if any(i >= len(ctx) or i < 0 for i in drop):
                    raise TypeCheckError(loc, f"indices < {len(ctx)}", str(sorted(drop)))
                return self.infer(drop_env(ctx, drop), a, loc + ("expr",))
            case Return(a):
                return LIO(self.infer(ctx, a, loc + ("expr",)))
            case Bind(first, rest):
                t1 = self.content(loc + ("first",), self.infer(ctx, first, loc + ("first",)), LIO)
                t2 = self.infer((t1,) + ctx, rest, loc + ("then",))
                return LIO(self.content(loc + ("then",), t2, LIO))
            case Unlabel(a):
                return LIO(self.content(loc + ("expr",), self.infer(ctx, a, loc + ("expr",)), LabeledT))
            case ToLabeled(a):
                inner = self.content(loc + ("expr",), self.infer(ctx, a, loc + ("expr",)), LIO)
                return LIO(LabeledT(inner))
            case LabelOf(a):
                self.content(loc + ("expr",), self.infer(ctx, a, loc + ("expr",)), LabeledT)
                return LIO(LABEL)
            case GetLabel():
                return LIO(LABEL)
            case Taint(a):
                self.expect(loc + ("expr",), self.infer(ctx, a, loc + ("expr",)), LABEL)
                return LIO(UNIT)
            case New(kind, a):
                inner = self.content(loc + ("expr",), self.infer(ctx, a, loc + ("expr",)), LabeledT)
                return LIO(Ref(kind, inner))
            case Read(a):
                return LIO(self.ref_of(loc + ("ref",), self.infer(ctx, a, loc + ("ref",))).content)
            case Write(a, b):
                ref = self.ref_of(loc + ("ref",), self.infer(ctx, a, loc + ("ref",)))
                self.expect(loc + ("value",), self.infer(ctx, b, loc + ("value",)),
                            LabeledT(ref.content))
                return LIO(UNIT)
            case LabelOfRef(a):
                self.ref_of(loc + ("ref",), self.infer(ctx, a, loc + ("ref",)))
                return LIO(LABEL)
        raise TypeCheckError(loc, "CG expression", type(e).__name__)

    def value(self, v: Value) -> Type:
        match v:
            case UnitV():
                return UNIT
            case LabelV():
                return LABEL
            case FunClo(ann, body, env):
                arg = ann if ann is not None else self.u.fresh()
                ctx = tuple(self.value(w) for w in env)
                return Fun(arg, self.infer((arg,) + ctx, body, ("closure",)))
            case ThunkClo(t, env):
                return self.infer(tuple(self.value(w) for w in env), t, ("thunk",))
            case InlV(other, w):
                return Sum(self.value(w), other or self.u.fresh())
            case InrV(other, w):
                return Sum(other or self.u.fresh(), self.value(w))
            case PairV(a, b):
                return Prod(self.value(a), self.value(b))
            case LabeledV(_, w):
                return LabeledT(self.value(w))
            case RefIV():
                return Ref("I", self.u.fresh())
            case RefSV():
                return Ref("S", self.u.fresh())
        raise TypeCheckError("value", "CG value", type(v).__name__)


def typecheck_cg(ctx: Sequence[Type], e: Expr) -> Type:
    """Infer the type of ``e`` under ``ctx`` (index 0 is the innermost binder)."""
    checker = _Checker()
    return checker.u.zonk(checker.infer(tuple(ctx), e, ()))


def subterm_types(ctx: Sequence[Type], e: Expr) -> dict[Path, Type]:
    """Type of every subterm, keyed by its field path from the root."""
    record: dict[Path, Type] = {}
    checker = _Checker(record)
    checker.infer(tuple(ctx), e, ())
    return {path: checker.u.zonk(t) for path, t in record.items()}


def value_has_type(v: Value, t: Type) -> bool:
    """Check ``v`` against ``t``; reference contents are not inspected."""
    ch = _Checker()
    try:
        return ch.u.unify(ch.value(v), t)
    except TypeCheckError:
        return False


def infer_env(env: Env) -> Ctx:
    ch = _Checker()
    return tuple(ch.u.zonk(ch.value(v)) for v in env)
