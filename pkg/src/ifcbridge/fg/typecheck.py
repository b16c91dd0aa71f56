"""Security-unaware simple type system for the fine-grained calculus."""

from __future__ import annotations

from collections.abc import Sequence

from ..types import BOOL, LABEL, UNIT, Fun, Prod, Ref, Sum, TMeta, Type, Unifier
from ..typing_errors import TypeCheckError, UnboundVariable
from .syntax import (
    App, Case, Expr, Fst, GetLabel, Inl, Inr, LabelLeq, LabelLit, LabelOf, LabelOfRef,
    Lam, New, Pair, Read, Snd, Taint, Unit, Var, Wken, Write, drop_env,
)
from .values import Clo, Env, InlR, InrR, LabelR, PairR, Raw, RefI, RefS, UnitR, Value

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
                    # let-binding: the parameter type is the argument's type
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
            case GetLabel():
                return LABEL
            case LabelOf(a):
                self.infer(ctx, a, loc + ("expr",))
                return LABEL
            case LabelLeq(a, b):
                self.expect(loc + ("left",), self.infer(ctx, a, loc + ("left",)), LABEL)
                self.expect(loc + ("right",), self.infer(ctx, b, loc + ("right",)), LABEL)
                return BOOL
            case Taint(a, b):
                self.expect(loc + ("label",), self.infer(ctx, a, loc + ("label",)), LABEL)
                return self.infer(ctx, b, loc + ("body",))
            case New(kind, a):
                return Ref(kind, self.infer(ctx, a, loc + ("expr",)))
            case Read(a):
                return self.ref_of(loc + ("ref",), self.infer(ctx, a, loc + ("ref",))).content
            case Write(a, b):
                ref = self.ref_of(loc + ("ref",), self.infer(ctx, a, loc + ("ref",)))
                self.expect(loc + ("value",), self.infer(ctx, b, loc + ("value",)), ref.content)
                return UNIT
            case LabelOfRef(a):
                self.ref_of(loc + ("ref",), self.infer(ctx, a, loc + ("ref",)))
                return LABEL
            case Wken(drop, a):
                if any(i >= len(ctx) or i < 0 for i in drop):
                    raise TypeCheckError(loc, f"indices < {len(ctx)}", str(sorted(drop)))
                return self.infer(drop_env(ctx, drop), a, loc + ("expr",))
        raise TypeCheckError(loc, "FG expression", type(e).__name__)

    def value(self, v: Value) -> Type:
        return self.raw(v.raw)

    def raw(self, r: Raw) -> Type:
        match r:
            case UnitR():
                return UNIT
            case LabelR():
                return LABEL
            case Clo(ann, body, env):
                arg = ann if ann is not None else self.u.fresh()
                ctx = tuple(self.value(v) for v in env)
                return Fun(arg, self.infer((arg,) + ctx, body, ("closure",)))
            case InlR(other, v):
                return Sum(self.value(v), other or self.u.fresh())
            case InrR(other, v):
                return Sum(other or self.u.fresh(), self.value(v))
            case PairR(a, b):
                return Prod(self.value(a), self.value(b))
            case RefI() | RefS():
                # The referenced cell's type lives in the store; callers supply it.
                raise TypeCheckError("value", "non-reference value", "reference")
        raise TypeCheckError("value", "FG raw value", type(r).__name__)


def typecheck_fg(ctx: Sequence[Type], e: Expr) -> Type:
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
        return ch.u.unify(_infer_env_value(ch, v), t)
    except TypeCheckError:
        return False


def _infer_env_value(ch: _Checker, v: Value) -> Type:
    r = v.raw
    match r:
        case RefI():
            return Ref("I", ch.u.fresh())
        case RefS():
            return Ref("S", ch.u.fresh())
        case PairR(a, b):
            return Prod(_infer_env_value(ch, a), _infer_env_value(ch, b))
        case InlR(other, a):
            return Sum(_infer_env_value(ch, a), other or ch.u.fresh())
        case InrR(other, a):
            return Sum(other or ch.u.fresh(), _infer_env_value(ch, a))
        case Clo(ann, body, env):
            arg = ann if ann is not None else ch.u.fresh()
            ctx = tuple(_infer_env_value(ch, w) for w in env)
            return Fun(arg, ch.infer((arg,) + ctx, body, ("closure",)))
    return ch.raw(r)


def infer_env(env: Env) -> Ctx:
    ch = _Checker()
    return tuple(ch.u.zonk(_infer_env_value(ch, v)) for v in env)
