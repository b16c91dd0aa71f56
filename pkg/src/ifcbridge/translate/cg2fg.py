"""Coarse-grained to fine-grained translation.

Thunks become suspensions ``λ_. e``; the suspension body hides its unit slot
with ``wken`` so closures built inside capture the translated source
environment. ``let x = a in b`` is the immediately applied lambda produced by
:func:`fg.let`.
"""

from __future__ import annotations

from collections.abc import Sequence

from .. import cg, fg
from ..lattice import Label
from ..state import Store
from ..types import LABEL, LIO, UNIT, Fun, LabeledT, LabelT, Prod, Ref, Sum, TMeta, Type, UnitT

_HIDE_SLOT = frozenset({0})


def cg2fg_type(t: Type) -> Type:
    match t:
        case UnitT() | LabelT() | TMeta():
            return t
        case Fun(a, b):
            return Fun(cg2fg_type(a), cg2fg_type(b))
        case Sum(a, b):
            return Sum(cg2fg_type(a), cg2fg_type(b))
        case Prod(a, b):
            return Prod(cg2fg_type(a), cg2fg_type(b))
        case Ref(kind, c):
            return Ref(kind, cg2fg_type(c))
        case LabeledT(c):
            return Prod(LABEL, cg2fg_type(c))
        case LIO(c):
            return Fun(UNIT, cg2fg_type(c))
    raise TypeError(f"not a CG type: {t}")


def _ann(t: Type | None) -> Type | None:
    return None if t is None else cg2fg_type(t)


def _unlabel_fg(x: fg.Expr) -> fg.Expr:
    """``taint(fst x, snd x)`` for ``x`` bound to a translated labeled value."""
    return fg.Taint(fg.Fst(x), fg.Snd(x))


def cg2fg_expr(e: cg.Expr) -> fg.Expr:
    tr = cg2fg_expr
    match e:
        case cg.Thunk():
            return fg.Lam(UNIT, fg.Wken(_HIDE_SLOT, cg2fg_thunk(e)), "_")
        case cg.Var(i):
            return fg.Var(i)
        case cg.Lam(ann, body, name):
            return fg.Lam(_ann(ann), tr(body), name)
        case cg.App(a, b):
            return fg.App(tr(a), tr(b))
        case cg.Unit():
            return fg.Unit()
        case cg.LabelLit(lab):
            return fg.LabelLit(lab)
        case cg.Pair(a, b):
            return fg.Pair(tr(a), tr(b))
        case cg.Fst(a):
            return fg.Fst(tr(a))
        case cg.Snd(a):
            return fg.Snd(tr(a))
        case cg.Inl(other, a):
            return fg.Inl(_ann(other), tr(a))
        case cg.Inr(other, a):
            return fg.Inr(_ann(other), tr(a))
        case cg.Case(s, left, right, ln, rn):
            return fg.Case(tr(s), tr(left), tr(right), ln, rn)
        case cg.LabelLeq(a, b):
            return fg.LabelLeq(tr(a), tr(b))
        case cg.Wken(drop, a):
            return fg.Wken(drop, tr(a))
    raise TypeError(f"not a CG expression: {e!r}")


def _force(e: fg.Expr) -> fg.Expr:
    return fg.App(e, fg.Unit())


def cg2fg_thunk(t: cg.Thunk) -> fg.Expr:
    """Translate a thunk to the FG expression that runs it (the suspension body)."""
    tr = cg2fg_expr
    x = fg.Var(0)
    match t:
        case cg.Return(a):
            return tr(a)
        case cg.Bind(first, rest, name):
            # the source continuation already lives under the bound variable
            body = fg.Taint(fg.LabelOf(x), _force(tr(rest)))
            return fg.let(_force(tr(first)), body, name)
        case cg.Unlabel(a):
            return fg.let(tr(a), _unlabel_fg(x))
        case cg.ToLabeled(a):
            return fg.let(_force(tr(a)), fg.Pair(fg.LabelOf(x), x))
        case cg.LabelOf(a):
            return fg.Fst(tr(a))
        case cg.GetLabel():
            return fg.GetLabel()
        case cg.Taint(a):
            return fg.Taint(tr(a), fg.Unit())
        case cg.New(kind, a):
            return fg.let(tr(a), fg.New(kind, _unlabel_fg(x)))
        case cg.Write(a, b):
            return fg.Write(tr(a), fg.let(tr(b), _unlabel_fg(x)))
        case cg.Read(a):
            return fg.Read(tr(a))
        case cg.LabelOfRef(a):
            return fg.LabelOfRef(tr(a))
    raise TypeError(f"not a CG thunk: {t!r}")


def cg2fg_raw(v: cg.Value, pc: Label) -> fg.Raw:
    match v:
        case cg.UnitV():
            return fg.UnitR()
        case cg.LabelV(lab):
            return fg.LabelR(lab)
        case cg.FunClo(ann, body, env, name):
            return fg.Clo(_ann(ann), cg2fg_expr(body), cg2fg_env(env, pc), name)
        case cg.ThunkClo(t, env):
            return fg.Clo(UNIT, fg.Wken(_HIDE_SLOT, cg2fg_thunk(t)), cg2fg_env(env, pc), "_")
        case cg.InlV(other, w):
            return fg.InlR(_ann(other), cg2fg_value(w, pc))
        case cg.InrV(other, w):
            return fg.InrR(_ann(other), cg2fg_value(w, pc))
        case cg.PairV(a, b):
            return fg.PairR(cg2fg_value(a, pc), cg2fg_value(b, pc))
        case cg.LabeledV(lab, w):
            return fg.PairR(fg.Value(fg.LabelR(lab), lab), cg2fg_value(w, lab))
        case cg.RefIV(mem, n):
            return fg.RefI(mem, n)
        case cg.RefSV(n):
            return fg.RefS(n)
    raise TypeError(v)


def cg2fg_value(v: cg.Value, pc: Label) -> fg.Value:
    return fg.Value(cg2fg_raw(v, pc), pc)


def cg2fg_env(env: Sequence[cg.Value], pc: Label) -> tuple[fg.Value, ...]:
    return tuple(cg2fg_value(v, pc) for v in env)


def cg2fg_store(store: Store[cg.Value]) -> Store[fg.Raw]:
    return store.map(lambda lab, v: cg2fg_raw(v, lab))


def cg2fg_heap(heap: Sequence[cg.LabeledV]) -> tuple[fg.Value, ...]:
    return tuple(cg2fg_value(cell.value, cell.label) for cell in heap)


def cg2fg_state(store: Store[cg.Value], heap: Sequence[cg.LabeledV],
                env: Sequence[cg.Value], pc: Label):
    return cg2fg_store(store), cg2fg_heap(heap), cg2fg_env(env, pc)


def cg2fg_ctx(ctx: Sequence[Type]) -> tuple[Type, ...]:
    return tuple(cg2fg_type(t) for t in ctx)
