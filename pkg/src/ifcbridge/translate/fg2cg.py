"""Fine-grained to coarse-grained translation.

Every translated expression is a thunk wrapped in ``toLabeled``. Temporaries
bound by the generated ``bind`` chains are dropped with ``wken`` before a
translated subterm runs, so closures built by the subterm capture exactly the
translation of the source environment.
"""

from __future__ import annotations

from collections.abc import Sequence

from .. import cg, fg
from ..lattice import Label
from ..state import Store
from ..types import LIO, UNIT, Fun, LabeledT, LabelT, Prod, Ref, Sum, TMeta, Type, UnitT

_LABELED_UNIT = LabeledT(UNIT)


def fg2cg_type(t: Type) -> Type:
    match t:
        case UnitT() | LabelT():
            return LabeledT(t)
        case Prod(a, b):
            return LabeledT(Prod(fg2cg_type(a), fg2cg_type(b)))
        case Sum(a, b):
            return LabeledT(Sum(fg2cg_type(a), fg2cg_type(b)))
        case Fun(a, b):
            return LabeledT(Fun(fg2cg_type(a), LIO(fg2cg_type(b))))
        case Ref(kind, c):
            # cells hold the unlabeled payload; the label lives in the store or heap
            return LabeledT(Ref(kind, _payload(fg2cg_type(c))))
        case TMeta():
            return t
    raise TypeError(f"not an FG type: {t}")


def _payload(t: Type) -> Type:
    return t.content if isinstance(t, LabeledT) else t


def _ann(t: Type | None) -> Type | None:
    return None if t is None else fg2cg_type(t)


def fg2cg_raw(r: fg.Raw) -> cg.Value:
    match r:
        case fg.UnitR():
            return cg.UnitV()
        case fg.LabelR(lab):
            return cg.LabelV(lab)
        case fg.Clo(ann, body, env, name):
            return cg.FunClo(_ann(ann), fg2cg_expr(body), fg2cg_env(env), name)
        case fg.InlR(other, v):
            return cg.InlV(_ann(other), fg2cg_value(v))
        case fg.InrR(other, v):
            return cg.InrV(_ann(other), fg2cg_value(v))
        case fg.PairR(a, b):
            return cg.PairV(fg2cg_value(a), fg2cg_value(b))
        case fg.RefI(mem, n):
            return cg.RefIV(mem, n)
        case fg.RefS(n):
            return cg.RefSV(n)
    raise TypeError(r)


def fg2cg_value(v: fg.Value) -> cg.LabeledV:
    return cg.LabeledV(v.label, fg2cg_raw(v.raw))


def fg2cg_env(env: Sequence[fg.Value]) -> tuple[cg.Value, ...]:
    return tuple(fg2cg_value(v) for v in env)


def fg2cg_store(store: Store[fg.Raw]) -> Store[cg.Value]:
    return store.map(lambda _lab, r: fg2cg_raw(r))


def fg2cg_heap(heap: Sequence[fg.Value]) -> tuple[cg.LabeledV, ...]:
    return tuple(fg2cg_value(v) for v in heap)


def fg2cg_state(store: Store[fg.Raw], heap: Sequence[fg.Value], env: Sequence[fg.Value]):
    return fg2cg_store(store), fg2cg_heap(heap), fg2cg_env(env)


def _drop(k: int, e: cg.Expr, first: int = 0) -> cg.Expr:
    """Hide the ``k`` innermost temporaries starting at ``first``."""
    if k == 0:
        return e
    return cg.Wken(frozenset(range(first, first + k)), e)


def _binds(*steps: cg.Expr, last: cg.Expr) -> cg.Expr:
    out = last
    for step in reversed(steps):
        out = cg.Bind(step, out)
    return out


def fg2cg_expr(e: fg.Expr) -> cg.Expr:
    tr = fg2cg_expr
    V = cg.Var
    match e:
        case fg.Unit():
            return cg.ToLabeled(cg.Return(cg.Unit()))
        case fg.LabelLit(lab):
            return cg.ToLabeled(cg.Return(cg.LabelLit(lab)))
        case fg.Lam(ann, body, name):
            return cg.ToLabeled(cg.Return(cg.Lam(_ann(ann), tr(body), name)))
        case fg.Var(i):
            return cg.ToLabeled(cg.Unlabel(V(i)))
        case fg.Inl(other, a):
            return cg.ToLabeled(cg.Bind(tr(a), cg.Return(cg.Inl(_ann(other), V(0)))))
        case fg.Inr(other, a):
            return cg.ToLabeled(cg.Bind(tr(a), cg.Return(cg.Inr(_ann(other), V(0)))))
        case fg.Pair(a, b):
            return cg.ToLabeled(_binds(tr(a), _drop(1, tr(b)), last=cg.Return(cg.Pair(V(1), V(0)))))
        case fg.App(fn, arg):
            # lv1 <- fn; lv2 <- arg; v1 <- unlabel lv1; lv <- v1 lv2; unlabel lv
            return cg.ToLabeled(_binds(
                tr(fn), _drop(1, tr(arg)), cg.Unlabel(V(1)), cg.App(V(0), V(1)),
                last=cg.Unlabel(V(0)),
            ))
        case fg.Case(s, left, right, ln, rn):
            # lv <- s; v <- unlabel lv; lv' <- case v ...; unlabel lv'
            # inside a branch the environment is x :: v :: lv :: θ
            branch = cg.Case(V(0), _drop(2, tr(left), 1), _drop(2, tr(right), 1), ln, rn)
            return cg.ToLabeled(_binds(tr(s), cg.Unlabel(V(0)), branch, last=cg.Unlabel(V(0))))
        case fg.Fst(a) | fg.Snd(a):
            proj = cg.Fst(V(0)) if isinstance(e, fg.Fst) else cg.Snd(V(0))
            return cg.ToLabeled(_binds(tr(a), cg.Unlabel(V(0)), last=cg.Unlabel(proj)))
        case fg.LabelLeq(a, b):
            # lv1, lv2, lu, v1, v2 with v2 innermost
            test = cg.Case(cg.LabelLeq(V(1), V(0)),
                           cg.Inl(_LABELED_UNIT, V(3)), cg.Inr(_LABELED_UNIT, V(3)), "_", "_")
            return cg.ToLabeled(_binds(
                tr(a), _drop(1, tr(b)), cg.ToLabeled(cg.Return(cg.Unit())),
                cg.Unlabel(V(2)), cg.Unlabel(V(2)),
                last=cg.Return(test),
            ))
        case fg.Taint(a, b):
            return cg.ToLabeled(_binds(
                tr(a), cg.Unlabel(V(0)), cg.Taint(V(0)), _drop(3, tr(b)),
                last=cg.Unlabel(V(0)),
            ))
        case fg.LabelOf(a):
            return cg.ToLabeled(cg.Bind(tr(a), cg.LabelOf(V(0))))
        case fg.GetLabel():
            return cg.ToLabeled(cg.GetLabel())
        case fg.New(kind, a):
            return cg.ToLabeled(cg.Bind(tr(a), cg.New(kind, V(0))))
        case fg.Read(a):
            return cg.ToLabeled(_binds(tr(a), cg.Unlabel(V(0)), last=cg.Read(V(0))))
        case fg.Write(a, b):
            write = cg.ToLabeled(_binds(
                tr(a), _drop(1, tr(b)), cg.Unlabel(V(1)), last=cg.Write(V(0), V(1)),
            ))
            return cg.Bind(write, cg.ToLabeled(cg.Return(cg.Unit())), "_")
        case fg.LabelOfRef(a):
            return cg.ToLabeled(_binds(tr(a), cg.Unlabel(V(0)), last=cg.LabelOfRef(V(0))))
        case fg.Wken(drop, a):
            return cg.Wken(drop, tr(a))
    raise TypeError(f"not an FG expression: {e!r}")


def fg2cg_ctx(ctx: Sequence[Type]) -> tuple[Type, ...]:
    return tuple(fg2cg_type(t) for t in ctx)


def fg2cg_pc_value(v: fg.Value) -> Label:
    return v.label
