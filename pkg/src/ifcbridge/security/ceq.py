"""Cross-language equivalence between fine-grained and coarse-grained values."""

from __future__ import annotations

from collections.abc import Sequence

from .. import cg, fg
from ..cg.eval import CGFinal
from ..fg.eval import FGFinal
from ..lattice import Label
from ..state import Store
from ..translate.cg2fg import _HIDE_SLOT, cg2fg_expr, cg2fg_thunk, cg2fg_type
from ..types import UNIT


def ceq_value(pc: Label, v1: fg.Value, v2: cg.Value) -> bool:
    return pc.lattice.leq(v1.label, pc) and ceq_raw(pc, v1.raw, v2)


def ceq_raw(pc: Label, r: fg.Raw, v: cg.Value) -> bool:
    match r, v:
        case fg.UnitR(), cg.UnitV():
            return True
        case fg.LabelR(a), cg.LabelV(b):
            return a == b
        case fg.RefI(m1, n1), cg.RefIV(m2, n2):
            return m1 == m2 and n1 == n2
        case fg.RefS(n1), cg.RefSV(n2):
            return n1 == n2
        case (fg.InlR(_, a), cg.InlV(_, b)) | (fg.InrR(_, a), cg.InrV(_, b)):
            return ceq_value(pc, a, b)
        case fg.PairR(lab_v, inner), cg.LabeledV(lab, w):
            return lab_v == fg.Value(fg.LabelR(lab), lab) and ceq_value(lab, inner, w)
        case fg.PairR(a1, b1), cg.PairV(a2, b2):
            return ceq_value(pc, a1, a2) and ceq_value(pc, b1, b2)
        case fg.Clo(t1, body1, env1), cg.FunClo(t2, body2, env2):
            same_ann = (t1 is None and t2 is None) or (
                t1 is not None and t2 is not None and t1 == cg2fg_type(t2)
            )
            return same_ann and body1 == cg2fg_expr(body2) and ceq_env(pc, env1, env2)
        case fg.Clo(t1, body1, env1), cg.ThunkClo(t, env2):
            return (
                t1 == UNIT
                and body1 == fg.Wken(_HIDE_SLOT, cg2fg_thunk(t))
                and ceq_env(pc, env1, env2)
            )
    return False


def ceq_env(pc: Label, e1: Sequence[fg.Value], e2: Sequence[cg.Value]) -> bool:
    return len(e1) == len(e2) and all(ceq_value(pc, a, b) for a, b in zip(e1, e2))


def ceq(pc: Label, x, y) -> bool:
    """Dispatch on an FG value, raw value or environment."""
    if isinstance(x, fg.Value):
        return ceq_value(pc, x, y)
    if isinstance(x, fg.Raw):
        return ceq_raw(pc, x, y)
    return ceq_env(pc, x, y)


def ceq_memory(lab: Label, m1: Sequence[fg.Raw], m2: Sequence[cg.Value]) -> bool:
    return len(m1) == len(m2) and all(ceq_raw(lab, r, v) for r, v in zip(m1, m2))


def ceq_store(s1: Store[fg.Raw], s2: Store[cg.Value]) -> bool:
    labels = set(s1.labels()) | set(s2.labels())
    return all(ceq_memory(lab, s1.get(lab), s2.get(lab)) for lab in labels)


def ceq_heap(h1: Sequence[fg.Value], h2: Sequence[cg.LabeledV]) -> bool:
    return len(h1) == len(h2) and all(
        v.label == cell.label and ceq_raw(cell.label, v.raw, cell.value) for v, cell in zip(h1, h2)
    )


def state_rel(fg_store: Store[fg.Raw], fg_heap, cg_store: Store[cg.Value], cg_heap) -> bool:
    return ceq_store(fg_store, cg_store) and ceq_heap(fg_heap, cg_heap)


def config_rel(c1: FGFinal, c2: CGFinal) -> bool:
    """FG final ⟨Σ1, μ1, r^pc⟩ against CG final ⟨Σ2, μ2, pc, v⟩."""
    return (
        c1.value.label == c2.pc
        and ceq_raw(c2.pc, c1.value.raw, c2.value)
        and state_rel(c1.store, c1.heap, c2.store, c2.heap)
    )
