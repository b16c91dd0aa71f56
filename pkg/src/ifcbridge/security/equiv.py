"""L-equivalence up to a bijection for both calculi.

Both relations are parameterised by how flow-sensitive addresses are related,
so the same traversal serves the plain check (membership in β) and the
bijection search (record the pair that is forced).
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .. import cg, fg
from ..cg.eval import CGFinal
from ..fg.eval import FGFinal
from ..lattice import Label
from ..state import Store
from .bijection import Bijection

AddrRel = Callable[[int, int], bool]


class FGRelation:
    def __init__(self, attacker: Label, addr: AddrRel) -> None:
        self.A = attacker
        self.lat = attacker.lattice
        self.addr = addr

    def public(self, lab: Label) -> bool:
        return self.lat.leq(lab, self.A)

    def value(self, v1: fg.Value, v2: fg.Value) -> bool:
        if self.public(v1.label) or self.public(v2.label):
            return v1.label == v2.label and self.raw(v1.raw, v2.raw)
        return True

    def raw(self, r1: fg.Raw, r2: fg.Raw) -> bool:
        match r1, r2:
            case fg.UnitR(), fg.UnitR():
                return True
            case fg.LabelR(a), fg.LabelR(b):
                return a == b
            case (fg.InlR(_, a), fg.InlR(_, b)) | (fg.InrR(_, a), fg.InrR(_, b)):
                return self.value(a, b)
            case fg.PairR(a1, b1), fg.PairR(a2, b2):
                return self.value(a1, a2) and self.value(b1, b2)
            case fg.Clo(t1, body1, env1), fg.Clo(t2, body2, env2):
                return t1 == t2 and body1 == body2 and self.env(env1, env2)
            case fg.RefI(m1, n1), fg.RefI(m2, n2):
                if self.public(m1) or self.public(m2):
                    return m1 == m2 and n1 == n2
                return True
            case fg.RefS(n1), fg.RefS(n2):
                return self.addr(n1, n2)
        return False

    def env(self, e1: Sequence[fg.Value], e2: Sequence[fg.Value]) -> bool:
        return len(e1) == len(e2) and all(self.value(a, b) for a, b in zip(e1, e2))

    def memory(self, lab: Label, m1: Sequence[fg.Raw], m2: Sequence[fg.Raw]) -> bool:
        if not self.public(lab):
            return True
        return len(m1) == len(m2) and all(self.raw(a, b) for a, b in zip(m1, m2))

    def store(self, s1: Store[fg.Raw], s2: Store[fg.Raw]) -> bool:
        labels = set(s1.labels()) | set(s2.labels())
        return all(self.memory(lab, s1.get(lab), s2.get(lab)) for lab in sorted(labels))


class CGRelation:
    def __init__(self, attacker: Label, addr: AddrRel) -> None:
        self.A = attacker
        self.lat = attacker.lattice
        self.addr = addr

    def public(self, lab: Label) -> bool:
        return self.lat.leq(lab, self.A)

    def value(self, v1: cg.Value, v2: cg.Value) -> bool:
        match v1, v2:
            case cg.UnitV(), cg.UnitV():
                return True
            case cg.LabelV(a), cg.LabelV(b):
                return a == b
            case (cg.InlV(_, a), cg.InlV(_, b)) | (cg.InrV(_, a), cg.InrV(_, b)):
                return self.value(a, b)
            case cg.PairV(a1, b1), cg.PairV(a2, b2):
                return self.value(a1, a2) and self.value(b1, b2)
            case cg.FunClo(t1, body1, env1), cg.FunClo(t2, body2, env2):
                return t1 == t2 and body1 == body2 and self.env(env1, env2)
            case cg.ThunkClo(t1, env1), cg.ThunkClo(t2, env2):
                return t1 == t2 and self.env(env1, env2)
            case cg.LabeledV(l1, a), cg.LabeledV(l2, b):
                if self.public(l1) or self.public(l2):
                    return l1 == l2 and self.value(a, b)
                return True
            case cg.RefIV(m1, n1), cg.RefIV(m2, n2):
                if self.public(m1) or self.public(m2):
                    return m1 == m2 and n1 == n2
                return True
            case cg.RefSV(n1), cg.RefSV(n2):
                return self.addr(n1, n2)
        return False

    def env(self, e1: Sequence[cg.Value], e2: Sequence[cg.Value]) -> bool:
        return len(e1) == len(e2) and all(self.value(a, b) for a, b in zip(e1, e2))

    def memory(self, lab: Label, m1: Sequence[cg.Value], m2: Sequence[cg.Value]) -> bool:
        if not self.public(lab):
            return True
        return len(m1) == len(m2) and all(self.value(a, b) for a, b in zip(m1, m2))

    def store(self, s1: Store[cg.Value], s2: Store[cg.Value]) -> bool:
        labels = set(s1.labels()) | set(s2.labels())
        return all(self.memory(lab, s1.get(lab), s2.get(lab)) for lab in sorted(labels))


def _heap_ok(beta: Bijection, h1: Sequence, h2: Sequence, cell_rel) -> bool:
    return all(
        0 <= a < len(h1) and 0 <= b < len(h2) and cell_rel(h1[a], h2[b]) for a, b in beta.pairs
    )


@dataclass(frozen=True, slots=True)
class FGInitial:
    store: Store[fg.Raw]
    heap: tuple[fg.Value, ...]
    expr: fg.Expr
    env: tuple[fg.Value, ...]


@dataclass(frozen=True, slots=True)
class CGInitial:
    store: Store[cg.Value]
    heap: tuple[cg.LabeledV, ...]
    pc: Label
    expr: cg.Expr
    env: tuple[cg.Value, ...]


# fine-grained entry points

def _fg(attacker: Label, beta: Bijection) -> FGRelation:
    return FGRelation(attacker, beta.related)


def leq_fg_value(A: Label, beta: Bijection, v1: fg.Value, v2: fg.Value) -> bool:
    return _fg(A, beta).value(v1, v2)


def leq_fg_raw(A: Label, beta: Bijection, r1: fg.Raw, r2: fg.Raw) -> bool:
    return _fg(A, beta).raw(r1, r2)


def leq_fg_env(A: Label, beta: Bijection, e1, e2) -> bool:
    return _fg(A, beta).env(e1, e2)


def leq_fg_memory(A: Label, beta: Bijection, lab: Label, m1, m2) -> bool:
    return _fg(A, beta).memory(lab, m1, m2)


def leq_fg_store(A: Label, beta: Bijection, s1, s2) -> bool:
    return _fg(A, beta).store(s1, s2)


def leq_fg_heap(A: Label, beta: Bijection, h1, h2) -> bool:
    rel = _fg(A, beta)
    return _heap_ok(beta, h1, h2, rel.value)


def leq_fg_initial(A: Label, beta: Bijection, c1: FGInitial, c2: FGInitial) -> bool:
    rel = _fg(A, beta)
    return (
        c1.expr == c2.expr
        and rel.store(c1.store, c2.store)
        and _heap_ok(beta, c1.heap, c2.heap, rel.value)
        and rel.env(c1.env, c2.env)
    )


def leq_fg_final(A: Label, beta: Bijection, c1: FGFinal, c2: FGFinal) -> bool:
    rel = _fg(A, beta)
    return (
        rel.store(c1.store, c2.store)
        and _heap_ok(beta, c1.heap, c2.heap, rel.value)
        and rel.value(c1.value, c2.value)
    )


def leq_fg(A: Label, beta: Bijection, x1, x2) -> bool:
    """Dispatch on values, raw values, stores and configurations.

    Environments, memories and heaps are plain tuples; use the dedicated
    ``leq_fg_env`` / ``leq_fg_memory`` / ``leq_fg_heap``.
    """
    match x1:
        case fg.Value():
            return leq_fg_value(A, beta, x1, x2)
        case fg.Raw():
            return leq_fg_raw(A, beta, x1, x2)
        case Store():
            return leq_fg_store(A, beta, x1, x2)
        case FGInitial():
            return leq_fg_initial(A, beta, x1, x2)
        case FGFinal():
            return leq_fg_final(A, beta, x1, x2)
    raise TypeError(f"leq_fg: unsupported {type(x1).__name__}")


# coarse-grained entry points

def _cg(attacker: Label, beta: Bijection) -> CGRelation:
    return CGRelation(attacker, beta.related)


def leq_cg_value(A: Label, beta: Bijection, v1: cg.Value, v2: cg.Value) -> bool:
    return _cg(A, beta).value(v1, v2)


def leq_cg_env(A: Label, beta: Bijection, e1, e2) -> bool:
    return _cg(A, beta).env(e1, e2)


def leq_cg_memory(A: Label, beta: Bijection, lab: Label, m1, m2) -> bool:
    return _cg(A, beta).memory(lab, m1, m2)


def leq_cg_store(A: Label, beta: Bijection, s1, s2) -> bool:
    return _cg(A, beta).store(s1, s2)


def leq_cg_heap(A: Label, beta: Bijection, h1, h2) -> bool:
    rel = _cg(A, beta)
    return _heap_ok(beta, h1, h2, rel.value)


def leq_cg_initial(A: Label, beta: Bijection, c1: CGInitial, c2: CGInitial) -> bool:
    rel = _cg(A, beta)
    return (
        c1.pc == c2.pc
        and c1.expr == c2.expr
        and rel.store(c1.store, c2.store)
        and _heap_ok(beta, c1.heap, c2.heap, rel.value)
        and rel.env(c1.env, c2.env)
    )


def cg_final_outputs_related(rel: CGRelation, c1: CGFinal, c2: CGFinal) -> bool:
    if rel.public(c1.pc) or rel.public(c2.pc):
        return c1.pc == c2.pc and rel.value(c1.value, c2.value)
    return True


def leq_cg_final(A: Label, beta: Bijection, c1: CGFinal, c2: CGFinal) -> bool:
    rel = _cg(A, beta)
    return (
        rel.store(c1.store, c2.store)
        and _heap_ok(beta, c1.heap, c2.heap, rel.value)
        and cg_final_outputs_related(rel, c1, c2)
    )


def leq_cg(A: Label, beta: Bijection, x1, x2) -> bool:
    match x1:
        case cg.Value():
            return leq_cg_value(A, beta, x1, x2)
        case Store():
            return leq_cg_store(A, beta, x1, x2)
        case CGInitial():
            return leq_cg_initial(A, beta, x1, x2)
        case CGFinal():
            return leq_cg_final(A, beta, x1, x2)
    raise TypeError(f"leq_cg: unsupported {type(x1).__name__}")
