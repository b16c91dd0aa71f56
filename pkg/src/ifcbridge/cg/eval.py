"""Pure evaluator and monitored forcing/thunk semantics for the coarse-grained calculus.

One fuel counter is shared by the pure and the monadic layer.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from ..lattice import Label, Lattice
from ..state import EMPTY_STORE, Fuel, Halt, SecurityAbort, Store, Stuck, Timeout, run_deep
from ..types import UNIT
from .syntax import (
    App, Bind, Case, Expr, Fst, GetLabel, Inl, Inr, LabelLeq, LabelLit, LabelOf, LabelOfRef,
    Lam, New, Pair, Read, Return, Snd, Taint, Thunk, ToLabeled, Unit, Unlabel, Var, Wken, Write,
    drop_env,
)
from .values import (
    Env, FunClo, InlV, InrV, LabeledV, LabelV, PairV, RefIV, RefSV, ThunkClo, UnitV, Value,
)

CG_MUTANTS = ("drop-new-pc", "drop-write-pc", "drop-fs-nsu")

Heap = tuple[LabeledV, ...]


@dataclass(frozen=True, slots=True)
class CGFinal:
    store: Store[Value]
    heap: Heap
    pc: Label
    value: Value
    fuel_used: int = field(default=0, compare=False)

    kind = "final"


@dataclass(frozen=True, slots=True)
class PureFinal:
    value: Value
    fuel_used: int = field(default=0, compare=False)

    kind = "final"


CGOutcome = CGFinal | SecurityAbort | Timeout | Stuck


class _Machine:
    def __init__(self, lattice: Lattice | None, store: Store[Value], heap: Sequence[LabeledV],
                 fuel: int, mutant: str | None) -> None:
        if mutant is not None and mutant not in CG_MUTANTS:
            raise ValueError(f"unknown CG mutant {mutant!r}")
        self.lat = lattice
        self.mem: dict[Label, list[Value]] = {lab: list(m) for lab, m in store}
        self.heap: list[LabeledV] = list(heap)
        self.fuel = Fuel(fuel)
        self.mutant = mutant

    @staticmethod
    def stuck(why: str) -> Halt:
        return Halt(Stuck(why))

    @staticmethod
    def abort(rule: str, check: str) -> Halt:
        return Halt(SecurityAbort(rule, check))

    # pure layer

    def pure(self, e: Expr, env: Env) -> Value:
        self.fuel.tick()
        match e:
            case Var(i):
                if i >= len(env):
                    raise self.stuck(f"unbound #{i}")
                return env[i]
            case Thunk():
                return ThunkClo(e, env)
            case Lam(ann, body, name):
                return FunClo(ann, body, env, name)
            case App(fn, arg):
                f = self.pure(fn, env)
                a = self.pure(arg, env)
                if not isinstance(f, FunClo):
                    raise self.stuck("application of a non-function")
                return self.pure(f.body, (a,) + f.env)
            case Unit():
                return UnitV()
            case LabelLit(lab):
                return LabelV(lab)
            case Pair(a, b):
                va = self.pure(a, env)
                return PairV(va, self.pure(b, env))
            case Fst(inner) | Snd(inner):
                p = self.pure(inner, env)
                if not isinstance(p, PairV):
                    raise self.stuck("projection from a non-pair")
                return p.fst if isinstance(e, Fst) else p.snd
            case Inl(other, inner):
                return InlV(other, self.pure(inner, env))
            case Inr(other, inner):
                return InrV(other, self.pure(inner, env))
            case Case(scrut, left, right):
                s = self.pure(scrut, env)
                match s:
                    case InlV(_, v):
                        return self.pure(left, (v,) + env)
                    case InrV(_, v):
                        return self.pure(right, (v,) + env)
                raise self.stuck("case on a non-sum")
            case LabelLeq(a, b):
                va = self.pure(a, env)
                vb = self.pure(b, env)
                if not (isinstance(va, LabelV) and isinstance(vb, LabelV)):
                    raise self.stuck("label comparison on non-labels")
                if va.label.lattice.leq(va.label, vb.label):
                    return InlV(UNIT, UnitV())
                return InrV(UNIT, UnitV())
            case Wken(drop, inner):
                return self.pure(inner, drop_env(env, drop))
        raise self.stuck(f"unknown expression {type(e).__name__}")

    # monadic layer

    def force(self, e: Expr, env: Env, pc: Label) -> tuple[Label, Value]:
        self.fuel.tick()
        clo = self.pure(e, env)
        if not isinstance(clo, ThunkClo):
            raise self.stuck("forcing a non-thunk")
        return self.thunk(clo.thunk, clo.env, pc)

    def labeled(self, e: Expr, env: Env) -> LabeledV:
        v = self.pure(e, env)
        if not isinstance(v, LabeledV):
            raise self.stuck("expected a labeled value")
        return v

    def label(self, e: Expr, env: Env) -> Label:
        v = self.pure(e, env)
        if not isinstance(v, LabelV):
            raise self.stuck("expected a label")
        return v.label

    def thunk(self, t: Thunk, env: Env, pc: Label) -> tuple[Label, Value]:
        self.fuel.tick()
        lat = pc.lattice
        match t:
            case Return(e):
                return pc, self.pure(e, env)
            case Bind(first, rest):
                pc1, v1 = self.force(first, env, pc)
                return self.force(rest, (v1,) + env, pc1)
            case ToLabeled(e):
                pc1, v = self.force(e, env, pc)
                return pc, LabeledV(pc1, v)
            case Unlabel(e):
                lv = self.labeled(e, env)
                return lat.join(pc, lv.label), lv.value
            case LabelOf(e):
                lv = self.labeled(e, env)
                return lat.join(pc, lv.label), LabelV(lv.label)
            case GetLabel():
                return pc, LabelV(pc)
            case Taint(e):
                return lat.join(pc, self.label(e, env)), UnitV()
            case New(kind, e):
                lv = self.labeled(e, env)
                if kind == "I":
                    if self.mutant != "drop-new-pc" and not lat.leq(pc, lv.label):
                        raise self.abort("New", "pc <= label")
                    cells = self.mem.setdefault(lv.label, [])
                    cells.append(lv.value)
                    return pc, RefIV(lv.label, len(cells) - 1)
                if not lat.leq(pc, lv.label):
                    raise self.abort("New-FS", "pc <= label")
                self.heap.append(lv)
                return pc, RefSV(len(self.heap) - 1)
            case Read(e):
                r = self.pure(e, env)
                match r:
                    case RefIV(mem, n):
                        cells = self.mem.get(mem, [])
                        if n >= len(cells):
                            raise self.stuck(f"dangling reference {n}_{mem}")
                        return lat.join(pc, mem), cells[n]
                    case RefSV(n):
                        if n >= len(self.heap):
                            raise self.stuck(f"dangling heap address {n}")
                        cell = self.heap[n]
                        return lat.join(pc, cell.label), cell.value
                raise self.stuck("read from a non-reference")
            case Write(re, ve):
                r = self.pure(re, env)
                lv = self.labeled(ve, env)
                match r:
                    case RefIV(mem, n):
                        if not lat.leq(lv.label, mem):
                            raise self.abort("Write", "value-label <= memory-label")
                        if self.mutant != "drop-write-pc" and not lat.leq(pc, mem):
                            raise self.abort("Write", "pc <= memory-label")
                        cells = self.mem.get(mem, [])
                        if n >= len(cells):
                            raise self.stuck(f"dangling reference {n}_{mem}")
                        cells[n] = lv.value
                        return pc, UnitV()
                    case RefSV(n):
                        if n >= len(self.heap):
                            raise self.stuck(f"dangling heap address {n}")
                        old = self.heap[n]
                        if self.mutant != "drop-fs-nsu" and not lat.leq(pc, old.label):
                            raise self.abort("Write-FS", "NSU")
                        self.heap[n] = LabeledV(lat.join(pc, lv.label), lv.value)
                        return pc, UnitV()
                raise self.stuck("write to a non-reference")
            case LabelOfRef(e):
                r = self.pure(e, env)
                match r:
                    case RefIV(mem, _):
                        return lat.join(pc, mem), LabelV(mem)
                    case RefSV(n):
                        if n >= len(self.heap):
                            raise self.stuck(f"dangling heap address {n}")
                        cell = self.heap[n].label
                        return lat.join(pc, cell), LabelV(cell)
                raise self.stuck("labelOfRef of a non-reference")
        raise self.stuck(f"unknown thunk {type(t).__name__}")


def _store(store) -> Store[Value]:
    if store is None:
        return EMPTY_STORE
    return store if isinstance(store, Store) else Store.of(store)


def _stamp(o, used: int):
    match o:
        case SecurityAbort(rule, check):
            return SecurityAbort(rule, check, used)
        case Timeout():
            return Timeout(used)
        case Stuck(reason):
            return Stuck(reason, used)
    return o


def eval_pure(e: Expr, env: Sequence[Value], fuel: int = 10_000) -> PureFinal | Timeout | Stuck:
    def go():
        m = _Machine(None, EMPTY_STORE, (), fuel, None)
        try:
            v = m.pure(e, tuple(env))
        except Halt as h:
            return _stamp(h.outcome, m.fuel.used)
        return PureFinal(v, m.fuel.used)

    return run_deep(go)


def _run(store, heap, pc: Label, fuel: int, mutant: str | None, step) -> CGOutcome:
    def go():
        m = _Machine(pc.lattice, _store(store), heap, fuel, mutant)
        try:
            pc1, v = step(m)
        except Halt as h:
            return _stamp(h.outcome, m.fuel.used)
        return CGFinal(Store.of(m.mem), tuple(m.heap), pc1, v, m.fuel.used)

    return run_deep(go)


def eval_force(
    store: Store[Value] | Mapping[Label, Sequence[Value]] | None,
    heap: Sequence[LabeledV],
    pc: Label,
    e: Expr,
    env: Sequence[Value],
    fuel: int = 10_000,
    *,
    mutant: str | None = None,
) -> CGOutcome:
    """Evaluate ``e`` to a thunk closure and run it."""
    return _run(store, heap, pc, fuel, mutant, lambda m: m.force(e, tuple(env), pc))


def eval_thunk(
    store: Store[Value] | Mapping[Label, Sequence[Value]] | None,
    heap: Sequence[LabeledV],
    pc: Label,
    t: Thunk,
    env: Sequence[Value],
    fuel: int = 10_000,
    *,
    mutant: str | None = None,
) -> CGOutcome:
    return _run(store, heap, pc, fuel, mutant, lambda m: m.thunk(t, tuple(env), pc))
