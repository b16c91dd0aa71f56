"""Monitored big-step interpreter for the fine-grained calculus.

Every evaluation judgment costs one unit of fuel. Monitor failures unwind
with :class:`SecurityAbort`; ill-typed input unwinds with :class:`Stuck`.
"""

from __future__ import annotations

from collections.abc import Callable, Collection, Mapping, Sequence
from dataclasses import dataclass, field

from ..lattice import Label, Lattice
from ..types import UNIT
from ..state import EMPTY_STORE, Fuel, Halt, SecurityAbort, Store, Stuck, Timeout, run_deep
from .syntax import (
    App, Case, Expr, Fst, GetLabel, Inl, Inr, LabelLeq, LabelLit, LabelOf, LabelOfRef,
    Lam, New, Pair, Read, Snd, Taint, Unit, Var, Wken, Write, drop_env,
)
from .values import Clo, Env, InlR, InrR, LabelR, PairR, Raw, RefI, RefS, UnitR, Value, raise_label

FG_MUTANTS = ("drop-nsu", "drop-write-flow", "drop-taint-guard")

Heap = tuple[Value, ...]


@dataclass(frozen=True, slots=True)
class FGFinal:
    store: Store[Raw]
    heap: Heap
    value: Value
    fuel_used: int = field(default=0, compare=False)

    kind = "final"


FGOutcome = FGFinal | SecurityAbort | Timeout | Stuck


class _Machine:
    def __init__(self, lattice: Lattice, store: Store[Raw], heap: Sequence[Value],
                 fuel: int, mutant: str | None,
                 observe: Callable[[str, Label], None] | None = None) -> None:
        if mutant is not None and mutant not in FG_MUTANTS:
            raise ValueError(f"unknown FG mutant {mutant!r}")
        self.lat = lattice
        self.mem: dict[Label, list[Raw]] = {lab: list(m) for lab, m in store}
        self.heap: list[Value] = list(heap)
        self.fuel = Fuel(fuel)
        self.mutant = mutant
        self.observe = observe

    def stuck(self, why: str) -> Halt:
        return Halt(Stuck(why))

    def abort(self, rule: str, check: str) -> Halt:
        return Halt(SecurityAbort(rule, check))

    def eval(self, e: Expr, env: Env, pc: Label) -> Value:
        self.fuel.tick()
        lat = self.lat
        match e:
            case Var(i):
                if i >= len(env):
                    raise self.stuck(f"unbound #{i}")
                return raise_label(env[i], pc)
            case Unit():
                return Value(UnitR(), pc)
            case LabelLit(lab):
                return Value(LabelR(lab), pc)
            case Lam(ann, body, name):
                return Value(Clo(ann, body, env, name), pc)
            case App(fn, arg):
                f = self.eval(fn, env, pc)
                a = self.eval(arg, env, pc)
                if not isinstance(f.raw, Clo):
                    raise self.stuck("application of a non-closure")
                clo = f.raw
                if self.observe:
                    self.observe("app", f.label)
                return self.eval(clo.body, (a,) + clo.env, lat.join(pc, f.label))
            case Inl(other, inner):
                return Value(InlR(other, self.eval(inner, env, pc)), pc)
            case Inr(other, inner):
                return Value(InrR(other, self.eval(inner, env, pc)), pc)
            case Pair(a, b):
                va = self.eval(a, env, pc)
                vb = self.eval(b, env, pc)
                return Value(PairR(va, vb), pc)
            case Case(scrut, left, right):
                s = self.eval(scrut, env, pc)
                branch_pc = lat.join(pc, s.label)
                if self.observe:
                    self.observe("case", s.label)
                match s.raw:
                    case InlR(_, v):
                        return self.eval(left, (v,) + env, branch_pc)
                    case InrR(_, v):
                        return self.eval(right, (v,) + env, branch_pc)
                raise self.stuck("case on a non-sum")
            case Fst(inner) | Snd(inner):
                p = self.eval(inner, env, pc)
                if not isinstance(p.raw, PairR):
                    raise self.stuck("projection from a non-pair")
                part = p.raw.fst if isinstance(e, Fst) else p.raw.snd
                return raise_label(part, p.label)
            case LabelOf(inner):
                v = self.eval(inner, env, pc)
                return Value(LabelR(v.label), v.label)
            case GetLabel():
                return Value(LabelR(pc), pc)
            case LabelLeq(a, b):
                va = self.eval(a, env, pc)
                vb = self.eval(b, env, pc)
                if not (isinstance(va.raw, LabelR) and isinstance(vb.raw, LabelR)):
                    raise self.stuck("label comparison on non-labels")
                unit = Value(UnitR(), pc)
                raw = InlR(UNIT, unit) if lat.leq(va.raw.label, vb.raw.label) else InrR(UNIT, unit)
                return Value(raw, lat.join(va.label, vb.label))
            case Taint(lexp, body):
                lv = self.eval(lexp, env, pc)
                if not isinstance(lv.raw, LabelR):
                    raise self.stuck("taint with a non-label")
                target = lat.join(pc, lv.raw.label)
                if self.mutant != "drop-taint-guard" and not lat.leq(lv.label, target):
                    raise self.abort("Taint", "label-of-label <= pc join label")
                return self.eval(body, env, target)
            case New(kind, inner):
                v = self.eval(inner, env, pc)
                if kind == "I":
                    cells = self.mem.setdefault(v.label, [])
                    cells.append(v.raw)
                    return Value(RefI(v.label, len(cells) - 1), pc)
                self.heap.append(v)
                return Value(RefS(len(self.heap) - 1), pc)
            case Read(inner):
                rv = self.eval(inner, env, pc)
                match rv.raw:
                    case RefI(mem, n):
                        cells = self.mem.get(mem, [])
                        if n >= len(cells):
                            raise self.stuck(f"dangling reference {n}_{mem}")
                        return Value(cells[n], lat.join(mem, rv.label))
                    case RefS(n):
                        if n >= len(self.heap):
                            raise self.stuck(f"dangling heap address {n}")
                        return raise_label(self.heap[n], rv.label)
                raise self.stuck("read from a non-reference")
            case Write(rexp, vexp):
                rv = self.eval(rexp, env, pc)
                match rv.raw:
                    case RefI(mem, n):
                        if not lat.leq(rv.label, mem):
                            raise self.abort("Write", "reference-label <= memory-label")
                        v = self.eval(vexp, env, pc)
                        if self.mutant != "drop-write-flow" and not lat.leq(v.label, mem):
                            raise self.abort("Write", "value-label <= memory-label")
                        cells = self.mem.get(mem, [])
                        if n >= len(cells):
                            raise self.stuck(f"dangling reference {n}_{mem}")
                        cells[n] = v.raw
                        return Value(UnitR(), pc)
                    case RefS(n):
                        v = self.eval(vexp, env, pc)
                        if n >= len(self.heap):
                            raise self.stuck(f"dangling heap address {n}")
                        old = self.heap[n]
                        if self.mutant != "drop-nsu" and not lat.leq(rv.label, old.label):
                            raise self.abort("Write-FS", "NSU")
                        self.heap[n] = Value(v.raw, lat.join(v.label, rv.label))
                        return Value(UnitR(), pc)
                raise self.stuck("write to a non-reference")
            case LabelOfRef(inner):
                rv = self.eval(inner, env, pc)
                match rv.raw:
                    case RefI(mem, _):
                        return Value(LabelR(mem), lat.join(mem, rv.label))
                    case RefS(n):
                        if n >= len(self.heap):
                            raise self.stuck(f"dangling heap address {n}")
                        cell = self.heap[n].label
                        return Value(LabelR(cell), lat.join(rv.label, cell))
                raise self.stuck("labelOfRef of a non-reference")
            case Wken(drop, inner):
                return self.eval(inner, drop_env(env, drop), pc)
        raise self.stuck(f"unknown expression {type(e).__name__}")

    def final_store(self) -> Store[Raw]:
        return Store.of(self.mem)


def eval_fg(
    store: Store[Raw] | Mapping[Label, Sequence[Raw]] | None,
    heap: Sequence[Value],
    e: Expr,
    env: Sequence[Value],
    pc: Label,
    fuel: int = 10_000,
    *,
    mutant: str | None = None,
    observe: Callable[[str, Label], None] | None = None,
) -> FGOutcome:
    """Run ``e`` in ``env`` at program counter ``pc`` from store/heap ``store``/``heap``.

    ``observe`` is called with ("app" | "case", label) for every closure
    application and case scrutinee, for coverage statistics.
    """
    if store is None:
        store = EMPTY_STORE
    elif not isinstance(store, Store):
        store = Store.of(store)

    def go() -> FGOutcome:
        m = _Machine(pc.lattice, store, heap, fuel, mutant, observe)
        try:
            v = m.eval(e, tuple(env), pc)
        except Halt as h:
            return _with_fuel(h.outcome, m.fuel.used)
        return FGFinal(m.final_store(), tuple(m.heap), v, m.fuel.used)

    return run_deep(go)


def _with_fuel(o, used: int):
    match o:
        case SecurityAbort(rule, check):
            return SecurityAbort(rule, check, used)
        case Timeout():
            return Timeout(used)
        case Stuck(reason):
            return Stuck(reason, used)
    return o
