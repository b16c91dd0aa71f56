"""Random inputs (environment, store, heap) and attacker-equivalent input pairs.

A side of a trial is built against a typed layout: every store cell and heap
cell has a fixed type, so references generated at type ``ref τ`` point at a
cell holding a ``τ``. The second side of an equivalent pair copies every part
the attacker can see (renaming flow-sensitive addresses through an injection
that becomes the bijection) and samples the rest afresh.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass, field

from .. import cg, fg
from ..lattice import Label, Lattice
from ..security.bijection import Bijection
from ..security.equiv import CGRelation, FGRelation
from ..security.valid import valid_inputs_cg, valid_inputs_fg
from ..state import Store
from ..types import LIO, Fun, LabeledT, LabelT, Prod, Ref, Sum, Type, UnitT
from .gen import CGGen, FGGen


@dataclass
class _Side:
    """Typed layout and contents of one side's store and heap."""

    store_types: dict[Label, list[Type]] = field(default_factory=dict)
    store_vals: dict[Label, list] = field(default_factory=dict)
    heap_types: list[Type] = field(default_factory=list)
    heap_vals: list = field(default_factory=list)
    frozen: set[Label] = field(default_factory=set)
    pending: list[tuple[str, Label | None, int]] = field(default_factory=list)

    def store(self) -> Store:
        return Store.of({lab: tuple(vals) for lab, vals in self.store_vals.items()})


@dataclass(frozen=True)
class Inputs:
    store: Store
    heap: tuple
    env: tuple


@dataclass(frozen=True)
class InputPair:
    first: Inputs
    second: Inputs
    beta: Bijection


class _World:
    """Shared machinery; subclasses say how values of each calculus are built."""

    def __init__(self, lattice: Lattice, attacker: Label, rng: random.Random, *,
                 secret_ratio: float = 0.5, fs_ratio: float = 0.5, body_size: int = 3) -> None:
        self.lat = lattice
        self.A = attacker
        self.rng = rng
        self.secret_ratio = secret_ratio
        self.body_size = body_size
        self.public = [p for p in lattice.points if lattice.leq(p, attacker)]
        self.secret = [p for p in lattice.points if not lattice.leq(p, attacker)]
        self.fs_ratio = fs_ratio

    def is_public(self, lab: Label) -> bool:
        return self.lat.leq(lab, self.A)

    def pick_label(self) -> Label:
        if self.secret and (not self.public or self.rng.random() < self.secret_ratio):
            return self.rng.choice(self.secret)
        return self.rng.choice(self.public)

    def pick_secret(self) -> Label:
        return self.rng.choice(self.secret)

    # cell allocation

    def store_cell(self, side: _Side, content: Type) -> tuple[Label, int]:
        lab = self.pick_label()
        if lab in side.frozen:
            cands = [i for i, t in enumerate(side.store_types.get(lab, [])) if t == content]
            if cands:
                return lab, self.rng.choice(cands)
            open_labels = [p for p in self.lat.points if p not in side.frozen]
            lab = self.rng.choice(open_labels)
        types = side.store_types.setdefault(lab, [])
        vals = side.store_vals.setdefault(lab, [])
        cands = [i for i, t in enumerate(types) if t == content]
        if cands and self.rng.random() < 0.6:
            return lab, self.rng.choice(cands)
        types.append(content)
        vals.append(None)
        side.pending.append(("store", lab, len(types) - 1))
        return lab, len(types) - 1

    def heap_cell(self, side: _Side, content: Type) -> int:
        cands = [i for i, t in enumerate(side.heap_types) if t == content]
        if cands and self.rng.random() < 0.6:
            return self.rng.choice(cands)
        side.heap_types.append(content)
        side.heap_vals.append(None)
        side.pending.append(("heap", None, len(side.heap_types) - 1))
        return len(side.heap_types) - 1

    def fill(self, side: _Side) -> None:
        while side.pending:
            where, lab, i = side.pending.pop(0)
            if where == "store":
                if side.store_vals[lab][i] is None:
                    side.store_vals[lab][i] = self.fresh_cell(side, lab, side.store_types[lab][i])
            elif side.heap_vals[i] is None:
                side.heap_vals[i] = self.fresh_heap(side, side.heap_types[i])

    # one side

    def gen_side(self, ctx: Sequence[Type], labels: Sequence[Label | None] | None = None) -> tuple[_Side, tuple]:
        side = _Side()
        labels = list(labels) if labels is not None else [None] * len(ctx)
        env = tuple(self.fresh(side, t, lab) for t, lab in zip(ctx, labels))
        self.fill(side)
        return side, env

    def vary_side(self, first: _Side, env1: tuple, ctx: Sequence[Type]) -> tuple[_Side, tuple, dict[int, int]]:
        """Build the second side from the first, returning the address injection."""
        side = _Side()
        self._first = first
        self._side2 = side
        self._inj: dict[int, int] = {}
        self._inj_pending: list[int] = []
        # public memories keep the first side's layout exactly
        side.frozen.update(self.public)
        for lab, types in first.store_types.items():
            side.store_types[lab] = list(types)
            side.store_vals[lab] = [None] * len(types)
        env2 = tuple(self.vary(side, v, t) for v, t in zip(env1, ctx))
        for lab, types in first.store_types.items():
            for i, t in enumerate(types):
                if self.is_public(lab):
                    side.store_vals[lab][i] = self.vary_cell(side, lab, first.store_vals[lab][i], t)
                else:
                    side.pending.append(("store", lab, i))
        # relate some cells that nothing public reaches, to exercise larger bijections
        for a in range(len(first.heap_types)):
            if a not in self._inj and self.rng.random() < 0.3:
                self.map_addr(a)
        while self._inj_pending or side.pending:
            while self._inj_pending:
                a = self._inj_pending.pop(0)
                side.heap_vals[self._inj[a]] = self.vary_heap(side, first.heap_vals[a], first.heap_types[a])
            self.fill(side)
        return side, env2, dict(self._inj)

    def map_addr(self, a: int) -> int:
        if a in self._inj:
            return self._inj[a]
        side = self._side2
        if self.secret and self.rng.random() < 0.25:
            # padding cell visible only on this side
            t = self.rng.choice(self._first.heap_types)
            side.heap_types.append(t)
            side.heap_vals.append(None)
            side.pending.append(("heap", None, len(side.heap_types) - 1))
        side.heap_types.append(self._first.heap_types[a])
        side.heap_vals.append(None)
        self._inj[a] = len(side.heap_types) - 1
        self._inj_pending.append(a)
        return self._inj[a]

    def gen_pair(self, ctx: Sequence[Type], labels: Sequence[Label | None] | None = None) -> InputPair:
        side1, env1 = self.gen_side(ctx, labels)
        side2, env2, inj = self.vary_side(side1, env1, ctx)
        first = Inputs(side1.store(), tuple(side1.heap_vals), env1)
        second = Inputs(side2.store(), tuple(side2.heap_vals), env2)
        pair = InputPair(first, second, Bijection.of(inj.items()))
        self.verify(pair)
        return pair

    def gen_chain(self, ctx: Sequence[Type]) -> tuple[InputPair, InputPair]:
        """Three sides x, y, z with x ≈ y and y ≈ z, as the pairs (x, y) and (y, z)."""
        side1, env1 = self.gen_side(ctx)
        side2, env2, inj1 = self.vary_side(side1, env1, ctx)
        side3, env3, inj2 = self.vary_side(side2, env2, ctx)
        x, y, z = (Inputs(s.store(), tuple(s.heap_vals), env)
                   for s, env in ((side1, env1), (side2, env2), (side3, env3)))
        first = InputPair(x, y, Bijection.of(inj1.items()))
        second = InputPair(y, z, Bijection.of(inj2.items()))
        self.verify(first)
        self.verify(second)
        return first, second

    # subclass hooks
    def fresh(self, side: _Side, t: Type, label: Label | None = None): ...
    def fresh_cell(self, side: _Side, lab: Label, t: Type): ...
    def fresh_heap(self, side: _Side, t: Type): ...
    def vary(self, side: _Side, v, t: Type): ...
    def vary_cell(self, side: _Side, lab: Label, v, t: Type): ...
    def vary_heap(self, side: _Side, v, t: Type): ...
    def verify(self, pair: InputPair) -> None: ...


class FGWorld(_World):
    def __init__(self, *args, **kw) -> None:
        super().__init__(*args, **kw)
        self.gen = FGGen(self.lat, self.rng, fs_ratio=self.fs_ratio)

    def fresh(self, side: _Side, t: Type, label: Label | None = None) -> fg.Value:
        return fg.Value(self.fresh_raw(side, t), label or self.pick_label())

    def fresh_raw(self, side: _Side, t: Type) -> fg.Raw:
        rng = self.rng
        match t:
            case UnitT():
                return fg.UnitR()
            case LabelT():
                return fg.LabelR(rng.choice(self.lat.points))
            case Sum(a, b):
                if rng.random() < 0.5:
                    return fg.InlR(b, self.fresh(side, a))
                return fg.InrR(a, self.fresh(side, b))
            case Prod(a, b):
                return fg.PairR(self.fresh(side, a), self.fresh(side, b))
            case Fun(a, b):
                body = self.gen.gen((a,), b, rng.randint(0, self.body_size))
                return fg.Clo(a, body, ())
            case Ref("I", c):
                return fg.RefI(*self.store_cell(side, c))
            case Ref("S", c):
                return fg.RefS(self.heap_cell(side, c))
        raise TypeError(f"no values of type {t}")

    def fresh_cell(self, side: _Side, lab: Label, t: Type) -> fg.Raw:
        return self.fresh_raw(side, t)

    def fresh_heap(self, side: _Side, t: Type) -> fg.Value:
        return self.fresh(side, t)

    def vary(self, side: _Side, v: fg.Value, t: Type) -> fg.Value:
        if not self.is_public(v.label):
            return fg.Value(self.fresh_raw(side, t), self.pick_secret())
        return fg.Value(self.vary_raw(side, v.raw, t), v.label)

    def vary_raw(self, side: _Side, r: fg.Raw, t: Type) -> fg.Raw:
        match r, t:
            case fg.InlR(o, v), Sum(a, _):
                return fg.InlR(o, self.vary(side, v, a))
            case fg.InrR(o, v), Sum(_, b):
                return fg.InrR(o, self.vary(side, v, b))
            case fg.PairR(x, y), Prod(a, b):
                return fg.PairR(self.vary(side, x, a), self.vary(side, y, b))
            case fg.RefS(addr), _:
                return fg.RefS(self.map_addr(addr))
        return r

    def vary_cell(self, side: _Side, lab: Label, r: fg.Raw, t: Type) -> fg.Raw:
        return self.vary_raw(side, r, t)

    def vary_heap(self, side: _Side, v: fg.Value, t: Type) -> fg.Value:
        return self.vary(side, v, t)

    def verify(self, pair: InputPair) -> None:
        a, b = pair.first, pair.second
        rel = FGRelation(self.A, pair.beta.related)
        ok = (
            valid_inputs_fg(a.store, a.heap, a.env)
            and valid_inputs_fg(b.store, b.heap, b.env)
            and rel.store(a.store, b.store)
            and rel.env(a.env, b.env)
            and all(rel.value(a.heap[x], b.heap[y]) for x, y in pair.beta.pairs)
        )
        if not ok:
            raise AssertionError("generated input pair is not L-equivalent")


class CGWorld(_World):
    def __init__(self, *args, **kw) -> None:
        super().__init__(*args, **kw)
        self.gen = CGGen(self.lat, self.rng, fs_ratio=self.fs_ratio)

    def fresh(self, side: _Side, t: Type, label: Label | None = None) -> cg.Value:
        rng = self.rng
        match t:
            case UnitT():
                return cg.UnitV()
            case LabelT():
                return cg.LabelV(rng.choice(self.lat.points))
            case LabeledT(c):
                return cg.LabeledV(label or self.pick_label(), self.fresh(side, c))
            case Sum(a, b):
                if rng.random() < 0.5:
                    return cg.InlV(b, self.fresh(side, a))
                return cg.InrV(a, self.fresh(side, b))
            case Prod(a, b):
                return cg.PairV(self.fresh(side, a), self.fresh(side, b))
            case Fun(a, b):
                body = self.gen.gen_p((a,), b, rng.randint(0, self.body_size))
                if body is None:
                    raise TypeError(f"no closures of type {t}")
                return cg.FunClo(a, body, ())
            case LIO(c):
                for _ in range(4):
                    body = self.gen.gen_m((), c, rng.randint(0, self.body_size))
                    if isinstance(body, cg.Thunk):
                        break
                else:
                    body = self.gen.canon_m((), c)
                return cg.ThunkClo(body, ())
            case Ref("I", c):
                return cg.RefIV(*self.store_cell(side, c))
            case Ref("S", c):
                return cg.RefSV(self.heap_cell(side, c))
        raise TypeError(f"no values of type {t}")

    def fresh_cell(self, side: _Side, lab: Label, t: Type) -> cg.Value:
        return self.fresh(side, t)

    def fresh_heap(self, side: _Side, t: Type) -> cg.LabeledV:
        return cg.LabeledV(self.pick_label(), self.fresh(side, t))

    def vary(self, side: _Side, v: cg.Value, t: Type) -> cg.Value:
        match v, t:
            case cg.LabeledV(lab, w), LabeledT(c):
                if not self.is_public(lab):
                    return cg.LabeledV(self.pick_secret(), self.fresh(side, c))
                return cg.LabeledV(lab, self.vary(side, w, c))
            case cg.InlV(o, w), Sum(a, _):
                return cg.InlV(o, self.vary(side, w, a))
            case cg.InrV(o, w), Sum(_, b):
                return cg.InrV(o, self.vary(side, w, b))
            case cg.PairV(x, y), Prod(a, b):
                return cg.PairV(self.vary(side, x, a), self.vary(side, y, b))
            case cg.RefSV(addr), _:
                return cg.RefSV(self.map_addr(addr))
        return v

    def vary_cell(self, side: _Side, lab: Label, v: cg.Value, t: Type) -> cg.Value:
        return self.vary(side, v, t)

    def vary_heap(self, side: _Side, v: cg.LabeledV, t: Type) -> cg.LabeledV:
        return self.vary(side, v, LabeledT(t))

    def verify(self, pair: InputPair) -> None:
        a, b = pair.first, pair.second
        rel = CGRelation(self.A, pair.beta.related)
        ok = (
            valid_inputs_cg(a.store, a.heap, a.env)
            and valid_inputs_cg(b.store, b.heap, b.env)
            and rel.store(a.store, b.store)
            and rel.env(a.env, b.env)
            and all(rel.value(a.heap[x], b.heap[y]) for x, y in pair.beta.pairs)
        )
        if not ok:
            raise AssertionError("generated input pair is not L-equivalent")


def _world(calculus: str, lattice: Lattice, A: Label, rng: random.Random, **kw) -> _World:
    return (FGWorld if calculus == "fg" else CGWorld)(lattice, A, rng, **kw)


def gen_inputs(calculus: str, ctx: Sequence[Type], lattice: Lattice, A: Label, rng: random.Random,
               labels: Sequence[Label | None] | None = None, **kw) -> Inputs:
    """Random valid store, heap and environment for ``ctx``."""
    world = _world(calculus, lattice, A, rng, **kw)
    side, env = world.gen_side(ctx, labels)
    return Inputs(side.store(), tuple(side.heap_vals), env)


def gen_leq_inputs(calculus: str, ctx: Sequence[Type], lattice: Lattice, A: Label, rng: random.Random,
                   labels: Sequence[Label | None] | None = None, **kw) -> InputPair:
    """Two valid input triples that are equivalent at ``A`` under the returned bijection.

    ``labels`` optionally fixes the outer label of each environment entry (FG)
    or of each top-level labeled value (CG).
    """
    return _world(calculus, lattice, A, rng, **kw).gen_pair(ctx, labels)


def gen_leq_chain(calculus: str, ctx: Sequence[Type], lattice: Lattice, A: Label, rng: random.Random,
                  **kw) -> tuple[InputPair, InputPair]:
    """Pairs (x, y) and (y, z) of equivalent inputs sharing the middle side."""
    return _world(calculus, lattice, A, rng, **kw).gen_chain(ctx)
