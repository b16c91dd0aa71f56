"""Coarse-grained calculus: pure expressions with embedded thunks (De Bruijn)."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lattice import Label
from ..types import UNIT, RefKind, Type


class Expr:
    __slots__ = ()


class Thunk(Expr):
    """Monadic computations. As expressions they evaluate to thunk closures."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Expr):
    index: int


@dataclass(frozen=True, slots=True)
class Lam(Expr):
    ann: Type | None
    body: Expr
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class App(Expr):
    fn: Expr
    arg: Expr


@dataclass(frozen=True, slots=True)
class Unit(Expr):
    pass


@dataclass(frozen=True, slots=True)
class LabelLit(Expr):
    label: Label


@dataclass(frozen=True, slots=True)
class Pair(Expr):
    fst: Expr
    snd: Expr


@dataclass(frozen=True, slots=True)
class Fst(Expr):
    expr: Expr


@dataclass(frozen=True, slots=True)
class Snd(Expr):
    expr: Expr


@dataclass(frozen=True, slots=True)
class Inl(Expr):
    other: Type | None
    expr: Expr


@dataclass(frozen=True, slots=True)
class Inr(Expr):
    other: Type | None
    expr: Expr


@dataclass(frozen=True, slots=True)
class Case(Expr):
    scrut: Expr
    left: Expr
    right: Expr
    lname: str = field(default="x", compare=False)
    rname: str = field(default="y", compare=False)


@dataclass(frozen=True, slots=True)
class LabelLeq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Wken(Expr):
    drop: frozenset[int]
    expr: Expr


@dataclass(frozen=True, slots=True)
class Return(Thunk):
    expr: Expr


@dataclass(frozen=True, slots=True)
class Bind(Thunk):
    first: Expr
    then: Expr
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class Unlabel(Thunk):
    expr: Expr


@dataclass(frozen=True, slots=True)
class ToLabeled(Thunk):
    expr: Expr


@dataclass(frozen=True, slots=True)
class LabelOf(Thunk):
    expr: Expr


@dataclass(frozen=True, slots=True)
class GetLabel(Thunk):
    pass


@dataclass(frozen=True, slots=True)
class Taint(Thunk):
    expr: Expr


@dataclass(frozen=True, slots=True)
class New(Thunk):
    kind: RefKind
    expr: Expr


@dataclass(frozen=True, slots=True)
class Read(Thunk):
    ref: Expr


@dataclass(frozen=True, slots=True)
class Write(Thunk):
    ref: Expr
    value: Expr


@dataclass(frozen=True, slots=True)
class LabelOfRef(Thunk):
    ref: Expr


TRUE = Inl(UNIT, Unit())
FALSE = Inr(UNIT, Unit())


def drop_env(env: tuple, drop: frozenset[int]) -> tuple:
    return tuple(v for i, v in enumerate(env) if i not in drop)


def then(first: Expr, rest: Expr) -> Bind:
    """``first; rest`` with ``rest`` written in the outer scope."""
    return Bind(first, shift(rest, 1), "_")


def if_(cond: Expr, yes: Expr, no: Expr) -> Case:
    return Case(cond, shift(yes, 1), shift(no, 1), "_", "_")


def shift(e: Expr, by: int, cutoff: int = 0) -> Expr:
    """Shift free indices ``>= cutoff`` up by ``by >= 0``."""
    match e:
        case Var(i):
            return Var(i + by) if i >= cutoff else e
        case Lam(ann, body, name):
            return Lam(ann, shift(body, by, cutoff + 1), name)
        case Bind(first, rest, name):
            return Bind(shift(first, by, cutoff), shift(rest, by, cutoff + 1), name)
        case Case(s, left, right, ln, rn):
            return Case(shift(s, by, cutoff), shift(left, by, cutoff + 1),
                        shift(right, by, cutoff + 1), ln, rn)
        case Wken(drop, inner):
            moved = {i + by if i >= cutoff else i for i in drop}
            return Wken(frozenset(moved | set(range(cutoff, cutoff + by))), inner)
        case _:
            return map_children(e, lambda c: shift(c, by, cutoff))


def map_children(e: Expr, fn) -> Expr:
    """Apply ``fn`` to the same-scope subexpressions of a non-binding form."""
    match e:
        case App(a, b):
            return App(fn(a), fn(b))
        case Pair(a, b):
            return Pair(fn(a), fn(b))
        case Fst(a):
            return Fst(fn(a))
        case Snd(a):
            return Snd(fn(a))
        case Inl(t, a):
            return Inl(t, fn(a))
        case Inr(t, a):
            return Inr(t, fn(a))
        case LabelLeq(a, b):
            return LabelLeq(fn(a), fn(b))
        case Return(a):
            return Return(fn(a))
        case Unlabel(a):
            return Unlabel(fn(a))
        case ToLabeled(a):
            return ToLabeled(fn(a))
        case LabelOf(a):
            return LabelOf(fn(a))
        case Taint(a):
            return Taint(fn(a))
        case New(k, a):
            return New(k, fn(a))
        case Read(a):
            return Read(fn(a))
        case Write(a, b):
            return Write(fn(a), fn(b))
        case LabelOfRef(a):
            return LabelOfRef(fn(a))
        case Var() | Unit() | LabelLit() | GetLabel():
            return e
    raise TypeError(f"map_children does not handle {type(e).__name__}")


def children(e: Expr) -> list[Expr]:
    match e:
        case Lam(_, body):
            return [body]
        case Bind(a, b):
            return [a, b]
        case Case(s, left, right):
            return [s, left, right]
        case Wken(_, inner):
            return [inner]
        case App(a, b) | Pair(a, b) | LabelLeq(a, b) | Write(a, b):
            return [a, b]
        case (Fst(a) | Snd(a) | Inl(_, a) | Inr(_, a) | Return(a) | Unlabel(a) | ToLabeled(a)
              | LabelOf(a) | Taint(a) | New(_, a) | Read(a) | LabelOfRef(a)):
            return [a]
        case _:
            return []


def size(e: Expr) -> int:
    return 1 + sum(size(c) for c in children(e))
