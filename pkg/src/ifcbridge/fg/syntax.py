"""Fine-grained calculus: expressions over De Bruijn indices.

Binder names are kept only as printing hints and never take part in equality,
so structural equality is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lattice import Label
from ..types import UNIT, RefKind, Type


class Expr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Expr):
    index: int


@dataclass(frozen=True, slots=True)
class Lam(Expr):
    """``ann`` is the parameter type; ``None`` only for immediately applied lets."""

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
    """``other`` is the type of the right summand."""

    other: Type | None
    expr: Expr


@dataclass(frozen=True, slots=True)
class Inr(Expr):
    """``other`` is the type of the left summand."""

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
class GetLabel(Expr):
    pass


@dataclass(frozen=True, slots=True)
class LabelOf(Expr):
    expr: Expr


@dataclass(frozen=True, slots=True)
class LabelLeq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Taint(Expr):
    label: Expr
    body: Expr


@dataclass(frozen=True, slots=True)
class New(Expr):
    kind: RefKind
    expr: Expr


@dataclass(frozen=True, slots=True)
class Read(Expr):
    ref: Expr


@dataclass(frozen=True, slots=True)
class Write(Expr):
    ref: Expr
    value: Expr


@dataclass(frozen=True, slots=True)
class LabelOfRef(Expr):
    ref: Expr


@dataclass(frozen=True, slots=True)
class Wken(Expr):
    """Evaluate ``expr`` in the environment with the indices in ``drop`` removed."""

    drop: frozenset[int]
    expr: Expr


TRUE = Inl(UNIT, Unit())
FALSE = Inr(UNIT, Unit())


def let(bound: Expr, body: Expr, name: str = "x") -> Expr:
    return App(Lam(None, body, name), bound)


def seq(first: Expr, then: Expr) -> Expr:
    """``first; then`` where ``then`` is written in the outer scope."""
    return let(first, shift(then, 1), "_")


def if_(cond: Expr, then: Expr, other: Expr) -> Expr:
    return Case(cond, shift(then, 1), shift(other, 1), "_", "_")


def drop_env(env: tuple, drop: frozenset[int]) -> tuple:
    return tuple(v for i, v in enumerate(env) if i not in drop)


def shift(e: Expr, by: int, cutoff: int = 0) -> Expr:
    """Shift free indices ``>= cutoff`` up by ``by >= 0``."""
    match e:
        case Var(i):
            return Var(i + by) if i >= cutoff else e
        case Lam(ann, body, name):
            return Lam(ann, shift(body, by, cutoff + 1), name)
        case Case(s, left, right, ln, rn):
            return Case(shift(s, by, cutoff), shift(left, by, cutoff + 1),
                        shift(right, by, cutoff + 1), ln, rn)
        case Wken(drop, inner):
            # The inserted slots are dropped as well, so the inner term is untouched.
            moved = {i + by if i >= cutoff else i for i in drop}
            return Wken(frozenset(moved | set(range(cutoff, cutoff + by))), inner)
        case _:
            return map_children(e, lambda c: shift(c, by, cutoff))


def map_children(e: Expr, fn) -> Expr:
    """Rebuild ``e`` with ``fn`` applied to each direct subexpression that
    stays in the same scope. Binding forms are handled by callers."""
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
        case LabelOf(a):
            return LabelOf(fn(a))
        case LabelLeq(a, b):
            return LabelLeq(fn(a), fn(b))
        case Taint(a, b):
            return Taint(fn(a), fn(b))
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
        case Case(s, left, right):
            return [s, left, right]
        case Wken(_, inner):
            return [inner]
        case App(a, b) | Pair(a, b) | LabelLeq(a, b) | Taint(a, b) | Write(a, b):
            return [a, b]
        case Fst(a) | Snd(a) | Inl(_, a) | Inr(_, a) | LabelOf(a) | New(_, a) | Read(a) | LabelOfRef(a):
            return [a]
        case _:
            return []


def size(e: Expr) -> int:
    return 1 + sum(size(c) for c in children(e))
