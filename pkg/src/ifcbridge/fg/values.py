"""Fine-grained values: raw values paired with their intrinsic label."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lattice import Label
from ..types import Type
from .syntax import Expr


class Raw:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Value:
    raw: Raw
    label: Label

    def __str__(self) -> str:
        return show_value(self)


Env = tuple[Value, ...]


@dataclass(frozen=True, slots=True)
class UnitR(Raw):
    pass


@dataclass(frozen=True, slots=True)
class LabelR(Raw):
    label: Label


@dataclass(frozen=True, slots=True)
class Clo(Raw):
    ann: Type | None
    body: Expr
    env: Env
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class InlR(Raw):
    other: Type | None
    value: Value


@dataclass(frozen=True, slots=True)
class InrR(Raw):
    other: Type | None
    value: Value


@dataclass(frozen=True, slots=True)
class PairR(Raw):
    fst: Value
    snd: Value


@dataclass(frozen=True, slots=True)
class RefI(Raw):
    """Flow-insensitive reference: address ``addr`` in the memory labeled ``memory``."""

    memory: Label
    addr: int


@dataclass(frozen=True, slots=True)
class RefS(Raw):
    """Flow-sensitive reference: heap address."""

    addr: int


def raise_label(v: Value, lab: Label) -> Value:
    """Join ``lab`` into the outer label only."""
    joined = v.label.lattice.join(v.label, lab)
    return v if joined == v.label else Value(v.raw, joined)


def show_raw(r: Raw, sugar: bool = False) -> str:
    match r:
        case UnitR():
            return "()"
        case LabelR(lab):
            return lab.name
        case Clo():
            return "<closure>"
        case InlR(_, v):
            return f"inl {show_value(v, sugar)}"
        case InrR(_, v):
            return f"inr {show_value(v, sugar)}"
        case PairR(a, b):
            return f"({show_value(a, sugar)}, {show_value(b, sugar)})"
        case RefI(mem, n):
            return f"{n}_{mem.name}"
        case RefS(n):
            return str(n)
    raise TypeError(r)


def _as_bool(v: Value) -> bool | None:
    """Booleans whose unit payload carries no more than the outer label."""
    match v.raw:
        case InlR(_, Value(UnitR(), lab)) | InrR(_, Value(UnitR(), lab)):
            if lab.lattice.leq(lab, v.label):
                return isinstance(v.raw, InlR)
    return None


def show_value(v: Value, sugar: bool = False) -> str:
    """Print ``v`` with every label; ``sugar`` writes ``true^H`` for a boolean."""
    if sugar and (b := _as_bool(v)) is not None:
        return f"{'true' if b else 'false'}^{v.label.name}"
    inner = show_raw(v.raw, sugar)
    if isinstance(v.raw, (InlR, InrR, PairR)):
        inner = f"({inner})"
    return f"{inner}^{v.label.name}"
