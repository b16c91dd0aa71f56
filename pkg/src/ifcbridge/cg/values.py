"""Coarse-grained values. Only ``LabeledV`` carries a label."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lattice import Label
from ..types import Type
from .syntax import Expr, Thunk


class Value:
    __slots__ = ()

    def __str__(self) -> str:
        return show_value(self)


Env = tuple[Value, ...]


@dataclass(frozen=True, slots=True)
class UnitV(Value):
    pass


@dataclass(frozen=True, slots=True)
class LabelV(Value):
    label: Label


@dataclass(frozen=True, slots=True)
class FunClo(Value):
    ann: Type | None
    body: Expr
    env: Env
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class ThunkClo(Value):
    thunk: Thunk
    env: Env


@dataclass(frozen=True, slots=True)
class InlV(Value):
    other: Type | None
    value: Value


@dataclass(frozen=True, slots=True)
class InrV(Value):
    other: Type | None
    value: Value


@dataclass(frozen=True, slots=True)
class PairV(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True, slots=True)
class LabeledV(Value):
    label: Label
    value: Value


@dataclass(frozen=True, slots=True)
class RefIV(Value):
    memory: Label
    addr: int


@dataclass(frozen=True, slots=True)
class RefSV(Value):
    addr: int


def show_value(v: Value, sugar: bool = False) -> str:
    """Print ``v``; ``sugar`` writes ``true``/``false`` for booleans."""
    match v:
        case UnitV():
            return "()"
        case LabelV(lab):
            return lab.name
        case FunClo():
            return "<closure>"
        case ThunkClo():
            return "<thunk>"
        case InlV(_, UnitV()) | InrV(_, UnitV()) if sugar:
            return "true" if isinstance(v, InlV) else "false"
        case InlV(_, w):
            return f"inl {_atom(w, sugar)}"
        case InrV(_, w):
            return f"inr {_atom(w, sugar)}"
        case PairV(a, b):
            return f"({show_value(a, sugar)}, {show_value(b, sugar)})"
        case LabeledV(lab, w):
            return f"Labeled {lab.name} {_atom(w, sugar)}"
        case RefIV(mem, n):
            return f"{n}_{mem.name}"
        case RefSV(n):
            return str(n)
    raise TypeError(v)


def _atom(v: Value, sugar: bool = False) -> str:
    s = show_value(v, sugar)
    return f"({s})" if " " in s and not s.startswith("(") else s
