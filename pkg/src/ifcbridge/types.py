"""Types of both calculi.

FG uses the first six constructors; CG additionally uses ``LIO`` and ``LabeledT``.
``TMeta`` only appears transiently while the checkers infer omitted annotations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

RefKind = Literal["I", "S"]


class Type:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class UnitT(Type):
    def __str__(self) -> str:
        return "unit"


@dataclass(frozen=True, slots=True)
class LabelT(Type):
    def __str__(self) -> str:
        return "label"


@dataclass(frozen=True, slots=True)
class Fun(Type):
    arg: Type
    res: Type

    def __str__(self) -> str:
        return f"(-> {self.arg} {self.res})"


@dataclass(frozen=True, slots=True)
class Sum(Type):
    left: Type
    right: Type

    def __str__(self) -> str:
        if self == BOOL:
            return "bool"
        return f"(+ {self.left} {self.right})"


@dataclass(frozen=True, slots=True)
class Prod(Type):
    fst: Type
    snd: Type

    def __str__(self) -> str:
        return f"(* {self.fst} {self.snd})"


@dataclass(frozen=True, slots=True)
class Ref(Type):
    kind: RefKind
    content: Type

    def __str__(self) -> str:
        return f"(ref-{self.kind} {self.content})"


@dataclass(frozen=True, slots=True)
class LIO(Type):
    res: Type

    def __str__(self) -> str:
        return f"(lio {self.res})"


@dataclass(frozen=True, slots=True)
class LabeledT(Type):
    content: Type

    def __str__(self) -> str:
        return f"(labeled {self.content})"


@dataclass(frozen=True, slots=True)
class TMeta(Type):
    ident: int

    def __str__(self) -> str:
        return f"?{self.ident}"


UNIT = UnitT()
LABEL = LabelT()
BOOL = Sum(UNIT, UNIT)


def type_size(t: Type) -> int:
    match t:
        case Fun(a, b) | Sum(a, b) | Prod(a, b):
            return 1 + type_size(a) + type_size(b)
        case Ref(_, c) | LIO(c) | LabeledT(c):
            return 1 + type_size(c)
        case _:
            return 1


def is_fg_type(t: Type) -> bool:
    match t:
        case UnitT() | LabelT():
            return True
        case Fun(a, b) | Sum(a, b) | Prod(a, b):
            return is_fg_type(a) and is_fg_type(b)
        case Ref(_, c):
            return is_fg_type(c)
        case _:
            return False


class Unifier:
    """Substitution for metavariables introduced by omitted annotations."""

    def __init__(self) -> None:
        self._subst: dict[int, Type] = {}
        self._next = 0

    def fresh(self) -> TMeta:
        self._next += 1
        return TMeta(self._next)

    def resolve(self, t: Type) -> Type:
        while isinstance(t, TMeta) and t.ident in self._subst:
            t = self._subst[t.ident]
        return t

    def zonk(self, t: Type) -> Type:
        t = self.resolve(t)
        match t:
            case Fun(a, b):
                return Fun(self.zonk(a), self.zonk(b))
            case Sum(a, b):
                return Sum(self.zonk(a), self.zonk(b))
            case Prod(a, b):
                return Prod(self.zonk(a), self.zonk(b))
            case Ref(k, c):
                return Ref(k, self.zonk(c))
            case LIO(c):
                return LIO(self.zonk(c))
            case LabeledT(c):
                return LabeledT(self.zonk(c))
            case _:
                return t

    def _occurs(self, ident: int, t: Type) -> bool:
        t = self.resolve(t)
        match t:
            case TMeta(i):
                return i == ident
            case Fun(a, b) | Sum(a, b) | Prod(a, b):
                return self._occurs(ident, a) or self._occurs(ident, b)
            case Ref(_, c) | LIO(c) | LabeledT(c):
                return self._occurs(ident, c)
            case _:
                return False

    def unify(self, a: Type, b: Type) -> bool:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return True
        if isinstance(a, TMeta):
            if self._occurs(a.ident, b):
                return False
            self._subst[a.ident] = b
            return True
        if isinstance(b, TMeta):
            return self.unify(b, a)
        match a, b:
            case (Fun(a1, a2), Fun(b1, b2)) | (Sum(a1, a2), Sum(b1, b2)) | (Prod(a1, a2), Prod(b1, b2)):
                return self.unify(a1, b1) and self.unify(a2, b2)
            case (Ref(k1, c1), Ref(k2, c2)):
                return k1 == k2 and self.unify(c1, c2)
            case (LIO(c1), LIO(c2)) | (LabeledT(c1), LabeledT(c2)):
                return self.unify(c1, c2)
        return False
