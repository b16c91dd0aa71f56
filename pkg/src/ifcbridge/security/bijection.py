"""Finite partial bijections between heap addresses."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field


class NotInjective(ValueError):
    pass


@dataclass(frozen=True)
class Bijection:
    pairs: frozenset[tuple[int, int]]
    fwd: dict[int, int] = field(compare=False, repr=False, hash=False)
    bwd: dict[int, int] = field(compare=False, repr=False, hash=False)

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> Bijection:
        fwd: dict[int, int] = {}
        bwd: dict[int, int] = {}
        for a, b in pairs:
            if fwd.get(a, b) != b or bwd.get(b, a) != a:
                raise NotInjective(f"({a}, {b}) conflicts with an existing pair")
            fwd[a] = b
            bwd[b] = a
        return cls(frozenset(fwd.items()), fwd, bwd)

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def related(self, a: int, b: int) -> bool:
        return self.fwd.get(a) == b

    @property
    def dom(self) -> frozenset[int]:
        return frozenset(self.fwd)

    @property
    def rng(self) -> frozenset[int]:
        return frozenset(self.bwd)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"({a},{b})" for a, b in self) + "}"


EMPTY = Bijection.of(())


def bij_identity(n: int) -> Bijection:
    return Bijection.of((i, i) for i in range(n))


def bij_inverse(b: Bijection) -> Bijection:
    return Bijection.of((y, x) for x, y in b.pairs)


def bij_compose(second: Bijection, first: Bijection) -> Bijection:
    """``second ∘ first``: pairs (a, c) with (a, b) in first and (b, c) in second."""
    return Bijection.of((a, second.fwd[b]) for a, b in first.pairs if b in second.fwd)


def bij_extends(base: Bijection, bigger: Bijection) -> bool:
    """True iff ``bigger ⊇ base``."""
    return base.pairs <= bigger.pairs
