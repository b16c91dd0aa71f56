"""Finite security lattices with interned labels and precomputed join tables."""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any


class LatticeError(Exception):
    """Base class for lattice construction and comparison failures."""


class DuplicatePoint(LatticeError):
    pass


class UnknownPoint(LatticeError):
    pass


class NotAPartialOrder(LatticeError):
    pass


class NoJoinExists(LatticeError):
    pass


class CrossLatticeComparison(LatticeError):
    pass


class Label:
    """A point of one particular lattice. Equality is identity of lattice plus index."""

    __slots__ = ("lattice", "index", "name")

    def __init__(self, lattice: Lattice, index: int, name: str) -> None:
        self.lattice = lattice
        self.index = index
        self.name = name

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Label)
            and self.lattice is other.lattice
            and self.index == other.index
        )

    def __hash__(self) -> int:
        return hash((id(self.lattice), self.index))

    def __lt__(self, other: Label) -> bool:
        # Ordering by index, only used for deterministic output.
        return self.index < other.index

    def __repr__(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.name


class Lattice:
    """A finite join-semilattice. Construct through :func:`lattice_load`."""

    def __init__(self, name: str, points: Sequence[str], order: Iterable[tuple[str, str]]):
        self.name = name
        seen: set[str] = set()
        for p in points:
            if p in seen:
                raise DuplicatePoint(p)
            seen.add(p)
        n = len(points)
        self.points: tuple[Label, ...] = tuple(Label(self, i, p) for i, p in enumerate(points))
        self._by_name = {lab.name: lab for lab in self.points}

        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in order:
            rel[self._index_of(a)][self._index_of(b)] = True
        # Warshall closure gives the reflexive-transitive order.
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    row_k = rel[k]
                    row_i = rel[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if rel[i][j] and rel[j][i]:
                    raise NotAPartialOrder(
                        f"{points[i]} and {points[j]} are mutually ordered"
                    )
        self._leq = rel

        join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                ubs = [k for k in range(n) if rel[i][k] and rel[j][k]]
                least = [k for k in ubs if all(rel[k][m] for m in ubs)]
                if not least:
                    raise NoJoinExists(f"{points[i]} and {points[j]} have no least upper bound")
                join[i][j] = least[0]
        self._join = join

    def _index_of(self, name: str) -> int:
        try:
            return self._by_name[name].index
        except KeyError:
            raise UnknownPoint(name) from None

    def __getitem__(self, name: str) -> Label:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownPoint(name) from None

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"Lattice({self.name!r}, {[p.name for p in self.points]})"

    def _check(self, a: Label, b: Label) -> None:
        if a.lattice is not self or b.lattice is not self:
            raise CrossLatticeComparison(f"{a!r} / {b!r} not both in {self.name}")

    def leq(self, a: Label, b: Label) -> bool:
        self._check(a, b)
        return self._leq[a.index][b.index]

    def join(self, a: Label, b: Label) -> Label:
        self._check(a, b)
        return self.points[self._join[a.index][b.index]]

    def join_all(self, labels: Iterable[Label], start: Label) -> Label:
        out = start
        for lab in labels:
            out = self.join(out, lab)
        return out

    @property
    def bottom(self) -> Label | None:
        for p in self.points:
            if all(self._leq[p.index][q] for q in range(len(self.points))):
                return p
        return None

    @property
    def top(self) -> Label | None:
        for p in self.points:
            if all(self._leq[q][p.index] for q in range(len(self.points))):
                return p
        return None

    def to_json(self) -> dict[str, Any]:
        order = [
            [a.name, b.name]
            for a, b in itertools.product(self.points, self.points)
            if a != b and self.leq(a, b)
        ]
        return {"points": [p.name for p in self.points], "order": order}


def _two_point() -> Lattice:
    return Lattice("two-point", ["L", "H"], [("L", "H")])


def _powerset(k: int) -> Lattice:
    principals = [f"p{i}" for i in range(k)]
    subsets = [
        frozenset(c) for r in range(k + 1) for c in itertools.combinations(principals, r)
    ]

    def name(s: frozenset[str]) -> str:
        return "{" + ",".join(sorted(s, key=lambda p: int(p[1:]))) + "}"

    order = [(name(a), name(b)) for a in subsets for b in subsets if a < b]
    return Lattice(f"powerset:{k}", [name(s) for s in subsets], order)


def lattice_load(desc: str | Mapping[str, Any] | Path) -> Lattice:
    """Build a lattice from a builtin name, a JSON-style mapping, or a JSON file path.

    Builtins are ``"two-point"`` and ``"powerset:k"``.
    """
    if isinstance(desc, Path):
        return lattice_load(json.loads(desc.read_text()))
    if isinstance(desc, str):
        if desc == "two-point":
            return _two_point()
        if desc.startswith("powerset:"):
            k = int(desc.split(":", 1)[1])
            if not 0 <= k <= 6:
                raise LatticeError("powerset lattices support 0..6 principals")
            return _powerset(k)
        path = Path(desc)
        if path.suffix == ".json" and path.exists():
            return lattice_load(path)
        raise LatticeError(f"unknown lattice {desc!r}")
    points = list(desc["points"])
    order = [(a, b) for a, b in desc.get("order", [])]
    return Lattice(str(desc.get("name", "custom")), points, order)


def leq(a: Label, b: Label) -> bool:
    if a.lattice is not b.lattice:
        raise CrossLatticeComparison(f"{a!r} / {b!r}")
    return a.lattice.leq(a, b)


def join(a: Label, b: Label) -> Label:
    if a.lattice is not b.lattice:
        raise CrossLatticeComparison(f"{a!r} / {b!r}")
    return a.lattice.join(a, b)
