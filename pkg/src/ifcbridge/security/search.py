"""Finding the bijection that witnesses equivalence of two final configurations."""

from __future__ import annotations

import itertools
from collections.abc import Iterator

from ..cg.eval import CGFinal
from ..fg.eval import FGFinal
from ..lattice import Label
from .bijection import Bijection
from .equiv import CGRelation, FGRelation, cg_final_outputs_related, leq_cg_final, leq_fg_final


class _Forced:
    """Address relation that records every pair the traversal demands."""

    def __init__(self, base: Bijection, n1: int, n2: int) -> None:
        self.fwd = dict(base.fwd)
        self.bwd = dict(base.bwd)
        self.n1, self.n2 = n1, n2
        self.pending = sorted(base.pairs)

    def __call__(self, a: int, b: int) -> bool:
        if a in self.fwd:
            return self.fwd[a] == b
        if b in self.bwd or not (0 <= a < self.n1 and 0 <= b < self.n2):
            return False
        self.fwd[a] = b
        self.bwd[b] = a
        self.pending.append((a, b))
        return True

    def drain(self, cell_rel, h1, h2) -> bool:
        while self.pending:
            a, b = self.pending.pop()
            if not (0 <= a < len(h1) and 0 <= b < len(h2)):
                return False
            if not cell_rel(h1[a], h2[b]):
                return False
        return True


def find_bijection_fg(A: Label, base: Bijection, c1: FGFinal, c2: FGFinal) -> Bijection | None:
    """Least extension of ``base`` relating the two configurations, if any exists."""
    forced = _Forced(base, len(c1.heap), len(c2.heap))
    rel = FGRelation(A, forced)
    ok = (
        rel.store(c1.store, c2.store)
        and rel.value(c1.value, c2.value)
        and forced.drain(rel.value, c1.heap, c2.heap)
    )
    if not ok:
        return None
    beta = Bijection.of(forced.fwd.items())
    return beta if leq_fg_final(A, beta, c1, c2) else None


def find_bijection_cg(A: Label, base: Bijection, c1: CGFinal, c2: CGFinal) -> Bijection | None:
    forced = _Forced(base, len(c1.heap), len(c2.heap))
    rel = CGRelation(A, forced)
    ok = (
        rel.store(c1.store, c2.store)
        and cg_final_outputs_related(rel, c1, c2)
        and forced.drain(rel.value, c1.heap, c2.heap)
    )
    if not ok:
        return None
    beta = Bijection.of(forced.fwd.items())
    return beta if leq_cg_final(A, beta, c1, c2) else None


def find_bijection(A: Label, base: Bijection, c1, c2) -> Bijection | None:
    if isinstance(c1, FGFinal):
        return find_bijection_fg(A, base, c1, c2)
    return find_bijection_cg(A, base, c1, c2)


def extensions(base: Bijection, n1: int, n2: int) -> Iterator[Bijection]:
    """Every partial bijection ``β ⊇ base`` with dom ⊆ [0, n1) and rng ⊆ [0, n2)."""
    if any(a >= n1 or b >= n2 for a, b in base.pairs):
        return
    free1 = [a for a in range(n1) if a not in base.fwd]
    free2 = [b for b in range(n2) if b not in base.bwd]
    for k in range(min(len(free1), len(free2)) + 1):
        for left in itertools.combinations(free1, k):
            for right in itertools.permutations(free2, k):
                yield Bijection.of(list(base.pairs) + list(zip(left, right)))


def brute_force_bijections(A: Label, base: Bijection, c1, c2) -> list[Bijection]:
    """All extensions of ``base`` under which the final configurations are related."""
    check = leq_fg_final if isinstance(c1, FGFinal) else leq_cg_final
    return [b for b in extensions(base, len(c1.heap), len(c2.heap)) if check(A, b, c1, c2)]
