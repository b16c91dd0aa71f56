"""Greedy counterexample shrinking by subterm replacement."""

from __future__ import annotations

import dataclasses
from collections.abc import Callable, Sequence

from .. import cg, fg
from ..types import Type
from ..typing_errors import TypeCheckError, UnboundVariable
from .gen import CGGen, FGGen, Uninhabitable

Path = tuple[str, ...]


def get_at(e, path: Path):
    for name in path:
        e = getattr(e, name)
    return e


def replace_at(e, path: Path, new):
    if not path:
        return new
    head, rest = path[0], path[1:]
    return dataclasses.replace(e, **{head: replace_at(getattr(e, head), rest, new)})


def minimize(calculus: str, ctx: Sequence[Type], t: Type, e, still_fails: Callable[[object], bool],
             lattice, *, max_rounds: int = 200):
    """Shrink ``e`` while it keeps type ``t`` and ``still_fails`` holds.

    Each step replaces one subterm with the canonical inhabitant of its type
    or with a smaller subterm of the same type, keeping the first change that
    preserves the failure. Deterministic for a given input.
    """
    mod = fg if calculus == "fg" else cg
    check = fg.typecheck_fg if calculus == "fg" else cg.typecheck_cg
    types_of = fg.subterm_types if calculus == "fg" else cg.subterm_types
    gen = FGGen(lattice, None) if calculus == "fg" else CGGen(lattice, None)

    def canon(ty: Type):
        try:
            if calculus == "fg":
                return gen.canon(ty)
            return gen.canon_p((), ty)
        except Uninhabitable:
            return None

    def well_typed(cand) -> bool:
        try:
            return check(ctx, cand) == t
        except (TypeCheckError, UnboundVariable):
            return False

    for _ in range(max_rounds):
        current = mod.size(e)
        table = types_of(ctx, e)
        improved = False
        for path in sorted(table, key=lambda p: (len(p), p)):
            sub = get_at(e, path)
            ty = table[path]
            cands = [canon(ty)]
            cands += [get_at(e, q) for q in sorted(table, key=len)
                      if len(q) > len(path) and q[: len(path)] == path and table[q] == ty]
            for cand in cands:
                if cand is None or cand == sub or mod.size(cand) >= mod.size(sub):
                    continue
                new = replace_at(e, path, cand)
                if mod.size(new) < current and well_typed(new) and still_fails(new):
                    e = new
                    improved = True
                    break
            if improved:
                break
        if not improved:
            return e
    return e
