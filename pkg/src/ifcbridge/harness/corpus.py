"""Hand-written programs that leak under specific monitor mutants.

Suites run these before their random trials, so a mutant whose leak needs a
precise program shape is still caught deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import cg, fg
from ..lattice import Label, Lattice
from ..security.bijection import EMPTY, Bijection
from ..state import EMPTY_STORE, Store
from ..types import BOOL, LABEL, LIO, UNIT, LabeledT, Ref, Type
from .inputs import InputPair, Inputs


@dataclass(frozen=True)
class Seed:
    name: str
    calculus: str
    ctx: tuple[Type, ...]
    type: Type
    program: object
    pc: Label
    inputs: InputPair
    targets: tuple[str, ...]  # mutants this program is meant to expose


def _fg_bool(b: bool, lab: Label) -> fg.Value:
    unit = fg.Value(fg.UnitR(), lab.lattice.bottom or lab)
    raw = fg.InlR(UNIT, unit) if b else fg.InrR(UNIT, unit)
    return fg.Value(raw, lab)


def _cg_bool(b: bool) -> cg.Value:
    return cg.InlV(UNIT, cg.UnitV()) if b else cg.InrV(UNIT, cg.UnitV())


def _same(pair_env1, pair_env2, store1=EMPTY_STORE, heap1=(), store2=None, heap2=None,
          beta: Bijection = EMPTY) -> InputPair:
    return InputPair(
        Inputs(store1, tuple(heap1), tuple(pair_env1)),
        Inputs(store1 if store2 is None else store2, tuple(heap1 if heap2 is None else heap2),
               tuple(pair_env2)),
        beta,
    )


def _fg_seeds(pub: Label, sec: Label) -> list[Seed]:
    seeds = []
    # let r = new(p) in (if s then r := s else ()); !r   with ctx (s, p)
    for kind, targets in (("S", ("drop-nsu",)), ("I", ())):
        body = fg.seq(
            fg.Case(fg.Var(1), fg.Write(fg.Var(1), fg.Var(2)), fg.Unit()),
            fg.Read(fg.Var(0)),
        )
        prog = fg.App(fg.Lam(Ref(kind, BOOL), body, "r"), fg.New(kind, fg.Var(1)))
        p = _fg_bool(True, pub)
        seeds.append(Seed(
            f"branch-write-{kind}", "fg", (BOOL, BOOL), BOOL, prog, pub,
            _same([_fg_bool(False, sec), p], [_fg_bool(True, sec), p]), targets,
        ))
    # let r = new(p) in r := s; !r   with ctx (s, p)
    for kind, targets in (("I", ("drop-write-flow",)), ("S", ())):
        body = fg.seq(fg.Write(fg.Var(0), fg.Var(1)), fg.Read(fg.Var(0)))
        prog = fg.App(fg.Lam(Ref(kind, BOOL), body, "r"), fg.New(kind, fg.Var(1)))
        p = _fg_bool(True, pub)
        seeds.append(Seed(
            f"overwrite-{kind}", "fg", (BOOL, BOOL), BOOL, prog, pub,
            _same([_fg_bool(False, sec), p], [_fg_bool(True, sec), p]), targets,
        ))
    # taint(x, ()) where the label x is itself secret
    prog = fg.Taint(fg.Var(0), fg.Unit())
    seeds.append(Seed(
        "taint-secret-label", "fg", (LABEL,), UNIT, prog, pub,
        _same([fg.Value(fg.LabelR(pub), sec)], [fg.Value(fg.LabelR(sec), sec)]),
        ("drop-taint-guard",),
    ))
    return seeds


def _cg_seeds(pub: Label, sec: Label) -> list[Seed]:
    seeds = []
    s1 = cg.LabeledV(sec, _cg_bool(True))
    s2 = cg.LabeledV(sec, _cg_bool(False))
    unit_p = cg.LabeledV(pub, cg.UnitV())
    done = cg.Return(cg.Unit())

    # x <- unlabel s; case x of inl -> new(p); return () | inr -> return ()   ctx (s, p)
    alloc = cg.Bind(cg.New("I", cg.Var(3)), done, "r")
    for name, left, right in (("then", alloc, done), ("else", done, alloc)):
        prog = cg.Bind(cg.Unlabel(cg.Var(0)), cg.Case(cg.Var(0), left, right), "x")
        seeds.append(Seed(
            f"if-secret-then-new-{name}", "cg", (LabeledT(BOOL), LabeledT(UNIT)), LIO(UNIT), prog, pub,
            _same([s1, unit_p], [s2, unit_p]), ("drop-new-pc",),
        ))
    # the same allocation nested under toLabeled, so the final pc stays public
    inner = cg.Bind(cg.Unlabel(cg.Var(0)), cg.Case(cg.Var(0), alloc, done), "x")
    prog = cg.Bind(cg.ToLabeled(inner), done, "_")
    seeds.append(Seed(
        "if-secret-then-new-boxed", "cg", (LabeledT(BOOL), LabeledT(UNIT)), LIO(UNIT), prog, pub,
        _same([s1, unit_p], [s2, unit_p]), ("drop-new-pc",),
    ))

    # x <- unlabel s; case x of inl -> r := p | inr -> return ()   ctx (s, r, p)
    p_true = cg.LabeledV(pub, _cg_bool(True))
    branch = cg.Bind(cg.Unlabel(cg.Var(0)), cg.Case(cg.Var(0), cg.Write(cg.Var(3), cg.Var(4)), done), "x")
    ctx_i = (LabeledT(BOOL), Ref("I", BOOL), LabeledT(BOOL))
    store = Store.of({pub: [_cg_bool(False)]})
    seeds.append(Seed(
        "if-secret-then-write-I", "cg", ctx_i, LIO(UNIT), branch, pub,
        _same([s1, cg.RefIV(pub, 0), p_true], [s2, cg.RefIV(pub, 0), p_true], store1=store),
        ("drop-write-pc",),
    ))
    ctx_s = (LabeledT(BOOL), Ref("S", BOOL), LabeledT(BOOL))
    heap = [cg.LabeledV(pub, _cg_bool(False))]
    seeds.append(Seed(
        "if-secret-then-write-S", "cg", ctx_s, LIO(UNIT), branch, pub,
        _same([s1, cg.RefSV(0), p_true], [s2, cg.RefSV(0), p_true], heap1=heap,
              beta=Bijection.of([(0, 0)])),
        ("drop-fs-nsu",),
    ))
    return seeds


def corpus(calculus: str, lattice: Lattice, attacker: Label) -> list[Seed]:
    """Seeds for ``calculus``; empty when every label is visible to the attacker."""
    secret = [p for p in lattice.points if not lattice.leq(p, attacker)]
    if not secret or not lattice.leq(lattice.bottom or attacker, attacker):
        return []
    pub = lattice.bottom or attacker
    sec = lattice.top if lattice.top in secret else secret[0]
    return _fg_seeds(pub, sec) if calculus == "fg" else _cg_seeds(pub, sec)
