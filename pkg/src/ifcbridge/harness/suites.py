"""Executable property suites: non-interference, confinement, monitor
invariants and semantics preservation of both translations."""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass, replace
from typing import Any

from .. import cg, fg
from ..security import (
    CGRelation, FGRelation, bij_extends, bij_identity, ceq_heap, ceq_raw, ceq_store, config_rel,
    find_bijection, valid_inputs_cg, valid_inputs_fg, valid_outputs_cg, valid_outputs_fg,
)
from ..state import SecurityAbort, Stuck, Timeout
from ..translate import (
    cg2fg_expr, cg2fg_state, cg2fg_type, cg2fg_ctx, fg2cg_ctx, fg2cg_expr, fg2cg_state, fg2cg_type,
    fg2cg_value, fg2cg_store, fg2cg_heap,
)
from ..types import LIO, UNIT, Type
from ..typing_errors import TypeCheckError, UnboundVariable
from .config import GenConfig
from .corpus import Seed, corpus
from .gen import CGGen, FGGen
from .inputs import InputPair, Inputs, gen_inputs, gen_leq_inputs
from .minimize import minimize
from .report import (
    FAIL, INCONCLUSIVE, PASS, VACUOUS_ABORT, VACUOUS_TIMEOUT, SuiteReport, TrialReport, outcome_json,
    show_heap, show_program, show_store,
)

FUEL_FACTOR = 8
FUEL_OFFSET = 64
RETRY_FACTOR = 10

# mutant -> (calculus, designated suite)
MUTANTS: dict[str, tuple[str, str]] = {
    "drop-nsu": ("fg", "tini-fg"),
    "drop-write-flow": ("fg", "tini-fg"),
    "drop-taint-guard": ("fg", "tini-fg"),
    "drop-new-pc": ("cg", "tini-cg"),
    "drop-write-pc": ("cg", "tini-cg"),
    "drop-fs-nsu": ("cg", "tini-cg"),
}


def target_fuel(fuel: int) -> int:
    return FUEL_FACTOR * fuel + FUEL_OFFSET


# program generation

def _fg_gen(cfg: GenConfig, rng: random.Random) -> FGGen:
    return FGGen(cfg.lat, rng, cfg.weights, cfg.flow_sensitive_ratio, cfg.max_type_depth)


def _cg_gen(cfg: GenConfig, rng: random.Random) -> CGGen:
    return CGGen(cfg.lat, rng, cfg.weights, cfg.flow_sensitive_ratio, cfg.max_type_depth)


def _bounded(make: Callable[[int], Any], size_of: Callable[[Any], int], rng: random.Random,
             max_size: int):
    """Shrink the size budget until the term fits; None when even size 0 is too big."""
    target = rng.randint(max(1, max_size // 4), max(1, max_size))
    while True:
        e = make(target)
        if size_of(e) <= max_size:
            return e
        if target == 0:
            return None
        target = target * 2 // 3


def gen_fg_program(cfg: GenConfig, rng: random.Random) -> tuple[tuple[Type, ...], Type, fg.Expr]:
    g = _fg_gen(cfg, rng)
    while True:
        ctx = tuple(g.gen_type() for _ in range(rng.randint(1, cfg.max_inputs)))
        t = g.gen_type()
        e = _bounded(lambda n: g.gen(ctx, t, n), fg.size, rng, cfg.max_size)
        if e is not None:
            return ctx, t, e


def gen_cg_program(cfg: GenConfig, rng: random.Random) -> tuple[tuple[Type, ...], Type, cg.Expr]:
    """A closed-over-``ctx`` computation of type ``LIO t``; returns ``(ctx, LIO t, e)``."""
    g = _cg_gen(cfg, rng)
    while True:
        ctx = tuple(g.gen_type() for _ in range(rng.randint(1, cfg.max_inputs)))
        t = g.gen_type()
        e = _bounded(lambda n: g.gen_m(ctx, t, n), cg.size, rng, cfg.max_size)
        if e is not None:
            return ctx, LIO(t), e


def gen_cg_pure(cfg: GenConfig, rng: random.Random) -> tuple[tuple[Type, ...], Type, cg.Expr]:
    g = _cg_gen(cfg, rng)
    while True:
        ctx = tuple(g.gen_type() for _ in range(rng.randint(1, cfg.max_inputs)))
        t = g.gen_type()
        e = _bounded(lambda n: g.gen_p(ctx, t, n) or cg.Unit(), cg.size, rng, cfg.max_size)
        if e is not None and (e != cg.Unit() or t == UNIT):
            return ctx, t, e


def pick_pc(cfg: GenConfig, rng: random.Random, *, public_bias: float = 0.7):
    pub, sec = cfg.public_labels(), cfg.secret_labels()
    if pub and (not sec or rng.random() < public_bias):
        return rng.choice(pub)
    return rng.choice(sec)


def _inputs_kw(cfg: GenConfig) -> dict[str, Any]:
    return {"secret_ratio": cfg.secret_ratio, "fs_ratio": cfg.flow_sensitive_ratio}


# running

def run(calculus: str, inputs: Inputs, e, pc, fuel: int, mutant: str | None = None, observe=None):
    if calculus == "fg":
        return fg.eval_fg(inputs.store, inputs.heap, e, inputs.env, pc, fuel,
                          mutant=mutant, observe=observe)
    return cg.eval_force(inputs.store, inputs.heap, pc, e, inputs.env, fuel, mutant=mutant)


def _final(o) -> bool:
    return isinstance(o, (fg.FGFinal, cg.CGFinal))


def _inputs_json(calculus: str, inputs: Inputs) -> dict[str, Any]:
    show = fg.show_value if calculus == "fg" else cg.show_value
    return {
        "env": {f"v{i}": show(v) for i, v in enumerate(inputs.env)},
        "store": show_store(calculus, inputs.store),
        "heap": show_heap(calculus, inputs.heap),
    }


def _mutant_for(cfg: GenConfig, calculus: str) -> str | None:
    if cfg.mutant is None:
        return None
    if MUTANTS[cfg.mutant][0] != calculus:
        raise ValueError(f"mutant {cfg.mutant} does not apply to the {calculus.upper()} monitor")
    return cfg.mutant


def _suite(name: str, cfg: GenConfig) -> SuiteReport:
    return SuiteReport(name, cfg.describe())


# termination-insensitive non-interference

def tini_verdict(calculus: str, cfg: GenConfig, pair: InputPair, e, pc, mutant, observe=None):
    """Run both sides and judge; returns (verdict, detail, outcomes)."""
    o1 = run(calculus, pair.first, e, pc, cfg.fuel, mutant, observe)
    o2 = run(calculus, pair.second, e, pc, cfg.fuel, mutant)
    outs = [o1, o2]
    if any(isinstance(o, Stuck) for o in outs):
        return FAIL, "well-typed program got stuck", outs
    if any(isinstance(o, Timeout) for o in outs):
        return VACUOUS_TIMEOUT, "", outs
    if any(isinstance(o, SecurityAbort) for o in outs):
        return VACUOUS_ABORT, "", outs
    beta = find_bijection(cfg.A, pair.beta, o1, o2)
    if beta is None or not bij_extends(pair.beta, beta):
        return FAIL, "final configurations are not equivalent under any extension of the bijection", outs
    return PASS, f"bijection {beta!r}", outs


def _tini_trial(calculus: str, cfg: GenConfig, key: str, ctx, t, e, pc, pair: InputPair,
                mutant, observe=None, shrink: bool = True) -> TrialReport:
    verdict, detail, outs = tini_verdict(calculus, cfg, pair, e, pc, mutant, observe)
    report = TrialReport(key, verdict, detail=detail)
    if verdict == FAIL:
        report.program = show_program(calculus, e)
        report.inputs = {"pc": pc.name, "first": _inputs_json(calculus, pair.first),
                         "second": _inputs_json(calculus, pair.second), "beta": repr(pair.beta)}
        report.outcomes = [outcome_json(calculus, o) for o in outs]
        if shrink:
            small = minimize(calculus, ctx, t, e,
                             lambda e2: tini_verdict(calculus, cfg, pair, e2, pc, mutant)[0] == FAIL,
                             cfg.lat)
            report.minimized = show_program(calculus, small)
    return report


def tini_trial(calculus: str, cfg: GenConfig, i: int, observe=None, shrink: bool = True) -> TrialReport:
    rng = cfg.trial_rng(i)
    ctx, t, e = (gen_fg_program if calculus == "fg" else gen_cg_program)(cfg, rng)
    pair = gen_leq_inputs(calculus, ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
    pc = pick_pc(cfg, rng)
    return _tini_trial(calculus, cfg, f"{cfg.seed}/{i}", ctx, t, e, pc, pair,
                       _mutant_for(cfg, calculus), observe, shrink)


def seed_trial(cfg: GenConfig, seed: Seed) -> TrialReport:
    return _tini_trial(seed.calculus, cfg, f"corpus/{seed.name}", seed.ctx, seed.type, seed.program,
                       seed.pc, seed.inputs, _mutant_for(cfg, seed.calculus))


def check_tini(calculus: str, cfg: GenConfig) -> SuiteReport:
    report = _suite(f"tini-{calculus}", cfg)
    for seed in corpus(calculus, cfg.lat, cfg.A):
        report.add(seed_trial(cfg, seed))
    events = {"public": 0, "secret": 0}

    def observe(_kind: str, lab) -> None:
        events["public" if cfg.lat.leq(lab, cfg.A) else "secret"] += 1

    shrink = True
    for i in range(cfg.trials):
        tr = tini_trial(calculus, cfg, i, observe if calculus == "fg" else None, shrink)
        if tr.verdict == FAIL:
            shrink = False  # only the first failure is shrunk
        report.add(tr)
    if calculus == "fg":
        total = events["public"] + events["secret"]
        report.stats["secret_scrutinee_fraction"] = events["secret"] / total if total else 0.0
        report.stats["scrutinee_events"] = total
    return report


# single-run invariants

def _single(calculus: str, cfg: GenConfig, i: int, *, secret_pc: bool):
    rng = cfg.trial_rng(i)
    ctx, t, e = (gen_fg_program if calculus == "fg" else gen_cg_program)(cfg, rng)
    inputs = gen_inputs(calculus, ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
    if secret_pc:
        pc = rng.choice(cfg.secret_labels())
    else:
        pc = rng.choice(cfg.lat.points)
    o = run(calculus, inputs, e, pc, cfg.fuel, _mutant_for(cfg, calculus))
    return ctx, t, e, inputs, pc, o


def _classify(o) -> str | None:
    if isinstance(o, Timeout):
        return VACUOUS_TIMEOUT
    if isinstance(o, SecurityAbort):
        return VACUOUS_ABORT
    return None


def _single_suite(name: str, calculus: str, cfg: GenConfig, secret_pc: bool,
                  holds: Callable[[Inputs, Any, Any], str | None]) -> SuiteReport:
    report = _suite(name, cfg)
    if secret_pc and not cfg.secret_labels():
        raise ValueError("confinement needs a label that does not flow to the attacker")
    for i in range(cfg.trials):
        ctx, t, e, inputs, pc, o = _single(calculus, cfg, i, secret_pc=secret_pc)
        key = f"{cfg.seed}/{i}"
        verdict = _classify(o)
        detail = ""
        if verdict is None:
            if isinstance(o, Stuck):
                verdict, detail = FAIL, f"stuck: {o.reason}"
            else:
                problem = holds(inputs, pc, o)
                verdict, detail = (FAIL, problem) if problem else (PASS, "")
        tr = TrialReport(key, verdict, detail=detail)
        if verdict == FAIL:
            tr.program = show_program(calculus, e)
            tr.inputs = {"pc": pc.name, **_inputs_json(calculus, inputs)}
            tr.outcomes = [outcome_json(calculus, o)]
        report.add(tr)
    return report


def check_confinement(calculus: str, cfg: GenConfig) -> SuiteReport:
    """Runs at a program counter hidden from the attacker leave visible state unchanged."""
    A = cfg.A

    def holds(inputs: Inputs, pc, o) -> str | None:
        n = len(inputs.heap)
        ident = bij_identity(n)
        rel = (FGRelation if calculus == "fg" else CGRelation)(A, ident.related)
        if not rel.store(inputs.store, o.store):
            return "store changed at a visible label"
        if len(o.heap) < n or not all(rel.value(inputs.heap[a], o.heap[a]) for a in range(n)):
            return "heap changed at a visible cell"
        return None

    return _single_suite(f"confinement-{calculus}", calculus, cfg, True, holds)


def check_pc_raise(calculus: str, cfg: GenConfig) -> SuiteReport:
    lat = cfg.lat

    def holds(inputs: Inputs, pc, o) -> str | None:
        if calculus == "fg":
            return None if lat.leq(pc, o.value.label) else "result label below the initial pc"
        return None if lat.leq(pc, o.pc) else "final pc below the initial pc"

    return _single_suite(f"pc-raise-{calculus}", calculus, cfg, False, holds)


def check_valid_invariant(calculus: str, cfg: GenConfig) -> SuiteReport:
    valid_in = valid_inputs_fg if calculus == "fg" else valid_inputs_cg
    valid_out = valid_outputs_fg if calculus == "fg" else valid_outputs_cg

    def holds(inputs: Inputs, pc, o) -> str | None:
        if not valid_in(inputs.store, inputs.heap, inputs.env):
            return "generated inputs are not valid"
        return None if valid_out(o) else "dangling flow-sensitive address in the output"

    return _single_suite(f"valid-{calculus}", calculus, cfg, False, holds)


# semantics preservation

def _with_retry(run_target: Callable[[int], Any], fuel: int):
    o = run_target(target_fuel(fuel))
    if isinstance(o, Timeout):
        o = run_target(RETRY_FACTOR * target_fuel(fuel))
    return o


def check_preservation_fg2cg(cfg: GenConfig) -> SuiteReport:
    """The translated program computes exactly the translated result."""
    report = _suite("fg2cg", cfg)
    report.stats["fg_abort_cg_final"] = 0
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        ctx, t, e = gen_fg_program(cfg, rng)
        inputs = gen_inputs("fg", ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        pc = rng.choice(cfg.lat.points)
        src = fg.eval_fg(inputs.store, inputs.heap, e, inputs.env, pc, cfg.fuel)
        store, heap, env = fg2cg_state(inputs.store, inputs.heap, inputs.env)
        te = fg2cg_expr(e)
        tgt = _with_retry(lambda f: cg.eval_force(store, heap, pc, te, env, f), cfg.fuel)
        verdict, detail = PASS, ""
        match src:
            case Timeout():
                verdict = VACUOUS_TIMEOUT
            case SecurityAbort():
                verdict = VACUOUS_ABORT
                if isinstance(tgt, cg.CGFinal):
                    report.stats["fg_abort_cg_final"] += 1
            case Stuck(reason):
                verdict, detail = FAIL, f"source stuck: {reason}"
            case fg.FGFinal():
                if isinstance(tgt, Timeout):
                    verdict = INCONCLUSIVE
                elif not isinstance(tgt, cg.CGFinal):
                    verdict, detail = FAIL, f"translated program ended with {tgt.kind}"
                elif tgt.pc != pc:
                    verdict, detail = FAIL, "translated program changed the pc"
                elif tgt.value != fg2cg_value(src.value):
                    verdict, detail = FAIL, "result differs from the translated result"
                elif tgt.store != fg2cg_store(src.store) or tgt.heap != fg2cg_heap(src.heap):
                    verdict, detail = FAIL, "final store or heap differs from the translation"
        tr = TrialReport(f"{cfg.seed}/{i}", verdict, detail=detail)
        if verdict == FAIL:
            tr.program = show_program("fg", e)
            tr.inputs = {"pc": pc.name, **_inputs_json("fg", inputs)}
            tr.outcomes = [outcome_json("fg", src), outcome_json("cg", tgt)]
        report.add(tr)
    return report


def _fg_force(e: fg.Expr) -> fg.Expr:
    return fg.App(e, fg.Unit())


def check_preservation_cg2fg(cfg: GenConfig) -> SuiteReport:
    """Forcing the translated computation ends in a related configuration."""
    report = _suite("cg2fg", cfg)
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        ctx, t, e = gen_cg_program(cfg, rng)
        inputs = gen_inputs("cg", ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        pc = rng.choice(cfg.lat.points)
        src = cg.eval_force(inputs.store, inputs.heap, pc, e, inputs.env, cfg.fuel)
        store, heap, env = cg2fg_state(inputs.store, inputs.heap, inputs.env, pc)
        te = _fg_force(cg2fg_expr(e))
        tgt = _with_retry(lambda f: fg.eval_fg(store, heap, te, env, pc, f), cfg.fuel)
        verdict, detail = _relate_cg_fg(src, tgt)
        tr = TrialReport(f"{cfg.seed}/{i}", verdict, detail=detail)
        if verdict == FAIL:
            tr.program = show_program("cg", e)
            tr.inputs = {"pc": pc.name, **_inputs_json("cg", inputs)}
            tr.outcomes = [outcome_json("cg", src), outcome_json("fg", tgt)]
        report.add(tr)
    return report


def _relate_cg_fg(src, tgt) -> tuple[str, str]:
    match src:
        case Timeout():
            return VACUOUS_TIMEOUT, ""
        case SecurityAbort():
            return VACUOUS_ABORT, ""
        case Stuck(reason):
            return FAIL, f"source stuck: {reason}"
    if isinstance(tgt, Timeout):
        return INCONCLUSIVE, ""
    if not isinstance(tgt, fg.FGFinal):
        return FAIL, f"translated program ended with {tgt.kind}"
    if tgt.value.label != src.pc:
        return FAIL, "result label differs from the final pc"
    if not config_rel(tgt, src):
        return FAIL, "final configurations are not related"
    return PASS, ""


def check_preservation_cg2fg_pure(cfg: GenConfig) -> SuiteReport:
    """Pure terms: the translation yields a related value labeled exactly at pc, without effects."""
    report = _suite("cg2fg-pure", cfg)
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        ctx, t, e = gen_cg_pure(cfg, rng)
        inputs = gen_inputs("cg", ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        pc = rng.choice(cfg.lat.points)
        src = cg.eval_pure(e, inputs.env, cfg.fuel)
        store, heap, env = cg2fg_state(inputs.store, inputs.heap, inputs.env, pc)
        te = cg2fg_expr(e)
        tgt = _with_retry(lambda f: fg.eval_fg(store, heap, te, env, pc, f), cfg.fuel)
        verdict, detail = PASS, ""
        if isinstance(src, Timeout):
            verdict = VACUOUS_TIMEOUT
        elif isinstance(src, Stuck):
            verdict, detail = FAIL, f"source stuck: {src.reason}"
        elif isinstance(tgt, Timeout):
            verdict = INCONCLUSIVE
        elif not isinstance(tgt, fg.FGFinal):
            verdict, detail = FAIL, f"translated term ended with {tgt.kind}"
        elif tgt.value.label != pc or not ceq_raw(pc, tgt.value.raw, src.value):
            verdict, detail = FAIL, "result not related at pc"
        elif tgt.store != store or tgt.heap != heap:
            verdict, detail = FAIL, "pure term changed the store or heap"
        tr = TrialReport(f"{cfg.seed}/{i}", verdict, detail=detail)
        if verdict == FAIL:
            tr.program = show_program("cg", e)
            tr.inputs = {"pc": pc.name, **_inputs_json("cg", inputs)}
            tr.outcomes = [outcome_json("fg", tgt)]
        report.add(tr)
    return report


def check_type_preservation(direction: str, cfg: GenConfig) -> SuiteReport:
    """Translated terms typecheck at the translated type."""
    report = _suite(f"types-{direction}", cfg)
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        if direction == "fg2cg":
            ctx, t, e = gen_fg_program(cfg, rng)
            want, te, tctx = LIO(fg2cg_type(t)), fg2cg_expr(e), fg2cg_ctx(ctx)
            check = cg.typecheck_cg
        else:
            ctx, t, e = gen_cg_program(cfg, rng) if rng.random() < 0.5 else gen_cg_pure(cfg, rng)
            want, te, tctx = cg2fg_type(t), cg2fg_expr(e), cg2fg_ctx(ctx)
            check = fg.typecheck_fg
        try:
            got = check(tctx, te)
            verdict, detail = (PASS, "") if got == want else (FAIL, f"got {got}, expected {want}")
        except (TypeCheckError, UnboundVariable) as exc:
            verdict, detail = FAIL, str(exc)
        src_calc = "fg" if direction == "fg2cg" else "cg"
        report.add(TrialReport(f"{cfg.seed}/{i}", verdict,
                               show_program(src_calc, e) if verdict == FAIL else "", detail))
    return report


SUITES: dict[str, Callable[[GenConfig], SuiteReport]] = {
    "tini-fg": lambda cfg: check_tini("fg", cfg),
    "tini-cg": lambda cfg: check_tini("cg", cfg),
    "confinement-fg": lambda cfg: check_confinement("fg", cfg),
    "confinement-cg": lambda cfg: check_confinement("cg", cfg),
    "pc-raise-fg": lambda cfg: check_pc_raise("fg", cfg),
    "pc-raise-cg": lambda cfg: check_pc_raise("cg", cfg),
    "valid-fg": lambda cfg: check_valid_invariant("fg", cfg),
    "valid-cg": lambda cfg: check_valid_invariant("cg", cfg),
    "fg2cg": check_preservation_fg2cg,
    "cg2fg": check_preservation_cg2fg,
    "cg2fg-pure": check_preservation_cg2fg_pure,
    "types-fg2cg": lambda cfg: check_type_preservation("fg2cg", cfg),
    "types-cg2fg": lambda cfg: check_type_preservation("cg2fg", cfg),
}

