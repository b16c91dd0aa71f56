"""Property suites for the metatheory: bijection laws, laws of L-equivalence,
bijection search against brute force, cross-language equivalence laws, and
lifting/recovery of L-equivalence through both translations."""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Iterator

from .. import cg, fg
from ..security import (
    Bijection, CGInitial, CGRelation, FGInitial, FGRelation, bij_compose, bij_identity,
    bij_inverse, brute_force_bijections, ceq_heap, ceq_store, ceq_value, config_rel,
    find_bijection, find_bijection_cg, find_bijection_fg, leq_cg_final, leq_cg_initial,
    leq_fg_final, leq_fg_initial,
)
from ..security.equiv import _heap_ok
from ..state import SecurityAbort, Stuck, Timeout
from ..translate import (
    cg2fg_env, cg2fg_expr, cg2fg_heap, cg2fg_state, cg2fg_store, cg2fg_value, fg2cg_expr,
    fg2cg_heap, fg2cg_state, fg2cg_store, fg2cg_value,
)
from .config import GenConfig
from .inputs import InputPair, Inputs, gen_inputs, gen_leq_chain, gen_leq_inputs
from .report import FAIL, PASS, VACUOUS_ABORT, VACUOUS_TIMEOUT, SuiteReport, TrialReport
from .suites import (
    _fg_gen, _cg_gen, _inputs_kw, _suite, _with_retry, gen_cg_program, gen_fg_program, pick_pc, run,
)

MAX_BRUTE_HEAP = 6


def _problems(checks: dict[str, bool]) -> str:
    return "; ".join(name for name, ok in checks.items() if not ok)


def _add(report: SuiteReport, key: str, problem: str, program: str = "") -> None:
    if problem:
        report.add(TrialReport(key, FAIL, program, problem))
    else:
        report.add(TrialReport(key, PASS))


# bijections

def partial_bijections(n: int) -> Iterator[Bijection]:
    """Every partial bijection with domain and range inside [0, n)."""
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for rng in itertools.permutations(range(n), k):
                yield Bijection.of(zip(dom, rng))


def random_bijection(rng: random.Random, n1: int, n2: int) -> Bijection:
    k = rng.randint(0, min(n1, n2))
    return Bijection.of(zip(rng.sample(range(n1), k), rng.sample(range(n2), k)))


def identity_law_violations(beta: Bijection, n: int) -> str:
    ident = bij_identity(n)
    checks = {"inverse identity": bij_inverse(ident) == ident,
              "involution": bij_inverse(bij_inverse(beta)) == beta}
    if beta.rng <= ident.dom:
        checks["absorb left"] = bij_compose(ident, beta) == beta
    if beta.dom <= ident.rng:
        checks["absorb right"] = bij_compose(beta, ident) == beta
    # β⁻¹ ∘ β is the identity on dom β
    checks["cancel"] = bij_compose(bij_inverse(beta), beta) == Bijection.of((a, a) for a in beta.dom)
    return _problems(checks)


def check_bijection_laws(cfg: GenConfig, exhaustive_up_to: int = 8) -> SuiteReport:
    """Identity laws on every partial bijection over [0, n) for n ≤ ``exhaustive_up_to``
    (one trial per n), then on ``cfg.trials`` random bijections."""
    report = _suite("bijection-laws", cfg)
    report.stats["exhaustive_cases"] = 0
    for n in range(exhaustive_up_to + 1):
        bad = []
        for beta in partial_bijections(n):
            report.stats["exhaustive_cases"] += 1
            problem = identity_law_violations(beta, n)
            if problem and len(bad) < 5:
                bad.append(f"{beta!r}: {problem}")
        _add(report, f"exhaustive/{n}", "; ".join(bad))
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        n = rng.randint(0, 8)
        # bijections reaching past n exercise the side conditions of the absorb laws
        beta = random_bijection(rng, rng.randint(0, 10), rng.randint(0, 10))
        b2 = random_bijection(rng, 10, 10)
        b3 = random_bijection(rng, 10, 10)
        problem = identity_law_violations(beta, n)
        assoc = bij_compose(b3, bij_compose(b2, beta)) == bij_compose(bij_compose(b3, b2), beta)
        inv = bij_inverse(bij_compose(b2, beta)) == bij_compose(bij_inverse(beta), bij_inverse(b2))
        problem = "; ".join(p for p in (problem, "" if assoc else "associativity",
                                        "" if inv else "inverse of composition") if p)
        _add(report, f"{cfg.seed}/{i}", problem)
    return report


# laws of L-equivalence

def _relation(calculus: str, A, beta: Bijection):
    return (FGRelation if calculus == "fg" else CGRelation)(A, beta.related)


def _related(calculus: str, A, beta: Bijection, x: Inputs, y: Inputs) -> dict[str, bool]:
    rel = _relation(calculus, A, beta)
    return {
        "env": rel.env(x.env, y.env),
        "store": rel.store(x.store, y.store),
        "heap": _heap_ok(beta, x.heap, y.heap, rel.value),
    }


def _widen(rng: random.Random, beta: Bijection, n1: int, n2: int) -> Bijection:
    pairs = dict(beta.fwd)
    free1 = [a for a in range(n1 + 3) if a not in beta.fwd]
    free2 = [b for b in range(n2 + 3) if b not in beta.bwd]
    rng.shuffle(free2)
    for a, b in zip(free1, free2):
        if rng.random() < 0.5:
            pairs[a] = b
    return Bijection.of(pairs.items())


def _gen_ctx(calculus: str, cfg: GenConfig, rng: random.Random):
    g = _fg_gen(cfg, rng) if calculus == "fg" else _cg_gen(cfg, rng)
    return tuple(g.gen_type() for _ in range(rng.randint(1, cfg.max_inputs + 1)))


def leq_law_violations(calculus: str, cfg: GenConfig, rng: random.Random) -> str:
    A = cfg.A
    ctx = _gen_ctx(calculus, cfg, rng)
    (xy, yz) = gen_leq_chain(calculus, ctx, cfg.lat, A, rng, **_inputs_kw(cfg))
    x, y, z = xy.first, xy.second, yz.second
    problems = []

    def expect(name: str, checks: dict[str, bool]) -> None:
        problems.extend(f"{name} ({part})" for part, ok in checks.items() if not ok)

    for label, side in (("x", x), ("y", y), ("z", z)):
        expect(f"reflexivity of {label}", _related(calculus, A, bij_identity(len(side.heap)), side, side))
    expect("premise x≈y", _related(calculus, A, xy.beta, x, y))
    expect("symmetry", _related(calculus, A, bij_inverse(xy.beta), y, x))
    expect("transitivity", _related(calculus, A, bij_compose(yz.beta, xy.beta), x, z))
    # weakening holds for values and stores but not heaps
    wide = _widen(rng, xy.beta, len(x.heap), len(y.heap))
    checks = _related(calculus, A, wide, x, y)
    del checks["heap"]
    expect("weakening", checks)
    return "; ".join(problems)


def check_leq_laws(calculus: str, cfg: GenConfig) -> SuiteReport:
    report = _suite(f"leq-laws-{calculus}", cfg)
    for i in range(cfg.trials):
        _add(report, f"{cfg.seed}/{i}", leq_law_violations(calculus, cfg, cfg.trial_rng(i)))
    return report


def check_square(calculus: str, cfg: GenConfig) -> SuiteReport:
    """Square diagram for heaps: both sides run at a hidden pc; the initial bijection still relates."""
    report = _suite(f"square-{calculus}", cfg)
    A = cfg.A
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        ctx, _t, e = (gen_fg_program if calculus == "fg" else gen_cg_program)(cfg, rng)
        pair = gen_leq_inputs(calculus, ctx, cfg.lat, A, rng, **_inputs_kw(cfg))
        pc = rng.choice(cfg.secret_labels())
        o1 = run(calculus, pair.first, e, pc, cfg.fuel)
        o2 = run(calculus, pair.second, e, pc, cfg.fuel)
        key = f"{cfg.seed}/{i}"
        if not all(isinstance(o, (fg.FGFinal, cg.CGFinal)) for o in (o1, o2)):
            stuck = any(isinstance(o, Stuck) for o in (o1, o2))
            timeout = any(isinstance(o, Timeout) for o in (o1, o2))
            verdict = FAIL if stuck else VACUOUS_TIMEOUT if timeout else VACUOUS_ABORT
            report.add(TrialReport(key, verdict, detail="stuck" if stuck else ""))
            continue
        h1, h2 = len(pair.first.heap), len(pair.second.heap)
        edge1, edge2 = bij_identity(h1), bij_identity(h2)
        start = Inputs(pair.first.store, pair.first.heap, ())
        end1 = Inputs(o1.store, o1.heap, ())
        start2 = Inputs(pair.second.store, pair.second.heap, ())
        end2 = Inputs(o2.store, o2.heap, ())
        closing = bij_compose(edge2, bij_compose(pair.beta, bij_inverse(edge1)))
        checks = {
            "left edge": all(_related(calculus, A, edge1, start, end1).values()),
            "right edge": all(_related(calculus, A, edge2, start2, end2).values()),
            "closing bijection": closing == pair.beta,
            "square": all(_related(calculus, A, pair.beta, end1, end2).values()),
        }
        _add(report, key, _problems(checks))
    return report


# bijection search against brute force

def _finals_pair(calculus: str, cfg: GenConfig, rng: random.Random):
    """Two final configurations, from equivalent inputs or, half the time, unrelated ones."""
    ctx, _t, e = (gen_fg_program if calculus == "fg" else gen_cg_program)(cfg, rng)
    pc = pick_pc(cfg, rng)
    if rng.random() < 0.5:
        pair = gen_leq_inputs(calculus, ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        first, second, base = pair.first, pair.second, pair.beta
    else:
        first = gen_inputs(calculus, ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        second = gen_inputs(calculus, ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        base = Bijection.of(())
    return (run(calculus, first, e, pc, cfg.fuel), run(calculus, second, e, pc, cfg.fuel), base)


def search_disagreement(A, base: Bijection, c1, c2) -> str:
    found = find_bijection(A, base, c1, c2)
    every = brute_force_bijections(A, base, c1, c2)
    if found is None:
        return f"search found nothing but {every[0]!r} relates" if every else ""
    if found not in every:
        return f"search returned {found!r}, which does not relate the configurations"
    if any(not found.pairs <= b.pairs for b in every):
        return f"search result {found!r} is not contained in every relating bijection"
    return ""


def check_search(calculus: str, cfg: GenConfig, max_attempts: int = 50) -> SuiteReport:
    """Every trial draws final configurations until both heaps have at most six cells."""
    report = _suite(f"search-{calculus}", cfg)
    report.stats["found"] = 0
    report.stats["none"] = 0
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        for _ in range(max_attempts):
            c1, c2, base = _finals_pair(calculus, cfg, rng)
            finals = all(isinstance(c, (fg.FGFinal, cg.CGFinal)) for c in (c1, c2))
            if finals and max(len(c1.heap), len(c2.heap)) <= MAX_BRUTE_HEAP:
                break
        else:
            report.add(TrialReport(f"{cfg.seed}/{i}", VACUOUS_TIMEOUT, detail="no small final pair"))
            continue
        problem = search_disagreement(cfg.A, base, c1, c2)
        report.stats["none" if find_bijection(cfg.A, base, c1, c2) is None else "found"] += 1
        _add(report, f"{cfg.seed}/{i}", problem)
    return report


# cross-language equivalence

def check_ceq_laws(cfg: GenConfig) -> SuiteReport:
    """Translation reflexivity of the cross-language relation and its weakening in pc."""
    report = _suite("ceq-laws", cfg)
    lat = cfg.lat
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        ctx = _gen_ctx("cg", cfg, rng)
        inputs = gen_inputs("cg", ctx, lat, cfg.A, rng, **_inputs_kw(cfg))
        pc = rng.choice(lat.points)
        above = [p for p in lat.points if lat.leq(pc, p)]
        checks = {}
        for j, v in enumerate(inputs.env):
            w = cg2fg_value(v, pc)
            checks[f"reflexivity v{j}"] = ceq_value(pc, w, v)
            checks[f"weakening v{j}"] = all(ceq_value(p, w, v) for p in above)
        checks["store"] = ceq_store(cg2fg_store(inputs.store), inputs.store)
        checks["heap"] = ceq_heap(cg2fg_heap(inputs.heap), inputs.heap)
        _add(report, f"{cfg.seed}/{i}", _problems(checks))
    return report


# lifting and recovering L-equivalence through the translations

def _perturbed(calculus: str, cfg: GenConfig, rng: random.Random, ctx, pair: InputPair) -> InputPair:
    """An input pair that is usually not equivalent, with some bijection in bounds."""
    other = gen_inputs(calculus, ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
    beta = random_bijection(rng, len(pair.first.heap), len(other.heap))
    return InputPair(pair.first, other, beta)


def _fg_final_as_cg(c: fg.FGFinal, pc) -> cg.CGFinal:
    return cg.CGFinal(fg2cg_store(c.store), fg2cg_heap(c.heap), pc, fg2cg_value(c.value), c.fuel_used)


def fg2cg_recovery_problem(cfg: GenConfig, e, pc, pair: InputPair) -> tuple[str, str]:
    """Returns (verdict, detail) for one input pair of an FG program."""
    A, beta = cfg.A, pair.beta
    src = [FGInitial(p.store, p.heap, e, p.env) for p in (pair.first, pair.second)]
    te = fg2cg_expr(e)
    tgt = []
    for p in (pair.first, pair.second):
        store, heap, env = fg2cg_state(p.store, p.heap, p.env)
        tgt.append(CGInitial(store, heap, pc, te, env))
    if leq_fg_initial(A, beta, *src) != leq_cg_initial(A, beta, *tgt):
        return FAIL, "translation does not preserve equivalence of initial configurations"
    outs = [fg.eval_fg(p.store, p.heap, e, p.env, pc, cfg.fuel) for p in (pair.first, pair.second)]
    if any(isinstance(o, Stuck) for o in outs):
        return FAIL, "stuck"
    if not all(isinstance(o, fg.FGFinal) for o in outs):
        return (VACUOUS_TIMEOUT if any(isinstance(o, Timeout) for o in outs) else VACUOUS_ABORT), ""
    c1, c2 = outs
    if not (cfg.lat.leq(pc, c1.value.label) and cfg.lat.leq(pc, c2.value.label)):
        return FAIL, "result label below pc"
    t1, t2 = _fg_final_as_cg(c1, pc), _fg_final_as_cg(c2, pc)
    found = find_bijection_cg(A, beta, t1, t2)
    if found is not None and not leq_fg_final(A, found, c1, c2):
        return FAIL, f"target finals related by {found!r} but source finals are not"
    return PASS, ""


def check_recovery_fg2cg(cfg: GenConfig) -> SuiteReport:
    report = _suite("recovery-fg2cg", cfg)
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        ctx, _t, e = gen_fg_program(cfg, rng)
        pair = gen_leq_inputs("fg", ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        pc = pick_pc(cfg, rng)
        verdict, detail = fg2cg_recovery_problem(cfg, e, pc, pair)
        if verdict != FAIL:
            # the converse direction of the lift needs pairs that are not equivalent
            v2, d2 = fg2cg_recovery_problem(cfg, e, pc, _perturbed("fg", cfg, rng, ctx, pair))
            if v2 == FAIL:
                verdict, detail = v2, d2
        report.add(TrialReport(f"{cfg.seed}/{i}", verdict, detail=detail))
    return report


def cg2fg_recovery_problem(cfg: GenConfig, e, pc, pair: InputPair) -> tuple[str, str]:
    A, beta = cfg.A, pair.beta
    src = [CGInitial(p.store, p.heap, pc, e, p.env) for p in (pair.first, pair.second)]
    te = fg.App(cg2fg_expr(e), fg.Unit())
    tgt = [FGInitial(cg2fg_store(p.store), cg2fg_heap(p.heap), te, cg2fg_env(p.env, pc))
           for p in (pair.first, pair.second)]
    if leq_cg_initial(A, beta, *src) and not leq_fg_initial(A, beta, *tgt):
        return FAIL, "translation does not preserve equivalence of initial configurations"
    outs = [cg.eval_force(p.store, p.heap, pc, e, p.env, cfg.fuel) for p in (pair.first, pair.second)]
    if any(isinstance(o, Stuck) for o in outs):
        return FAIL, "stuck"
    if not all(isinstance(o, cg.CGFinal) for o in outs):
        return (VACUOUS_TIMEOUT if any(isinstance(o, Timeout) for o in outs) else VACUOUS_ABORT), ""
    fouts = []
    for p in (pair.first, pair.second):
        store, heap, env = cg2fg_state(p.store, p.heap, p.env, pc)
        fouts.append(_with_retry(lambda f: fg.eval_fg(store, heap, te, env, pc, f), cfg.fuel))
    if not all(isinstance(o, fg.FGFinal) for o in fouts):
        return FAIL, "translated program did not finish"
    d1, d2 = outs
    c1, c2 = fouts
    if not (config_rel(c1, d1) and config_rel(c2, d2)):
        return FAIL, "translated finals are not related to the source finals"
    found = find_bijection_fg(A, beta, c1, c2)
    if found is not None and not leq_cg_final(A, found, d1, d2):
        return FAIL, f"translated finals related by {found!r} but source finals are not"
    return PASS, ""


def check_recovery_cg2fg(cfg: GenConfig) -> SuiteReport:
    report = _suite("recovery-cg2fg", cfg)
    for i in range(cfg.trials):
        rng = cfg.trial_rng(i)
        ctx, _t, e = gen_cg_program(cfg, rng)
        pair = gen_leq_inputs("cg", ctx, cfg.lat, cfg.A, rng, **_inputs_kw(cfg))
        pc = pick_pc(cfg, rng)
        verdict, detail = cg2fg_recovery_problem(cfg, e, pc, pair)
        if verdict != FAIL:
            v2, d2 = cg2fg_recovery_problem(cfg, e, pc, _perturbed("cg", cfg, rng, ctx, pair))
            if v2 == FAIL:
                verdict, detail = v2, d2
        report.add(TrialReport(f"{cfg.seed}/{i}", verdict, detail=detail))
    return report


SUITES: dict[str, Callable[[GenConfig], SuiteReport]] = {
    "bijection-laws": check_bijection_laws,
    "leq-laws-fg": lambda cfg: check_leq_laws("fg", cfg),
    "leq-laws-cg": lambda cfg: check_leq_laws("cg", cfg),
    "square-fg": lambda cfg: check_square("fg", cfg),
    "square-cg": lambda cfg: check_square("cg", cfg),
    "search-fg": lambda cfg: check_search("fg", cfg),
    "search-cg": lambda cfg: check_search("cg", cfg),
    "ceq-laws": check_ceq_laws,
    "recovery-fg2cg": check_recovery_fg2cg,
    "recovery-cg2fg": check_recovery_cg2fg,
}
