"""Hypothesis drives the per-trial oracles of the property suites with arbitrary seeds,
on the two-point lattice and on a four-point powerset."""

import random

from hypothesis import HealthCheck, given, settings, strategies as st

from ifcbridge import cg, fg
from ifcbridge.harness import PASS, FAIL, GenConfig, gen_leq_inputs
from ifcbridge.harness.metatheory import (
    cg2fg_recovery_problem, fg2cg_recovery_problem, leq_law_violations,
)
from ifcbridge.harness.suites import (
    gen_cg_program, gen_fg_program, pick_pc, tini_trial,
)
from ifcbridge.security import ceq_value
from ifcbridge.translate import cg2fg_value

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
CONFIGS = [GenConfig(seed=0, max_size=15),
           GenConfig(seed=0, max_size=15, lattice="powerset:2", attacker="{p0}")]

seeds = st.integers(0, 2**32)
configs = st.sampled_from(CONFIGS)
calculi = st.sampled_from(["fg", "cg"])


@SETTINGS
@given(configs, calculi, seeds)
def test_tini(cfg, calculus, seed):
    assert tini_trial(calculus, cfg, seed, shrink=False).verdict != FAIL


@SETTINGS
@given(configs, calculi, seeds)
def test_leq_laws(cfg, calculus, seed):
    assert leq_law_violations(calculus, cfg, random.Random(seed)) == ""


@SETTINGS
@given(configs, seeds)
def test_ceq_reflexive_and_weakens(cfg, seed):
    rng = random.Random(seed)
    ctx, _, _ = gen_cg_program(cfg, rng)
    inputs = gen_leq_inputs("cg", ctx, cfg.lat, cfg.A, rng).first
    lat = cfg.lat
    pc = rng.choice(lat.points)
    for v in inputs.env:
        w = cg2fg_value(v, pc)
        assert all(ceq_value(p, w, v) for p in lat.points if lat.leq(pc, p))


@SETTINGS
@given(configs, seeds)
def test_fg2cg_recovery(cfg, seed):
    rng = random.Random(seed)
    ctx, _, e = gen_fg_program(cfg, rng)
    pair = gen_leq_inputs("fg", ctx, cfg.lat, cfg.A, rng)
    verdict, detail = fg2cg_recovery_problem(cfg, e, pick_pc(cfg, rng), pair)
    assert verdict != FAIL, detail


@SETTINGS
@given(configs, seeds)
def test_cg2fg_recovery(cfg, seed):
    rng = random.Random(seed)
    ctx, _, e = gen_cg_program(cfg, rng)
    pair = gen_leq_inputs("cg", ctx, cfg.lat, cfg.A, rng)
    verdict, detail = cg2fg_recovery_problem(cfg, e, pick_pc(cfg, rng), pair)
    assert verdict != FAIL, detail
