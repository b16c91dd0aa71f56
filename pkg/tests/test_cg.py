import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from ifcbridge import cg
from ifcbridge.cli.syntax import parse_expr
from ifcbridge.harness import GenConfig
from ifcbridge.harness.inputs import gen_inputs
from ifcbridge.harness.suites import gen_cg_program, gen_cg_pure, run
from ifcbridge.state import EMPTY_STORE, SecurityAbort, Stuck
from ifcbridge.types import BOOL, LIO, UNIT, LabeledT, Sum
from ifcbridge.typing_errors import TypeCheckError

TRUE = cg.InlV(UNIT, cg.UnitV())
FALSE = cg.InrV(UNIT, cg.UnitV())


def force(text, names, env, pc, fuel=1_000, mutant=None, heap=()):
    e = parse_expr(text, "cg", pc.lattice, names)
    return cg.eval_force(EMPTY_STORE, heap, pc, e, tuple(reversed(env)), fuel, mutant=mutant)


def pure(text, lattice=None):
    return cg.eval_pure(parse_expr(text, "cg", lattice), (), 100)


def test_typecheck_examples():
    assert cg.typecheck_cg((), parse_expr("(return unit)", "cg")) == LIO(UNIT)
    assert cg.typecheck_cg((LabeledT(UNIT),), parse_expr("(unlabel x)", "cg", None, ["x"])) == LIO(UNIT)
    assert cg.typecheck_cg((), parse_expr("(tolabeled (return unit))", "cg")) == LIO(LabeledT(UNIT))
    with pytest.raises(TypeCheckError):
        cg.typecheck_cg((UNIT,), parse_expr("(unlabel x)", "cg", None, ["x"]))


def test_pure_thunk_is_a_value():
    e = parse_expr("(return x)", "cg", None, ["x"])
    o = cg.eval_pure(e, (cg.UnitV(),), 10)
    assert o.value == cg.ThunkClo(e, (cg.UnitV(),))


def test_pure_case():
    assert pure("(case (inl unit : unit) x x y unit)").value == cg.UnitV()


def test_pure_application(H):
    assert pure("(app (lam x : label x) H)", H.lattice).value == cg.LabelV(H)


def test_taint_then_return(L, H):
    o = force("(do (taint H) (return x))", ["x"], [TRUE], L)
    assert o == cg.CGFinal(EMPTY_STORE, (), H, TRUE)


def test_unlabel_raises_pc(L, H):
    o = force("(unlabel x)", ["x"], [cg.LabeledV(H, cg.UnitV())], L)
    assert (o.pc, o.value) == (H, cg.UnitV())


def test_to_labeled_restores_pc(L, H):
    o = force("(tolabeled (unlabel x))", ["x"], [cg.LabeledV(H, cg.UnitV())], L)
    assert (o.pc, o.value) == (L, cg.LabeledV(H, cg.UnitV()))


def test_new_below_pc_aborts(L, H):
    o = force("(ref-I x)", ["x"], [cg.LabeledV(L, cg.UnitV())], H)
    assert isinstance(o, SecurityAbort) and o.rule == "New"
    leak = force("(ref-I x)", ["x"], [cg.LabeledV(L, cg.UnitV())], H, mutant="drop-new-pc")
    assert isinstance(leak, cg.CGFinal)


def test_flow_sensitive_upgrade(L, H):
    prog = "(bind (ref-S p) r (do (:= r s) (! r)))"
    o = force(prog, ["p", "s"], [cg.LabeledV(L, TRUE), cg.LabeledV(H, FALSE)], L)
    assert o == cg.CGFinal(EMPTY_STORE, (cg.LabeledV(H, FALSE),), H, FALSE)


def test_flow_insensitive_write_aborts(L, H):
    prog = "(bind (ref-I p) r (do (:= r s) (! r)))"
    o = force(prog, ["p", "s"], [cg.LabeledV(L, TRUE), cg.LabeledV(H, FALSE)], L)
    assert isinstance(o, SecurityAbort) and o.rule == "Write"


CFG = GenConfig(seed=5, max_size=15)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_generated_runs(i):
    rng = CFG.trial_rng(i)
    ctx, t, e = gen_cg_program(CFG, rng)
    inputs = gen_inputs("cg", ctx, CFG.lat, CFG.A, rng)
    pc = rng.choice(CFG.lat.points)
    o = run("cg", inputs, e, pc, CFG.fuel)
    assert not isinstance(o, Stuck)
    if isinstance(o, cg.CGFinal):
        assert CFG.lat.leq(pc, o.pc)
        assert len(o.heap) >= len(inputs.heap)
        assert cg.value_has_type(o.value, t.res)
        assert run("cg", inputs, e, pc, CFG.fuel) == o
        assert run("cg", inputs, e, pc, o.fuel_used) == o


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_pure_preserves_types(i):
    rng = CFG.trial_rng(i)
    ctx, t, e = gen_cg_pure(CFG, rng)
    inputs = gen_inputs("cg", ctx, CFG.lat, CFG.A, rng)
    o = cg.eval_pure(e, inputs.env, CFG.fuel)
    if isinstance(o, cg.PureFinal):
        assert cg.value_has_type(o.value, t)
