import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from ifcbridge import fg
from ifcbridge.cli.syntax import parse_expr
from ifcbridge.harness import GenConfig
from ifcbridge.harness.suites import gen_fg_program, run
from ifcbridge.harness.inputs import gen_inputs
from ifcbridge.state import EMPTY_STORE, SecurityAbort, Stuck, Timeout
from ifcbridge.types import BOOL, UNIT, Fun, Ref
from ifcbridge.typing_errors import TypeCheckError


def unit(lab):
    return fg.Value(fg.UnitR(), lab)


def boolean(b, lab, inner):
    raw = fg.InlR(UNIT, unit(inner)) if b else fg.InrR(UNIT, unit(inner))
    return fg.Value(raw, lab)


def ev(text, names, env, pc, fuel=1_000, mutant=None, heap=(), store=EMPTY_STORE):
    e = parse_expr(text, "fg", pc.lattice, names)
    return fg.eval_fg(store, heap, e, tuple(reversed(env)), pc, fuel, mutant=mutant)


# typing

def test_typecheck_identity():
    assert fg.typecheck_fg((), parse_expr("(lam x : unit x)", "fg")) == Fun(UNIT, UNIT)


def test_typecheck_new_flow_insensitive():
    assert fg.typecheck_fg((), parse_expr("(ref-I unit)", "fg")) == Ref("I", UNIT)


def test_typecheck_fst_of_unit():
    with pytest.raises(TypeCheckError):
        fg.typecheck_fg((), parse_expr("(fst unit)", "fg"))


# evaluation

def test_var_under_secret_pc(L, H):
    o = ev("x", ["x"], [unit(L)], H)
    assert o == fg.FGFinal(EMPTY_STORE, (), unit(H))


def test_unused_argument_does_not_taint(L, H):
    o = ev("(app (lam x : bool unit) y)", ["y"], [boolean(True, H, L)], L)
    assert o.value == unit(L)


def test_pair(L):
    o = ev("(pair unit unit)", [], [], L)
    assert o.value == fg.Value(fg.PairR(unit(L), unit(L)), L)


def test_get_label(H):
    assert ev("getlabel", [], [], H).value == fg.Value(fg.LabelR(H), H)


def test_label_of(L, H):
    o = ev("(labelof x)", ["x"], [unit(H)], L)
    assert o.value == fg.Value(fg.LabelR(H), H)


def test_taint(L, H):
    assert ev("(taint H x)", ["x"], [unit(L)], L).value == unit(H)


def test_taint_guard(L, H):
    # a secretly chosen public target label would lower the pc
    o = ev("(taint y unit)", ["y"], [fg.Value(fg.LabelR(L), H)], L)
    assert o == SecurityAbort("Taint", "label-of-label <= pc join label")


FS = "(let r (ref-S p) (seq (:= r s) (! r)))"
FI = "(let r (ref-I p) (seq (:= r s) (! r)))"
NSU = "(let r (ref-S p) (seq (if s (:= r s) unit) (! r)))"


def test_flow_sensitive_upgrade(L, H):
    o = ev(FS, ["p", "s"], [boolean(True, L, L), boolean(False, H, L)], L)
    assert isinstance(o, fg.FGFinal)
    assert o.value == boolean(False, H, L)
    assert o.heap == (boolean(False, H, L),)


def test_flow_insensitive_write_aborts(L, H):
    o = ev(FI, ["p", "s"], [boolean(True, L, L), boolean(False, H, L)], L)
    assert isinstance(o, SecurityAbort)
    assert (o.rule, o.check) == ("Write", "value-label <= memory-label")


def test_no_sensitive_upgrade(L, H):
    env = [boolean(True, L, L), boolean(True, H, L)]
    o = ev(NSU, ["p", "s"], env, L)
    assert (o.rule, o.check) == ("Write-FS", "NSU")
    leak = ev(NSU, ["p", "s"], env, L, mutant="drop-nsu")
    assert leak.value == boolean(True, H, L)
    # the false branch never writes, so both monitors agree
    env[1] = boolean(False, H, L)
    assert ev(NSU, ["p", "s"], env, L).value == boolean(True, L, L)


def test_flow_insensitive_read_taints(L, H):
    o = ev("(! (ref-I x))", ["x"], [unit(H)], L)
    assert o.value == unit(H)
    assert o.store.get(H) == (fg.UnitR(),)


def test_timeout(L):
    loop = "(app (lam f : unit unit) unit)"
    assert isinstance(ev(loop, [], [], L, fuel=1), Timeout)


def test_unknown_mutant(L):
    with pytest.raises(ValueError):
        ev("unit", [], [], L, mutant="drop-new-pc")


# properties over generated programs

CFG = GenConfig(seed=11, max_size=15)


def _run_generated(i, fuel=None):
    rng = CFG.trial_rng(i)
    ctx, t, e = gen_fg_program(CFG, rng)
    inputs = gen_inputs("fg", ctx, CFG.lat, CFG.A, rng)
    pc = rng.choice(CFG.lat.points)
    return ctx, t, e, inputs, pc, run("fg", inputs, e, pc, fuel or CFG.fuel)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_generated_runs(i):
    ctx, t, e, inputs, pc, o = _run_generated(i)
    assert not isinstance(o, Stuck)
    if isinstance(o, fg.FGFinal):
        lat = CFG.lat
        assert lat.leq(pc, o.value.label)
        assert len(o.heap) >= len(inputs.heap)
        assert fg.value_has_type(o.value, t)
        # deterministic and monotone in fuel
        assert run("fg", inputs, e, pc, CFG.fuel) == o
        again = run("fg", inputs, e, pc, o.fuel_used)
        assert again == o
        assert isinstance(run("fg", inputs, e, pc, 2 * CFG.fuel), fg.FGFinal)
