import pytest
from hypothesis import given, strategies as st

from ifcbridge import cg, fg
from ifcbridge.security import (
    EMPTY, Bijection, NotInjective, bij_compose, bij_extends, bij_identity, bij_inverse,
    brute_force_bijections, ceq, find_bijection, leq_cg, leq_cg_final, leq_fg, leq_fg_heap, valid,
    valid_outputs_fg,
)
from ifcbridge.state import EMPTY_STORE
from ifcbridge.types import UNIT


def u(lab):
    return fg.Value(fg.UnitR(), lab)


def fbool(b, lab, inner):
    return fg.Value((fg.InlR if b else fg.InrR)(UNIT, u(inner)), lab)


def fs(n, lab):
    return fg.Value(fg.RefS(n), lab)


# bijections

def test_bijection_examples():
    assert bij_inverse(bij_identity(3)) == bij_identity(3)
    b = Bijection.of([(0, 1)])
    assert bij_compose(bij_identity(2), b) == b
    assert bij_inverse(Bijection.of([(0, 1), (2, 0)])) == Bijection.of([(1, 0), (0, 2)])
    assert bij_extends(EMPTY, b) and not bij_extends(b, EMPTY)
    assert len(EMPTY) == 0 and EMPTY is not None


def test_bijection_rejects_conflicts():
    with pytest.raises(NotInjective):
        Bijection.of([(0, 1), (0, 2)])
    with pytest.raises(NotInjective):
        Bijection.of([(0, 1), (2, 1)])


pairs = st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=8)


def _bij(ps):
    fwd, bwd = {}, {}
    for a, b in ps:
        if a not in fwd and b not in bwd:
            fwd[a], bwd[b] = b, a
    return Bijection.of(fwd.items())


@given(pairs, pairs, pairs)
def test_bijection_algebra(p1, p2, p3):
    b1, b2, b3 = _bij(p1), _bij(p2), _bij(p3)
    assert bij_inverse(bij_inverse(b1)) == b1
    assert bij_compose(b3, bij_compose(b2, b1)) == bij_compose(bij_compose(b3, b2), b1)
    assert bij_inverse(bij_compose(b2, b1)) == bij_compose(bij_inverse(b1), bij_inverse(b2))
    n = 9
    assert bij_compose(bij_identity(n), b1) == b1 == bij_compose(b1, bij_identity(n))


# L-equivalence

def test_leq_fg_examples(L, H):
    assert leq_fg(L, EMPTY, u(L), u(L))
    assert leq_fg(L, EMPTY, fbool(True, H, L), fbool(False, H, L))
    assert not leq_fg(L, EMPTY, fbool(True, L, L), fbool(False, L, L))
    assert leq_fg(L, Bijection.of([(0, 1)]), fs(0, L), fs(1, L))
    assert not leq_fg(L, bij_identity(1), fs(0, L), fs(1, L))


def test_leq_fg_heap(L, H):
    # a public cell must be matched by the bijection; secret ones need not be
    beta = Bijection.of([(0, 1)])
    assert leq_fg_heap(L, beta, (u(L),), (u(H), u(L)))
    assert not leq_fg_heap(L, beta, (u(L),), (u(L), u(H)))


def test_leq_cg_examples(L, H):
    x, y = cg.UnitV(), cg.InlV(UNIT, cg.UnitV())
    assert not leq_cg(L, EMPTY, cg.LabeledV(H, x), cg.LabeledV(L, y))
    assert leq_cg(L, EMPTY, cg.LabeledV(H, x), cg.LabeledV(H, y))
    t = cg.Return(cg.Var(0))
    assert leq_cg(L, EMPTY, cg.ThunkClo(t, (cg.LabeledV(H, x),)), cg.ThunkClo(t, (cg.LabeledV(H, y),)))
    high = cg.CGFinal(EMPTY_STORE, (), H, x)
    assert leq_cg_final(L, EMPTY, high, cg.CGFinal(EMPTY_STORE, (), H, y))
    assert not leq_cg_final(L, EMPTY, cg.CGFinal(EMPTY_STORE, (), L, x), cg.CGFinal(EMPTY_STORE, (), L, y))


# validity

def test_valid_examples(L):
    assert not valid_outputs_fg(fg.FGFinal(EMPTY_STORE, (fs(1, L),), u(L)))
    assert valid(0, fg.Value(fg.RefI(L, 5), L))
    assert valid(1, fs(0, L)) and not valid(1, fs(1, L))
    assert valid(1, cg.RefSV(0)) and not valid(1, cg.LabeledV(L, cg.RefSV(1)))


# bijection search

def test_find_bijection_examples(L, H):
    c1 = fg.FGFinal(EMPTY_STORE, (u(L),), fs(0, L))
    c2 = fg.FGFinal(EMPTY_STORE, (u(H), u(L)), fs(1, L))
    assert find_bijection(L, EMPTY, c1, c2) == Bijection.of([(0, 1)])
    assert brute_force_bijections(L, EMPTY, c1, c2) == [Bijection.of([(0, 1)])]
    same = fg.FGFinal(EMPTY_STORE, (u(L), u(H)), fs(1, L))
    assert find_bijection(L, bij_identity(2), same, same) == bij_identity(2)
    t1 = fg.FGFinal(EMPTY_STORE, (), fbool(True, L, L))
    t2 = fg.FGFinal(EMPTY_STORE, (), fbool(False, L, L))
    assert find_bijection(L, EMPTY, t1, t2) is None
    assert brute_force_bijections(L, EMPTY, t1, t2) == []


# cross-language equivalence

def test_ceq_examples(L, H):
    assert ceq(H, fbool(True, H, L), cg.InlV(UNIT, cg.UnitV()))
    labeled = fg.Value(fg.PairR(fg.Value(fg.LabelR(H), H), u(H)), L)
    assert ceq(L, labeled, cg.LabeledV(H, cg.UnitV()))
    assert not ceq(L, u(H), cg.UnitV())
    assert ceq(H, u(L), cg.UnitV())
