import itertools

import pytest
from hypothesis import given, strategies as st

from ifcbridge.lattice import (
    CrossLatticeComparison, DuplicatePoint, NoJoinExists, NotAPartialOrder, UnknownPoint, join,
    lattice_load, leq,
)


def test_two_point(two, L, H):
    assert [p.name for p in two.points] == ["L", "H"]
    assert two.leq(L, H)
    assert not two.leq(H, L)
    assert two.join(L, H) == H
    assert two.bottom == L and two.top == H


def test_powerset_one_is_two_point():
    lat = lattice_load("powerset:1")
    lo, hi = lat["{}"], lat["{p0}"]
    assert len(lat) == 2
    assert lat.leq(lo, hi) and not lat.leq(hi, lo)
    assert lat.join(lo, hi) == hi


def test_powerset_join_is_union():
    lat = lattice_load("powerset:2")
    assert lat.join(lat["{p0}"], lat["{p1}"]) == lat["{p0,p1}"]
    assert not lat.leq(lat["{p0}"], lat["{p1}"])


def test_diamond(diamond):
    a, b = diamond["A"], diamond["B"]
    assert not diamond.leq(a, b) and not diamond.leq(b, a)
    assert diamond.join(a, b) == diamond["top"]


def test_diamond_join_is_least_upper_bound(diamond):
    pts = diamond.points
    for x, y in itertools.product(pts, pts):
        j = diamond.join(x, y)
        assert diamond.leq(x, j) and diamond.leq(y, j)
        assert all(diamond.leq(j, u) for u in pts if diamond.leq(x, u) and diamond.leq(y, u))


def test_join_self(two, L, H):
    for p in (L, H):
        assert two.join(p, p) == p
        assert two.leq(p, p)


def test_errors(two):
    with pytest.raises(DuplicatePoint):
        lattice_load({"points": ["a", "a"]})
    with pytest.raises(NotAPartialOrder):
        lattice_load({"points": ["a", "b"], "order": [["a", "b"], ["b", "a"]]})
    with pytest.raises(NoJoinExists):
        lattice_load({"points": ["a", "b"]})
    with pytest.raises(UnknownPoint):
        two["M"]
    other = lattice_load("two-point")
    with pytest.raises(CrossLatticeComparison):
        leq(two["L"], other["H"])
    with pytest.raises(CrossLatticeComparison):
        join(two["L"], other["H"])


def test_json_roundtrip(diamond):
    again = lattice_load(diamond.to_json())
    for x, y in itertools.product(diamond.points, diamond.points):
        assert again.leq(again[x.name], again[y.name]) == diamond.leq(x, y)


LATTICES = [lattice_load(n) for n in ("two-point", "powerset:2", "powerset:3")]


@st.composite
def three_labels(draw):
    lat = draw(st.sampled_from(LATTICES))
    pick = st.sampled_from(lat.points)
    return lat, draw(pick), draw(pick), draw(pick)


@given(three_labels())
def test_join_semilattice_laws(t):
    lat, a, b, c = t
    assert lat.join(a, b) == lat.join(b, a)
    assert lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c)
    assert lat.join(a, a) == a
    assert lat.leq(a, b) == (lat.join(a, b) == b)
    if lat.leq(a, b) and lat.leq(b, c):
        assert lat.leq(a, c)
