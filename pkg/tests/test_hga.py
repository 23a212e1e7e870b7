from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cobarlab.cobar import cobar, double_cobar
from cobarlab.dgc import double_suspension
from cobarlab.fields import F2, Q
from cobarlab.hga import HgaError, HgaStructure, check_hga_identities
from cobarlab.vectors import add_into, scaled

G = "s^2(x)"
B1, B2 = ((G,),), ((G, G),)
NAMES = ["commutator_homotopy", "cup1_associator", "right_hirsch", "left_hirsch_homotopy"]


def structure(W, field, top, **kw):
    return HgaStructure(double_cobar(double_suspension(W, field), top), **kw)


@pytest.fixture(scope="module")
def f2_sphere():
    return structure({"x": 1}, F2, 7)


@pytest.fixture(scope="module")
def q_wedge():
    return structure({"x": 1, "y": 2}, Q, 7)


def test_cup1_and_restriction_on_b1(f2_sphere):
    h = f2_sphere
    assert h.cup1({B1: 1}, {B1: 1}) == {B2: 1}
    assert h.xi1({B1: 1}) == {B2: 1}
    assert h.multiply({B1: 1}, {B1: 1}) == {B1 + B1: 1}
    with pytest.raises(HgaError):
        h.cup1({(): 1}, {B1: 1})


def test_restriction_needs_char2(q_wedge):
    with pytest.raises(HgaError):
        q_wedge.xi1({B1: 1})
    with pytest.raises(HgaError):
        HgaStructure(cobar(double_suspension({"x": 1}, Q), 4))


def test_identities_hold_to_degree_7(f2_sphere):
    rep = check_hga_identities(f2_sphere, 7)
    assert [r.name for r in rep.results] == NAMES
    assert rep.ok
    assert all(r.checked > 0 for r in rep.results)
    with pytest.raises(HgaError):
        check_hga_identities(structure({"x": 1}, Q, 4), 4)


def test_identity_checker_catches_mutation(f2_sphere):
    honest = f2_sphere.cup1_basis

    def perturbed(x, y):
        v = dict(honest(x, y))
        if (x, y) == (B1, B1):
            add_into(F2, v, {B1 + B1 + B1: 1})
        return v

    bad = HgaStructure(f2_sphere.carrier, cup1_override=perturbed)
    rep = check_hga_identities(bad, 5)
    failing = [r for r in rep.results if not r.ok]
    assert failing and all(r.counterexample for r in failing)
    assert any(B1 in r.counterexample for r in failing)


def words(h, lo, hi):
    return h.words(lo, hi)


def test_bracket_antisymmetry(q_wedge):
    h = q_wedge
    f = h.field
    ws = words(h, 1, 3)
    for x in ws:
        for y in ws:
            if h.degree(x) + h.degree(y) + 1 > 6:
                continue
            l, r = h.bracket({x: 1}, {y: 1}), h.bracket({y: 1}, {x: 1})
            assert l == scaled(f, r, -f.sign((h.degree(x) + 1) * (h.degree(y) + 1)))


def test_cup1_commutator_homotopy_signed(q_wedge):
    """d(a cup1 b) - (da) cup1 b + (-1)^|a| a cup1 (db) = (-1)^(|a|+1) (ab - (-1)^(|a||b|) ba)."""
    h = q_wedge
    f = h.field
    ws = words(h, 1, 3)
    for x in ws:
        for y in ws:
            p, q = h.degree(x), h.degree(y)
            if p + q + 1 > 6:
                continue
            lhs = h.d(h.cup1({x: 1}, {y: 1}))
            dx, dy = h.d({x: 1}), h.d({y: 1})
            if dx:
                add_into(f, lhs, h.cup1(dx, {y: 1}), -1)
            if dy:
                add_into(f, lhs, h.cup1({x: 1}, dy), f.sign(p))
            rhs = {x + y: f.sign(p + 1)}
            add_into(f, rhs, {y + x: 1}, -f.sign(p + 1 + p * q))
            assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}


def test_delta_cm_vanishes_on_one_letter_words(q_wedge):
    h = q_wedge
    assert h.involutive
    for x in words(h, 1, 6):
        if len(x) == 1:
            assert h.delta_cm({x: 1}) == {}


def test_delta_cm_square_zero_and_anticommutes_with_d(q_wedge):
    h = q_wedge
    f = h.field
    for x in words(h, 1, 5):
        dx = h.delta_cm({x: 1})
        assert h.delta_cm(dx) == {}
        lhs = h.d(dx)
        add_into(f, lhs, h.delta_cm(h.d({x: 1})))
        assert lhs == {}


@settings(max_examples=10, deadline=None)
@given(st.dictionaries(st.sampled_from("abc"), st.integers(1, 2), min_size=1, max_size=2))
def test_f2_identities_for_random_W(W):
    assert check_hga_identities(structure(W, F2, 5), 5).ok
