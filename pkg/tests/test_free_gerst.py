from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cobarlab.fields import F2, Q
from cobarlab.free_gerst import (FreeModel, FreeModelError, canonical_bv, elementary_products, hilbert_series,
                                 hilbert_series_pbw, lie_basis)
from cobarlab.vectors import add_into, scaled


def partitions_into(parts, top):
    """Partition counts by dynamic programming (independent of the module)."""
    out = [1] + [0] * top
    for p in parts:
        for n in range(p, top + 1):
            out[n] += out[n - p]
    return out


def test_f2_single_generator_series_is_partition_count():
    direct, pbw = hilbert_series({"x": 1}, F2, 12)
    assert direct == pbw == partitions_into([1, 3, 7], 12)
    assert direct[:9] == [1, 1, 1, 2, 2, 2, 3, 4, 4]


@pytest.mark.parametrize("W, series", [
    ({"x": 1}, [1, 1, 0, 0, 0, 0, 0, 0, 0]),
    ({"x": 2}, [1, 0, 1, 0, 1, 1, 1, 1, 1]),
])
def test_q_series_examples(W, series):
    assert hilbert_series(W, Q, 8) == (series, series)


def test_elementary_products_examples():
    assert [e.key for e in elementary_products({"w": 2}, 8)] == ["w"]
    assert [e.key for e in elementary_products({"w": 1}, 8)] == ["w"]
    keys = [e.key for e in elementary_products({"u": 1, "v": 2}, 7)]
    assert keys[:4] == ["u", "v", "[u;v]", "[u;[u;v]]"]
    assert "[v;[u;v]]" in keys
    # degree = sum of leaf degrees + (weight - 1)
    assert [(e.degree, e.weight) for e in elementary_products({"u": 1, "v": 2}, 7)] == \
        [(1, 1), (2, 1), (4, 2), (6, 3), (7, 3)]
    with pytest.raises(FreeModelError):
        elementary_products({"w": 0}, 4)


def test_q_square_class_only_for_odd_suspension():
    assert [(e.key, e.kind) for e in lie_basis({"x": 2}, Q, 8)] == [("x", "product"), ("[x;x]", "square")]
    assert [e.key for e in lie_basis({"x": 1}, Q, 8)] == ["x"]
    assert [(e.key, e.degree) for e in lie_basis({"x": 1}, F2, 8)] == [("x", 1), ("xi(x)", 3), ("xi(xi(x))", 7)]


def test_degree_three_basis_f2():
    m = FreeModel({"x": 1}, F2, 8)
    assert m.monomials(3) == [("x", "x", "x"), ("xi(x)",)]
    assert m.xi_basis(("x",)) == {("xi(x)",): 1}


def _all_monomials(m, lo, hi):
    return [x for n in range(lo, hi + 1) for x in m.monomials(n)]


def test_canonical_bv_examples():
    m = FreeModel({"x": 2, "y": 1}, Q, 8)
    for g in m.generators():
        assert m.delta_basis(g) == {}
    f = m.field
    for x, y in itertools.product(m.generators(), repeat=2):
        prod = m.multiply_basis(x, y)
        assert m.delta(prod) == scaled(f, m.bracket_basis(x, y), f.sign(m.degree(x)))
    table = canonical_bv(m)
    assert all(m.delta(v) == {} for v in table.values())


def test_canonical_bv_single_even_generator():
    m = FreeModel({"x": 2}, Q, 8)
    table = canonical_bv(m)
    # Delta(x^2) = [x;x], Delta(x^3) = [x;x] x + 2 x [x;x], Delta(x [x;x]) = [x;[x;x]] = 0
    assert table[("x", "x")] == m.bracket_basis(("x",), ("x",)) == {("[x;x]",): 1}
    assert table[("x", "x", "x")] == {("x", "[x;x]"): 3}
    assert table[("x", "[x;x]")] == {}


def test_bv_deviation_identity_on_monomials():
    m = FreeModel({"x": 2, "y": 1}, Q, 8)
    f = m.field
    basis = _all_monomials(m, 1, 7)
    for x in basis:
        for y in basis:
            if m.degree(x) + m.degree(y) + 1 > 8:
                continue
            s = f.sign(m.degree(x))
            lhs = m.delta(m.multiply_basis(x, y))
            add_into(f, lhs, m.multiply(m.delta_basis(x), {y: 1}), -1)
            add_into(f, lhs, m.multiply({x: 1}, m.delta_basis(y)), -s)
            assert lhs == scaled(f, m.bracket_basis(x, y), s)


def _jacobi_and_poisson(m, top):
    f = m.field
    basis = _all_monomials(m, 1, top)
    for a, b, c in itertools.product(basis, repeat=3):
        da, db, dc = m.degree(a), m.degree(b), m.degree(c)
        if da + db + dc + 2 <= top:
            lhs = m.bracket({a: 1}, m.bracket_basis(b, c))
            rhs = m.bracket(m.bracket_basis(a, b), {c: 1})
            add_into(f, rhs, m.bracket({b: 1}, m.bracket_basis(a, c)), f.sign((da + 1) * (db + 1)))
            assert lhs == rhs, (a, b, c)
        if da + db + dc + 1 <= top:
            lhs = m.bracket({a: 1}, m.multiply_basis(b, c))
            rhs = m.multiply(m.bracket_basis(a, b), {c: 1})
            add_into(f, rhs, m.multiply({b: 1}, m.bracket_basis(a, c)), f.sign((da + 1) * db))
            assert lhs == rhs, (a, b, c)


@pytest.mark.parametrize("field", [F2, Q])
def test_structure_constants_satisfy_jacobi_and_poisson(field):
    _jacobi_and_poisson(FreeModel({"x": 1, "y": 2}, field, 6), 6)


def test_restriction_rules_f2():
    m = FreeModel({"x": 1, "y": 2}, F2, 8)
    for a in _all_monomials(m, 1, 3):
        for b in _all_monomials(m, 1, 3):
            if m.degree(a) == m.degree(b) and a != b and 2 * m.degree(a) + 1 <= 8:
                rhs = m.xi_basis(a)
                add_into(F2, rhs, m.bracket_basis(a, b))
                add_into(F2, rhs, m.xi_basis(b))
                assert m.xi({a: 1, b: 1}) == rhs
            if 2 * m.degree(a) + 1 + m.degree(b) + 1 <= 8:
                assert m.bracket(m.xi_basis(a), {b: 1}) == m.bracket({a: 1}, m.bracket_basis(a, b))


@settings(max_examples=20, deadline=None)
@given(st.dictionaries(st.sampled_from("abcd"), st.integers(1, 4), min_size=1, max_size=3),
       st.sampled_from([F2, Q]))
def test_two_series_methods_agree(W, field):
    direct, pbw = hilbert_series(W, field, 12)
    assert direct == pbw == hilbert_series_pbw(W, field, 12)
    m = FreeModel(W, field, 8)
    assert m.dims(8) == direct[:9]
