from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cobarlab.fields import F2, Q, field_from_name
from cobarlab.linalg import (ColumnSpaceSolver, CompositionNonzeroError, SparseMatrix, homology, kernel_basis,
                             rank, rref)


def test_field_normal_forms():
    assert Q(Fraction(4, 6)) == Fraction(2, 3)
    assert Q(Fraction(-2, -4)) == Fraction(1, 2)
    assert Q(Fraction(6, 3)) == 2 and isinstance(Q(Fraction(6, 3)), int)
    assert F2(3) == 1 and F2(-1) == 1 and F2(4) == 0
    assert F2(Fraction(3, 5)) == 1
    with pytest.raises(ZeroDivisionError):
        F2(Fraction(1, 2))
    assert field_from_name("F2") is F2 and field_from_name("Q") is Q


def test_rref_examples():
    R, piv, _ = rref(SparseMatrix.identity(2, Q))
    assert R == SparseMatrix.identity(2, Q) and piv == [0, 1]
    R, piv, _ = rref(SparseMatrix.from_dense(F2, [[1, 1], [1, 1]]))
    assert R.to_dense() == [[1, 1], [0, 0]] and piv == [0]
    R, piv, _ = rref(SparseMatrix.from_dense(Q, [[2, 4], [1, 2]]))
    assert R.to_dense() == [[1, 2], [0, 0]]


def test_kernel_examples():
    assert kernel_basis(SparseMatrix.zero(2, 2, Q)) == [{0: 1}, {1: 1}]
    assert kernel_basis(SparseMatrix.identity(3, Q)) == []
    assert kernel_basis(SparseMatrix.from_dense(F2, [[1, 1]])) == [{0: 1, 1: 1}]


def test_homology_examples():
    assert homology(SparseMatrix.zero(3, 0, Q), SparseMatrix.zero(0, 3, Q)).dimension == 3
    assert homology(SparseMatrix.identity(2, Q), SparseMatrix.zero(0, 2, Q)).dimension == 0
    d = SparseMatrix.from_dense(Q, [[1, 1]])
    assert homology(SparseMatrix.zero(2, 0, Q), d).dimension == 1


def test_homology_rejects_nonzero_composite():
    a = SparseMatrix.identity(1, Q)
    with pytest.raises(CompositionNonzeroError):
        homology(a, a)


def test_entries_canonical():
    m = SparseMatrix.from_entries(2, 2, Q, [(1, 0, 3), (0, 1, 2), (1, 0, -3), (0, 0, Fraction(1, 2))])
    assert m.entries == [(0, 0, Fraction(1, 2)), (0, 1, 2)]


def _matrices(field):
    entry = st.sampled_from([0, 1]) if field is F2 else st.sampled_from([0, 0, 1, -1, 2, Fraction(1, 2)])
    return st.integers(1, 5).flatmap(
        lambda r: st.integers(1, 5).flatmap(
            lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)))


@pytest.mark.parametrize("field", [F2, Q])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_rank_nullity_and_transform(field, data):
    dense = data.draw(_matrices(field))
    m = SparseMatrix.from_dense(field, dense)
    R, piv, transform = rref(m)
    assert rank(m) == len(piv)
    assert len(kernel_basis(m)) == m.cols - len(piv)
    for v in kernel_basis(m):
        assert not m.apply(v)
    rows = [m.row(i) for i in range(m.rows)]
    for i, tr in enumerate(transform):
        acc = {}
        for j, c in tr.items():
            for k, v in rows[j].items():
                acc[k] = field.reduce(acc.get(k, 0) + c * v)
        assert {k: v for k, v in acc.items() if v} == R.row(i)
    # RREF of an RREF is itself
    assert rref(R)[0] == R


@pytest.mark.parametrize("field", [F2, Q])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_solver_roundtrip(field, data):
    m = SparseMatrix.from_dense(field, data.draw(_matrices(field)))
    x = {j: data.draw(st.sampled_from([0, 1, 2])) for j in range(m.cols)}
    b = m.apply(x)
    sol = ColumnSpaceSolver(m).solve(b)
    assert sol is not None and m.apply(sol) == b


@pytest.mark.parametrize("field", [F2, Q])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_homology_of_random_composable_pair(field, data):
    # d1 = A, d0 = B with B A = 0 built as B = K^T-style projection onto coker
    a = SparseMatrix.from_dense(field, data.draw(_matrices(field)))
    left_kernel = kernel_basis(a.transpose())
    rows = left_kernel[: data.draw(st.integers(0, len(left_kernel)))]
    b = SparseMatrix(len(rows), a.rows, field, [dict(r) for r in rows])
    h = homology(a, b)
    assert h.dimension == a.rows - rank(b) - rank(a)
    for rep in h.representatives:
        assert h.is_cycle(rep) and not h.is_boundary(rep)
    for col in a.columns():
        assert h.is_boundary(col)
