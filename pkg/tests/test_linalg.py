from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from regulator_lab.linalg import (SparseMatrix, column_basis, inverse, nullspace, rank, rref,
                                  solve, solve_many)

small_matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


def test_rank_known():
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert rank(SparseMatrix.identity(4)) == 4
    assert rank(SparseMatrix(3, 0)) == 0
    # Hilbert matrix is nonsingular
    H = SparseMatrix.from_dense([[Fraction(1, i + j + 1) for j in range(5)] for i in range(5)])
    assert rank(H) == 5


def test_rref_pivots():
    rows, piv = rref(SparseMatrix.from_dense([[0, 2, 4], [0, 1, 3]]))
    assert piv == [1, 2]
    assert rows[0].get(1) == 1


def test_inverse_and_singular():
    m = SparseMatrix.from_dense([[2, 1], [1, 1]])
    assert m @ inverse(m) == SparseMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        inverse(SparseMatrix.from_dense([[1, 2], [2, 4]]))


def test_solve_inconsistent():
    m = SparseMatrix.from_dense([[1, 1], [1, 1]])
    assert solve(m, [1, 2]) is None
    x = solve(m, [3, 3])
    assert m.apply(x) == [3, 3]


@given(small_matrices)
@settings(max_examples=80, deadline=None)
def test_rank_nullity_and_transpose(rows):
    m = SparseMatrix.from_dense(rows)
    r = rank(m)
    assert r == rank(m.transpose())
    ns = nullspace(m)
    assert r + len(ns) == m.cols
    for v in ns:
        assert not any(m.apply(v))


@given(small_matrices, st.data())
@settings(max_examples=60, deadline=None)
def test_solve_consistent_systems(rows, data):
    m = SparseMatrix.from_dense(rows)
    x0 = data.draw(st.lists(st.integers(-4, 4), min_size=m.cols, max_size=m.cols))
    b = m.apply(x0)
    x = solve(m, b)
    assert x is not None and m.apply(x) == b
    many = solve_many(m, [b, [2 * y for y in b]])
    assert all(s is not None for s in many)


def test_column_basis_greedy():
    vecs = [[1, 0, 0], [2, 0, 0], [0, 1, 0], [1, 1, 0]]
    assert column_basis(vecs, 3) == [0, 2]
