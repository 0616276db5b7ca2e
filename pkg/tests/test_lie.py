from fractions import Fraction
from itertools import permutations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from regulator_lab.complexes import CohomologyClass, betti_list, class_is_zero
from regulator_lab.lie import (ExteriorCochain, ce_complex, ce_differential, conjugate,
                               exterior_basis, gl, invariant_polynomials, perm_sign,
                               poincare_exterior_primitives, primitive_element, restrict_cochain,
                               trace_form, trace_power)


def test_bracket_matches_matrix_commutator():
    L = gl(3)
    for a in range(L.dim):
        for b in range(L.dim):
            A, B = L.matrix(a), L.matrix(b)
            comm = [[sum(A[i][k] * B[k][j] - B[i][k] * A[k][j] for k in range(3))
                     for j in range(3)] for i in range(3)]
            assert L.bracket({a: 1}, {b: 1}) == L.from_matrix(comm)


def test_perm_sign():
    assert perm_sign((0, 1, 2)) == 1
    assert perm_sign((1, 0, 2)) == -1
    assert perm_sign((2, 0, 1)) == 1
    assert perm_sign((0, 0)) == 0


def test_exterior_basis_sizes():
    assert [len(exterior_basis(4, k)) for k in range(5)] == [comb(4, k) for k in range(5)]


def test_poincare_polynomials():
    assert poincare_exterior_primitives(1) == [1, 1]
    assert poincare_exterior_primitives(2) == [1, 1, 0, 1, 1]
    assert poincare_exterior_primitives(3) == [1, 1, 0, 1, 1, 1, 1, 0, 1, 1]


@pytest.mark.parametrize("N", [1, 2])
def test_ce_betti_small(N):
    assert betti_list(ce_complex(N)) == poincare_exterior_primitives(N)


def test_ce_differential_on_degree_one():
    # (dc)(x, y) = -c([x, y]); d E11^v evaluated on (E12, E21) is -1
    L = gl(2)
    c = ExteriorCochain(L, 1, {(L.index(0, 0),): 1})
    dc = ce_differential(c)
    assert dc.evaluate_basis((L.index(0, 1), L.index(1, 0))) == -1
    assert ce_differential(trace_form(2)).is_zero()


def test_p1_is_trace():
    for N in (1, 2, 3):
        assert primitive_element(1, N) == trace_form(N)


def test_p2_value_matches_definition():
    # p_2(x1,x2,x3) = (1!)^2/3! * sum_sigma sgn Tr(x_s1 x_s2 x_s3)
    L = gl(2)
    p2 = primitive_element(2, 2)
    keys = [L.index(0, 1), L.index(1, 0), L.index(0, 0)]
    mats = [L.matrix(a) for a in keys]
    total = 0
    for perm in permutations(range(3)):
        M = [[1 if i == j else 0 for j in range(2)] for i in range(2)]
        for s in perm:
            M = [[sum(M[i][k] * mats[s][k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        total += perm_sign(perm) * (M[0][0] + M[1][1])
    assert p2.evaluate_basis(keys) == Fraction(total, 6)


@pytest.mark.parametrize("n,N", [(1, 1), (1, 2), (2, 2)])
def test_primitive_closed_and_nonzero(n, N):
    p = primitive_element(n, N)
    assert ce_differential(p).is_zero()
    assert not class_is_zero(CohomologyClass.cocycle(ce_complex(N), 2 * n - 1, p.to_vector()))


def test_restriction_of_p2():
    assert restrict_cochain(primitive_element(2, 3), 2) == primitive_element(2, 2)


def test_primitive_out_of_range():
    with pytest.raises(ValueError):
        primitive_element(3, 2)


@pytest.mark.parametrize("n,N,expected", [(1, 1, 1), (2, 1, 1), (1, 2, 1), (2, 2, 2), (3, 2, 2),
                                          (2, 3, 2), (3, 3, 3)])
def test_invariant_dims_are_partition_counts(n, N, expected):
    # (Sym^n gl_N^v)^{gl_N} has a basis of products of Tr(X^k), k <= N
    assert len(invariant_polynomials(n, N)) == expected


def test_trace_power_invariant_under_conjugation():
    P = trace_power(3, 2)
    assert P.is_invariant()
    X = [[Fraction(1), Fraction(2)], [Fraction(-1), Fraction(3)]]
    g = [[2, 1], [1, 1]]
    assert P.evaluate(X) == P.evaluate(conjugate(X, g))
    # Tr(X^3) for this X
    X2 = [[sum(X[i][k] * X[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    X3 = [[sum(X2[i][k] * X[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert P.evaluate(X) == X3[0][0] + X3[1][1]


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=30, deadline=None)
def test_wedge_graded_commutative(u, v):
    L = gl(2)
    a = ExteriorCochain(L, 1, {(i,): x for i, x in enumerate(u) if x})
    b = ExteriorCochain(L, 1, {(i,): x for i, x in enumerate(v) if x})
    assert a.wedge(b) == -(b.wedge(a))
    # d is a derivation: d(a∧b) = da∧b - a∧db
    lhs = ce_differential(a.wedge(b))
    rhs = ce_differential(a).wedge(b) - a.wedge(ce_differential(b))
    assert lhs == rhs
