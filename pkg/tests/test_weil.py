from fractions import Fraction

import pytest

from regulator_lab.complexes import CohomologyClass, classes_equal
from regulator_lab.lie import (ce_complex, gl, invariant_polynomials, primitive_element,
                               trace_power)
from regulator_lab.weil import (WeilComplexSlice, WeilElement, chern_weil_class,
                                filtration_sequence, suspension_sg,
                                suspension_via_connecting_map, weil_cohomology,
                                weil_differential)


def test_generator_differentials_gl1():
    # gl_1 is abelian: δl = s, δs = 0
    L = gl(1)
    l = WeilElement.ext_generator(L, 0)
    s = WeilElement.sym_generator(L, 0)
    assert weil_differential(l) == s
    assert weil_differential(s).is_zero()


@pytest.mark.parametrize("N", [1, 2])
def test_delta_squared_zero_on_generators(N):
    L = gl(N)
    for a in range(L.dim):
        for g in (WeilElement.ext_generator(L, a), WeilElement.sym_generator(L, a)):
            assert weil_differential(weil_differential(g)).is_zero()


def test_product_rule():
    L = gl(2)
    x = WeilElement.ext_generator(L, 1) * WeilElement.sym_generator(L, 2)
    y = WeilElement.ext_generator(L, 3)
    lhs = weil_differential(x * y)
    # x has odd degree 3
    rhs = weil_differential(x) * y - x * weil_differential(y)
    assert lhs == rhs


@pytest.mark.parametrize("N", [1, 2])
def test_weil_acyclic(N):
    t = weil_cohomology(N, 6)
    assert t["total"][0] == 1
    assert all(t["total"][k] == 0 for k in range(1, 6))
    for n in (1, 2):
        assert t["filtered"][n][2 * n] == len(invariant_polynomials(n, N))


def test_filtration_ses_is_valid():
    ses = filtration_sequence(2, 5, 2)
    sub, total, quot = ses.slices
    assert all(sub.complex.dim(k) + quot.complex.dim(k) == total.complex.dim(k)
               for k in range(6))


def test_quotient_below_one_is_ce():
    q = WeilComplexSlice(2, 5, ("lt", 1))
    ce = ce_complex(2)
    assert [q.complex.dim(k) for k in range(5)] == [ce.dim(k) for k in range(5)]


def test_suspension_of_trace():
    for N in (1, 2):
        assert suspension_sg(trace_power(1, N), 4) == primitive_element(1, N)


def test_suspension_routes_agree():
    ce = ce_complex(2)
    for P in invariant_polynomials(2, 2):
        a = suspension_sg(P, 6)
        b = suspension_via_connecting_map(P, 6)
        assert classes_equal(CohomologyClass.cocycle(ce, 3, a.to_vector()),
                             CohomologyClass.cocycle(ce, 3, b.to_vector()))


def test_suspension_of_trace_square_scalar():
    s = suspension_sg(trace_power(2, 2), 6)
    assert s == primitive_element(2, 2).scale(-2)


def test_chern_weil_round_trip():
    cw = chern_weil_class(2, 2, 6)
    ce = ce_complex(2)
    assert classes_equal(CohomologyClass.cocycle(ce, 3, cw.suspension.to_vector()),
                         CohomologyClass.cocycle(ce, 3, primitive_element(2, 2).to_vector()))
    assert cw.trace_coordinates == {"Tr(X^2)": Fraction(-1, 2), "Tr(X^1)*Tr(X^1)": Fraction(0)}


def test_chern_weil_rejects_bad_degree():
    with pytest.raises(ValueError):
        chern_weil_class(3, 2)
