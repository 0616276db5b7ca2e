from fractions import Fraction

import pytest

from regulator_lab.standard import (AbelianGroupAlgebra, EnvelopingAlgebra,
                                    TruncatedEnvelopingElement, antisymmetrization,
                                    check_antisymmetrization_square, check_e_tilde_isomorphism,
                                    d_standard, d_tilde, standard_complex_differentials,
                                    tensor_basis)


def test_pbw_straightening_commutator():
    U = EnvelopingAlgebra(2)
    # E21 E12 = E12 E21 + [E21, E12] = E12 E21 + E22 - E11
    assert U.mul((2,), (1,)) == {(1, 2): 1, (3,): 1, (0,): -1}
    assert U.mul((1,), (2,)) == {(1, 2): 1}


def test_enveloping_associative():
    U = EnvelopingAlgebra(2)
    a, b, c = (1,), (2,), (0, 3)
    left = U.mul_elements(U.mul(a, b), {c: Fraction(1)})
    right = U.mul_elements({a: Fraction(1)}, U.mul(b, c))
    assert left == right


def test_truncated_enveloping_element():
    x = TruncatedEnvelopingElement.generator(2, 2)
    y = TruncatedEnvelopingElement.generator(2, 1)
    assert (x * y - y * x).coeffs == {(3,): 1, (0,): -1}
    with pytest.raises(ValueError):
        TruncatedEnvelopingElement(2, 2, {(2, 1): 1})


def test_antipode_is_convolution_inverse():
    for A in (EnvelopingAlgebra(2), AbelianGroupAlgebra(2, 4)):
        for m in A.basis(3):
            # m(S⊗1)Δ = ε
            total = {}
            for (l, r), x in A.coproduct(m).items():
                for s, y in A.antipode(l).items():
                    for k, z in A.mul(s, r).items():
                        total[k] = total.get(k, 0) + x * y * z
            total = {k: v for k, v in total.items() if v and A.degree(k) <= 3}
            expected = {A.one(): Fraction(1)} if m == A.one() else {}
            assert total == expected, (A.name, m)


def test_tensor_basis_counts():
    A = AbelianGroupAlgebra(1, 2)
    # monomials z^a, a <= 2; pairs with a + b <= 2
    assert len(tensor_basis(A, 1, 2)) == 6


@pytest.mark.parametrize("A", [EnvelopingAlgebra(2), AbelianGroupAlgebra(4, 3)])
def test_standard_differentials_square_zero(A):
    sc = standard_complex_differentials(A, 3, 3)
    assert sc.d_squared_zero and sc.d_tilde_squared_zero


def test_d_tilde_low_degree():
    U = EnvelopingAlgebra(2)
    # d~(X ⊗ Y) = XY - X ε(Y) = XY
    assert d_tilde(U, ((1,), (2,))) == {((1, 2),): 1}
    assert d_standard(U, ((), (2,))) == {((2,),): 1}


@pytest.mark.parametrize("A", [EnvelopingAlgebra(2), AbelianGroupAlgebra(3, 3)])
def test_e_to_e_tilde_intertwines(A):
    assert all(check_e_tilde_isomorphism(A, 2, 3).values())


def test_antisymmetrization():
    assert antisymmetrization((1, 2)) == {((1,), (2,)): 1, ((2,), (1,)): -1}
    assert len(antisymmetrization((0, 1, 2))) == 6


def test_antisymmetrization_square():
    assert check_antisymmetrization_square(2, 3, 3) == {1: True, 2: True, 3: True}
