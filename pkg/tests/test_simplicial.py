from math import comb

import pytest

from regulator_lab.complexes import cohomology_dims
from regulator_lab.simplicial import (ModelSizeError, build_cosimplicial_model,
                                      check_cosimplicial_identities, compare_phi_psi,
                                      gl1_numeric_shadow, level_one_coface_images,
                                      max_feasible_level, normalization, normalized_iso_to_ce,
                                      quotient_level, t_basis)


def test_level_one_cofaces_gl1():
    imgs = level_one_coface_images(1)
    assert imgs[0][0] == {(-1, 0): 1}
    assert imgs[2][0] == {(0, -1): 1}
    # coordinate of (1+x1)(1+x2) - 1
    assert imgs[1][0] == {(0, -1): 1, (-1, 0): 1, (0, 0): 1}


def test_level_one_middle_coface_gl2_is_matrix_product():
    N = 2
    imgs = level_one_coface_images(N)
    for i in range(N):
        for j in range(N):
            a = i * N + j
            expected = {(a, -1): 1, (-1, a): 1}
            for k in range(N):
                expected[(i * N + k, k * N + j)] = 1
            assert imgs[1][a] == expected


def test_t_basis_size():
    # each slot: constant or one of N^2 coordinates
    assert len(t_basis(2, 2)) == 25
    assert len(t_basis(1, 3)) == 8


def test_quotient_dims_gl2():
    assert [quotient_level(2, n).dim for n in range(5)] == [1, 5, 15, 35, 70]


@pytest.mark.parametrize("N,L", [(1, 4), (2, 3)])
def test_cosimplicial_identities(N, L):
    assert check_cosimplicial_identities(build_cosimplicial_model(N, L)) == []


def test_model_cohomology_gl2():
    model = build_cosimplicial_model(2, 4)
    h = cohomology_dims(model.complex)
    assert [h[k] for k in range(4)] == [1, 1, 0, 1]


def test_normalized_dims_and_iso():
    for N, L in ((1, 4), (2, 4)):
        iso = normalized_iso_to_ce(N, L)
        assert [iso.dims[n] for n in range(L + 1)] == [comb(N * N, n) for n in range(L + 1)]
        assert iso.bijective and iso.intertwines


def test_normalization_is_subcomplex_with_same_cohomology():
    model = build_cosimplicial_model(2, 4)
    norm = normalization(model)
    a = cohomology_dims(model.complex)
    b = cohomology_dims(norm.complex)
    assert all(a[k] == b[k] for k in range(4))


def test_phi_psi_gl2():
    rep = compare_phi_psi(2, 3)
    assert rep.phi_chain_map
    assert rep.psi_anti_chain_map
    assert rep.psi_is_signed_phi
    assert rep.multilinear_phi_chain_map and rep.multilinear_psi_anti_chain_map
    assert rep.signs == {0: 1, 1: -1, 2: "vacuous"}
    assert rep.homotopy_found["s=(-1)^k"] is True
    # constant signs give maps that are not chain maps on the nose
    assert rep.homotopy_found["s=+1"] is not True


def test_phi_does_not_descend_on_nonabelian_level_three():
    rep = compare_phi_psi(2, 3)
    assert rep.descends[3][1] is True
    assert rep.descends[3][0] is False


def test_gl1_numeric_shadow():
    out = gl1_numeric_shadow(5, 6, 3, 5, 0)
    assert out["failures"] == [] and out["checks"] > 0


def test_size_cap():
    assert [max_feasible_level(N) for N in (1, 2, 3)] == [5, 5, 3]
    with pytest.raises((ModelSizeError, ValueError)):
        build_cosimplicial_model(3, 4)
