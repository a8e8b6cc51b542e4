from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paragray.curvature import curvature_model
from paragray.errors import DimensionMismatch, NotParaHermitian
from paragray.exactnum import intersect
from paragray.gray import (
    gray_kernel_coords,
    gray_kernel_subspace,
    gray_symmetrize,
    main_theorem_checks,
    p_image_coords,
    p_image_subspace,
    p_operator,
    p_sparse,
    para_p_image_subspace,
    satisfies_gray,
    symmetric_eigen_basis,
    w7_coords,
    w7_subspace,
)
from paragray.model import standard_hermitian, standard_para_hermitian
from paragray.tensors import Tensor4

# Dimensions (curvature space, Gray kernel, W7) from a floating-point rank
# computation of brute-force operator matrices on the full 4-tensor space.
ORACLE_DIMS = {4: (20, 18, 2), 6: (105, 93, 12)}
# Same oracle for the Hermitian Gray kernel on the definite model.
ORACLE_HERMITIAN_GRAY = {4: 18, 6: 93}

PARA = [standard_para_hermitian(2), standard_para_hermitian(3)]


def _apply(j, v):
    return [sum(j[a, b] * v[b] for b in range(len(v))) for a in range(len(v))]


def brute_gray(a: Tensor4, s) -> Tensor4:
    """The eight-term sum evaluated on basis vectors, by explicit multilinear expansion."""
    d = s.dim
    basis = [[1 if i == k else 0 for i in range(d)] for k in range(d)]
    jb = [_apply(s.J, e) for e in basis]
    sign_mixed = 1 if s.kind.sign < 0 else -1

    def ev(vs):
        total = 0
        for i in range(d):
            if vs[0][i]:
                for j in range(d):
                    if vs[1][j]:
                        for k in range(d):
                            if vs[2][k]:
                                for l in range(d):
                                    if vs[3][l]:
                                        total += a[i, j, k, l] * vs[0][i] * vs[1][j] * vs[2][k] * vs[3][l]
        return total

    out = np.empty((d,) * 4, dtype=object)
    masks = [(0, 0, 0, 0), (1, 1, 1, 1)]
    mixed = [(1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1)]
    for idx in np.ndindex(*(d,) * 4):
        total = 0
        for m in masks + mixed:
            vs = [jb[i] if bit else basis[i] for i, bit in zip(idx, m)]
            total += (1 if m in masks else sign_mixed) * ev(vs)
        out[idx] = total
    return Tensor4(out)


def curvature_coords(dim):
    n = {4: 20, 6: 105}[dim]
    return st.lists(st.integers(-5, 5), min_size=n, max_size=n)


@settings(max_examples=15)
@given(curvature_coords(4))
@pytest.mark.parametrize("s", [standard_para_hermitian(2), standard_hermitian(0, 2), standard_hermitian(1, 1)])
def test_gray_symmetrize_matches_brute_force(s, coords):
    a = curvature_model(s).tensor(coords)
    assert gray_symmetrize(a, s) == brute_gray(a, s)


def test_gray_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        gray_symmetrize(Tensor4.zeros(2), standard_para_hermitian(2))


@given(st.dictionaries(st.tuples(*[st.integers(0, 3)] * 4), st.integers(-4, 4), max_size=12))
def test_p_sparse_matches_dense(entries):
    t = Tensor4.from_sparse(4, entries)
    assert Tensor4.from_sparse(4, p_sparse(t.to_sparse())) == p_operator(t)


def test_p_operator_formula_on_a_basis_element():
    # theta = e^1 e^2 e^3 e^4 (single entry); P(theta)(x,y,z,w) = theta(x,z,y,w) + ...
    t = Tensor4.from_sparse(4, {(0, 1, 2, 3): 1})
    p = p_operator(t)
    assert p.to_sparse() == {(0, 2, 1, 3): 1, (2, 0, 3, 1): 1, (0, 2, 3, 1): -1, (2, 0, 1, 3): -1}


@pytest.mark.parametrize("s", PARA, ids=["4", "6"])
def test_subspace_dimensions_match_oracle(s):
    a, g, w7 = ORACLE_DIMS[s.dim]
    assert curvature_model(s).dim == a
    assert gray_kernel_coords(s).dim == g
    assert w7_coords(s).dim == w7
    assert p_image_coords(s).dim == g


@pytest.mark.parametrize("s", PARA, ids=["4", "6"])
def test_main_theorem_relations(s):
    res = main_theorem_checks(s)
    assert res["P_in_W_G"] and res["P_equals_W_G"]
    assert res["W_G_equals_W7_perp"] and res["W_G_meets_W7_trivially"] and res["dims_add_up"]


@pytest.mark.parametrize("s", PARA, ids=["4", "6"])
def test_gray_is_eight_times_identity_on_w7(s):
    cs = curvature_model(s)
    for v in cs.vectors(w7_coords(s)):
        a = Tensor4.from_sparse(s.dim, v)
        assert gray_symmetrize(a, s) == a * 8


@pytest.mark.parametrize("s", PARA, ids=["4", "6"])
def test_random_images_of_p_satisfy_gray(s):
    rng = random.Random(7)
    firsts = symmetric_eigen_basis(s, -1)
    for _ in range(5):
        phi = sum((f * rng.randint(-3, 3) for f in firsts), firsts[0] * 0)
        psi_rows = [[rng.randint(-3, 3) for _ in range(s.dim)] for _ in range(s.dim)]
        psi = type(phi)(np.array(psi_rows, dtype=object)).symmetric_part()
        a = p_operator(phi.tensor(psi))
        assert satisfies_gray(a, s)


def test_wrong_slot_is_not_the_gray_kernel():
    s = standard_para_hermitian(2)
    assert p_image_coords(s, slot=1) != gray_kernel_coords(s)


@pytest.mark.parametrize("s", [standard_hermitian(0, 2), standard_hermitian(1, 1)], ids=["definite", "neutral"])
def test_hermitian_mirror_uses_plus_slot(s):
    assert gray_kernel_coords(s).dim == ORACLE_HERMITIAN_GRAY[4]
    assert p_image_coords(s) == gray_kernel_coords(s)
    assert p_image_coords(s, slot=-1) != gray_kernel_coords(s)


def test_para_only_entry_points():
    with pytest.raises(NotParaHermitian):
        para_p_image_subspace(standard_hermitian(0, 2))
    with pytest.raises(NotParaHermitian):
        main_theorem_checks(standard_hermitian(0, 2))


def test_embedded_subspaces_agree_with_coordinates():
    s = standard_para_hermitian(2)
    assert para_p_image_subspace(s) == p_image_subspace(s) == gray_kernel_subspace(s)
    assert intersect(gray_kernel_subspace(s), w7_subspace(s)).dim == 0
