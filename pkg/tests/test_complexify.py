from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paragray.curvature import curvature_model
from paragray.errors import ImaginaryResidue, NonStandardBasis, NotCurvatureTensor
from paragray.exactnum import I, GaussRational, Matrix
from paragray.gray import gray_symmetrize
from paragray.model import kaehler_form, standard_hermitian, standard_para_hermitian
from paragray.complexify import (
    complex_rank,
    curvature_bijection_check,
    gray_kernel_correspondence,
    real_imag,
    ricci_commutation,
    sign_swap_checks,
    transfer_curvature,
    transfer_structure,
    transfer_two_tensor,
    transferred_form,
    transferred_j,
)
from paragray.tensors import Tensor2, Tensor4


def test_transfer_structure_targets_standard_para():
    for n in (1, 2, 3):
        tm = transfer_structure(standard_hermitian(0, n))
        assert tm.target == standard_para_hermitian(n)
        assert transferred_form(tm) == tm.target.form
        assert transferred_j(tm) == tm.target.J
        c = tm.change_of_basis
        assert c == Matrix.diag([I] * n + [-1] * n)


def test_transfer_requires_standard_definite_hermitian():
    with pytest.raises(NonStandardBasis):
        transfer_structure(standard_para_hermitian(2))
    with pytest.raises(NonStandardBasis):
        transfer_structure(standard_hermitian(1, 1))


def test_two_tensor_transfer_by_hand():
    tm = transfer_structure(standard_hermitian(0, 1))
    # metric: <e, e> = <f, f> = 1 becomes <i e, i e> = -1 and <-f, -f> = 1
    g = Tensor2.from_matrix(tm.source.form)
    assert transfer_two_tensor(g, tm, real=True) == Tensor2.from_matrix(tm.target.form)
    # Kaehler form Omega(e, f) = <e, J f> = -1 picks up a factor -i
    om = transfer_two_tensor(kaehler_form(tm.source), tm)
    assert om[0, 1] == GaussRational(0, 1) and om[1, 0] == GaussRational(0, -1)
    assert om == kaehler_form(tm.target).map_entries(lambda v: -I * v)
    with pytest.raises(ImaginaryResidue):
        transfer_two_tensor(kaehler_form(tm.source), tm, real=True)


def test_curvature_transfer_rejects_non_curvature():
    tm = transfer_structure(standard_hermitian(0, 2))
    with pytest.raises(NotCurvatureTensor):
        transfer_curvature(Tensor4.from_sparse(4, {(0, 1, 0, 1): 1}), tm)


@given(st.lists(st.integers(-5, 5), min_size=20, max_size=20))
def test_transfer_intertwines_gray_operators(coords):
    src = standard_hermitian(0, 2)
    tm = transfer_structure(src)
    a = curvature_model(src).tensor(coords)
    lhs = gray_symmetrize(transfer_curvature(a, tm), tm.target)
    rhs = transfer_curvature(gray_symmetrize(a, src), tm)
    assert lhs == rhs


@given(st.lists(st.integers(-5, 5), min_size=20, max_size=20))
def test_real_and_imaginary_parts_are_curvature_tensors(coords):
    src = standard_hermitian(0, 2)
    tm = transfer_structure(src)
    a = transfer_curvature(curvature_model(src).tensor(coords), tm)
    re, im = real_imag(a)
    cs = curvature_model(tm.target)
    cs.coords(re)
    cs.coords(im)
    assert re + im.map_entries(lambda v: I * v) == a


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sign_swaps(n):
    res = sign_swap_checks(n)
    assert all(res.values()), res


@pytest.mark.parametrize("n", [1, 2, 3])
def test_curvature_bijection(n):
    res = curvature_bijection_check(n)
    assert res["complex_rank"] == res["source_dim"] == res["target_dim"]
    assert res["parts_span_target"]


@pytest.mark.parametrize("n,dim", [(2, 18), (3, 93)])
def test_gray_kernel_correspondence(n, dim):
    res = gray_kernel_correspondence(n)
    assert res["hermitian_dim"] == res["para_dim"] == res["complex_rank"] == dim
    assert res["images_satisfy_para_gray"] and res["parts_span_para_kernel"]


def test_ricci_commutation():
    assert all(ricci_commutation(2, 10, random.Random(0)).values())


def test_complex_rank():
    assert complex_rank([{0: 1, 1: I}, {0: I, 1: -1}]) == 1
    assert complex_rank([{0: 1, 1: I}, {0: I, 1: 1}]) == 2
