from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paragray.errors import DimensionMismatch
from paragray.exactnum import Matrix, inertia
from paragray.model import Kind, Structure, kaehler_form, standard_hermitian, standard_para_hermitian, validate
from paragray.tensors import Tensor2, Tensor4, pull_dense, pull_sparse, signed_permutation

small = st.integers(-3, 3)


def tensors4(dim):
    return st.lists(small, min_size=dim**4, max_size=dim**4).map(
        lambda xs: Tensor4(np.array(xs, dtype=object).reshape((dim,) * 4))
    )


def matrices(dim):
    return st.lists(small, min_size=dim * dim, max_size=dim * dim).map(
        lambda xs: Matrix.from_rows([xs[i * dim : (i + 1) * dim] for i in range(dim)])
    )


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_standard_para_hermitian_is_valid(n):
    s = standard_para_hermitian(n)
    assert validate(s) == []
    assert s.kind is Kind.PARA and s.kind.sign == -1
    assert inertia(s.form) == (n, 0, n)
    assert s.J @ s.J == Matrix.identity(2 * n)


@pytest.mark.parametrize("p,q", [(0, 1), (1, 0), (0, 2), (1, 1), (2, 1)])
def test_standard_hermitian_is_valid(p, q):
    s = standard_hermitian(p, q)
    assert validate(s) == []
    assert s.J @ s.J == -Matrix.identity(s.dim)
    assert inertia(s.form) == (2 * p, 0, 2 * q)


def test_validate_reports_problems():
    good = standard_para_hermitian(2)
    bad_j = Structure(4, good.form, Matrix.identity(4), Kind.PARA)
    assert any("-form" in p for p in validate(bad_j))
    definite = Structure(4, Matrix.identity(4), good.J, Kind.PARA)
    assert validate(definite)
    odd = Structure(3, Matrix.identity(3), Matrix.identity(3), Kind.PARA)
    assert any("even" in p for p in validate(odd))


def test_coordinate_labels():
    s = standard_para_hermitian(3)
    assert [s.label(a) for a in range(6)] == ["x1", "x2", "x3", "y1", "y2", "y3"]
    assert all(s.index(s.label(a)) == a for a in range(6))
    with pytest.raises(ValueError):
        s.index("z1")


@pytest.mark.parametrize("s", [standard_para_hermitian(2), standard_hermitian(0, 2), standard_hermitian(1, 1)])
def test_kaehler_form_is_skew_and_j_eigen(s):
    om = kaehler_form(s)
    assert om.is_antisymmetric()
    assert s.pull_two(om) == om * s.kind.sign
    assert s.pull_two(Tensor2.from_matrix(s.form)) == Tensor2.from_matrix(s.form) * s.kind.sign


def _brute_pull(t: Tensor4, mats):
    # t'(e_a, e_b, e_c, e_d) = sum t(e_i, e_j, e_k, e_l) M0[i,a] M1[j,b] ...
    dim = t.dim
    ms = [Matrix.identity(dim) if m is None else m for m in mats]
    out = np.empty((dim,) * 4, dtype=object)
    r = range(dim)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    out[a, b, c, d] = sum(
                        t[i, j, k, l] * ms[0][i, a] * ms[1][j, b] * ms[2][k, c] * ms[3][l, d]
                        for i in r
                        for j in r
                        for k in r
                        for l in r
                        if t[i, j, k, l]
                    )
    return Tensor4(out)


@given(tensors4(2), matrices(2), matrices(2))
def test_pullbacks_agree_with_brute_force(t, m, k):
    mats = [m, None, k, m]
    want = _brute_pull(t, mats)
    assert t.pullback(mats) == want
    assert Tensor4.from_sparse(2, pull_sparse(t.to_sparse(), mats)) == want


@given(tensors4(2))
def test_signed_permutation_fast_path(t):
    j = standard_hermitian(0, 1).J
    assert signed_permutation(j) is not None
    assert Tensor4._wrap(pull_dense(t.array, [j, j, None, j])) == _brute_pull(t, [j, j, None, j])


def test_reindex_semantics():
    t = Tensor4.from_sparse(2, {(0, 1, 0, 0): 1})
    # (x,y,z,w) -> t(y,x,z,w) moves the entry to (1,0,0,0)
    assert t.reindex("yxzw").to_sparse() == {(1, 0, 0, 0): 1}


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        Tensor4(np.zeros((2, 2, 2), dtype=object))
    with pytest.raises(DimensionMismatch):
        Tensor4.zeros(2) + Tensor4.zeros(3)
    with pytest.raises(DimensionMismatch):
        Tensor2.zeros(2).pullback([None])


def test_two_tensor_parts():
    t = Tensor2.from_sparse(2, {(0, 1): 3, (1, 0): 1, (1, 1): 2})
    assert t.symmetric_part() + t.antisymmetric_part() == t
    assert t.symmetric_part().is_symmetric()
    assert t.antisymmetric_part().is_antisymmetric()
