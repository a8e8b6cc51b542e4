"""Gray and para-Gray symmetrization, the realizable subspace and its companions.

Subspace constructors come in pairs: ``*_coords`` works in the coordinate
chart of :class:`~paragray.curvature.CurvatureSpace` (cached), and the
public function embeds the result in the full 4-tensor space.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .curvature import CurvatureSpace, SparseTensor, curvature_model
from .errors import DimensionMismatch, NotParaHermitian
from .exactnum import ONE, Scalar, Subspace, intersect, kernel
from .model import Kind, Structure
from .tensors import Tensor2, Tensor4, add_sparse, pull_dense, pull_sparse

# Which slots receive J in each of the eight Gray terms, and the Hermitian sign.
_GRAY_TERMS = (
    ((0, 0, 0, 0), 1),
    ((1, 1, 1, 1), 1),
    ((1, 1, 0, 0), -1),
    ((1, 0, 1, 0), -1),
    ((1, 0, 0, 1), -1),
    ((0, 1, 1, 0), -1),
    ((0, 1, 0, 1), -1),
    ((0, 0, 1, 1), -1),
)


def gray_sparse(t: SparseTensor, s: Structure) -> SparseTensor:
    out: SparseTensor = {}
    for mask, herm_sign in _GRAY_TERMS:
        sign = 1 if s.kind is Kind.PARA else herm_sign
        mats = [s.J if m else None for m in mask]
        add_sparse(out, pull_sparse(t, mats) if any(mask) else t, sign)
    return out


def gray_symmetrize(t: Tensor4, s: Structure) -> Tensor4:
    """The eight-term Gray (Hermitian) or para-Gray (para) combination of ``t``."""
    if t.dim != s.dim:
        raise DimensionMismatch("tensor and structure dimensions differ")
    arr = t.array
    total = None
    for mask, herm_sign in _GRAY_TERMS:
        sign = 1 if s.kind is Kind.PARA else herm_sign
        term = pull_dense(arr, [s.J if m else None for m in mask])
        term = term if sign == 1 else -term
        total = term if total is None else total + term
    return Tensor4._wrap(total)


def satisfies_gray(a: Tensor4, s: Structure) -> bool:
    return gray_symmetrize(a, s).is_zero()


def p_sparse(theta: SparseTensor) -> SparseTensor:
    """Sparse form of :func:`p_operator`."""
    out: SparseTensor = {}

    def put(k, v):
        w = out.get(k)
        w = v if w is None else w + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)

    for (a, b, c, d), v in theta.items():
        put((a, c, b, d), v)
        put((c, a, d, b), v)
        put((a, c, d, b), -v)
        put((c, a, b, d), -v)
    return out


def p_operator(theta: Tensor4) -> Tensor4:
    """``P(T)(x,y,z,w) = T(x,z,y,w) + T(y,w,x,z) - T(x,w,y,z) - T(y,z,x,w)``."""
    return theta.reindex("xzyw") + theta.reindex("ywxz") - theta.reindex("xwyz") - theta.reindex("yzxw")


# ---------------------------------------------------------------------------
# Symmetric 2-tensors


def _flat2(a: int, b: int, n: int) -> int:
    return a * n + b


def symmetric_basis(dim: int) -> list[Tensor2]:
    """Echelon basis of ``S^2``: ``e_a e_b + e_b e_a`` normalized to leading 1."""
    out = []
    for a in range(dim):
        for b in range(a, dim):
            out.append(Tensor2.from_sparse(dim, {(a, b): ONE, (b, a): ONE}))
    return out


def symmetric_eigen_basis(s: Structure, sign: int) -> list[Tensor2]:
    """Basis of ``{theta symmetric : theta(Jx, Jy) = sign * theta(x, y)}``."""
    n = s.dim
    rows: list[dict[int, Scalar]] = []
    for a, b in product(range(n), repeat=2):
        if a != b:
            rows.append({_flat2(a, b, n): ONE, _flat2(b, a, n): -ONE})
        row: dict[int, Scalar] = {}
        # (J*theta)_ab = sum_cd J_ca J_db theta_cd
        for c in range(n):
            jca = s.J.rows[c][a]
            if not jca:
                continue
            for d in range(n):
                jdb = s.J.rows[d][b]
                if jdb:
                    k = _flat2(c, d, n)
                    row[k] = row.get(k, 0) + jca * jdb
        k = _flat2(a, b, n)
        row[k] = row.get(k, 0) - sign
        rows.append({k: v for k, v in row.items() if v})
    sub = kernel(rows, n * n)
    return [Tensor2.from_sparse(n, {divmod(c, n): v for c, v in r}) for r in sub.rows]


def realizable_slot(s: Structure) -> int:
    """J*-eigenvalue on the first factor of the realizable tensors.

    ``-1`` in the para case; the Hermitian mirror uses ``+1`` (checked
    empirically against the Gray kernel in the test suite).
    """
    return -1 if s.kind is Kind.PARA else 1


# ---------------------------------------------------------------------------
# Subspaces in curvature coordinates


@lru_cache(maxsize=None)
def p_image_coords(s: Structure, slot: int | None = None) -> Subspace:
    cs = curvature_model(s)
    slot = realizable_slot(s) if slot is None else slot
    firsts = [t.to_sparse() for t in symmetric_eigen_basis(s, slot)]
    seconds = [t.to_sparse() for t in symmetric_basis(s.dim)]
    images = []
    for th in firsts:
        for ps in seconds:
            prod_t = {(a, b, c, d): u * v for (a, b), u in th.items() for (c, d), v in ps.items()}
            images.append(dict(enumerate(cs.coords(p_sparse(prod_t)))))
    return Subspace.from_vectors(cs.dim, images)


@lru_cache(maxsize=None)
def gray_kernel_coords(s: Structure) -> Subspace:
    cs = curvature_model(s)
    return cs.kernel(lambda b: gray_sparse(b, s))


def w7_condition(t: SparseTensor, s: Structure) -> SparseTensor:
    """``A(Jx, y, z, w) - A(x, y, Jz, w)``."""
    out = pull_sparse(t, [s.J, None, None, None])
    return add_sparse(out, pull_sparse(t, [None, None, s.J, None]), -1)


@lru_cache(maxsize=None)
def w7_coords(s: Structure) -> Subspace:
    cs = curvature_model(s)
    return cs.kernel(lambda b: w7_condition(b, s))


def p_image_subspace(s: Structure, slot: int | None = None) -> Subspace:
    """Image of ``P`` on ``S^2_slot(V*, J) (x) S^2(V*)``.

    ``slot`` defaults to :func:`realizable_slot`; passing it explicitly on
    a para structure is allowed for experiments.
    """
    if s.kind is not Kind.PARA and slot is None and s.kind is not Kind.HERMITIAN:
        raise NotParaHermitian("unsupported structure kind")
    return curvature_model(s).embed(p_image_coords(s, slot))


def para_p_image_subspace(s: Structure) -> Subspace:
    """The para-Hermitian realizable subspace; rejects Hermitian structures."""
    if s.kind is not Kind.PARA:
        raise NotParaHermitian("the realizable subspace is defined for para-Hermitian structures")
    return p_image_subspace(s)


def gray_kernel_subspace(s: Structure) -> Subspace:
    """Curvature tensors satisfying the (para-)Gray identity."""
    return curvature_model(s).embed(gray_kernel_coords(s))


def w7_subspace(s: Structure) -> Subspace:
    return curvature_model(s).embed(w7_coords(s))


def main_theorem_checks(s: Structure) -> dict:
    """Subspace relations between the realizable tensors, the Gray kernel and W7.

    Returns dimensions and one boolean per relation.
    """
    if s.kind is not Kind.PARA:
        raise NotParaHermitian("the main theorem concerns para-Hermitian structures")
    cs: CurvatureSpace = curvature_model(s)
    p = p_image_coords(s)
    g = gray_kernel_coords(s)
    w7 = w7_coords(s)
    w7_perp = cs.complement(w7)
    return {
        "dims": {"A": cs.dim, "P": p.dim, "W_G": g.dim, "W7": w7.dim, "W7_perp": w7_perp.dim},
        "P_in_W_G": all(g.contains(dict(r)) for r in p.rows),
        "P_equals_W_G": p == g,
        "W_G_equals_W7_perp": g == w7_perp,
        "W_G_meets_W7_trivially": intersect(g, w7).dim == 0,
        "dims_add_up": g.dim + w7.dim == cs.dim,
    }
