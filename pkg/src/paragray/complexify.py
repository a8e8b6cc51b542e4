"""Transfer between a definite Hermitian model and the neutral para-Hermitian model.

With ``e~_i = i e_i``, ``f~_i = -f_i`` and ``J~ = i J`` the real span of the
new basis carries a neutral form on which ``J~`` is para-Hermitian.  Tensors
are carried over by complex-bilinear extension; the result has Gaussian
rational entries.  Real and imaginary parts of a transferred tensor each lie
in the corresponding real space on the target side, and the transfer is a
complex-linear bijection between complexifications.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .curvature import curvature_model, is_algebraic_curvature
from .errors import ImaginaryResidue, NonStandardBasis, NotCurvatureTensor
from .exactnum import ONE, ZERO, Echelon, GaussRational, I, Matrix, Scalar, Subspace, kernel
from .gray import gray_kernel_coords, gray_sparse, symmetric_eigen_basis
from .model import Kind, Structure, standard_hermitian, standard_para_hermitian, validate
from .tensors import Tensor2, Tensor4, pull_sparse
from .tvdecomp import ricci


@dataclass(frozen=True)
class TransferMap:
    """``change_of_basis`` has the source coordinates of the target basis as columns."""

    source: Structure
    target: Structure
    change_of_basis: Matrix


def transfer_structure(s: Structure) -> TransferMap:
    """Transfer map of the standard positive definite Hermitian structure."""
    if s.kind is not Kind.HERMITIAN or s.dim % 2 or s != standard_hermitian(0, s.n):
        raise NonStandardBasis("transfer needs the standard positive definite Hermitian structure")
    n = s.n
    c = Matrix.diag([I] * n + [-ONE] * n)
    target = standard_para_hermitian(n)
    # Target form and J are computed, then compared with the standard ones.
    form = c.T @ s.form @ c
    j_target = _inverse_diag(c) @ (s.J.scale(I)) @ c
    if not (_real_matrix(form) == target.form and _real_matrix(j_target) == target.J):
        raise NonStandardBasis("transferred structure is not the standard para-Hermitian one")
    return TransferMap(s, target, c)


def _inverse_diag(c: Matrix) -> Matrix:
    return Matrix.diag([GaussRational(1) / c.rows[i][i] for i in range(c.ncols)])


def _real_matrix(m: Matrix) -> Matrix:
    rows = []
    for row in m.rows:
        out = []
        for v in row:
            if isinstance(v, GaussRational):
                if v.im:
                    raise ImaginaryResidue("matrix has a nonzero imaginary part")
                v = v.re
            out.append(v)
        rows.append(out)
    return Matrix.from_rows(rows)


def transferred_form(tmap: TransferMap) -> Matrix:
    """``C^T form C``, computed rather than assumed."""
    c = tmap.change_of_basis
    return _real_matrix(c.T @ tmap.source.form @ c)


def transferred_j(tmap: TransferMap) -> Matrix:
    c = tmap.change_of_basis
    return _real_matrix(_inverse_diag(c) @ tmap.source.J.scale(I) @ c)


def _simplify(v):
    if isinstance(v, GaussRational) and not v.im:
        return v.re
    return v


def _transfer_sparse(entries: Mapping[tuple, Scalar], tmap: TransferMap) -> dict[tuple, Scalar]:
    rank = len(next(iter(entries))) if entries else 0
    out = pull_sparse(entries, [tmap.change_of_basis] * rank)
    return {k: _simplify(v) for k, v in out.items() if v}


def _realize(t, real: bool, what: str):
    if real and not t.is_real():
        raise ImaginaryResidue(f"transferred {what} has a nonzero imaginary part")
    return t


def transfer_two_tensor(theta: Tensor2, tmap: TransferMap, real: bool = False) -> Tensor2:
    """``theta~(x, y) = theta(C x, C y)``.

    ``real=True`` insists on a real result and raises ``ImaginaryResidue``
    otherwise.
    """
    out = Tensor2.from_sparse(tmap.target.dim, _transfer_sparse(theta.to_sparse(), tmap))
    return _realize(out, real, "2-tensor")


def transfer_curvature(a: Tensor4, tmap: TransferMap, real: bool = False) -> Tensor4:
    if not is_algebraic_curvature(a):
        raise NotCurvatureTensor("input is not an algebraic curvature tensor")
    out = Tensor4.from_sparse(tmap.target.dim, _transfer_sparse(a.to_sparse(), tmap))
    return _realize(out, real, "curvature tensor")


def real_imag(t):
    """``(Re t, Im t)`` as real tensors of the same type."""
    def part(v, which):
        if isinstance(v, GaussRational):
            return v.re if which == 0 else v.im
        return v if which == 0 else ZERO

    return t.map_entries(lambda v: part(v, 0)), t.map_entries(lambda v: part(v, 1))


def complex_rank(vectors: Iterable[Mapping]) -> int:
    return len(Echelon(vectors))


def _flat(t) -> dict:
    n = t.dim
    out = {}
    for k, v in t.to_sparse().items():
        f = 0
        for i in k:
            f = f * n + i
        out[f] = v
    return out


# ---------------------------------------------------------------------------
# Checks


def antisymmetric_eigen_basis(s: Structure, sign: int) -> list[Tensor2]:
    """Basis of ``{theta antisymmetric : J*theta = sign * theta}``."""
    n = s.dim
    rows: list[dict[int, Scalar]] = []
    for a in range(n):
        for b in range(n):
            rows.append({a * n + b: ONE, b * n + a: ONE} if a != b else {a * n + a: ONE})
            row: dict[int, Scalar] = {}
            for c in range(n):
                jca = s.J.rows[c][a]
                if jca:
                    for d in range(n):
                        jdb = s.J.rows[d][b]
                        if jdb:
                            row[c * n + d] = row.get(c * n + d, ZERO) + jca * jdb
            row[a * n + b] = row.get(a * n + b, ZERO) - sign
            rows.append({k: v for k, v in row.items() if v})
    sub = kernel(rows, n * n)
    return [Tensor2.from_sparse(n, {divmod(c, n): v for c, v in r}) for r in sub.rows]


def eigen_basis(s: Structure, symmetric: bool, sign: int) -> list[Tensor2]:
    return symmetric_eigen_basis(s, sign) if symmetric else antisymmetric_eigen_basis(s, sign)


def sign_swap_checks(n: int) -> dict[str, bool]:
    """Each of ``S2+, S2-, L2+, L2-`` on the source lands in the opposite-sign space.

    For every label: transferred basis elements keep their symmetry type and
    satisfy ``J~*theta~ = -sign theta~``; their complex span has the dimension
    of the target space; real and imaginary parts lie in it and span it.
    """
    src = standard_hermitian(0, n)
    tmap = transfer_structure(src)
    tgt = tmap.target
    out: dict[str, bool] = {}
    out["target_valid"] = validate(tgt) == [] and transferred_form(tmap) == tgt.form and transferred_j(tmap) == tgt.J
    out["J_squared_identity"] = tgt.J @ tgt.J == Matrix.identity(tgt.dim)
    out["J_anti_isometry"] = tgt.J.T @ tgt.form @ tgt.J == -tgt.form
    for symmetric in (True, False):
        for sign in (1, -1):
            label = f"{'S2' if symmetric else 'L2'}{'+' if sign > 0 else '-'}"
            basis = eigen_basis(src, symmetric, sign)
            target_basis = eigen_basis(tgt, symmetric, -sign)
            images = [transfer_two_tensor(t, tmap) for t in basis]
            ok = all(
                (im.is_symmetric() if symmetric else im.is_antisymmetric()) and tgt.pull_two(im) == im * (-sign)
                for im in images
            )
            target_sub = Subspace.from_vectors(tgt.dim**2, [_flat(t) for t in target_basis])
            parts = [p for im in images for p in real_imag(im)]
            inside = all(target_sub.contains(_flat(p)) for p in parts)
            spans = Subspace.from_vectors(tgt.dim**2, [_flat(p) for p in parts]) == target_sub
            rank_ok = complex_rank(_flat(im) for im in images) == len(basis) == len(target_basis)
            out[f"{label}_to_opposite"] = ok and inside and spans and rank_ok
    return out


def curvature_bijection_check(n: int) -> dict[str, object]:
    """Complex rank of the transferred curvature basis and real spanning on the target."""
    src = standard_hermitian(0, n)
    tmap = transfer_structure(src)
    cs_src, cs_tgt = curvature_model(src), curvature_model(tmap.target)
    images = [transfer_curvature(cs_src.basis_tensor(k), tmap) for k in range(cs_src.dim)]
    parts = [p for im in images for p in real_imag(im)]
    real_span = Subspace.from_vectors(cs_tgt.subspace.ambient_dim, [_flat(p) for p in parts])
    return {
        "source_dim": cs_src.dim,
        "target_dim": cs_tgt.dim,
        "complex_rank": complex_rank(_flat(im) for im in images),
        "parts_span_target": real_span == cs_tgt.subspace,
    }


def gray_kernel_correspondence(n: int) -> dict[str, object]:
    """The Hermitian Gray kernel transfers onto the para-Gray kernel (complexified)."""
    src = standard_hermitian(0, n)
    tmap = transfer_structure(src)
    tgt = tmap.target
    cs_src, cs_tgt = curvature_model(src), curvature_model(tgt)
    herm = gray_kernel_coords(src)
    para = cs_tgt.embed(gray_kernel_coords(tgt))
    images = [transfer_curvature(Tensor4.from_sparse(src.dim, v), tmap) for v in cs_src.vectors(herm)]
    parts = [p for im in images for p in real_imag(im)]
    para_ok = all(not gray_sparse(im.to_sparse(), tgt) for im in images)
    span = Subspace.from_vectors(para.ambient_dim, [_flat(p) for p in parts])
    return {
        "hermitian_dim": herm.dim,
        "para_dim": para.dim,
        "complex_rank": complex_rank(_flat(im) for im in images),
        "images_satisfy_para_gray": para_ok,
        "parts_span_para_kernel": span == para,
    }


def ricci_commutation(n: int, samples: int, rng: random.Random) -> dict[str, bool]:
    """``tau`` and ``tau*`` agree before and after transfer on random curvature tensors.

    Also checks that ``rho`` and ``rho*`` themselves transfer to the target's
    ``rho`` and (para-signed) ``rho*``.
    """
    src = standard_hermitian(0, n)
    tmap = transfer_structure(src)
    cs = curvature_model(src)
    tau_ok = star_ok = rho_ok = True
    for _ in range(samples):
        a = cs.tensor([rng.randint(-9, 9) for _ in range(cs.dim)])
        at = transfer_curvature(a, tmap)
        r_src, r_tgt = ricci(a, src), ricci(at, tmap.target)
        tau_ok &= r_src.tau == r_tgt.tau
        star_ok &= r_src.tau_star == r_tgt.tau_star
        rho_ok &= transfer_two_tensor(r_src.rho, tmap) == r_tgt.rho
        rho_ok &= transfer_two_tensor(r_src.rho_star, tmap) == r_tgt.rho_star
    return {"tau": tau_ok, "tau_star": star_ok, "rho_and_rho_star": rho_ok}
