"""Ricci contractions, the six-way split of 2-tensors and the curvature module table.

Labels follow the para-Hermitian table.  The same code runs on Hermitian
structures: every construction is phrased through ``sigma = kind.sign``, the
``J*``-eigenvalue of the form, so "same" means the eigenspace containing the
form and "opp" the other one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .curvature import CurvatureSpace, SparseTensor, curvature_model
from .errors import DegenerateRestriction, DimensionMismatch, LabelAbsent, SingularForm, UnsupportedDimension
from .exactnum import ZERO, Matrix, Scalar, Subspace, intersect, inverse, kernel, rank, rational, subspace_sum
from .gray import gray_kernel_coords, w7_coords
from .model import Kind, Structure, kaehler_form
from .tensors import Tensor2, Tensor4, add_sparse, pull_sparse

# ---------------------------------------------------------------------------
# Ricci data


@dataclass(frozen=True)
class RicciData:
    rho: Tensor2
    rho_star: Tensor2
    tau: Scalar
    tau_star: Scalar


def _contract_outer(t: SparseTensor, s: Structure) -> dict[tuple, Scalar]:
    """``(x, y) -> eps^{ij} t(e_i, x, y, e_j)``."""
    inv = s.inverse_form.rows
    out: dict[tuple, Scalar] = {}
    for (i, x, y, j), v in t.items():
        c = inv[i][j]
        if c:
            w = out.get((x, y), ZERO) + c * v
            if w:
                out[(x, y)] = w
            else:
                out.pop((x, y), None)
    return out


def ricci_sparse(t: SparseTensor, s: Structure) -> tuple[dict, dict]:
    """Sparse ``(rho, rho_star)``; the para ``rho_star`` carries a leading minus."""
    rho = _contract_outer(t, s)
    star = _contract_outer(pull_sparse(t, [None, None, s.J, s.J]), s)
    if s.kind is Kind.PARA:
        star = {k: -v for k, v in star.items()}
    return rho, star


def trace(theta: Tensor2, s: Structure) -> Scalar:
    inv = s.inverse_form.rows
    return sum((inv[i][j] * theta[i, j] for i in range(s.dim) for j in range(s.dim)), ZERO)


def ricci(a: Tensor4, s: Structure) -> RicciData:
    """Ricci tensor, star-Ricci tensor and their traces."""
    if a.dim != s.dim:
        raise DimensionMismatch("tensor and structure dimensions differ")
    rho, star = ricci_sparse(a.to_sparse(), s)
    rho_t = Tensor2.from_sparse(s.dim, rho)
    star_t = Tensor2.from_sparse(s.dim, star)
    return RicciData(rho_t, star_t, trace(rho_t, s), trace(star_t, s))


# ---------------------------------------------------------------------------
# 2-tensors


def two_inner(a: Tensor2, b: Tensor2, s: Structure) -> Scalar:
    """``eps^{ac} eps^{bd} a_ab b_cd``."""
    inv = s.inverse_form
    raised = inv @ b.to_matrix() @ inv
    n = s.dim
    return sum((a[i, j] * raised.rows[i][j] for i in range(n) for j in range(n)), ZERO)


@dataclass(frozen=True)
class TwoTensorDecomposition:
    """Six orthogonal components of a 2-tensor.

    ``sym_0`` and ``alt_0`` lie in the ``J*``-eigenspace containing the form
    (resp. the Kaehler form) and are orthogonal to it; ``sym_opp`` and
    ``alt_opp`` lie in the other eigenspace.  For para structures these are
    ``S2_0-``, ``L2_0-``, ``S2+``, ``L2+``; for Hermitian ones ``S2_0+``,
    ``L2_0+``, ``S2-``, ``L2-``.
    """

    kind: Kind
    scalar_coeff: Scalar
    omega_coeff: Scalar
    scalar_part: Tensor2
    omega_part: Tensor2
    sym_0: Tensor2
    sym_opp: Tensor2
    alt_0: Tensor2
    alt_opp: Tensor2

    def components(self) -> dict[str, Tensor2]:
        same, opp = ("-", "+") if self.kind is Kind.PARA else ("+", "-")
        return {
            "form": self.scalar_part,
            "omega": self.omega_part,
            f"S2_0{same}": self.sym_0,
            f"S2{opp}": self.sym_opp,
            f"L2_0{same}": self.alt_0,
            f"L2{opp}": self.alt_opp,
        }

    def total(self) -> Tensor2:
        out = self.scalar_part
        for c in (self.omega_part, self.sym_0, self.sym_opp, self.alt_0, self.alt_opp):
            out = out + c
        return out


def decompose_two_tensor(t: Tensor2, s: Structure) -> TwoTensorDecomposition:
    if t.dim != s.dim:
        raise DimensionMismatch("tensor and structure dimensions differ")
    sigma = s.kind.sign
    half = rational("1/2")
    g = Tensor2.from_matrix(s.form)
    om = kaehler_form(s)
    c_g = two_inner(t, g, s) / two_inner(g, g, s)
    c_om = two_inner(t, om, s) / two_inner(om, om, s)
    sym, alt = t.symmetric_part(), t.antisymmetric_part()
    j_sym, j_alt = s.pull_two(sym), s.pull_two(alt)
    return TwoTensorDecomposition(
        kind=s.kind,
        scalar_coeff=c_g,
        omega_coeff=c_om,
        scalar_part=g * c_g,
        omega_part=om * c_om,
        sym_0=(sym + j_sym * sigma) * half - g * c_g,
        sym_opp=(sym - j_sym * sigma) * half,
        alt_0=(alt + j_alt * sigma) * half - om * c_om,
        alt_opp=(alt - j_alt * sigma) * half,
    )


def eigen_dims(s: Structure) -> dict[str, int]:
    """Dimensions of the four non-scalar 2-tensor summands."""
    n = s.n
    same_s, opp_s = n * n, n * (n + 1)
    same_a, opp_a = n * n, n * (n - 1)
    return {"sym_0": same_s - 1, "sym_opp": opp_s, "alt_0": same_a - 1, "alt_opp": opp_a}


# ---------------------------------------------------------------------------
# Module table


def _ricci_parts(t: SparseTensor, s: Structure) -> dict[str, dict]:
    """Projections of ``rho`` and ``rho_star`` onto the six 2-tensor summands.

    Keys are ``"rho.<part>"`` and ``"star.<part>"``; parts are ``form``,
    ``omega``, ``sym_0``, ``sym_opp``, ``alt_0``, ``alt_opp``.
    """
    rho, star = ricci_sparse(t, s)
    out = {}
    for name, r in (("rho", rho), ("star", star)):
        d = decompose_two_tensor(Tensor2.from_sparse(s.dim, r), s)
        out[f"{name}.form"] = d.scalar_part.to_sparse()
        out[f"{name}.omega"] = d.omega_part.to_sparse()
        for part in ("sym_0", "sym_opp", "alt_0", "alt_opp"):
            out[f"{name}.{part}"] = getattr(d, part).to_sparse()
    return out


def _keyed(parts: dict[str, dict], names) -> dict:
    return {(name,) + k: v for name in names for k, v in parts[name].items()}


_ALL_PARTS = tuple(f"{r}.{p}" for r in ("rho", "star") for p in ("form", "omega", "sym_0", "sym_opp", "alt_0", "alt_opp"))

# Ricci types allowed inside each isotypic block built from the remainder.
_BLOCK_TYPES = {
    "W1+W4": ("form", "omega"),
    "W2+W5": ("sym_0", "alt_0"),
    "W8": ("sym_opp",),
    "W9": ("alt_opp",),
}


def w3_condition(t: SparseTensor, s: Structure) -> SparseTensor:
    """``A(x,y,z,w) - sigma A(Jx,Jy,z,w)``; zero on the W3 side of the table."""
    out = dict(t)
    return add_sparse(out, pull_sparse(t, [s.J, s.J, None, None]), -s.kind.sign)


def j_star_condition(t: SparseTensor, s: Structure, sign: int) -> SparseTensor:
    """``J*A - sign * A``."""
    out = pull_sparse(t, [s.J] * 4)
    return add_sparse(out, t, -sign)


@dataclass
class ModuleTable:
    """Pairwise orthogonal curvature modules, in curvature coordinates."""

    structure: Structure
    modules: dict[str, Subspace]
    multiplicity: dict[str, int]
    checks: dict[str, bool] = field(default_factory=dict)
    notes: dict[str, object] = field(default_factory=dict)

    @property
    def space(self) -> CurvatureSpace:
        return curvature_model(self.structure)

    @property
    def labels(self) -> list[str]:
        return list(self.modules)

    def dims(self) -> dict[str, int]:
        return {k: v.dim for k, v in self.modules.items()}

    def module_count(self) -> int:
        return sum(self.multiplicity[k] for k in self.modules)

    def subspace(self, label: str) -> Subspace:
        """A module embedded in the full 4-tensor space."""
        if label not in self.modules:
            raise LabelAbsent(f"module {label!r} is not present at dim {self.structure.dim}")
        return self.space.embed(self.modules[label])

    def passed(self) -> bool:
        return all(self.checks.values())


def _gram_block(cs: CurvatureSpace, a: Subspace, b: Subspace) -> Matrix:
    g = cs.gram.rows
    rows = []
    for ra in a.rows:
        row = []
        for rb in b.rows:
            total = ZERO
            for i, u in ra:
                gi = g[i]
                for j, v in rb:
                    if gi[j]:
                        total = total + u * gi[j] * v
            row.append(total)
        rows.append(tuple(row))
    return Matrix(tuple(rows), b.dim)


def _restrict_by_types(cs: CurvatureSpace, rem: Subspace, allowed, s: Structure) -> Subspace:
    """Elements of ``rem`` whose Ricci parts outside ``allowed`` vanish."""
    forbidden = [p for p in _ALL_PARTS if p.split(".")[1] not in allowed]
    vecs = cs.vectors(rem)
    images = [_keyed(_ricci_parts(v, s), forbidden) for v in vecs]
    keys = {}
    rows = [{keys.setdefault(k, len(keys)): v for k, v in im.items()} for im in images]
    # Solve sum_i c_i image_i = 0 for c, then map c back into coordinates.
    cols: dict[int, dict[int, Scalar]] = {}
    for i, r in enumerate(rows):
        for k, v in r.items():
            cols.setdefault(k, {})[i] = v
    combos = kernel(list(cols.values()), len(vecs))
    basis = [dict(r) for r in rem.rows]
    out = []
    for combo in combos.rows:
        acc: dict[int, Scalar] = {}
        for i, c in combo:
            add_sparse(acc, basis[i], c)
        out.append(acc)
    return Subspace.from_vectors(cs.dim, out)


@lru_cache(maxsize=None)
def module_table(s: Structure) -> ModuleTable:
    """Curvature modules of ``s`` for ``2n`` in ``{4, 6, 8}``.

    W3, W7 and W10 come from their linear characterizations.  W6 is the
    kernel of ``rho + rho_star`` on ``{J*A = A}`` orthogonal to W3 and W7
    (the W7 condition is needed, as W7 also satisfies the other three).
    The isotypic blocks W1+W4, W2(+W5), W8 and W9 are carved out of the
    orthogonal complement of those modules by the Ricci type they produce,
    then checked against the isomorphism statements.
    """
    if s.dim not in (4, 6, 8):
        raise UnsupportedDimension(f"module table needs 2n in (4, 6, 8), got {s.dim}")
    cs = curvature_model(s)
    sigma = s.kind.sign

    def ricci_all(t):
        return ricci_all_parts(t, s)

    modules: dict[str, Subspace] = {}
    mult: dict[str, int] = {}
    notes: dict[str, object] = {}

    w7 = w7_coords(s)
    w3 = cs.kernel(lambda t: {("c",) + k: v for k, v in w3_condition(t, s).items()} | {("r",) + k: v for k, v in ricci_sparse(t, s)[0].items()})
    characterized = {"W3": w3, "W7": w7}
    if s.dim >= 6:
        characterized["W10"] = cs.kernel(
            lambda t: {("j",) + k: v for k, v in j_star_condition(t, s, -1).items()} | ricci_all(t)
        )
    if s.dim >= 8:
        literal = cs.kernel(lambda t: {("j",) + k: v for k, v in j_star_condition(t, s, 1).items()} | ricci_all(t))
        literal = _intersect_complement(cs, literal, w3)
        notes["W6_literal_dim"] = literal.dim
        notes["W6_literal_meets_W7"] = intersect(literal, w7).dim
        characterized["W6"] = _intersect_complement(cs, literal, w7)

    rem = cs.complement(subspace_sum(*characterized.values()))
    blocks = {}
    for label, allowed in _BLOCK_TYPES.items():
        blocks[label] = _restrict_by_types(cs, rem, allowed, s)
    if s.dim == 4:
        blocks["W2"] = blocks.pop("W2+W5")

    order = ["W1+W4", "W2", "W2+W5", "W3", "W6", "W7", "W8", "W9", "W10"]
    pool = characterized | blocks
    for label in order:
        if label in pool:
            modules[label] = pool[label]
            mult[label] = 2 if "+" in label else 1

    table = ModuleTable(s, modules, mult, notes=notes)
    _validate(table, sigma)
    return table


def _intersect_complement(cs: CurvatureSpace, sub: Subspace, away: Subspace) -> Subspace:
    """Elements of ``sub`` orthogonal to ``away``."""
    return intersect(sub, cs.complement(away))


def _validate(table: ModuleTable, sigma: int) -> None:
    s = table.structure
    cs = table.space
    mods = table.modules
    checks = table.checks
    labels = list(mods)
    dims = {k: v.dim for k, v in mods.items()}
    checks["dims_sum_to_A"] = sum(dims.values()) == cs.dim
    checks["no_empty_module"] = all(dims.values())
    orth = True
    for i, a in enumerate(labels):
        for b in labels[i + 1 :]:
            if not _gram_block(cs, mods[a], mods[b]).is_zero():
                orth = False
    checks["pairwise_orthogonal"] = orth
    nondeg = True
    for k, m in mods.items():
        if rank(_gram_block(cs, m, m)) != m.dim:
            nondeg = False
    checks["restricted_form_nondegenerate"] = nondeg
    for k in labels:
        others = subspace_sum(*(mods[o] for o in labels if o != k))
        checks[f"{k}_is_complement_of_rest"] = cs.complement(others) == mods[k]

    ed = eigen_dims(s)

    def parts_op(names):
        return lambda t: _keyed(_ricci_parts(t, s), names)

    def tau_op(t):
        rho, star = ricci_sparse(t, s)
        return {
            "tau": trace(Tensor2.from_sparse(s.dim, rho), s),
            "tau_star": trace(Tensor2.from_sparse(s.dim, star), s),
        }

    checks["W1+W4_tau_bijective"] = cs.rank_of(tau_op, mods["W1+W4"]) == 2 == dims["W1+W4"]
    if "W2" in mods:
        r = cs.rank_of(parts_op(["rho.sym_0"]), mods["W2"])
        checks["W2_rho_bijective"] = r == ed["sym_0"] == dims["W2"]
    else:
        r = cs.rank_of(parts_op(["rho.sym_0", "star.sym_0"]), mods["W2+W5"])
        checks["W2+W5_rho_bijective"] = r == 2 * ed["sym_0"] == dims["W2+W5"]
    r = cs.rank_of(parts_op(["rho.sym_opp"]), mods["W8"])
    checks["W8_rho_bijective"] = r == ed["sym_opp"] == dims["W8"]
    r = cs.rank_of(parts_op(["star.alt_opp"]), mods["W9"])
    checks["W9_star_bijective"] = r == ed["alt_opp"] == dims["W9"]
    # Ricci data of the characterized modules vanishes where the characterizations say so.
    for k in ("W6", "W10"):
        if k in mods:
            checks[f"{k}_ricci_free"] = cs.rank_of(lambda t: ricci_all_parts(t, s), mods[k]) == 0
    checks["W3_rho_free"] = cs.rank_of(lambda t: ricci_sparse(t, s)[0], mods["W3"]) == 0
    if s.kind is Kind.PARA:
        gk = gray_kernel_coords(s)
        rest = subspace_sum(*(mods[o] for o in labels if o != "W7"))
        checks["gray_kernel_is_sum_without_W7"] = rest == gk


def ricci_all_parts(t: SparseTensor, s: Structure) -> dict:
    rho, star = ricci_sparse(t, s)
    return {("r",) + k: v for k, v in rho.items()} | {("s",) + k: v for k, v in star.items()}


# ---------------------------------------------------------------------------
# Projections


def _coords_of(cs: CurvatureSpace, a: Tensor4) -> list[Scalar]:
    return list(cs.coords(a))


def component_in(a: Tensor4, label: str, table: ModuleTable) -> Tensor4:
    """Orthogonal projection of ``a`` onto the labeled module."""
    if label not in table.modules:
        raise LabelAbsent(f"module {label!r} is not present at dim {table.structure.dim}")
    cs = table.space
    m = table.modules[label]
    gm = _gram_block(cs, m, m)
    try:
        ginv = inverse(gm)
    except SingularForm as exc:
        raise DegenerateRestriction(f"inner product degenerates on {label}") from exc
    x = _coords_of(cs, a)
    g = cs.gram.rows
    # pairings <b_i, a>
    pair = []
    for r in m.rows:
        total = ZERO
        for i, u in r:
            gi = g[i]
            for j, v in enumerate(x):
                if v and gi[j]:
                    total = total + u * gi[j] * v
        pair.append(total)
    coeffs = [sum((ginv.rows[i][j] * pair[j] for j in range(m.dim)), ZERO) for i in range(m.dim)]
    out = [ZERO] * cs.dim
    for c, r in zip(coeffs, m.rows):
        if c:
            for k, v in r:
                out[k] = out[k] + c * v
    return cs.tensor(out)


def decompose_curvature(a: Tensor4, table: ModuleTable) -> dict[str, Tensor4]:
    return {label: component_in(a, label, table) for label in table.modules}

