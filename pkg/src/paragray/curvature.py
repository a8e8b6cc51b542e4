"""Algebraic curvature tensors and the space they span.

Sign convention: ``R(x, y, z, w) = <R(x, y) z, w>``.
"""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property, lru_cache
from itertools import product
from typing import Callable, Hashable, Mapping, Sequence

from .errors import DimensionMismatch, ParseError
from .exactnum import ONE, ZERO, Echelon, Matrix, Scalar, Subspace, kernel, orthogonal_complement, rational
from .model import Structure
from .tensors import Tensor4, flat_index, pull_sparse, unflat_index

SparseTensor = dict  # index tuple -> scalar


def is_algebraic_curvature(t: Tensor4) -> bool:
    """Antisymmetry in the first pair, pair symmetry and the first Bianchi identity."""
    if t != -t.reindex("yxzw"):
        return False
    if t != t.reindex("zwxy"):
        return False
    return (t + t.reindex("yzxw") + t.reindex("zxyw")).is_zero()


def curvature_dimension(dim: int) -> int:
    """Closed-form ``N^2 (N^2 - 1) / 12``; an oracle independent of elimination."""
    return dim * dim * (dim * dim - 1) // 12


def _curvature_constraints(dim: int) -> list[dict[int, Scalar]]:
    def f(*idx):
        return flat_index(idx, dim)

    one, minus = ONE, -ONE
    rows: list[dict[int, Scalar]] = []
    idx4 = list(product(range(dim), repeat=4))
    for a, b, c, d in idx4:
        if a == b:
            rows.append({f(a, b, c, d): one})
        else:
            rows.append({f(a, b, c, d): one, f(b, a, c, d): one})
    for a, b, c, d in idx4:
        i, j = f(a, b, c, d), f(c, d, a, b)
        if i != j:
            rows.append({i: one, j: minus})
    for a, b, c, d in idx4:
        row: dict[int, Scalar] = defaultdict(lambda: ZERO)
        for key in (f(a, b, c, d), f(b, c, a, d), f(c, a, b, d)):
            row[key] += one
        rows.append({k: v for k, v in row.items() if v})
    return rows


@lru_cache(maxsize=None)
def _curvature_subspace(dim: int) -> Subspace:
    return kernel(_curvature_constraints(dim), dim**4)


def curvature_space(s: Structure) -> Subspace:
    """Echelon basis of the algebraic curvature tensors inside the ``dim^4`` tensor space."""
    return _curvature_subspace(s.dim)


def tensor_inner_product(a: Tensor4, b: Tensor4, s: Structure) -> Scalar:
    """Full contraction of ``a`` with ``b`` using the inverse form on every slot."""
    if a.dim != b.dim or a.dim != s.dim:
        raise DimensionMismatch("tensor and structure dimensions differ")
    return sparse_inner(a.to_sparse(), raise_all(b.to_sparse(), s))


def raise_all(t: Mapping[tuple, Scalar], s: Structure) -> SparseTensor:
    inv = s.inverse_form
    return pull_sparse(t, [inv] * 4)


def sparse_inner(a: Mapping[tuple, Scalar], b: Mapping[tuple, Scalar]) -> Scalar:
    if len(a) > len(b):
        a, b = b, a
    total = ZERO
    for k, v in a.items():
        w = b.get(k)
        if w is not None:
            total = total + v * w
    return total


class CurvatureSpace:
    """The algebraic curvature tensors of a structure, with a coordinate chart.

    Coordinates of a curvature tensor are its entries at the echelon pivots of
    :func:`curvature_space`; subspaces of curvature tensors are handled in
    these coordinates and embedded back with :meth:`embed`.
    """

    def __init__(self, s: Structure):
        self.structure = s
        self.subspace = curvature_space(s)
        self.N = s.dim
        self.pivot_index = [unflat_index(p, self.N) for p in self.subspace.pivots]
        self.basis: list[SparseTensor] = [
            {unflat_index(c, self.N): v for c, v in row} for row in self.subspace.rows
        ]

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def coords(self, t: Tensor4 | Mapping[tuple, Scalar], check: bool = True) -> tuple[Scalar, ...]:
        sp = t.to_sparse() if isinstance(t, Tensor4) else t
        if check:
            flat = {flat_index(k, self.N): v for k, v in sp.items()}
            return self.subspace.coordinates(flat)
        return tuple(sp.get(k, ZERO) for k in self.pivot_index)

    def sparse(self, coords: Sequence[Scalar]) -> SparseTensor:
        out: SparseTensor = {}
        for c, b in zip(coords, self.basis):
            if c:
                for k, v in b.items():
                    w = out.get(k, ZERO) + c * v
                    if w:
                        out[k] = w
                    else:
                        out.pop(k, None)
        return out

    def tensor(self, coords: Sequence[Scalar]) -> Tensor4:
        if len(coords) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates")
        return Tensor4.from_sparse(self.N, self.sparse(coords))

    def basis_tensor(self, k: int) -> Tensor4:
        return Tensor4.from_sparse(self.N, self.basis[k])

    @cached_property
    def _raised(self) -> list[SparseTensor]:
        return [raise_all(b, self.structure) for b in self.basis]

    @cached_property
    def gram(self) -> Matrix:
        """Gram matrix of the tensor inner product on the echelon basis."""
        index: dict[tuple, list[tuple[int, Scalar]]] = defaultdict(list)
        for l, r in enumerate(self._raised):
            for k, v in r.items():
                index[k].append((l, v))
        rows = []
        for b in self.basis:
            row = [ZERO] * self.dim
            for k, v in b.items():
                for l, w in index.get(k, ()):
                    row[l] = row[l] + v * w
            rows.append(tuple(row))
        return Matrix(tuple(rows), self.dim)

    def pairing(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        g = self.gram
        total = ZERO
        for i, a in enumerate(x):
            if a:
                row = g.rows[i]
                for j, b in enumerate(y):
                    if b and row[j]:
                        total = total + a * row[j] * b
        return total

    def linear_rows(self, op: Callable[[SparseTensor], Mapping[Hashable, Scalar]]) -> list[dict[int, Scalar]]:
        """Rows (one per output key) of the matrix of ``op`` on the basis."""
        by_key: dict[Hashable, dict[int, Scalar]] = defaultdict(dict)
        for k, b in enumerate(self.basis):
            for key, v in op(b).items():
                if v:
                    by_key[key][k] = v
        return list(by_key.values())

    def kernel(self, op: Callable[[SparseTensor], Mapping[Hashable, Scalar]]) -> Subspace:
        """``{A : op(A) = 0}`` in coordinates; ``op`` must be linear."""
        return kernel(self.linear_rows(op), self.dim)

    def complement(self, sub: Subspace) -> Subspace:
        """Orthogonal complement in coordinates, under the tensor inner product."""
        return orthogonal_complement(sub, self.gram, check=False)

    def embed(self, sub: Subspace) -> Subspace:
        return self.subspace.embed(sub)

    def restrict(self, sub: Subspace) -> Subspace:
        return self.subspace.restrict(sub)

    def rank_of(self, op: Callable[[SparseTensor], Mapping[Hashable, Scalar]], sub: Subspace) -> int:
        """Rank of ``op`` restricted to the coordinate subspace ``sub``."""
        ech = Echelon()
        keys: dict[Hashable, int] = {}
        for row in sub.rows:
            image = op(self.sparse(_dense(row, self.dim)))
            ech.add({keys.setdefault(k, len(keys)): v for k, v in image.items() if v})
        return len(ech)

    def vectors(self, sub: Subspace) -> list[SparseTensor]:
        """Sparse tensors spanning a coordinate subspace."""
        return [self.sparse(_dense(row, self.dim)) for row in sub.rows]


def _dense(row, n: int) -> list[Scalar]:
    coords = [ZERO] * n
    for c, v in row:
        coords[c] = v
    return coords


@lru_cache(maxsize=None)
def curvature_model(s: Structure) -> CurvatureSpace:
    """Cached :class:`CurvatureSpace` for a structure."""
    return CurvatureSpace(s)


# ---------------------------------------------------------------------------
# Text tensor format: "a b c d p/q" with 1-based indices, zeros omitted.


def format_tensor(t: Tensor4) -> str:
    lines = []
    for idx, v in sorted(t.to_sparse().items()):
        lines.append(" ".join(str(i + 1) for i in idx) + f" {v}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_tensor(text: str, dim: int) -> Tensor4:
    entries: dict[tuple, Scalar] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParseError(f"expected 'a b c d value', got {raw!r}", lineno)
        try:
            idx = tuple(int(p) - 1 for p in parts[:4])
        except ValueError:
            raise ParseError(f"bad index in {raw!r}", lineno) from None
        if any(not 0 <= i < dim for i in idx):
            raise ParseError(f"index out of range 1..{dim} in {raw!r}", lineno)
        try:
            value = rational(parts[4])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {parts[4]!r}", lineno) from None
        if idx in entries:
            raise ParseError(f"duplicate entry {' '.join(parts[:4])}", lineno)
        entries[idx] = value
    return Tensor4.from_sparse(dim, entries)
