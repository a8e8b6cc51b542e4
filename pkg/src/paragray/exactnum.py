"""Exact scalars and sparse exact linear algebra over Q and Q(i).

Rationals are ``gmpy2.mpq`` values (always normalized, positive
denominator).  ``GaussRational`` adjoins a formal square root of -1.
All elimination is done on sparse rows (``dict[int, scalar]``) and keeps
the echelon form fully reduced at every step, so the output is the
canonical reduced row-echelon form of the input row space.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

from .errors import DimensionMismatch, Inconsistent, SingularForm

Rational = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


class GaussRational:
    """A number ``re + im*i`` with rational parts and ``i*i == -1``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rational(re)
        self.im = rational(im)

    @classmethod
    def of(cls, x) -> GaussRational:
        if isinstance(x, GaussRational):
            return x
        return cls(x, 0)

    def conjugate(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __add__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational, Fraction)):
            return GaussRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational, Fraction)):
            return GaussRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Rational, Fraction)):
            return GaussRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return GaussRational(self.re / other, self.im / other)
        if isinstance(other, GaussRational):
            n = other.norm()
            if not n:
                raise ZeroDivisionError("division by zero")
            return self * other.conjugate() * (ONE / n)
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussRational.of(other) / self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[Rational, GaussRational]


def rational(x) -> Rational:
    """Coerce ints, ``Fraction``, ``mpq`` and ``"p/q"`` strings to ``mpq``."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        try:
            return mpq(x.strip())
        except ValueError as exc:
            raise ValueError(f"not a rational: {x!r}") from exc
    if isinstance(x, GaussRational):
        if x.im:
            raise ValueError(f"not a rational: {x}")
        return x.re
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def scalar(x) -> Scalar:
    """Coerce to ``mpq`` unless already a ``GaussRational``."""
    if isinstance(x, GaussRational):
        return x
    return rational(x)


I = GaussRational(0, 1)


def format_scalar(x) -> str:
    """Render as ``p/q`` (``p`` for integers)."""
    return str(x)


# ---------------------------------------------------------------------------
# Dense matrices


@dataclass(frozen=True)
class Matrix:
    """Small dense matrix with exact entries, stored row-major."""

    rows: tuple[tuple[Scalar, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], ncols: int | None = None) -> Matrix:
        data = tuple(tuple(scalar(v) for v in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise DimensionMismatch("ragged matrix rows")
        return cls(data, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> Matrix:
        ncols = nrows if ncols is None else ncols
        return cls(tuple((ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values: Sequence) -> Matrix:
        n = len(values)
        vals = [scalar(v) for v in values]
        return cls(tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> tuple[Scalar, ...]:
        return tuple(v for row in self.rows for v in row)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> Matrix:
        return Matrix(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T.rows
        out = []
        for row in self.rows:
            nz = [(k, v) for k, v in enumerate(row) if v]
            out.append(tuple(_dot_nz(nz, col) for col in cols))
        return Matrix(tuple(out), other.ncols)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> Matrix:
        c = scalar(c)
        return Matrix(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def _check_same(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} != {other.shape}")

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def is_zero(self) -> bool:
        return not any(v for row in self.rows for v in row)

    def sparse_rows(self) -> list[dict[int, Scalar]]:
        return [{j: v for j, v in enumerate(row) if v} for row in self.rows]

    def det(self) -> Scalar:
        return det(self)

    def inverse(self) -> Matrix:
        return inverse(self)

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self.rows]


def _dot_nz(nz, col):
    s = ZERO
    for k, v in nz:
        w = col[k]
        if w:
            s = s + v * w
    return s


def det(m: Matrix) -> Scalar:
    """Determinant by exact Gaussian elimination."""
    if not m.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    a = [list(r) for r in m.rows]
    n = len(a)
    sign = 1
    result = ONE
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return ZERO
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        piv = a[k][k]
        result = result * piv
        inv = ONE / piv
        for i in range(k + 1, n):
            f = a[i][k]
            if f:
                f = f * inv
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    if row_k[j]:
                        row_i[j] = row_i[j] - f * row_k[j]
    return result if sign > 0 else -result


def inverse(m: Matrix) -> Matrix:
    """Inverse by Gauss-Jordan elimination; raises ``SingularForm``."""
    if not m.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.nrows
    a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.rows)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            raise SingularForm("matrix is singular")
        a[k], a[p] = a[p], a[k]
        inv = ONE / a[k][k]
        a[k] = [v * inv for v in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return Matrix(tuple(tuple(r[n:]) for r in a), n)


def inertia(form: Matrix) -> tuple[int, int, int]:
    """Return ``(negative, zero, positive)`` counts of a symmetric form.

    Diagonalizes by congruence (Sylvester's law of inertia), so the answer is
    exact.
    """
    if not form.is_symmetric():
        raise ValueError("inertia requires a symmetric matrix")
    a = [list(r) for r in form.rows]
    n = len(a)
    diag: list = []
    k = 0
    while k < n:
        if not a[k][k]:
            j = next((j for j in range(k + 1, n) if a[j][j]), None)
            if j is not None:
                _swap_sym(a, k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j]), None)
                if j is None:
                    diag.append(ZERO)
                    k += 1
                    continue
                # row/col k += row/col j makes the pivot 2*a[k][j] != 0
                for i in range(n):
                    a[k][i] = a[k][i] + a[j][i]
                for i in range(n):
                    a[i][k] = a[i][k] + a[i][j]
        piv = a[k][k]
        diag.append(piv)
        for i in range(k + 1, n):
            f = a[i][k]
            if f:
                f = f / piv
                for j in range(k, n):
                    a[i][j] = a[i][j] - f * a[k][j]
        for i in range(k + 1, n):
            a[i][k] = ZERO
            a[k][i] = ZERO
        k += 1
    neg = sum(1 for d in diag if d < 0)
    pos = sum(1 for d in diag if d > 0)
    return neg, n - neg - pos, pos


def _swap_sym(a, i, j):
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]


# ---------------------------------------------------------------------------
# Sparse reduced echelon form


SparseVec = dict


def axpy(dst: dict, f, src: Mapping) -> None:
    """In place ``dst += f * src``; exact zeros are dropped."""
    for c, v in src.items():
        w = dst.get(c)
        if w is None:
            dst[c] = f * v
        else:
            w = w + f * v
            if w:
                dst[c] = w
            else:
                del dst[c]


class Echelon:
    """Incrementally maintained reduced row-echelon form.

    Each stored row has its pivot at its leftmost column with value 1, and
    no other stored row has a nonzero entry in that column.  Choosing the
    leftmost column of every new row as its pivot keeps the form canonical
    after every insertion.
    """

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self.rows: dict[int, dict] = {}
        self._occ: dict[int, set[int]] = defaultdict(set)
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        r = {c: v for c, v in vec.items() if v}
        for c in [c for c in r if c in self.rows]:
            axpy(r, -r[c], self.rows[c])
        return r

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; return ``False`` if it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        lead = r[p]
        if lead != 1:
            inv = ONE / lead if not isinstance(lead, GaussRational) else GaussRational(1) / lead
            r = {c: v * inv for c, v in r.items()}
        for q in self._occ.pop(p, ()):
            row = self.rows[q]
            f = -row[p]
            for c, v in r.items():
                w = row.get(c)
                if w is None:
                    row[c] = f * v
                    self._occ[c].add(q)
                else:
                    w = w + f * v
                    if w:
                        row[c] = w
                    else:
                        del row[c]
                        if c != p:
                            self._occ[c].discard(q)
        self.rows[p] = r
        for c in r:
            if c != p:
                self._occ[c].add(p)
        return True

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def kernel_vectors(self, ncols: int) -> list[dict]:
        """Null-space basis of the stored rows viewed as a linear system."""
        out = []
        for f in range(ncols):
            if f in self.rows:
                continue
            v = {f: ONE}
            for q in self._occ.get(f, ()):
                v[q] = -self.rows[q][f]
            out.append(v)
        return out


# ---------------------------------------------------------------------------
# Subspaces


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of ``K^ambient_dim`` in canonical echelon form.

    ``rows`` holds the reduced row-echelon basis, each row a sorted tuple of
    ``(column, value)`` pairs.  Two subspaces are equal iff their ``rows``
    coincide.
    """

    ambient_dim: int
    rows: tuple[tuple[tuple[int, Scalar], ...], ...]

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable) -> Subspace:
        ech = Echelon(_as_sparse(v) for v in vectors)
        return cls._from_echelon(ambient_dim, ech)

    @classmethod
    def _from_echelon(cls, ambient_dim: int, ech: Echelon) -> Subspace:
        rows = tuple(tuple(sorted(ech.rows[p].items())) for p in ech.pivots)
        for row in rows:
            if row and row[-1][0] >= ambient_dim:
                raise DimensionMismatch("vector index outside the ambient space")
        return cls(ambient_dim, rows)

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, tuple(((i, ONE),) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(r[0][0] for r in self.rows)

    @property
    def basis(self) -> Matrix:
        dense = []
        for row in self.rows:
            line = [ZERO] * self.ambient_dim
            for c, v in row:
                line[c] = v
            dense.append(tuple(line))
        return Matrix(tuple(dense), self.ambient_dim)

    def vectors(self) -> list[dict]:
        return [dict(r) for r in self.rows]

    @cached_property
    def _echelon(self) -> Echelon:
        return Echelon(self.vectors())

    def residual(self, v) -> dict:
        """``v`` minus its echelon reduction; zero iff ``v`` is in the span."""
        return self._echelon.reduce(_as_sparse(v))

    def contains(self, v) -> bool:
        return not self.residual(v)

    def coordinates(self, v) -> tuple[Scalar, ...]:
        """Coefficients of ``v`` against ``rows`` (its entries at the pivots)."""
        sv = _as_sparse(v)
        if self.residual(sv):
            raise ValueError("vector does not lie in the subspace")
        return tuple(sv.get(p, ZERO) for p in self.pivots)

    def lift(self, coords: Sequence) -> dict:
        if len(coords) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(coords)}")
        out: dict = {}
        for c, row in zip(coords, self.rows):
            if c:
                axpy(out, c, dict(row))
        return out

    def embed(self, sub: Subspace) -> Subspace:
        """Map a subspace given in this subspace's coordinates to the ambient space.

        Because vectors in the row space of an echelon basis lead at a pivot,
        lifting a canonical coordinate basis yields the canonical ambient one.
        """
        if sub.ambient_dim != self.dim:
            raise DimensionMismatch("coordinate subspace has the wrong ambient dimension")
        rows = []
        for row in sub.rows:
            coords = [ZERO] * self.dim
            for c, v in row:
                coords[c] = v
            rows.append(tuple(sorted(self.lift(coords).items())))
        return Subspace(self.ambient_dim, tuple(rows))

    def restrict(self, sub: Subspace) -> Subspace:
        """Inverse of ``embed``: express an ambient subspace of ``self`` in coordinates."""
        if sub.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace.from_vectors(
            self.dim, (dict(enumerate(self.coordinates(dict(r)))) for r in sub.rows)
        )


def _as_sparse(v) -> dict:
    if isinstance(v, Mapping):
        return {c: scalar(x) for c, x in v.items() if x}
    return {i: scalar(x) for i, x in enumerate(v) if x}


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


def rank(m: Matrix | Sequence[Mapping]) -> int:
    """Dimension of the row space."""
    rows = m.sparse_rows() if isinstance(m, Matrix) else m
    return len(Echelon(rows))


def kernel(m: Matrix, ncols: int | None = None) -> Subspace:
    """Null space ``{v : m v = 0}``.

    ``m`` may also be a list of sparse rows, in which case ``ncols`` is
    required.
    """
    if isinstance(m, Matrix):
        rows, ncols = m.sparse_rows(), m.ncols
    else:
        if ncols is None:
            raise ValueError("ncols is required for sparse rows")
        rows = m
    ech = Echelon(rows)
    return Subspace.from_vectors(ncols, ech.kernel_vectors(ncols))


def solve(m: Matrix, b: Sequence) -> tuple[Scalar, ...]:
    """One solution of ``m x = b`` (free variables set to zero)."""
    if len(b) != m.nrows:
        raise DimensionMismatch("right-hand side length differs from row count")
    n = m.ncols
    aug = []
    for row, rhs in zip(m.sparse_rows(), b):
        rhs = scalar(rhs)
        if rhs:
            row = dict(row)
            row[n] = rhs
        aug.append(row)
    ech = Echelon(aug)
    if n in ech.rows:
        raise Inconsistent("linear system has no solution")
    x = [ZERO] * n
    for p, row in ech.rows.items():
        if n in row:
            x[p] = row[n]
    return tuple(x)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    _check_ambient(a, b)
    return a.rows == b.rows


def subspace_sum(first: Subspace, *rest: Subspace) -> Subspace:
    vecs = list(first.vectors())
    for b in rest:
        _check_ambient(first, b)
        vecs += b.vectors()
    return Subspace.from_vectors(first.ambient_dim, vecs)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """``a ∩ b`` via the kernel of the residual map of ``a`` modulo ``b``."""
    _check_ambient(a, b)
    if a.dim > b.dim:
        a, b = b, a
    residuals = [b.residual(v) for v in a.vectors()]
    by_col: dict[int, dict] = defaultdict(dict)
    for i, r in enumerate(residuals):
        for c, v in r.items():
            by_col[c][i] = v
    null = Echelon(by_col.values()).kernel_vectors(a.dim)
    avecs = a.vectors()
    out = []
    for alpha in null:
        x: dict = {}
        for i, c in alpha.items():
            axpy(x, c, avecs[i])
        out.append(x)
    return Subspace.from_vectors(a.ambient_dim, out)


def contains(a: Subspace, v) -> bool:
    return a.contains(v)


def orthogonal_complement(s: Subspace, form: Matrix, check: bool = True) -> Subspace:
    """``{v : form(v, w) = 0 for all w in s}``.

    Raises ``SingularForm`` when ``form`` is degenerate.  The dimension of the
    result is always ``ambient_dim - s.dim``; for indefinite forms the result
    may meet ``s``.
    """
    n = s.ambient_dim
    if form.shape != (n, n):
        raise DimensionMismatch(f"form has shape {form.shape}, ambient dimension is {n}")
    frows = form.sparse_rows()
    if check:
        if not form.is_symmetric():
            raise SingularForm("form is not symmetric")
        if rank(frows) != n:
            raise SingularForm("form is degenerate")
    eqs = []
    for row in s.rows:
        w: dict = {}
        for k, v in row:
            axpy(w, v, frows[k])
        eqs.append(w)
    return kernel(eqs, n)
