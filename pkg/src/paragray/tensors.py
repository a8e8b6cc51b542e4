"""Dense covariant 2- and 4-tensors with exact entries.

Entries live in read-only numpy object arrays.  Bulk linear algebra
elsewhere in the package uses the sparse view (``dict`` from index tuple to
value) produced by :meth:`to_sparse`.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch
from .exactnum import ZERO, GaussRational, Matrix, Scalar, scalar

_LETTERS = "abcdefgh"


class _Tensor:
    rank: int = 0

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=object)
        if arr.ndim != self.rank or len(set(arr.shape)) != 1:
            raise DimensionMismatch(f"expected a {self.rank}-index array with equal sides, got shape {arr.shape}")
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = scalar(v)
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray):
        obj = cls.__new__(cls)
        arr = np.array(arr, dtype=object)
        arr.flags.writeable = False
        obj._data = arr
        return obj

    @classmethod
    def zeros(cls, dim: int):
        arr = np.empty((dim,) * cls.rank, dtype=object)
        arr.fill(ZERO)
        return cls._wrap(arr)

    @classmethod
    def from_sparse(cls, dim: int, entries: Mapping[tuple, Scalar]):
        arr = np.empty((dim,) * cls.rank, dtype=object)
        arr.fill(ZERO)
        for idx, v in entries.items():
            arr[idx] = scalar(v)
        return cls._wrap(arr)

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._data

    def __getitem__(self, idx):
        return self._data[idx]

    def to_sparse(self) -> dict[tuple, Scalar]:
        return {idx: v for idx, v in np.ndenumerate(self._data) if v}

    def nonzero_count(self) -> int:
        return sum(1 for v in self._data.flat if v)

    def is_zero(self) -> bool:
        return not any(v for v in self._data.flat)

    def is_real(self) -> bool:
        return not any(isinstance(v, GaussRational) and v.im for v in self._data.flat)

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other):
        self._check(other)
        return self._wrap(self._data + other._data)

    def __sub__(self, other):
        self._check(other)
        return self._wrap(self._data - other._data)

    def __neg__(self):
        return self._wrap(-self._data)

    def __mul__(self, c):
        c = scalar(c)
        return self._wrap(self._data * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self) or other.dim != self.dim:
            return NotImplemented
        return all(a == b for a, b in zip(self._data.flat, other._data.flat))

    __hash__ = None

    def reindex(self, pattern: str):
        """Permute slots: ``t.reindex("yzxw")`` is ``(x,y,z,w) -> t(y,z,x,w)``.

        ``pattern`` spells the original argument list in terms of the new
        argument names, which are taken in sorted order of first use in
        ``"xyzw"`` (rank 4) or ``"xy"`` (rank 2).
        """
        names = "xyzw" if self.rank == 4 else "xy"
        return self._wrap(np.einsum(f"{pattern}->{names}", self._data))

    def pullback(self, mats: Sequence[Matrix | None]):
        """``(x, y, ...) -> t(M0 x, M1 y, ...)``; ``None`` leaves a slot alone."""
        if len(mats) != self.rank:
            raise DimensionMismatch(f"need {self.rank} matrices")
        return self._wrap(pull_dense(self._data, mats))

    def map_entries(self, fn):
        out = np.empty(self._data.shape, dtype=object)
        for idx, v in np.ndenumerate(self._data):
            out[idx] = fn(v)
        return self._wrap(out)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, nonzero={self.nonzero_count()})"


class Tensor2(_Tensor):
    rank = 2
    __slots__ = ()

    @classmethod
    def from_matrix(cls, m: Matrix) -> Tensor2:
        return cls(m.tolist())

    def to_matrix(self) -> Matrix:
        return Matrix(tuple(tuple(r) for r in self._data.tolist()), self.dim)

    @property
    def T(self) -> Tensor2:
        return self._wrap(self._data.T)

    def symmetric_part(self) -> Tensor2:
        return self._wrap((self._data + self._data.T) * scalar("1/2"))

    def antisymmetric_part(self) -> Tensor2:
        return self._wrap((self._data - self._data.T) * scalar("1/2"))

    def is_symmetric(self) -> bool:
        return self == self.T

    def is_antisymmetric(self) -> bool:
        return self == -self.T

    def tensor(self, other: Tensor2) -> Tensor4:
        """Outer product ``(x,y,z,w) -> self(x,y) other(z,w)``."""
        return Tensor4._wrap(np.multiply.outer(self._data, other._data))


class Tensor4(_Tensor):
    rank = 4
    __slots__ = ()


def slot_columns(m: Matrix) -> list[list[tuple[int, Scalar]]]:
    """For each input index ``i``, the pairs ``(j, m[i, j])`` with ``m[i, j] != 0``.

    Pulling back slot ``j`` by ``m`` gives ``t'(.., e_j, ..) = sum_i m[i, j] t(.., e_i, ..)``,
    so an entry of ``t`` at index ``i`` feeds outputs ``j`` with weight ``m[i, j]``.
    """
    return [[(j, v) for j, v in enumerate(row) if v] for row in m.rows]


def pull_sparse(entries: Mapping[tuple, Scalar], mats: Sequence[Matrix | None]) -> dict[tuple, Scalar]:
    """Sparse pullback ``t'(x0, x1, ...) = t(M0 x0, M1 x1, ...)``."""
    cols = [None if m is None else slot_columns(m) for m in mats]
    out: dict[tuple, Scalar] = {}
    for idx, v in entries.items():
        partial = [((), v)]
        for slot, i in enumerate(idx):
            if cols[slot] is None:
                partial = [(k + (i,), w) for k, w in partial]
            else:
                partial = [(k + (j,), w * c) for k, w in partial for j, c in cols[slot][i]]
        for k, w in partial:
            prev = out.get(k)
            w = w if prev is None else prev + w
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def signed_permutation(m: Matrix) -> tuple[list[int], list[Scalar]] | None:
    """``(perm, signs)`` with ``m e_j = signs[j] e_perm[j]``, or ``None``."""
    perm, signs = [], []
    for j in range(m.ncols):
        nz = [(i, m.rows[i][j]) for i in range(len(m.rows)) if m.rows[i][j]]
        if len(nz) != 1:
            return None
        perm.append(nz[0][0])
        signs.append(nz[0][1])
    return perm, signs


def pull_dense(arr: np.ndarray, mats: Sequence[Matrix | None]) -> np.ndarray:
    """Dense pullback of an object array, one slot at a time.

    Signed permutation matrices (such as the standard ``J``) reduce to
    index selection; other matrices use a contraction.
    """
    out = arr
    for slot, m in enumerate(mats):
        if m is None:
            continue
        sp = signed_permutation(m)
        if sp is not None:
            perm, signs = sp
            out = np.take(out, perm, axis=slot)
            if any(v != 1 for v in signs):
                shape = [1] * out.ndim
                shape[slot] = len(signs)
                out = out * np.array(signs, dtype=object).reshape(shape)
        else:
            mat = np.array(m.rows, dtype=object)
            out = np.moveaxis(np.tensordot(out, mat, axes=([slot], [0])), -1, slot)
    return out


def add_sparse(dst: dict, src: Mapping, factor=1) -> dict:
    """In place ``dst += factor * src`` for sparse tensors."""
    for k, v in src.items():
        prev = dst.get(k)
        w = factor * v if prev is None else prev + factor * v
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)
    return dst


def flat_index(idx: tuple[int, ...], dim: int) -> int:
    f = 0
    for i in idx:
        f = f * dim + i
    return f


def unflat_index(f: int, dim: int, rank: int = 4) -> tuple[int, ...]:
    out = []
    for _ in range(rank):
        f, r = divmod(f, dim)
        out.append(r)
    return tuple(reversed(out))
