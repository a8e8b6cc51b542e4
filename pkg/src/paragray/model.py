"""(Para-)Hermitian structures ``(V, <.,.>, J)`` and their standard bases."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .exactnum import Matrix, det, inertia, inverse
from .tensors import Tensor2


class Kind(str, enum.Enum):
    HERMITIAN = "hermitian"
    PARA = "para-hermitian"

    @property
    def sign(self) -> int:
        """``J^2 = -Id`` and ``J*form = form`` give -1/+1 (Hermitian);
        ``J^2 = Id`` and ``J*form = -form`` give +1/-1 (para).

        The returned value is the eigenvalue of ``J*`` on the form.
        """
        return 1 if self is Kind.HERMITIAN else -1


@dataclass(frozen=True)
class Structure:
    """A vector space with a nondegenerate symmetric form and compatible ``J``.

    Basis order is ``e_1..e_n, f_1..f_n``; ``J`` acts on column vectors, so
    column ``a`` of ``J`` holds the coordinates of ``J e_a``.
    """

    dim: int
    form: Matrix
    J: Matrix
    kind: Kind

    @property
    def n(self) -> int:
        return self.dim // 2

    @cached_property
    def inverse_form(self) -> Matrix:
        return inverse(self.form)

    @property
    def form_sign(self) -> int:
        return self.kind.sign

    def pull_two(self, theta: Tensor2) -> Tensor2:
        """``J*theta``, i.e. ``(x, y) -> theta(Jx, Jy)``."""
        return theta.pullback([self.J, self.J])

    def label(self, a: int) -> str:
        """Coordinate name of basis index ``a`` (``x1..xn`` then ``y1..yn``)."""
        return f"x{a + 1}" if a < self.n else f"y{a - self.n + 1}"

    def index(self, name: str) -> int:
        letter, num = name[0], int(name[1:])
        if letter not in "xy" or not 1 <= num <= self.n:
            raise ValueError(f"bad coordinate name {name!r}")
        return num - 1 if letter == "x" else self.n + num - 1

    def describe(self) -> dict:
        return {
            "dim": self.dim,
            "kind": self.kind.value,
            "form": [[str(v) for v in row] for row in self.form.rows],
            "J": [[str(v) for v in row] for row in self.J.rows],
        }


def _swap_matrix(n: int, sign_back: int) -> Matrix:
    """``J e_i = f_i`` and ``J f_i = sign_back * e_i``."""
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[n + i][i] = 1
        rows[i][n + i] = sign_back
    return Matrix.from_rows(rows)


def standard_para_hermitian(n: int) -> Structure:
    """Neutral form ``diag(-1..-1, +1..+1)`` with ``J`` swapping ``e_i`` and ``f_i``."""
    if n < 1:
        raise ValueError("n must be positive")
    form = Matrix.diag([-1] * n + [1] * n)
    return Structure(2 * n, form, _swap_matrix(n, 1), Kind.PARA)


def standard_hermitian(p: int, q: int) -> Structure:
    """Hermitian structure of signature ``(2p, 2q)``; ``J e_i = f_i``, ``J f_i = -e_i``.

    The first ``p`` complex lines ``span(e_i, f_i)`` are timelike.
    """
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("need p, q >= 0 and p + q >= 1")
    n = p + q
    signs = [-1] * p + [1] * q
    return Structure(2 * n, Matrix.diag(signs + signs), _swap_matrix(n, -1), Kind.HERMITIAN)


def validate(s: Structure) -> list[str]:
    """Every violated structure invariant, as a human-readable message."""
    problems: list[str] = []
    if s.dim <= 0 or s.dim % 2:
        problems.append(f"dimension {s.dim} is not a positive even integer")
    if s.form.shape != (s.dim, s.dim):
        problems.append(f"form has shape {s.form.shape}, expected {(s.dim, s.dim)}")
        return problems
    if s.J.shape != (s.dim, s.dim):
        problems.append(f"J has shape {s.J.shape}, expected {(s.dim, s.dim)}")
        return problems
    if not s.form.is_symmetric():
        problems.append("form is not symmetric")
    if not det(s.form):
        problems.append("form is degenerate")
    ident = Matrix.identity(s.dim)
    sign = s.kind.sign
    jj = s.J @ s.J
    if s.kind is Kind.PARA and jj != ident:
        problems.append("J^2 != Id")
    if s.kind is Kind.HERMITIAN and jj != -ident:
        problems.append("J^2 != -Id")
    pulled = s.J.T @ s.form @ s.J
    if pulled != s.form.scale(sign):
        problems.append("J*form != form" if sign > 0 else "J*form != -form")
    if s.kind is Kind.PARA and s.form.is_symmetric() and not problems:
        neg, zero, pos = inertia(s.form)
        if (neg, pos) != (s.n, s.n):
            problems.append(f"form signature ({neg},{pos}) is not neutral")
    return problems


def kaehler_form(s: Structure) -> Tensor2:
    """``Omega(x, y) = <x, J y>``."""
    return Tensor2.from_matrix(s.form @ s.J)
