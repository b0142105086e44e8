"""
Exact rational linear algebra.

Dense matrices over fractions.Fraction and subspaces stored in reduced
row-echelon form. Because the stored basis is canonical, two Subspace
values are equal as sets exactly when they compare equal, which makes
uniqueness checks on maximizers decidable by `==`.

Example:
    ```python
    from diophantine_exponents.algebra.qlinalg import QMatrix, Subspace, kernel, intersect

    m = QMatrix.from_rows([[1, 1]])
    kernel(m)                        # span{(1, -1)}
    a = Subspace.span([[1, 1, 0], [0, 0, 1]], 3)
    b = Subspace.span([[0, 1, 0], [0, 0, 1]], 3)
    intersect(a, b)                  # span{e3}
    ```
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from diophantine_exponents.common.exceptions import DimensionMismatchError, FlagNotNestedError
from diophantine_exponents.common.utils import format_rational, parse_rational

Rational = Fraction
Vector = tuple[Fraction, ...]


def _vec(values: Iterable[Any]) -> Vector:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


# =============================================================================
# Matrices
# =============================================================================


@dataclass(frozen=True)
class QMatrix:
    """Dense row-major rational matrix."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                "entries length must equal rows * cols",
                "qlinalg",
                expected=self.rows * self.cols,
                actual=len(self.entries),
            )

    # --- Construction ---

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: int | None = None) -> "QMatrix":
        rows = [_vec(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatchError("ragged rows", "qlinalg", expected=cols, actual=len(r))
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], rows: int) -> "QMatrix":
        if not columns:
            return cls(rows, 0, ())
        return cls.from_rows([list(r) for r in zip(*columns)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    # --- Access ---

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j :: self.cols] if self.cols else ()

    def row_list(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    # --- Algebra ---

    def transpose(self) -> "QMatrix":
        return QMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        """Matrix-vector product m·v."""
        if len(v) != self.cols:
            raise DimensionMismatchError("vector length mismatch", "qlinalg", expected=self.cols, actual=len(v))
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((self.entries[i * self.cols + j] * x for j, x in nz), Fraction(0)) for i in range(self.rows))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError("inner dimensions differ", "qlinalg", expected=self.cols, actual=other.rows)
        cols = [other.column(j) for j in range(other.cols)]
        return QMatrix.from_columns([self.apply(c) for c in cols], self.rows)

    def stack(self, other: "QMatrix") -> "QMatrix":
        """Vertical concatenation."""
        if self.cols != other.cols:
            raise DimensionMismatchError("column counts differ", "qlinalg", expected=self.cols, actual=other.cols)
        return QMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def select_columns(self, indices: Sequence[int]) -> "QMatrix":
        return QMatrix.from_rows([[r[j] for j in indices] for r in self.row_list()], len(indices))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_numpy(self) -> np.ndarray:
        return np.array([float(x) for x in self.entries], dtype=float).reshape(self.rows, self.cols)

    # --- Serialization ---

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.row_list()]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[Any]], cols: int | None = None) -> "QMatrix":
        return cls.from_rows([[parse_rational(x) for x in r] for r in data], cols)


# =============================================================================
# Row reduction
# =============================================================================


def rref(rows: Sequence[Sequence[Fraction]], cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """
    Reduced row-echelon form of a list of rows.

    Returns:
        (nonzero reduced rows, pivot columns), pivots strictly increasing
    """
    work = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == len(work):
            break
        p = next((i for i in range(r, len(work)) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        lead = work[r][c]
        if lead != 1:
            work[r] = [x / lead for x in work[r]]
        pivot_row = work[r]
        support = [j for j in range(c, cols) if pivot_row[j]]
        for i in range(len(work)):
            if i != r:
                f = work[i][c]
                if f:
                    row_i = work[i]
                    for j in support:
                        row_i[j] -= f * pivot_row[j]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank(m: QMatrix) -> int:
    """Row rank over the rationals, computed exactly."""
    return len(rref(m.row_list(), m.cols)[1])


# =============================================================================
# Subspaces
# =============================================================================


@dataclass(frozen=True)
class Subspace:
    """
    Rational subspace of Q^n with canonical RREF row basis.

    Construct through `Subspace.span` (or the helpers below) so the
    basis is always canonical; the raw constructor trusts its input.
    """

    ambient_dim: int
    basis: QMatrix

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Any]], ambient_dim: int) -> "Subspace":
        rows = [_vec(v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise DimensionMismatchError("vector not in ambient space", "qlinalg", expected=ambient_dim, actual=len(v))
        reduced, _ = rref(rows, ambient_dim)
        return cls(ambient_dim, QMatrix.from_rows(reduced, ambient_dim))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, QMatrix(0, n, ()))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, QMatrix.identity(n))

    @classmethod
    def coordinate(cls, indices: Iterable[int], n: int) -> "Subspace":
        """Span of the standard basis vectors e_i, i in indices (0-based)."""
        idx = sorted(set(indices))
        return cls(n, QMatrix.from_rows([[1 if j == i else 0 for j in range(n)] for i in idx], n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[Vector]:
        return self.basis.row_list()

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.vectors()]

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains_vector(self, v: Sequence[Any]) -> bool:
        v = _vec(v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector not in ambient space", "qlinalg", expected=self.ambient_dim, actual=len(v))
        residual = list(v)
        for row, p in zip(self.vectors(), self.pivots()):
            f = residual[p]
            if f:
                residual = [a - f * b for a, b in zip(residual, row)]
        return not any(residual)

    def contains(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(self.contains_vector(v) for v in other.vectors())

    def image(self, m: QMatrix) -> "Subspace":
        """The subspace m(W) of the codomain."""
        if m.cols != self.ambient_dim:
            raise DimensionMismatchError("map domain mismatch", "qlinalg", expected=self.ambient_dim, actual=m.cols)
        return Subspace.span([m.apply(v) for v in self.vectors()], m.rows)

    def annihilator(self) -> "Subspace":
        """Linear equations cutting out this subspace (as row vectors)."""
        return kernel(self.basis) if self.dim else Subspace.full(self.ambient_dim)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def to_json(self) -> dict[str, Any]:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Subspace":
        n = int(data["ambient_dim"])
        return cls.span(QMatrix.from_json(data.get("basis", []), n).row_list(), n)


def _check_ambient(w1: Subspace, w2: Subspace) -> None:
    if w1.ambient_dim != w2.ambient_dim:
        raise DimensionMismatchError(
            "ambient dimensions differ", "qlinalg", expected=w1.ambient_dim, actual=w2.ambient_dim
        )


def kernel(m: QMatrix) -> Subspace:
    """Canonical basis of {v : m v = 0}; dim = cols - rank(m)."""
    reduced, pivots = rref(m.row_list(), m.cols)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return Subspace.span(basis, m.cols)


def intersect(w1: Subspace, w2: Subspace) -> Subspace:
    """Canonical basis of w1 ∩ w2, from the stacked dual equations."""
    _check_ambient(w1, w2)
    if w1.is_zero() or w2.is_zero():
        return Subspace.zero(w1.ambient_dim)
    if w1 == w2:
        return w1
    equations = w1.annihilator().vectors() + w2.annihilator().vectors()
    if not equations:
        return Subspace.full(w1.ambient_dim)
    return kernel(QMatrix.from_rows(equations, w1.ambient_dim))


def subspace_sum(w1: Subspace, w2: Subspace) -> Subspace:
    """Canonical basis of w1 + w2."""
    _check_ambient(w1, w2)
    return Subspace.span(w1.vectors() + w2.vectors(), w1.ambient_dim)


def flag_dims(w: Subspace, flag: Sequence[Subspace]) -> list[int]:
    """
    dim(w ∩ V_i) for each member of an increasing flag ending at the ambient space.

    Raises:
        FlagNotNestedError: If the flag is not increasing or does not end at Q^n
    """
    for i, member in enumerate(flag):
        _check_ambient(w, member)
        if i and not member.contains(flag[i - 1]):
            raise FlagNotNestedError("flag is not increasing", "qlinalg.flag_dims", position=i)
    if flag and flag[-1].dim != w.ambient_dim:
        raise FlagNotNestedError("flag must end at the ambient space", "qlinalg.flag_dims", position=len(flag) - 1)
    return [intersect(w, member).dim for member in flag]


def coordinate_dims(w: Subspace, order: Sequence[int]) -> list[int]:
    """
    dim(w ∩ span(e_{order[0]}, …, e_{order[i-1]})) for i = 0..len(order).

    Equivalent to flag_dims over the coordinate flag, without materializing
    it: the intersection with a coordinate span is the kernel of the
    restriction of w's coordinates outside that span.
    """
    n = w.ambient_dim
    dims = []
    for i in range(len(order) + 1):
        inside = set(order[:i])
        outside = [j for j in range(n) if j not in inside]
        if not w.dim:
            dims.append(0)
            continue
        # rows r of w with coefficient vector c: c·B restricted to outside = 0
        restricted = QMatrix.from_rows([[w.basis[r, j] for r in range(w.dim)] for j in outside], w.dim)
        dims.append(w.dim - rank(restricted) if outside else w.dim)
    return dims


def determinant(m: QMatrix) -> Fraction:
    """Exact determinant of a square matrix by elimination."""
    if m.rows != m.cols:
        raise DimensionMismatchError("determinant needs a square matrix", "qlinalg", expected=m.rows, actual=m.cols)
    work = [list(r) for r in m.row_list()]
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if work[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            work[c], work[p] = work[p], work[c]
            det = -det
        lead = work[c][c]
        det *= lead
        for i in range(c + 1, n):
            f = work[i][c] / lead
            if f:
                work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return det
