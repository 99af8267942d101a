"""Dense exact linear algebra over rational-function fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .field import RF_ONE, RF_ZERO, RationalFunction, as_rf


class SingularMatrix(ArithmeticError):
    pass


@dataclass(frozen=True)
class Matrix:
    """Row-major matrix of RationalFunction entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(as_rf(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(RF_ONE if i == j else RF_ZERO for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (RF_ZERO,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(n, n, tuple(as_rf(values[i]) if i == j else RF_ZERO
                               for i in range(n) for j in range(n)))

    def __getitem__(self, ij) -> RationalFunction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                s = RF_ZERO
                for k, a in enumerate(ri):
                    if a:
                        b = other[k, j]
                        if b:
                            s = s + a * b
                out.append(s)
        return Matrix(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[RationalFunction]) -> list:
        return [sum((a * v for a, v in zip(self.row(i), vec) if a and v), RF_ZERO)
                for i in range(self.rows)]

    def map(self, fn) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(fn(x) for x in self.entries))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.to_rows()) + "]"


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row-echelon form; pivots are the first nonzero entries in column order."""
    rows = [list(r) for r in m.to_rows()]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    flat = tuple(x for row in rows for x in row)
    return Matrix(m.rows, m.cols, flat), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel_basis(m: Matrix) -> list[list[RationalFunction]]:
    """Basis of {v : m v = 0}; one vector per free column, with a 1 in that column."""
    reduced, pivots, _ = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [RF_ZERO] * m.cols
        v[f] = RF_ONE
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r, f]
        basis.append(v)
    return basis


def invert(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise SingularMatrix("non-square matrix")
    n = m.rows
    aug = Matrix(n, 2 * n, tuple(
        x for i in range(n) for x in m.row(i) + Matrix.identity(n).row(i)))
    reduced, pivots, _ = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return Matrix(n, n, tuple(reduced[i, n + j] for i in range(n) for j in range(n)))


def determinant(m: Matrix) -> RationalFunction:
    if m.rows != m.cols:
        raise ValueError("non-square matrix")
    rows = [list(r) for r in m.to_rows()]
    n = m.rows
    det = RF_ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return RF_ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[c])]
    return det


def span_basis(vectors: Iterable[Sequence[RationalFunction]], dim: int) -> list[list[RationalFunction]]:
    """Row-reduced basis of the span of ``vectors``."""
    vecs = [list(v) for v in vectors if any(x for x in v)]
    if not vecs:
        return []
    reduced, _, r = rref(Matrix(len(vecs), dim, tuple(x for v in vecs for x in v)))
    return [reduced.row(i) for i in range(r)]
