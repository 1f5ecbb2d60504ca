"""Dense exact linear algebra: row reduction, rank, nullspace, solve.

Row reduction is deterministic: the pivot for each column is the first row
(lowest index) with a nonzero entry in the leftmost unprocessed column, and
``solve`` sets free variables to zero, so every downstream witness is
reproducible bit for bit.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Optional, Sequence

from .fields import Field

Vec = tuple


def vzero(field: Field, n: int) -> Vec:
    return (field.zero,) * n


def basis_vec(field: Field, n: int, i: int) -> Vec:
    return tuple(field.one if j == i else field.zero for j in range(n))


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(c, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def vec_is_zero(a: Vec) -> bool:
    return not any(a)


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence]):
        self.field = field
        self.data = tuple(tuple(row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [basis_vec(field, n, i) for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, [vzero(field, cols)] * rows)

    @classmethod
    def from_cols(cls, field: Field, cols: Sequence[Vec]) -> "Matrix":
        return cls(field, list(zip(*cols))) if cols else cls(field, [])

    def col(self, j: int) -> Vec:
        return tuple(row[j] for row in self.data)

    def apply(self, v: Vec) -> Vec:
        if len(v) != self.cols:
            raise ValueError(f"dimension mismatch: {self.cols} cols vs vector of {len(v)}")
        out = []
        for row in self.data:
            acc = self.field.zero
            for a, x in zip(row, v):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        return Matrix.from_cols(self.field, [self.apply(other.col(j)) for j in range(other.cols)])

    def add(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, [vadd(r, s) for r, s in zip(self.data, other.data, strict=True)])

    def sub(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, [vsub(r, s) for r, s in zip(self.data, other.data, strict=True)])

    def neg(self) -> "Matrix":
        return Matrix(self.field, [vneg(r) for r in self.data])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.data))) if self.rows else Matrix(self.field, [])

    def is_zero(self) -> bool:
        return all(vec_is_zero(r) for r in self.data)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.data == self.data
        )

    def __hash__(self):
        return hash((self.field, self.data))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.data!r})"

    def rref(self) -> tuple["Matrix", int, tuple[int, ...]]:
        """Reduced row echelon form with rank and pivot columns."""
        m = [list(row) for row in self.data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            pr = next((i for i in range(r, self.rows) if m[i][c]), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = self.field.one / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return Matrix(self.field, m), len(pivots), tuple(pivots)

    def rank(self) -> int:
        return self.rref()[1]

    def nullspace(self) -> list[Vec]:
        """Basis of the right kernel, ordered by free-column index."""
        red, rank, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [self.field.zero] * self.cols
            v[f] = self.field.one
            for t, c in enumerate(pivots):
                v[c] = -red.data[t][f]
            basis.append(tuple(v))
        return basis

    def solve(self, b: Vec) -> Optional[Vec]:
        """Some x with self @ x = b, free variables zero; None if inconsistent."""
        if len(b) != self.rows:
            raise ValueError(f"dimension mismatch: {self.rows} rows vs rhs of {len(b)}")
        aug = Matrix(self.field, [row + (bi,) for row, bi in zip(self.data, b)])
        red, rank, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [self.field.zero] * self.cols
        for t, c in enumerate(pivots):
            x[c] = red.data[t][self.cols]
        return tuple(x)

    def inverse(self) -> Optional["Matrix"]:
        if self.rows != self.cols:
            return None
        n = self.rows
        aug = Matrix(self.field, [row + basis_vec(self.field, n, i) for i, row in enumerate(self.data)])
        red, rank, pivots = aug.rref()
        if rank < n or any(p >= n for p in pivots[:n]):
            return None
        return Matrix(self.field, [row[n:] for row in red.data])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def iter_matrices(field: Field, rows: int, cols: int) -> Iterator[Matrix]:
    """All rows x cols matrices over a prime field, in lexicographic entry order.

    Entries are flattened row-major; the last entry varies fastest.
    """
    if field.kind != "Fp":
        raise ValueError("matrix enumeration needs a finite field")
    scalars = [field.of(v) for v in range(field.p)]
    for flat in itertools.product(scalars, repeat=rows * cols):
        yield Matrix(field, [flat[r * cols : (r + 1) * cols] for r in range(rows)])


def span_basis(field: Field, vectors: Sequence[Vec], dim: int) -> list[Vec]:
    """Canonical (rref row) basis of the span of the given vectors."""
    if not vectors:
        return []
    red, rank, _ = Matrix(field, vectors).rref()
    return [red.data[i] for i in range(rank)]


def in_span(field: Field, basis: Sequence[Vec], v: Vec) -> bool:
    if vec_is_zero(v):
        return True
    if not basis:
        return False
    m = Matrix(field, list(basis) + [v])
    return m.rank() == Matrix(field, list(basis)).rank()
