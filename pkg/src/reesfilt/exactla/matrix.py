from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from ..errors import RingMismatchError
from .rings import BaseRing


class Matrix:
    """Immutable dense matrix over a :class:`BaseRing`.

    Entries are kept in canonical form, so ``==`` is exact equality.
    """

    __slots__ = ("ring", "rows", "cols", "_data", "_hash")

    def __init__(self, ring: BaseRing, rows: int, cols: int, data: Iterable[Sequence]):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        coerce = ring
        if ring.kind == "Z":
            # plain ints are already canonical; skip the general coercion
            rowdata = tuple(tuple(x if type(x) is int else coerce(x) for x in r) for r in data)
        else:
            rowdata = tuple(tuple(coerce(x) for x in r) for r in data)
        if len(rowdata) != rows or any(len(r) != cols for r in rowdata):
            raise ValueError(f"expected a {rows}x{cols} array")
        self._data = rowdata
        self._hash = None

    @classmethod
    def _raw(cls, ring, rows, cols, data):
        # data already canonical tuples
        m = object.__new__(cls)
        m.ring, m.rows, m.cols, m._data, m._hash = ring, rows, cols, data, None
        return m

    @classmethod
    def from_rows(cls, ring: BaseRing, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), cols, rows)

    @classmethod
    def zero(cls, ring: BaseRing, rows: int, cols: int) -> Matrix:
        z = ring.zero
        return cls._raw(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: BaseRing, n: int) -> Matrix:
        z, o = ring.zero, ring.one
        return cls._raw(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, ring: BaseRing, entries: Sequence, rows: int | None = None, cols: int | None = None) -> Matrix:
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        data = [[ring.zero] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            data[i][i] = e
        return cls(ring, rows, cols, data)

    @classmethod
    def from_columns(cls, ring: BaseRing, columns: Sequence[Sequence], rows: int) -> Matrix:
        if not columns:
            return cls.zero(ring, rows, 0)
        return cls(ring, rows, len(columns), zip(*columns))

    # -- access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._data]

    def columns(self) -> list[list]:
        return [list(self.col(j)) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            self._data[i][j] == (1 if i == j else 0) for i in range(self.rows) for j in range(self.cols))

    def nonzero_entries(self):
        for i, r in enumerate(self._data):
            for j, x in enumerate(r):
                if x != 0:
                    yield i, j, x

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: Matrix):
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zero(self.ring, self.rows, other.cols)
        # row-by-row accumulation over the nonzero entries of both factors
        brows = [[(j, b) for j, b in enumerate(row) if b != 0] for row in other._data]
        ring = self.ring
        z = ring.zero
        exact = ring.kind != "Fp"
        red = ring.reduce
        data = []
        for r in self._data:
            acc = [z] * other.cols
            for k, a in enumerate(r):
                if a != 0:
                    for j, b in brows[k]:
                        acc[j] += a * b
            data.append(tuple(acc) if exact else tuple(red(x) for x in acc))
        return Matrix._raw(ring, self.rows, other.cols, tuple(data))

    def apply(self, v: Sequence) -> list:
        red = self.ring.reduce
        return [red(sum(a * b for a, b in zip(r, v) if a != 0)) for r in self._data]

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        if self.ring.kind != "Fp":
            return Matrix._raw(self.ring, self.rows, self.cols, tuple(
                tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols, tuple(
            tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __neg__(self) -> Matrix:
        if self.ring.kind != "Fp":
            return Matrix._raw(self.ring, self.rows, self.cols, tuple(tuple(-a for a in r) for r in self._data))
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols, tuple(tuple(red(-a) for a in r) for r in self._data))

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        red = self.ring.reduce
        c = self.ring(c)
        return Matrix._raw(self.ring, self.rows, self.cols, tuple(tuple(red(c * a) for a in r) for r in self._data))

    @property
    def T(self) -> Matrix:
        if self.rows == 0:
            return Matrix.zero(self.ring, self.cols, 0)
        return Matrix._raw(self.ring, self.cols, self.rows, tuple(zip(*self._data)))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.ring}, {self.to_lists()})"

    # -- structure ------------------------------------------------------------

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix._raw(self.ring, len(rows), len(cols),
                           tuple(tuple(self._data[i][j] for j in cols) for i in rows))

    def kron(self, other: Matrix) -> Matrix:
        self._check(other)
        red = self.ring.reduce
        exact = self.ring.kind != "Fp"
        rows = []
        for r, s in product(self._data, other._data):
            rows.append(tuple(a * b for a in r for b in s) if exact else tuple(red(a * b) for a in r for b in s))
        return Matrix._raw(self.ring, self.rows * other.rows, self.cols * other.cols, tuple(rows))


def block(ring: BaseRing, row_sizes: Sequence[int], col_sizes: Sequence[int],
          blocks: dict[tuple[int, int], Matrix]) -> Matrix:
    """Assemble a block matrix; missing blocks are zero."""
    rows = sum(row_sizes)
    cols = sum(col_sizes)
    data = [[ring.zero] * cols for _ in range(rows)]
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block ({bi},{bj}) has shape {m.shape}, expected {(row_sizes[bi], col_sizes[bj])}")
        for i, r in enumerate(m._data):
            row = data[roff[bi] + i]
            for j, x in enumerate(r):
                if x != 0:
                    row[coff[bj] + j] = x
    return Matrix._raw(ring, rows, cols, tuple(tuple(r) for r in data))


def block_diag(ring: BaseRing, mats: Sequence[Matrix]) -> Matrix:
    return block(ring, [m.rows for m in mats], [m.cols for m in mats], {(i, i): m for i, m in enumerate(mats)})


def hstack(ring: BaseRing, mats: Sequence[Matrix], rows: int) -> Matrix:
    return block(ring, [rows], [m.cols for m in mats], {(0, j): m for j, m in enumerate(mats)})


def vstack(ring: BaseRing, mats: Sequence[Matrix], cols: int) -> Matrix:
    return block(ring, [m.rows for m in mats], [cols], {(i, 0): m for i, m in enumerate(mats)})
