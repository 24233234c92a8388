"""Exact dense linear algebra over a number field."""

from __future__ import annotations

from typing import Callable, Sequence

from .numberfield import NFElem, NumberField


class ExactMatrix:
    """Rectangular matrix of :class:`NFElem` entries (rows x cols)."""

    __slots__ = ("field", "rows", "ncols")

    def __init__(self, field: NumberField, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        self.rows = [tuple(field(a) for a in row) for row in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("matrix rows have unequal lengths")
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def identity(cls, field: NumberField, n: int) -> "ExactMatrix":
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: NumberField, m: int, n: int) -> "ExactMatrix":
        return cls(field, [[field.zero] * n for _ in range(m)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, [list(col) for col in zip(*self.rows)] if self.rows else [], len(self.rows))

    def mul_vec(self, v: Sequence) -> list[NFElem]:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        zero = self.field.zero
        out = []
        for row in self.rows:
            acc = zero
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def rref(self) -> tuple[list[list[NFElem]], list[int]]:
        """Reduced row echelon form; the pivot in each column is its first nonzero row."""
        return rref_rows([list(r) for r in self.rows], self.ncols)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[list[NFElem]]:
        """Basis of {v : Mv = 0}, one vector per free column, in echelon parametrization."""
        R, pivots = self.rref()
        return kernel_from_rref(self.field, R, pivots, self.ncols)

    def determinant(self) -> NFElem:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_determinant([list(r) for r in self.rows], lambda a, b: a / b, self.field.zero, self.field.one)


def rref_rows(rows: list[list[NFElem]], ncols: int) -> tuple[list[list[NFElem]], list[int]]:
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = prow[col].inverse()
        prow = [a * inv if a else a for a in prow]
        rows[r] = prow
        nz = [j for j in range(col, ncols) if prow[j]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][col]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_from_rref(field: NumberField, R, pivots: Sequence[int], ncols: int) -> list[list[NFElem]]:
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [field.zero] * ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            a = R[i][f]
            if a:
                v[p] = -a
        basis.append(v)
    return basis


def bareiss_determinant(M: list[list], exact_div: Callable, zero, one):
    """Fraction-free determinant over an integral domain (entries modified in place)."""
    n = len(M)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                t = row_i[j] * pk
                if mik and row_k[j]:
                    t = t - mik * row_k[j]
                row_i[j] = exact_div(t, prev) if t else t
            row_i[k] = zero
        prev = pk
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det
