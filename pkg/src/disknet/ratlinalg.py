"""Exact rational matrices with fraction-free elimination.

Scalars are ``fractions.Fraction``. Integer work is done by scaling each row
to integers and running Bareiss elimination, which keeps every intermediate
an exact minor of the scaled matrix.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeMismatch, Singular


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings like "3/4" or "2" into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # floats are accepted only when they are exact binary fractions
        return Fraction(x)
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class RationalMatrix:
    """Dense row-major matrix of Fractions. Treated as immutable."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = [tuple(to_fraction(x) for x in row) for row in data]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeMismatch("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = tuple(rows)

    # construction helpers
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(x) for x in r] for r in self._data]

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._data], dtype=float).reshape(self.rows, self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[self._data[i][j] for j in cols] for i in rows], len(cols))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    T = property(transpose)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._data[i][j] == self._data[j][i] for i in range(self.rows) for j in range(i)
        )

    # arithmetic
    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same(other)
        return RationalMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same(other)
        return RationalMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols
        )

    def __neg__(self):
        return RationalMatrix([[-a for a in r] for r in self._data], self.cols)

    def scale(self, c) -> "RationalMatrix":
        c = to_fraction(c)
        return RationalMatrix([[c * a for a in r] for r in self._data], self.cols)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ot = other.transpose()._data
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ot] for r in self._data],
            other.cols,
        )

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ShapeMismatch("vector length does not match column count")
        v = [to_fraction(x) for x in vec]
        return [sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._data]

    def __repr__(self):
        return f"RationalMatrix({self.to_json()!r})"


def _integer_rows(m: RationalMatrix, extra: RationalMatrix | None = None):
    """Scale each row (of [m | extra]) by the lcm of its denominators."""
    out = []
    scales = []
    for i in range(m.rows):
        row = list(m.row(i)) + (list(extra.row(i)) if extra is not None else [])
        s = lcm(*(x.denominator for x in row)) if row else 1
        scales.append(s)
        out.append([x.numerator * (s // x.denominator) for x in row])
    return out, scales


def _bareiss(a: list[list[int]], n: int) -> tuple[list[list[int]], int, bool]:
    """In-place Bareiss forward elimination on the first n columns.

    Returns (matrix, sign, singular). After elimination a[k][k] is the
    leading k+1 minor (up to the row-swap sign).
    """
    sign = 1
    prev = 1
    width = len(a[0]) if a else 0
    for k in range(n):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return a, sign, True
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, width):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return a, sign, False


def det(m: RationalMatrix) -> Fraction:
    """Exact determinant via Bareiss elimination on row-scaled integers."""
    if m.rows != m.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a, scales = _integer_rows(m)
    a, sign, singular = _bareiss(a, n)
    if singular:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * a[n - 1][n - 1], denom)


def solve(m: RationalMatrix, rhs) -> list[Fraction] | RationalMatrix:
    """Solve m x = rhs exactly. rhs may be a vector or a RationalMatrix."""
    if m.rows != m.cols:
        raise ShapeMismatch("solve needs a square matrix")
    as_vector = not isinstance(rhs, RationalMatrix)
    b = RationalMatrix([[x] for x in rhs], 1) if as_vector else rhs
    if b.rows != m.rows:
        raise ShapeMismatch("right-hand side has the wrong number of rows")
    n = m.rows
    k = b.cols
    if n == 0:
        return [] if as_vector else RationalMatrix.zeros(0, k)
    a, _ = _integer_rows(m, b)
    a, _, singular = _bareiss(a, n)
    if singular or a[n - 1][n - 1] == 0:
        raise Singular("matrix is singular")
    # back substitution on the integer upper-triangular system
    x = [[Fraction(0)] * k for _ in range(n)]
    for i in range(n - 1, -1, -1):
        row = a[i]
        piv = row[i]
        for c in range(k):
            acc = Fraction(row[n + c])
            for j in range(i + 1, n):
                if row[j]:
                    acc -= row[j] * x[j][c]
            x[i][c] = acc / piv
    if as_vector:
        return [r[0] for r in x]
    return RationalMatrix(x, k)


def invert(m: RationalMatrix) -> RationalMatrix:
    if m.rows != m.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    return solve(m, RationalMatrix.identity(m.rows))


def schur_complement(a: RationalMatrix, b: RationalMatrix, c: RationalMatrix) -> RationalMatrix:
    """Return a - b c^{-1} b^T without forming the inverse."""
    n, m = b.shape
    if a.shape != (n, n) or c.shape != (m, m):
        raise ShapeMismatch(f"blocks {a.shape}, {b.shape}, {c.shape} do not fit")
    if m == 0:
        return a
    x = solve(c, b.transpose())  # c^{-1} b^T, shape m x n
    return a - (b @ x)


# Float path with the same call shapes, for the conjectural move and big sweeps.

def schur_complement_float(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    if b.shape[1] == 0:
        return np.array(a, dtype=float)
    return a - b @ np.linalg.solve(c, b.T)


def relative_close(x: np.ndarray, y: np.ndarray, rtol: float = 1e-9) -> bool:
    """Entrywise |x - y| <= rtol * max(|x|, |y|, floor).

    The floor (1e-6 of the largest entry) keeps entries that should be zero
    from demanding an absolute error of zero.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        return False
    if x.size == 0:
        return True
    floor = 1e-6 * max(float(np.max(np.abs(x))), float(np.max(np.abs(y))), 1e-300)
    scale = np.maximum(np.maximum(np.abs(x), np.abs(y)), floor)
    return bool(np.all(np.abs(x - y) <= rtol * scale))
