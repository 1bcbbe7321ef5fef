"""Exact arithmetic over Q and F_p, and the row-reduction kernel built on it.

Scalars are plain Python values: ``fractions.Fraction`` for characteristic 0
(always in lowest terms) and ``int`` residues in ``[0, p)`` otherwise.  No
floating point is ever produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Q when ``characteristic == 0``, otherwise the prime field F_p."""

    characteristic: int

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise ValueError(f"characteristic must be a non-negative integer, got {c!r}")
        if c != 0 and not _is_prime(c):
            raise ValueError(f"characteristic {c} is not prime")

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def __call__(self, x):
        """Coerce an int, Fraction or numeric string into the field."""
        p = self.characteristic
        if isinstance(x, str):
            return self.parse(x)
        if p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def parse(self, s: str):
        s = s.strip().replace("−", "-")
        if " mod " in s:
            value, _, modulus = s.partition(" mod ")
            if int(modulus) != self.characteristic:
                raise ValueError(f"scalar {s!r} does not belong to {self}")
            s = value
        return self(Fraction(s))

    def format(self, x) -> str:
        return str(x)

    def add(self, a, b):
        return a + b if self.characteristic == 0 else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.characteristic == 0 else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.characteristic == 0 else (a * b) % self.characteristic

    def neg(self, a):
        return -a if self.characteristic == 0 else (-a) % self.characteristic

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 0:
            return 1 / a
        return pow(a, -1, self.characteristic)

    def contains(self, x) -> bool:
        if self.characteristic == 0:
            return isinstance(x, Fraction)
        return isinstance(x, int) and 0 <= x < self.characteristic


QQ = FieldSpec(0)


def binomial_in_field(n: int, k: int, f: FieldSpec):
    if not 0 <= k <= n:
        raise ValueError(f"binomial({n}, {k}) requires 0 <= k <= n")
    return f(math.comb(n, k))


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over a single field; entries are a tuple of row tuples."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix entries do not match the declared shape")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [tuple(field(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [tuple(field(x) for x in c) for c in columns]
        entries = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(field, rows, len(cols), entries)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.field, self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)))

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} does not fit {self.rows}x{self.cols} matrix")
        f = self.field
        out = []
        for r in self.entries:
            acc = f.zero
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(f(acc) if f.characteristic else acc)
        return tuple(out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("field mismatch in matrix product")
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        ot = other.transpose()
        return Matrix(self.field, self.rows, other.cols,
                      tuple(ot.apply(r) for r in self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)


def _rref_rows(field: FieldSpec, rows: list[list], ncols: int, pivot_limit: int | None = None):
    """In-place Gauss-Jordan on a list of mutable rows; returns pivot columns."""
    p = field.characteristic
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    limit = ncols if pivot_limit is None else pivot_limit
    for c in range(limit):
        if r == nrows:
            break
        found = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if found is None:
            continue
        if found != r:
            rows[r], rows[found] = rows[found], rows[r]
        prow = rows[r]
        inv = field.inv(prow[c])
        if prow[c] != 1:
            if p:
                prow[:] = [(x * inv) % p for x in prow]
            else:
                prow[:] = [x * inv for x in prow]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            factor = row[c]
            if factor == 0:
                continue
            if p:
                for j in nz:
                    row[j] = (row[j] - factor * prow[j]) % p
            else:
                for j in nz:
                    row[j] = row[j] - factor * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def reduce_echelon(m: Matrix) -> tuple[int, list[int], Matrix]:
    """Reduced row-echelon form with leftmost-column, topmost-row pivoting."""
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(m.field, rows, m.cols)
    rref = Matrix(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows))
    return len(pivots), pivots, rref


def rank(m: Matrix) -> int:
    return reduce_echelon(m)[0]


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of the null space, one vector per free column in increasing order."""
    f = m.field
    _, pivots, rref = reduce_echelon(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [f.zero] * m.cols
        v[free] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(rref.entries[r][free])
        v = tuple(v)
        if any(x != 0 for x in m.apply(v)):
            raise ArithmeticError("kernel vector failed re-check")
        basis.append(v)
    return basis


def image_basis(m: Matrix) -> list[tuple]:
    """The pivot columns of ``m`` itself, which form a basis of its column space."""
    _, pivots, _ = reduce_echelon(m)
    return [m.column(c) for c in pivots]


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    n = m.rows
    f = m.field
    rows = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(m.entries)]
    pivots = _rref_rows(f, rows, 2 * n, pivot_limit=n)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix(f, n, n, tuple(tuple(r[n:]) for r in rows))


def pivot_columns(field: FieldSpec, columns: Iterable[Sequence], length: int) -> list[int]:
    """Indices of columns that are independent of all columns before them."""
    cols = list(columns)
    if not cols:
        return []
    m = Matrix.from_columns(field, cols, length)
    return reduce_echelon(m)[1]
