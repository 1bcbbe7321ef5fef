"""Finite based chain complexes over Z and their cohomology over a field."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import SquareZeroViolation
from .field_linalg import (
    FieldSpec,
    Matrix,
    image_basis,
    inverse,
    kernel_basis,
    pivot_columns,
    rank,
)


def _int_matmul(a, b):
    if not a or not b or not b[0]:
        return []
    ncols = len(b[0])
    out = []
    for row in a:
        nz = [(t, x) for t, x in enumerate(row) if x]
        out.append(tuple(sum(x * b[t][j] for t, x in nz) for j in range(ncols)))
    return out


@dataclass(frozen=True)
class ChainComplexData:
    """Cell counts per degree and integer boundary matrices.

    ``boundaries[k - 1]`` is the matrix of d_k : C_k -> C_{k-1}, with
    ``dims[k - 1]`` rows and ``dims[k]`` columns.
    """

    dims: tuple
    boundaries: tuple
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(
            self, "boundaries",
            tuple(tuple(tuple(int(x) for x in row) for row in m) for m in self.boundaries),
        )
        validate(self)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    @property
    def dimension(self) -> int:
        """Top degree that actually carries cells."""
        nz = [k for k, d in enumerate(self.dims) if d]
        return nz[-1] if nz else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def boundary(self, k: int, f: FieldSpec) -> Matrix:
        """d_k over ``f`` as a dims[k-1] x dims[k] matrix (zero outside 1..top)."""
        rows = self.dims[k - 1] if 0 <= k - 1 <= self.top else 0
        cols = self.dims[k] if 0 <= k <= self.top else 0
        if 1 <= k <= self.top:
            return Matrix.from_rows(f, self.boundaries[k - 1], cols)
        return Matrix.zeros(f, rows, cols)

    def coboundary(self, k: int, f: FieldSpec) -> Matrix:
        """delta_k : C^k -> C^{k+1}, the transpose of d_{k+1}."""
        return self.boundary(k + 1, f).transpose()


def validate(cc: ChainComplexData) -> bool:
    dims = cc.dims
    if len(cc.boundaries) != max(len(dims) - 1, 0):
        raise ValueError(f"expected {len(dims) - 1} boundary matrices, got {len(cc.boundaries)}")
    for k, m in enumerate(cc.boundaries, start=1):
        if len(m) != dims[k - 1] or any(len(row) != dims[k] for row in m):
            raise ValueError(f"boundary d_{k} must be {dims[k - 1]}x{dims[k]}")
    if cc.labels is not None:
        if len(cc.labels) != len(dims) or any(len(l) != d for l, d in zip(cc.labels, dims)):
            raise ValueError("cell labels do not match dims")
    for k in range(2, len(dims)):
        prod = _int_matmul(cc.boundaries[k - 2], cc.boundaries[k - 1])
        if any(x for row in prod for x in row):
            raise SquareZeroViolation(k)
    return True


@dataclass(frozen=True)
class CohomologyBasis:
    """H^k over a field with chosen cocycle representatives.

    ``project`` sends a cocycle to its coordinates in the representative basis;
    coboundaries project to zero.
    """

    field: FieldSpec
    degree: int
    representatives: tuple
    coboundaries: tuple
    projection: Matrix = dc_field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def project(self, z: Sequence) -> tuple:
        return self.projection.apply(tuple(z))


def cohomology(cc: ChainComplexData, f: FieldSpec, k: int) -> CohomologyBasis:
    if not 0 <= k <= cc.top:
        raise ValueError(f"degree {k} outside 0..{cc.top}")
    n = cc.dims[k]
    cocycles = kernel_basis(cc.coboundary(k, f))
    cobounds = image_basis(cc.coboundary(k - 1, f)) if k > 0 else []
    cols = cobounds + cocycles
    piv = pivot_columns(f, cols, n)
    nb = len(cobounds)
    reps = [cols[c] for c in piv if c >= nb]

    # Complete reps + coboundaries to a basis of C^k with unit vectors; the
    # first rows of the inverse then read off the representative coordinates.
    spanning = reps + cobounds
    units = [tuple(f.one if i == j else f.zero for i in range(n)) for j in range(n)]
    piv_all = pivot_columns(f, spanning + units, n)
    completion = [units[c - len(spanning)] for c in piv_all if c >= len(spanning)]
    h = len(reps)
    if n:
        q = Matrix.from_columns(f, spanning + completion, n)
        qinv = inverse(q)
        projection = Matrix(f, h, n, qinv.entries[:h])
    else:
        projection = Matrix.zeros(f, h, 0)
    return CohomologyBasis(f, k, tuple(reps), tuple(cobounds), projection)


def betti_profile(cc: ChainComplexData, f: FieldSpec) -> list[int]:
    """dim H^k for k = 0..top, computed from ranks of the coboundary maps."""
    out = []
    for k in range(cc.top + 1):
        r_out = rank(cc.coboundary(k, f))
        r_in = rank(cc.coboundary(k - 1, f)) if k > 0 else 0
        out.append(cc.dims[k] - r_out - r_in)
    return out


def homology_profile(cc: ChainComplexData, f: FieldSpec) -> list[int]:
    """dim H_k from the boundary maps directly; agrees with betti_profile over a field."""
    out = []
    for k in range(cc.top + 1):
        r_out = rank(cc.boundary(k, f)) if k > 0 else 0
        r_in = rank(cc.boundary(k + 1, f))
        out.append(cc.dims[k] - r_out - r_in)
    return out
