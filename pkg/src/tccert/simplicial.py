"""Ordered simplicial complexes, simplicial cochains and the cup product.

Every simplex is a strictly increasing vertex tuple, so the global vertex
order fixes the Alexander-Whitney front/back faces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .chain import ChainComplexData, cohomology
from .errors import AlgebraError, FieldMismatchError
from .field_linalg import FieldSpec
from .ring import GradedAlgebra


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: int
    facets: tuple

    def __post_init__(self):
        facets = []
        for n, f in enumerate(self.facets):
            f = tuple(int(v) for v in f)
            if not f:
                raise ValueError(f"facet {n} is empty")
            if any(a >= b for a, b in zip(f, f[1:])):
                raise ValueError(f"facet {n} = {list(f)} is not strictly increasing")
            if f[0] < 0 or f[-1] >= self.vertices:
                raise ValueError(f"facet {n} = {list(f)} uses a vertex outside 0..{self.vertices - 1}")
            facets.append(f)
        object.__setattr__(self, "facets", tuple(sorted(set(facets))))

    @cached_property
    def faces(self) -> tuple:
        """All simplices, grouped by dimension and sorted lexicographically."""
        top = max((len(f) - 1 for f in self.facets), default=0)
        out = [set() for _ in range(top + 1)]
        out[0] = {(v,) for v in range(self.vertices)}
        for f in self.facets:
            for k in range(1, len(f)):
                out[k].update(itertools.combinations(f, k + 1))
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def _index(self) -> tuple:
        return tuple({s: i for i, s in enumerate(level)} for level in self.faces)

    @property
    def dimension(self) -> int:
        return len(self.faces) - 1

    def count(self, k: int) -> int:
        return len(self.faces[k]) if 0 <= k <= self.dimension else 0

    def index_of(self, simplex: Sequence[int]) -> int:
        return self._index[len(simplex) - 1][tuple(simplex)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(level) for k, level in enumerate(self.faces))


def to_chain_complex(sc: SimplicialComplex) -> ChainComplexData:
    dims = [len(level) for level in sc.faces]
    boundaries = []
    for k in range(1, sc.dimension + 1):
        m = [[0] * dims[k] for _ in range(dims[k - 1])]
        for col, s in enumerate(sc.faces[k]):
            for i in range(k + 1):
                face = s[:i] + s[i + 1:]
                m[sc.index_of(face)][col] += -1 if i % 2 else 1
        boundaries.append(m)
    labels = tuple(tuple("".join(map(str, s)) if len(s) < 2 else "-".join(map(str, s)) for s in level)
                   for level in sc.faces)
    return ChainComplexData(tuple(dims), tuple(boundaries), labels)


@dataclass(frozen=True)
class Cochain:
    complex: SimplicialComplex
    degree: int
    field: FieldSpec
    values: tuple

    def __post_init__(self):
        n = self.complex.count(self.degree)
        vals = tuple(self.field(v) for v in self.values)
        if len(vals) != n:
            raise ValueError(f"degree-{self.degree} cochain needs {n} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, sc: SimplicialComplex, degree: int, field: FieldSpec) -> "Cochain":
        return cls(sc, degree, field, (0,) * sc.count(degree))

    def __call__(self, simplex: Sequence[int]):
        return self.values[self.complex.index_of(simplex)]

    def _check(self, other: "Cochain"):
        if other.field != self.field:
            raise FieldMismatchError(f"cochains over {self.field} and {other.field}")
        if other.complex != self.complex:
            raise ValueError("cochains live on different complexes")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add cochains of different degrees")
        f = self.field
        return Cochain(self.complex, self.degree, f, tuple(f.add(a, b) for a, b in zip(self.values, other.values)))

    def scale(self, s) -> "Cochain":
        f = self.field
        s = f(s)
        return Cochain(self.complex, self.degree, f, tuple(f.mul(s, a) for a in self.values))

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not any(self.values)


def unit_cochain(sc: SimplicialComplex, field: FieldSpec) -> Cochain:
    return Cochain(sc, 0, field, (1,) * sc.count(0))


def coboundary(sc: SimplicialComplex, alpha: Cochain) -> Cochain:
    """(delta alpha)(s) = sum_i (-1)^i alpha(d_i s)."""
    f = alpha.field
    k = alpha.degree + 1
    vals = []
    for s in sc.faces[k] if k <= sc.dimension else ():
        acc = f.zero
        for i in range(k + 1):
            v = alpha(s[:i] + s[i + 1:])
            acc = f.add(acc, v) if i % 2 == 0 else f.sub(acc, v)
        vals.append(acc)
    return Cochain(sc, k, f, tuple(vals))


def cup(sc: SimplicialComplex, alpha: Cochain, beta: Cochain) -> Cochain:
    """Alexander-Whitney: (a u b)(v0..v_{p+q}) = a(v0..vp) * b(vp..v_{p+q})."""
    alpha._check(beta)
    if alpha.complex != sc:
        raise ValueError("cochains do not live on this complex")
    f = alpha.field
    p, q = alpha.degree, beta.degree
    if p + q > sc.dimension:
        return Cochain(sc, p + q, f, ())
    vals = tuple(f.mul(alpha(s[: p + 1]), beta(s[p:])) for s in sc.faces[p + q])
    return Cochain(sc, p + q, f, vals)


def cohomology_ring(sc: SimplicialComplex, f: FieldSpec) -> GradedAlgebra:
    """H*(sc; f) with structure constants from cupping representatives."""
    cc = to_chain_complex(sc)
    bases = [cohomology(cc, f, k) for k in range(sc.dimension + 1)]
    if bases[0].dimension != 1:
        raise AlgebraError(f"cohomology ring needs a connected complex (dim H^0 = {bases[0].dimension})")
    reps = []
    degrees = []
    labels = []
    for k, b in enumerate(bases):
        for i, z in enumerate(b.representatives):
            if k == 0:
                z = unit_cochain(sc, f).values
            reps.append(Cochain(sc, k, f, z))
            degrees.append(k)
            labels.append("1" if k == 0 else f"h{k}_{i}")
    top = max((k for k, b in enumerate(bases) if b.dimension), default=0)
    offsets = [0]
    for b in bases:
        offsets.append(offsets[-1] + b.dimension)
    table = {}
    for i, j in itertools.product(range(1, len(reps)), repeat=2):
        d = degrees[i] + degrees[j]
        if d > top:
            continue
        coords = bases[d].project(cup(sc, reps[i], reps[j]).values)
        vec = {offsets[d] + t: c for t, c in enumerate(coords) if c}
        if vec:
            table[(i, j)] = vec
    return GradedAlgebra(f, degrees, table, labels=labels, check_limit=24)


# bundled triangulations ----------------------------------------------------

def _torus_facets():
    out = set()
    for i in range(7):
        out.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        out.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return sorted(out)


def _genus2_facets():
    # Two 7-vertex tori glued along the triangle (0, 1, 3), whose interior is removed.
    glued = (0, 1, 3)
    torus = [f for f in _torus_facets() if f != glued]
    relabel = {0: 0, 1: 1, 3: 3, 2: 7, 4: 8, 5: 9, 6: 10}
    second = [tuple(sorted(relabel[v] for v in f)) for f in torus]
    return sorted(torus + second)


TRIANGULATIONS = {
    "point": (1, [(0,)]),
    "circle": (3, [(0, 1), (1, 2), (0, 2)]),
    "sphere": (4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]),
    "torus": (7, _torus_facets()),
    "rp2": (6, [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
                (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]),
    "genus2": (11, _genus2_facets()),
}


def triangulation(name: str) -> SimplicialComplex:
    try:
        n, facets = TRIANGULATIONS[name]
    except KeyError:
        raise KeyError(f"unknown triangulation {name!r}; known: {sorted(TRIANGULATIONS)}") from None
    return SimplicialComplex(n, tuple(facets))
