"""Spaces: simplicial complexes, presentation complexes, raw data, products.

A :class:`Space` knows how to produce its cohomology ring over any field and
carries the user's assertions about it (asphericity, Z^2-freeness of pi_1,
torsion-freeness, classes asserted atoroidal).  None of these hypotheses is
decided here; they are recorded with their provenance and consumed by the
certification engine.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field, replace
from typing import Mapping, Sequence

from .chain import ChainComplexData, cohomology
from .errors import FieldMismatchError
from .field_linalg import FieldSpec
from .ring import ASSERTED, PLAIN, PULLBACK, GradedAlgebra, MarkedClass, tensor
from .simplicial import SimplicialComplex, cohomology_ring, to_chain_complex, triangulation

FLAG_NAMES = ("two_aspherical", "pi1_no_Z2", "pi1_torsion_free", "aspherical_space")


@dataclass(frozen=True)
class AssertionSet:
    two_aspherical: bool = False
    pi1_no_Z2: bool = False
    pi1_torsion_free: bool = False
    aspherical_space: bool = False
    atoroidal_class_names: tuple = ()
    aspherical_class_names: tuple = ()
    provenance: tuple = ()  # sorted (flag, note) pairs

    def __post_init__(self):
        object.__setattr__(self, "atoroidal_class_names", tuple(self.atoroidal_class_names))
        object.__setattr__(self, "aspherical_class_names", tuple(self.aspherical_class_names))
        prov = dict(self.provenance)
        if self.aspherical_space and not self.two_aspherical:
            object.__setattr__(self, "two_aspherical", True)
            prov.setdefault("two_aspherical", "implied by aspherical_space")
        object.__setattr__(self, "provenance", tuple(sorted(prov.items())))

    @classmethod
    def from_dict(cls, d: Mapping) -> "AssertionSet":
        kw = {k: bool(d.get(k, False)) for k in FLAG_NAMES}
        return cls(
            **kw,
            atoroidal_class_names=tuple(d.get("atoroidal_classes", ())),
            aspherical_class_names=tuple(d.get("aspherical_classes", ())),
            provenance=tuple(dict(d.get("provenance", {})).items()),
        )

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in FLAG_NAMES}
        out["atoroidal_classes"] = list(self.atoroidal_class_names)
        out["aspherical_classes"] = list(self.aspherical_class_names)
        out["provenance"] = dict(self.provenance)
        return out

    def note(self, flag: str) -> str:
        return dict(self.provenance).get(flag, "user assertion")


@dataclass(frozen=True)
class GroupPresentation:
    """Generators are single lowercase letters; an uppercase letter is an inverse."""

    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        rels = tuple(self.relators)
        if not gens:
            raise ValueError("a presentation needs at least one generator")
        for g in gens:
            if len(g) != 1 or not g.islower():
                raise ValueError(f"generator {g!r} must be a single lowercase letter")
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator")
        for n, r in enumerate(rels):
            for ch in r:
                if ch.lower() not in gens:
                    raise ValueError(f"relator {n} ({r!r}) uses undeclared letter {ch!r}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    def exponent_sums(self, word: str) -> tuple:
        out = [0] * len(self.generators)
        for ch in word:
            i = self.generators.index(ch.lower())
            out[i] += 1 if ch.islower() else -1
        return tuple(out)


def inverse_word(word: str) -> str:
    return word[::-1].swapcase()


def is_proper_power(word: str) -> bool:
    """Informational only: whether the cyclically reduced word is v^k with k >= 2."""
    w = word
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == w[i + 1].swapcase():
                w = w[:i] + w[i + 2:]
                changed = True
                break
    while len(w) >= 2 and w[0] == w[-1].swapcase():
        w = w[1:-1]
    n = len(w)
    return any(n % k == 0 and w == w[: n // k] * k for k in range(2, n + 1))


@dataclass(frozen=True)
class MarkSpec:
    """A named degree-2 class, given by coordinates or the 'generator' shorthand."""

    name: str
    coordinates: object = "generator"
    explicit: bool = True


DEFAULT_MARK = MarkSpec("u", "generator", explicit=False)


@dataclass(frozen=True)
class Space:
    name: str
    kind: str
    dimension: int
    assertions: AssertionSet = AssertionSet()
    marks: tuple = ()
    complex: SimplicialComplex | None = None
    chain: ChainComplexData | None = None
    presentation: GroupPresentation | None = None
    algebra: GradedAlgebra | None = None
    factors: tuple = ()
    _rings: dict = dc_field(default_factory=dict, compare=False, repr=False)

    # identity -------------------------------------------------------------

    def describe(self) -> dict:
        d = {"type": self.kind, "name": self.name}
        if self.kind == "simplicial":
            d.update(vertices=self.complex.vertices, facets=[list(f) for f in self.complex.facets])
        elif self.kind == "presentation":
            d.update(generators=list(self.presentation.generators), relators=list(self.presentation.relators))
        elif self.kind == "chain_complex":
            d.update(dims=list(self.chain.dims), boundaries=[[list(r) for r in m] for m in self.chain.boundaries])
        elif self.kind == "algebra":
            A = self.algebra
            d.update(characteristic=A.field.characteristic, degrees=list(A.degrees),
                     products=[[i, j, None if v is None else sorted((k, str(c)) for k, c in v.items())]
                               for i, j, v in A.structure_constants() if v is None or v])
        elif self.kind == "product":
            d["factors"] = [f.describe() for f in self.factors]
        d["assertions"] = self.assertions.to_dict()
        d["marks"] = [[m.name, m.coordinates if isinstance(m.coordinates, str) else [str(c) for c in m.coordinates],
                       m.explicit] for m in self.marks]
        return d

    @property
    def space_id(self) -> str:
        blob = json.dumps(self.describe(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def with_assertions(self, assertions: AssertionSet) -> "Space":
        return replace(self, assertions=assertions, _rings={})

    def with_marks(self, marks: Sequence[MarkSpec]) -> "Space":
        return replace(self, marks=tuple(marks), _rings={})

    def chain_complex(self) -> ChainComplexData | None:
        if self.kind == "simplicial":
            return to_chain_complex(self.complex)
        return self.chain

    # rings -----------------------------------------------------------------

    def ring(self, field: FieldSpec) -> GradedAlgebra:
        """Cohomology ring over ``field`` with this space's marked classes attached."""
        hit = self._rings.get(field)
        if hit is None:
            hit = self._build_ring(field)
            self._rings[field] = hit
        return hit

    def _build_ring(self, field: FieldSpec) -> GradedAlgebra:
        if self.kind == "product":
            return self._product_ring(field)
        if self.kind == "simplicial":
            base = cohomology_ring(self.complex, field)
        elif self.kind in ("presentation", "chain_complex"):
            base = additive_ring(self.chain, field)
        elif self.kind == "algebra":
            if self.algebra.field != field:
                raise FieldMismatchError(f"space {self.name!r} carries a ring over {self.algebra.field}, not {field}")
            base = self.algebra
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")
        return base.with_marked(self._resolve_marks(base))

    def _resolve_marks(self, A: GradedAlgebra) -> dict:
        out = {}
        specs = self.marks or (DEFAULT_MARK,)
        dim2 = A.dims[2] if A.top >= 2 else 0
        for mark in specs:
            if mark.coordinates == "generator":
                if dim2 != 1:
                    if mark.explicit:
                        raise ValueError(f"class {mark.name!r}: 'generator' needs dim H^2 = 1, "
                                         f"but it is {dim2} over {A.field}")
                    continue
                coords = [1]
            else:
                coords = list(mark.coordinates)
                if len(coords) != dim2:
                    raise ValueError(f"class {mark.name!r}: expected {dim2} coordinates over {A.field}, "
                                     f"got {len(coords)}")
            x = A.homogeneous(2, [A.field(c) for c in coords])
            if x.is_zero():
                raise ValueError(f"class {mark.name!r} is zero over {A.field}")
            tag = ASSERTED if mark.name in self.assertions.atoroidal_class_names else PLAIN
            out[mark.name] = MarkedClass(mark.name, x, tag)
        return out

    def factor_rings(self, field: FieldSpec) -> list:
        return [f.ring(field) for f in self.factors]

    def _product_ring(self, field: FieldSpec) -> GradedAlgebra:
        rings = self.factor_rings(field)
        T = rings[0]
        for R in rings[1:]:
            T = tensor(T, R)
        marks = {}
        for name, (i, fname) in self.pullbacks(field).items():
            mc = rings[i].marked[fname]
            tag = PULLBACK if mc.atoroidal else PLAIN
            marks[name] = MarkedClass(name, self.embed_factor(T, rings, i, mc.element), tag)
        if self.marks:
            marks.update(self._resolve_marks(T))
        return T.with_marked(marks)

    def pullbacks(self, field: FieldSpec) -> dict:
        """Product class name -> (factor index, factor class name)."""
        out = {}
        for i, f in enumerate(self.factors):
            for fname in f.ring(field).marked:
                out[f"{fname}_{i + 1}"] = (i, fname)
        return out

    @staticmethod
    def embed_factor(T: GradedAlgebra, rings: Sequence[GradedAlgebra], i: int, x):
        """1 (x) ... (x) x (x) ... (x) 1 with x in position i of a left-nested tensor."""
        chain = [T]
        while len(chain) < len(rings):
            chain.append(chain[-1].left)
        chain.reverse()  # chain[m] = R_0 (x) ... (x) R_m, chain[0] = R_0
        elem = x if i == 0 else rings[0].unit
        for m in range(1, len(rings)):
            y = x if m == i else rings[m].unit
            elem = chain[m].pure(elem, y)
        return elem


def additive_ring(cc: ChainComplexData, f: FieldSpec) -> GradedAlgebra:
    """Cohomology with only the products forced by degree or the unit.

    Every product of positive-degree classes landing in a nonzero group is
    UNKNOWN.
    """
    dims = [cohomology(cc, f, k).dimension for k in range(cc.top + 1)]
    if dims[0] != 1:
        raise ValueError(f"complex is not connected (dim H^0 = {dims[0]})")
    degrees, labels = [], []
    for k, d in enumerate(dims):
        for i in range(d):
            degrees.append(k)
            labels.append("1" if k == 0 else f"h{k}_{i}")
    while dims and dims[-1] == 0 and len(dims) > 1:
        dims.pop()
    top = len(dims) - 1
    unknown = [(i, j) for i in range(1, len(degrees)) for j in range(1, len(degrees))
               if degrees[i] + degrees[j] <= top and dims[degrees[i] + degrees[j]]]
    return GradedAlgebra(f, degrees, {}, labels=labels, unknown=unknown, check=False)


# constructors ---------------------------------------------------------------

def presentation_chain_complex(p: GroupPresentation) -> ChainComplexData:
    g, r = len(p.generators), len(p.relators)
    d1 = [[0] * g]
    sums = [p.exponent_sums(w) for w in p.relators]
    d2 = [[sums[j][i] for j in range(r)] for i in range(g)]
    labels = (("*",), tuple(p.generators), tuple(p.relators))
    return ChainComplexData((1, g, r), (d1, d2), labels)


def presentation_complex(p: GroupPresentation, name: str | None = None,
                         assertions: AssertionSet | None = None, marks: Sequence[MarkSpec] = ()) -> Space:
    cc = presentation_chain_complex(p)
    name = name or "<" + ",".join(p.generators) + " | " + ",".join(p.relators) + ">"
    return Space(name, "presentation", cc.dimension, assertions or AssertionSet(), tuple(marks),
                 chain=cc, presentation=p)


def simplicial_space(sc: SimplicialComplex, name: str = "simplicial", assertions: AssertionSet | None = None,
                     marks: Sequence[MarkSpec] = ()) -> Space:
    return Space(name, "simplicial", sc.dimension, assertions or AssertionSet(), tuple(marks), complex=sc)


def chain_complex_space(cc: ChainComplexData, name: str = "chain_complex",
                        assertions: AssertionSet | None = None, marks: Sequence[MarkSpec] = ()) -> Space:
    return Space(name, "chain_complex", cc.dimension, assertions or AssertionSet(), tuple(marks), chain=cc)


def algebra_space(A: GradedAlgebra, name: str = "algebra", assertions: AssertionSet | None = None,
                  marks: Sequence[MarkSpec] = ()) -> Space:
    dim = max((d for d, n in enumerate(A.dims) if n), default=0)
    return Space(name, "algebra", dim, assertions or AssertionSet(), tuple(marks), algebra=A)


def _combine(factors: Sequence[Space]) -> AssertionSet:
    n = len(factors)
    flags = {k: all(getattr(f.assertions, k) for f in factors) for k in FLAG_NAMES}
    # pi_1 of a product of n >= 2 factors with infinite pi_1 contains Z^2; never inherited.
    flags["pi1_no_Z2"] = False
    prov = {k: "all factors" for k, v in flags.items() if v}
    return AssertionSet(**flags, provenance=tuple(prov.items()))


def product(spaces: Sequence[Space], name: str | None = None, marks: Sequence[MarkSpec] = ()) -> Space:
    spaces = list(spaces)
    if not spaces:
        raise ValueError("product of an empty list of spaces")
    if len(spaces) == 1 and not marks:
        return spaces[0]
    fixed = {s.algebra.field for s in spaces if s.kind == "algebra"}
    if len(fixed) > 1:
        raise FieldMismatchError(f"factors carry rings over different fields: {sorted(map(str, fixed))}")
    name = name or " x ".join(s.name for s in spaces)
    return Space(name, "product", sum(s.dimension for s in spaces), _combine(spaces), tuple(marks),
                 factors=tuple(spaces))


_SURFACE = "closed hyperbolic surface"
BUNDLED_ASSERTIONS = {
    "point": AssertionSet(aspherical_space=True, pi1_no_Z2=True, pi1_torsion_free=True,
                          provenance=(("aspherical_space", "contractible"), ("pi1_no_Z2", "trivial pi_1"),
                                      ("pi1_torsion_free", "trivial pi_1"))),
    "circle": AssertionSet(aspherical_space=True, pi1_no_Z2=True, pi1_torsion_free=True,
                           provenance=(("aspherical_space", "S^1 = K(Z,1)"), ("pi1_no_Z2", "pi_1 = Z"),
                                       ("pi1_torsion_free", "pi_1 = Z"))),
    "tetrahedron": AssertionSet(pi1_no_Z2=True, pi1_torsion_free=True,
                                provenance=(("pi1_no_Z2", "simply connected"),
                                            ("pi1_torsion_free", "simply connected"))),
    "torus": AssertionSet(aspherical_space=True, pi1_torsion_free=True,
                          provenance=(("aspherical_space", "T^2 = K(Z^2,1)"), ("pi1_torsion_free", "pi_1 = Z^2"))),
    "rp2": AssertionSet(pi1_no_Z2=True, provenance=(("pi1_no_Z2", "pi_1 = Z/2"),)),
    "genus2": AssertionSet(aspherical_space=True, pi1_no_Z2=True, pi1_torsion_free=True,
                           provenance=(("aspherical_space", _SURFACE), ("pi1_no_Z2", _SURFACE + ", Gromov hyperbolic"),
                                       ("pi1_torsion_free", "aspherical of finite dimension"))),
}
_TRIANGULATION_NAME = {"tetrahedron": "sphere"}
BUNDLED = tuple(BUNDLED_ASSERTIONS)


def bundled(name: str) -> Space:
    if name not in BUNDLED_ASSERTIONS:
        raise KeyError(f"unknown bundled space {name!r}; known: {sorted(BUNDLED)}")
    sc = triangulation(_TRIANGULATION_NAME.get(name, name))
    return simplicial_space(sc, name, BUNDLED_ASSERTIONS[name])
