"""Finite-dimensional graded-commutative algebras given by structure constants.

Basis element 0 is always the unit and sits alone in degree 0.  Products of
basis elements are sparse dicts ``{k: coefficient}``; a product that was never
determined (for example H^1 x H^1 of a presentation complex) is recorded as
UNKNOWN and any attempt to read it raises :class:`UnknownProductError`.

Tensor products use the Koszul rule
``(a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'`` and are evaluated lazily,
so products of large factors only ever touch the constants a computation
actually needs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import AlgebraError, FieldMismatchError, UnknownProductError
from .field_linalg import FieldSpec, Matrix, inverse, pivot_columns

PLAIN = "plain"
ASSERTED = "atoroidal (asserted)"
PROMOTED = "atoroidal (promoted)"
PULLBACK = "atoroidal (pullback)"
ATOROIDAL_TAGS = (ASSERTED, PROMOTED, PULLBACK)


def _accumulate(field: FieldSpec, acc: dict, k, c):
    v = acc.get(k, 0) + c
    if field.characteristic:
        v %= field.characteristic
    if v:
        acc[k] = v
    else:
        acc.pop(k, None)


@dataclass(frozen=True)
class MarkedClass:
    name: str
    element: "AlgebraElement"
    tag: str = PLAIN

    @property
    def atoroidal(self) -> bool:
        return self.tag in ATOROIDAL_TAGS


class GradedAlgebra:
    """Graded-commutative algebra over a field, one basis index per element.

    ``products`` maps ``(i, j)`` to a sparse coordinate dict.  Pairs that are
    absent are zero, pairs listed in ``unknown`` are UNKNOWN, and products
    with the unit are implied.
    """

    def __init__(
        self,
        field: FieldSpec,
        degrees: Sequence[int],
        products: Mapping | None = None,
        labels: Sequence[str] | None = None,
        unknown: Iterable = (),
        marked: Mapping[str, MarkedClass] | None = None,
        check: bool = True,
        check_limit: int = 48,
    ):
        self.field = field
        self._structure = object()
        self.degrees = tuple(int(d) for d in degrees)
        if not self.degrees or self.degrees[0] != 0 or self.degrees.count(0) != 1:
            raise AlgebraError("degree 0 must be one-dimensional and spanned by basis element 0")
        if any(a > b for a, b in zip(self.degrees, self.degrees[1:])):
            raise AlgebraError("basis must be sorted by degree")
        self._labels = tuple(labels) if labels is not None else None
        if self._labels is not None and len(self._labels) != len(self.degrees):
            raise AlgebraError("one label per basis element required")
        self._unknown = frozenset((int(i), int(j)) for i, j in unknown)
        self._table = {}
        n = len(self.degrees)
        for (i, j), vec in (products or {}).items():
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise AlgebraError(f"product index ({i}, {j}) out of range")
            clean = {}
            for k, c in dict(vec).items():
                c = field(c)
                if c:
                    clean[int(k)] = c
            for k in clean:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise AlgebraError(f"product ({i}, {j}) has a component outside degree "
                                       f"{self.degrees[i] + self.degrees[j]}")
            if i == 0 or j == 0:
                other = j if i == 0 else i
                if clean != {other: field.one}:
                    raise AlgebraError("products with the unit must be the identity")
                continue
            if clean:
                self._table[(i, j)] = clean
        self.marked = dict(marked or {})
        if check and not self._is_lazy():
            self.check_axioms(associativity=len(self.degrees) <= check_limit)

    def _is_lazy(self) -> bool:
        return False

    # basic shape ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.degrees)

    @property
    def top(self) -> int:
        return self.degrees[-1]

    @cached_property
    def dims(self) -> tuple:
        out = [0] * (self.top + 1)
        for d in self.degrees:
            out[d] += 1
        return tuple(out)

    @cached_property
    def offsets(self) -> tuple:
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return tuple(out)

    def degree_range(self, d: int) -> range:
        if not 0 <= d <= self.top:
            return range(0)
        return range(self.offsets[d], self.offsets[d] + self.dims[d])

    def label(self, i: int) -> str:
        if self._labels is not None:
            return self._labels[i]
        return "1" if i == 0 else f"e{i}"

    @property
    def labels(self) -> tuple:
        return tuple(self.label(i) for i in range(self.size))

    # products ------------------------------------------------------------

    def is_unknown(self, i: int, j: int) -> bool:
        return (i, j) in self._unknown

    def basis_product(self, i: int, j: int) -> dict:
        if i == 0:
            return {j: self.field.one}
        if j == 0:
            return {i: self.field.one}
        if self.degrees[i] + self.degrees[j] > self.top:
            return {}
        if (i, j) in self._unknown:
            raise UnknownProductError(i, j, self.labels)
        return self._table.get((i, j), {})

    def structure_constants(self):
        """Yield ``(i, j, vector_or_None)`` for every basis pair; None means UNKNOWN."""
        for i in range(self.size):
            for j in range(self.size):
                try:
                    yield i, j, dict(self.basis_product(i, j))
                except UnknownProductError:
                    yield i, j, None

    @property
    def has_unknown(self) -> bool:
        return bool(self._unknown)

    def check_axioms(self, associativity: bool = True):
        f = self.field
        rng = range(self.size)
        for i in rng:
            for j in rng:
                try:
                    ab = self.basis_product(i, j)
                    ba = self.basis_product(j, i)
                except UnknownProductError:
                    continue
                sign = -1 if self.degrees[i] * self.degrees[j] % 2 else 1
                if ab != {k: f(sign * c) for k, c in ba.items()}:
                    raise AlgebraError(f"graded commutativity fails for ({self.label(i)}, {self.label(j)})")
        if not associativity:
            return
        for i, j, k in itertools.product(rng, rng, rng):
            if self.degrees[i] + self.degrees[j] + self.degrees[k] > self.top or 0 in (i, j, k):
                continue
            x, y, z = self.basis_element(i), self.basis_element(j), self.basis_element(k)
            try:
                lhs = (x * y) * z
                rhs = x * (y * z)
            except UnknownProductError:
                continue
            if lhs != rhs:
                raise AlgebraError(f"associativity fails for ({self.label(i)}, {self.label(j)}, {self.label(k)})")

    # elements ------------------------------------------------------------

    def element(self, coeffs: Mapping) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: self.field.one})

    def homogeneous(self, degree: int, coords: Sequence) -> "AlgebraElement":
        r = self.degree_range(degree)
        if len(coords) != len(r):
            raise AlgebraError(f"degree {degree} has dimension {len(r)}, got {len(coords)} coordinates")
        return AlgebraElement(self, {k: self.field(c) for k, c in zip(r, coords)})

    @property
    def unit(self) -> "AlgebraElement":
        return self.basis_element(0)

    @property
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def with_marked(self, marked: Mapping[str, MarkedClass]) -> "GradedAlgebra":
        """Shallow copy sharing all structure, with a new set of marked classes."""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.marked = {}
        for name, mc in marked.items():
            clone.marked[name] = MarkedClass(name, AlgebraElement(clone, mc.element.as_dict()), mc.tag)
        return clone

    def same_structure(self, other: "GradedAlgebra") -> bool:
        return self._structure is other._structure

    @cached_property
    def self_tensor(self) -> "TensorAlgebra":
        return tensor(self, self)

    def __repr__(self):
        return f"<{type(self).__name__} over {self.field} dims={self.dims}>"


class TensorAlgebra(GradedAlgebra):
    """A (x) B with basis pairs ordered by (total degree, left index, right index)."""

    def __init__(self, left: GradedAlgebra, right: GradedAlgebra):
        if left.field != right.field:
            raise FieldMismatchError(f"cannot tensor algebras over {left.field} and {right.field}")
        self.left, self.right = left, right
        pairs = sorted(
            itertools.product(range(left.size), range(right.size)),
            key=lambda ab: (left.degrees[ab[0]] + right.degrees[ab[1]], ab[0], ab[1]),
        )
        self.pairs = tuple(pairs)
        self.index = {ab: k for k, ab in enumerate(pairs)}
        self._cache = {}
        super().__init__(
            left.field,
            [left.degrees[a] + right.degrees[b] for a, b in pairs],
            check=False,
        )

    def _is_lazy(self) -> bool:
        return True

    def label(self, i: int) -> str:
        a, b = self.pairs[i]
        return f"{self.left.label(a)}(x){self.right.label(b)}"

    def is_unknown(self, i: int, j: int) -> bool:
        try:
            self.basis_product(i, j)
        except UnknownProductError:
            return True
        return False

    @property
    def has_unknown(self) -> bool:
        return self.left.has_unknown or self.right.has_unknown

    def basis_product(self, i: int, j: int) -> dict:
        key = (i, j)
        hit = self._cache.get(key)
        if hit is not None:
            if isinstance(hit, UnknownProductError):
                raise hit
            return hit
        try:
            out = self._compute(i, j)
        except UnknownProductError as e:
            err = UnknownProductError(i, j)
            err.__cause__ = e
            self._cache[key] = err
            raise err
        self._cache[key] = out
        return out

    def _compute(self, i: int, j: int) -> dict:
        if i == 0:
            return {j: self.field.one}
        if j == 0:
            return {i: self.field.one}
        if self.degrees[i] + self.degrees[j] > self.top:
            return {}
        a, b = self.pairs[i]
        a2, b2 = self.pairs[j]
        left, right = self.left, self.right
        pa = left.basis_product(a, a2)
        if not pa:
            return {}
        pb = right.basis_product(b, b2)
        if not pb:
            return {}
        sign = -1 if right.degrees[b] * left.degrees[a2] % 2 else 1
        f = self.field
        out = {}
        for k, c in pa.items():
            for l, d in pb.items():
                out[self.index[(k, l)]] = f(sign * c * d)
        return out

    def left_embed(self, x: "AlgebraElement") -> "AlgebraElement":
        """x (x) 1"""
        if not x.algebra.same_structure(self.left):
            raise AlgebraError("element does not belong to the left factor")
        return AlgebraElement(self, {self.index[(k, 0)]: c for k, c in x.items()})

    def right_embed(self, y: "AlgebraElement") -> "AlgebraElement":
        """1 (x) y"""
        if not y.algebra.same_structure(self.right):
            raise AlgebraError("element does not belong to the right factor")
        return AlgebraElement(self, {self.index[(0, k)]: c for k, c in y.items()})

    def pure(self, x: "AlgebraElement", y: "AlgebraElement") -> "AlgebraElement":
        """x (x) y for arbitrary elements of the two factors."""
        f = self.field
        acc = {}
        for a, c in x.items():
            for b, d in y.items():
                _accumulate(f, acc, self.index[(a, b)], c * d)
        return AlgebraElement(self, acc)


class AlgebraElement:
    """Immutable sparse vector in a GradedAlgebra."""

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: GradedAlgebra, coeffs: Mapping):
        f = algebra.field
        terms = {}
        for k, c in dict(coeffs).items():
            c = f(c) if not f.contains(c) else c
            if c:
                terms[int(k)] = c
        self.algebra = algebra
        self._terms = tuple(sorted(terms.items()))

    def items(self):
        return self._terms

    def as_dict(self) -> dict:
        return dict(self._terms)

    def coefficient(self, i: int):
        return self.as_dict().get(i, self.algebra.field.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degrees(self) -> set:
        return {self.algebra.degrees[k] for k, _ in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self) -> int | None:
        """Degree of a nonzero homogeneous element (None for zero)."""
        ds = self.degrees
        if len(ds) > 1:
            raise AlgebraError("element is not homogeneous")
        return next(iter(ds)) if ds else None

    def component(self, degree: int) -> tuple:
        d = self.as_dict()
        z = self.algebra.field.zero
        return tuple(d.get(k, z) for k in self.algebra.degree_range(degree))

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement) or not self.algebra.same_structure(other.algebra):
            raise AlgebraError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        acc = self.as_dict()
        f = self.algebra.field
        for k, c in other._terms:
            _accumulate(f, acc, k, c)
        return AlgebraElement(self.algebra, acc)

    def __neg__(self):
        f = self.algebra.field
        return AlgebraElement(self.algebra, {k: f.neg(c) for k, c in self._terms})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "AlgebraElement":
        f = self.algebra.field
        s = f(s)
        return AlgebraElement(self.algebra, {k: f.mul(s, c) for k, c in self._terms})

    def __mul__(self, other):
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.same_structure(other.algebra) and self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*{self.algebra.label(k)}" for k, c in self._terms)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._check(y)
    A = x.algebra
    f = A.field
    p = f.characteristic
    degs, top = A.degrees, A.top
    acc = {}
    for i, a in x.items():
        di = degs[i]
        for j, b in y.items():
            if di + degs[j] > top:
                continue
            ab = a * b
            for k, c in A.basis_product(i, j).items():
                acc[k] = acc.get(k, 0) + ab * c
    if p:
        acc = {k: v % p for k, v in acc.items()}
    return AlgebraElement(A, {k: v for k, v in acc.items() if v})


def power(x: AlgebraElement, k: int) -> AlgebraElement:
    if k < 0:
        raise ValueError("negative powers are not defined")
    out = x.algebra.unit
    for _ in range(k):
        out = out * x
    return out


def tensor(A: GradedAlgebra, B: GradedAlgebra) -> TensorAlgebra:
    return TensorAlgebra(A, B)


def trivial_algebra(field: FieldSpec) -> GradedAlgebra:
    """The field itself, concentrated in degree 0."""
    return GradedAlgebra(field, [0], labels=["1"])


class DiagonalMap:
    """Multiplication A (x) A -> A, a (x) b |-> ab."""

    def __init__(self, AA: GradedAlgebra):
        if not isinstance(AA, TensorAlgebra) or not AA.left.same_structure(AA.right):
            raise AlgebraError("diagonal restriction needs an algebra of the form A (x) A")
        self.source = AA
        self.target = AA.left

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if not x.algebra.same_structure(self.source):
            raise AlgebraError("element is not in the source algebra")
        A, f = self.target, self.target.field
        acc = {}
        for k, c in x.items():
            a, b = self.source.pairs[k]
            for m, d in A.basis_product(a, b).items():
                _accumulate(f, acc, m, c * d)
        return AlgebraElement(A, acc)

    def matrix(self) -> Matrix:
        A, AA = self.target, self.source
        cols = []
        for k in range(AA.size):
            img = self(AA.basis_element(k)).as_dict()
            cols.append([img.get(m, 0) for m in range(A.size)])
        return Matrix.from_columns(A.field, cols, A.size)


def diagonal_restriction(AA: GradedAlgebra) -> DiagonalMap:
    return DiagonalMap(AA)


def zero_divisor(u: AlgebraElement, AA: TensorAlgebra | None = None) -> AlgebraElement:
    """1 (x) u - u (x) 1 in A (x) A."""
    if not u.is_homogeneous():
        raise AlgebraError("zero divisors are formed from homogeneous classes only")
    if AA is None:
        AA = u.algebra.self_tensor
    return AA.right_embed(u) - AA.left_embed(u)


def bidegree_component(x: AlgebraElement, p: int, q: int) -> tuple:
    """Coordinates of the A^p (x) B^q block, ordered by (left index, right index)."""
    T = x.algebra
    if not isinstance(T, TensorAlgebra):
        raise AlgebraError("bidegree components only exist in tensor algebras")
    if not (0 <= p <= T.left.top and 0 <= q <= T.right.top):
        raise ValueError(f"invalid bidegree ({p}, {q})")
    d = x.as_dict()
    z = T.field.zero
    return tuple(d.get(T.index[(a, b)], z) for a in T.left.degree_range(p) for b in T.right.degree_range(q))


# standard algebras --------------------------------------------------------

def free_graded_commutative(
    field: FieldSpec,
    generator_degrees: Sequence[int],
    max_degree: int,
    relations: Iterable[Sequence[int]] = (),
    names: Sequence[str] | None = None,
) -> GradedAlgebra:
    """Polynomial on even generators (x) exterior on odd ones, modulo monomials.

    Monomials of total degree above ``max_degree`` or divisible by one of the
    ``relations`` (exponent vectors) are set to zero.
    """
    gd = list(generator_degrees)
    if any(d <= 0 for d in gd):
        raise AlgebraError("generators must have positive degree")
    names = list(names) if names is not None else [f"x{i}" for i in range(len(gd))]
    rels = [tuple(r) for r in relations]

    def alive(m):
        return not any(all(e >= r for e, r in zip(m, rel)) for rel in rels)

    ranges = [range(0, 2) if d % 2 else range(0, max_degree // d + 1) for d in gd]
    monos = []
    for m in itertools.product(*ranges):
        deg = sum(e * d for e, d in zip(m, gd))
        if deg <= max_degree and alive(m):
            monos.append((deg, m))
    monos.sort(key=lambda dm: (dm[0], tuple(-e for e in dm[1])))
    index = {m: k for k, (_, m) in enumerate(monos)}
    odd = [i for i, d in enumerate(gd) if d % 2]

    def mono_label(m):
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
        return "*".join(parts) if parts else "1"

    table = {}
    for (d1, m1), (d2, m2) in itertools.product(monos, monos):
        if d1 + d2 > max_degree:
            continue
        m = tuple(a + b for a, b in zip(m1, m2))
        if m not in index:
            continue
        # moving each odd generator of m2 left past the higher odd generators of m1
        swaps = sum(1 for i in odd if m2[i] for j in odd if m1[j] and j > i)
        table[(index[m1], index[m2])] = {index[m]: -1 if swaps % 2 else 1}
    return GradedAlgebra(field, [d for d, _ in monos], table, labels=[mono_label(m) for _, m in monos])


def exterior_algebra(field: FieldSpec, n: int, names: Sequence[str] | None = None, degree: int = 1) -> GradedAlgebra:
    if degree % 2 == 0:
        raise AlgebraError("exterior generators must have odd degree")
    return free_graded_commutative(field, [degree] * n, degree * n, names=names)


def truncated_polynomial(field: FieldSpec, degree: int, height: int, name: str = "u",
                         max_degree: int | None = None) -> GradedAlgebra:
    """F[u]/(u^height) with |u| = degree, optionally cut off above ``max_degree``."""
    top = degree * (height - 1)
    if max_degree is not None:
        top = min(top, max_degree)
    return free_graded_commutative(field, [degree], top, names=[name])


# basis normalisation -------------------------------------------------------

def normal_form(A: GradedAlgebra) -> tuple:
    """Structure constants in a basis built from products of lower degrees.

    Degree 1 keeps the given basis; each higher degree takes, in a fixed
    order, the independent products of already-chosen basis elements and
    completes with original basis vectors.  Two algebras whose normal forms
    agree are isomorphic, the isomorphism matching their degree-1 bases.
    """
    f = A.field
    chosen = {0: [A.unit], 1: [A.basis_element(i) for i in A.degree_range(1)]}
    for d in range(2, A.top + 1):
        rng = A.degree_range(d)
        cands = []
        for a in range(1, d):
            for x in chosen[a]:
                for y in chosen[d - a]:
                    cands.append(x * y)
        cands += [A.basis_element(i) for i in rng]
        vecs = [c.component(d) for c in cands]
        piv = pivot_columns(f, vecs, len(rng))
        chosen[d] = [cands[c] for c in piv]
    flat, layout = [], []
    for d in range(A.top + 1):
        flat += chosen[d]
        layout.append(len(chosen[d]))
    coords = {}
    for d in range(A.top + 1):
        if not chosen[d]:
            continue
        m = Matrix.from_columns(f, [x.component(d) for x in chosen[d]], len(chosen[d]))
        coords[d] = inverse(m)
    table = {}
    for i, x in enumerate(flat):
        for j, y in enumerate(flat):
            xy = x * y
            if xy.is_zero():
                continue
            d = xy.degree
            table[(i, j)] = (d, coords[d].apply(xy.component(d)))
    return tuple(layout), table
