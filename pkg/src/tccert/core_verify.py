"""Chain-level identities checked exactly at desk scale.

* The prism operator on Delta_k x [0,1]: the k+1 simplices
  [(v_0,0)..(v_j,0),(v_j,1)..(v_k,1)], the identity
  dP + Pd = top - bottom, and exact volume / barycenter checks.
* A fundamental cycle of the flat torus R^2/Z^2 built from four affine
  triangles: it is a cycle, and its signed area is +-1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .field_linalg import QQ, Matrix, inverse

DEFAULT_MAX_K = 4
HALF = Fraction(1, 2)


class FormalChain:
    """Finite formal sum of hashable keys with nonzero integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            acc[key] = acc.get(key, 0) + c
        self.terms = {k: c for k, c in acc.items() if c}

    def __add__(self, other: "FormalChain") -> "FormalChain":
        return FormalChain(itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self) -> "FormalChain":
        return FormalChain({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FormalChain") -> "FormalChain":
        return self + (-other)

    def scale(self, s) -> "FormalChain":
        return FormalChain({k: s * c for k, c in self.terms.items()})

    def map(self, fn: Callable) -> "FormalChain":
        """Extend ``fn`` (key -> FormalChain) linearly."""
        out: list = []
        for k, c in self.terms.items():
            out.extend((k2, c * c2) for k2, c2 in fn(k).terms.items())
        return FormalChain(out)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalChain) and self.terms == other.terms

    def __repr__(self):
        return f"FormalChain({self.terms!r})"


def simplex_boundary(simplex: tuple) -> FormalChain:
    return FormalChain(((simplex[:i] + simplex[i + 1:], (-1) ** i) for i in range(len(simplex))
                        if len(simplex) > 1))


def boundary(chain: FormalChain) -> FormalChain:
    return chain.map(simplex_boundary)


# -- prism ---------------------------------------------------------------

def prism_of(vertices: tuple) -> list:
    """The len(vertices) simplices of vertices x {0,1}, bottom-then-top."""
    k = len(vertices) - 1
    return [tuple((v, 0) for v in vertices[: j + 1]) + tuple((v, 1) for v in vertices[j:]) for j in range(k + 1)]


def prism_simplices(k: int) -> list:
    if k < 0:
        raise ValueError("k must be non-negative")
    return [list(s) for s in prism_of(tuple(range(k + 1)))]


def prism_operator(signs: Callable[[int], int] | None = None) -> Callable:
    sign = signs or (lambda j: (-1) ** j)

    def P(simplex: tuple) -> FormalChain:
        return FormalChain((s, sign(j)) for j, s in enumerate(prism_of(simplex)))
    return P


@dataclass
class PrismReport:
    k: int
    ok: bool
    raw_terms: int  # terms of dP(Delta_k) before cancellation
    residue: dict   # uncancelled terms of dP + Pd - (top - bottom)


def verify_prism_identity(k: int, fault: int | None = None) -> PrismReport:
    """Check dP(D) + P(dD) = (D,1) - (D,0) for D = Delta_k.

    ``fault`` flips the sign of prism simplex number ``fault`` (negative control).
    """
    base = (lambda j: (-1) ** j) if fault is None else (lambda j: -((-1) ** j) if j == fault else (-1) ** j)
    P = prism_operator(base)
    delta = tuple(range(k + 1))
    top = FormalChain({tuple((v, 1) for v in delta): 1})
    bottom = FormalChain({tuple((v, 0) for v in delta): 1})
    PD = P(delta)
    raw = sum(len(s) for s in PD.terms)
    lhs = boundary(PD) + boundary(FormalChain({delta: 1})).map(P)
    residue = lhs - (top - bottom)
    return PrismReport(k, residue.is_zero(), raw, dict(residue.terms))


def _coords(k: int, vertex: tuple) -> tuple:
    """(v_i, t) -> point of R^{k+1}: v_0 at the origin, v_i at e_i, t last."""
    i, t = vertex
    return tuple(Fraction(int(i == m + 1)) for m in range(k)) + (Fraction(t),)


def _det(rows: list) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def prism_volumes(k: int) -> list:
    """Exact volumes of the k+1 prism simplices in Delta_k x [0,1]."""
    out = []
    for s in prism_of(tuple(range(k + 1))):
        pts = [_coords(k, v) for v in s]
        edges = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
        out.append(abs(_det(edges)) / math.factorial(k + 1))
    return out


def _barycentric(simplex_pts: list, p: tuple) -> tuple:
    p0 = simplex_pts[0]
    cols = [[a - b for a, b in zip(q, p0)] for q in simplex_pts[1:]]
    n = len(p0)
    inv = inverse(Matrix.from_columns(QQ, cols, n))
    lam = inv.apply(tuple(a - b for a, b in zip(p, p0)))
    return (1 - sum(lam),) + tuple(lam)


def verify_prism_volumes(k: int) -> tuple[bool, str]:
    """Volumes sum to vol(Delta_k) = 1/k!, and each barycenter lies in its own simplex only."""
    vols = prism_volumes(k)
    total = sum(vols)
    if any(v == 0 for v in vols) or total != Fraction(1, math.factorial(k)):
        return False, f"volumes {list(map(str, vols))} sum to {total}, expected 1/{math.factorial(k)}"
    simplices = [[_coords(k, v) for v in s] for s in prism_of(tuple(range(k + 1)))]
    for j, s in enumerate(simplices):
        centre = tuple(sum(c) / len(s) for c in zip(*s))
        for m, other in enumerate(simplices):
            lam = _barycentric(other, centre)
            inside = all(x > 0 for x in lam) if m == j else all(x >= 0 for x in lam)
            if (m == j) != inside:
                return False, f"barycenter of simplex {j} misplaced relative to simplex {m}"
    return True, f"{k + 1} simplices, total volume {total}"


# -- torus cycle ---------------------------------------------------------

def _frac_point(p) -> tuple:
    return tuple(Fraction(x) for x in p)


@dataclass(frozen=True)
class AffineSimplexInTorus:
    """Affine simplex in R^2/Z^2: base point mod Z^2 plus exact edge vectors."""

    base: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(Fraction(x) % 1 for x in self.base))
        object.__setattr__(self, "edges", tuple(_frac_point(e) for e in self.edges))

    @classmethod
    def from_vertices(cls, pts) -> "AffineSimplexInTorus":
        pts = [_frac_point(p) for p in pts]
        return cls(pts[0], tuple(tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]))

    @property
    def dimension(self) -> int:
        return len(self.edges)

    def vertices(self) -> list:
        b = self.base
        return [b] + [tuple(x + y for x, y in zip(b, e)) for e in self.edges]

    def face(self, i: int) -> "AffineSimplexInTorus":
        vs = self.vertices()
        return AffineSimplexInTorus.from_vertices(vs[:i] + vs[i + 1:])

    def boundary(self) -> FormalChain:
        return FormalChain((self.face(i), (-1) ** i) for i in range(self.dimension + 1))

    def signed_area(self) -> Fraction:
        (a, b), (c, d) = self.edges
        return (a * d - b * c) / 2


TORUS_TABLE = {
    # (j, k): images of v_0, v_1, v_2
    (1, 0): ((0, 0), (0, HALF), (1, HALF)),
    (1, 1): ((0, 0), (1, 0), (1, HALF)),
    (2, 0): ((0, 1), (0, HALF), (1, HALF)),
    (2, 1): ((0, 1), (1, 1), (1, HALF)),
}


def torus_cycle(table: Mapping | None = None, signs: Mapping | None = None) -> FormalChain:
    """tau = sum over (j, k) of (-1)^(j+1+k) sigma_{j,k}."""
    table = TORUS_TABLE if table is None else table
    terms = []
    for (j, k), pts in sorted(table.items()):
        s = (-1) ** (j + 1 + k) if signs is None else signs[(j, k)]
        terms.append((AffineSimplexInTorus.from_vertices(pts), s))
    return FormalChain(terms)


def verify_torus_cycle(chain: FormalChain | None = None) -> tuple[bool, Fraction]:
    """(boundary vanishes, signed area / area of the torus)."""
    tau = torus_cycle() if chain is None else chain
    d = tau.map(lambda s: s.boundary())
    degree = sum(c * s.signed_area() for s, c in tau.terms.items())
    return d.is_zero(), degree


def torus_faults():
    """Every single-entry perturbation of the table and every single sign flip."""
    for key in sorted(TORUS_TABLE):
        signs = {k: (-1) ** (k[0] + 1 + k[1]) for k in TORUS_TABLE}
        signs[key] = -signs[key]
        yield f"sign of sigma_{key[0]}{key[1]}", torus_cycle(signs=signs)
    for key in sorted(TORUS_TABLE):
        for v in range(3):
            for c in range(2):
                table = {k: [list(p) for p in pts] for k, pts in TORUS_TABLE.items()}
                table[key][v][c] = Fraction(table[key][v][c]) + Fraction(1, 4)
                yield f"entry sigma_{key[0]}{key[1]} v{v}[{c}] + 1/4", torus_cycle(table)


# -- report --------------------------------------------------------------

FAULTS = ("prism-sign", "torus-sign")


def run_all(max_k: int = DEFAULT_MAX_K, fault: str | None = None) -> list:
    """[(check name, passed, detail)] for every identity and negative control."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    results = []
    for k in range(max_k + 1):
        rep = verify_prism_identity(k, fault=0 if fault == "prism-sign" else None)
        detail = f"{rep.raw_terms} raw terms" if rep.ok else f"uncancelled: {sorted(rep.residue.items())[:4]}"
        results.append((f"prism identity k={k}", rep.ok, detail))
    for k in range(min(max_k, 3) + 1):
        ok, detail = verify_prism_volumes(k)
        results.append((f"prism volumes k={k}", ok, detail))

    signs = None
    if fault == "torus-sign":
        signs = {k: (-1) ** (k[0] + 1 + k[1]) for k in TORUS_TABLE}
        signs[(1, 0)] = -signs[(1, 0)]
    is_cycle, degree = verify_torus_cycle(torus_cycle(signs=signs))
    results.append(("torus cycle boundary", is_cycle, "d(tau) = 0" if is_cycle else "d(tau) != 0"))
    results.append(("torus cycle degree", abs(degree) == 1, f"degree {degree}"))

    # negative controls: every single fault must be caught
    for k in range(1, max_k + 1):
        caught = all(not verify_prism_identity(k, fault=j).ok for j in range(k + 1))
        results.append((f"prism sign faults detected k={k}", caught, f"{k + 1} faults"))
    missed = [name for name, chain in torus_faults() if verify_torus_cycle(chain)[0]]
    results.append(("torus faults detected", not missed, "all detected" if not missed else f"missed: {missed}"))
    return results
