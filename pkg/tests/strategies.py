"""Hypothesis strategies shared by the ring and acceptance tests."""

from __future__ import annotations

from hypothesis import strategies as st

from tccert.field_linalg import FieldSpec
from tccert.ring import free_graded_commutative

FIELDS = [FieldSpec(0), FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(7)]


@st.composite
def graded_algebras(draw, top=None, fields=FIELDS):
    """Free graded-commutative algebras with at least one degree-2 generator, cut by monomial relations."""
    f = draw(st.sampled_from(fields))
    extra = draw(st.lists(st.sampled_from([1, 2, 3]), max_size=2))
    degs = [2] + extra
    top = draw(st.integers(2, 6)) if top is None else top
    rels = []
    for _ in range(draw(st.integers(0, 2))):
        rel = tuple(draw(st.integers(0, 3)) for _ in degs)
        if sum(rel) >= 2:
            rels.append(rel)
    return free_graded_commutative(f, degs, top, rels)


@st.composite
def degree2_classes(draw, A):
    rng = A.degree_range(2)
    coords = [draw(st.integers(-3, 3)) for _ in rng]
    return A.homogeneous(2, [A.field(c) for c in coords])
