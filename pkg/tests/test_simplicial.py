from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from tccert.chain import betti_profile, cohomology
from tccert.errors import AlgebraError, FieldMismatchError
from tccert.field_linalg import QQ, FieldSpec, kernel_basis
from tccert.simplicial import (
    Cochain,
    SimplicialComplex,
    coboundary,
    cohomology_ring,
    cup,
    to_chain_complex,
    triangulation,
    unit_cochain,
)

TORUS = triangulation("torus")
F2 = FieldSpec(2)


def test_facets_must_increase():
    with pytest.raises(ValueError):
        SimplicialComplex(3, ((0, 2, 1),))
    with pytest.raises(ValueError):
        SimplicialComplex(3, ((0, 3),))


def test_face_lattice_contains_all_faces():
    for name in ("torus", "rp2", "genus2"):
        sc = triangulation(name)
        for k, level in enumerate(sc.faces):
            present = set(level)
            for s in level:
                for i in range(len(s)):
                    if k:
                        assert s[:i] + s[i + 1:] in set(sc.faces[k - 1])
            assert list(level) == sorted(present)


def test_chain_complex_examples():
    tri = SimplicialComplex(3, ((0, 1, 2),))
    assert to_chain_complex(tri).dims == (3, 3, 1)
    cc = to_chain_complex(TORUS)
    assert cc.dims == (7, 21, 14)
    assert cc.euler_characteristic() == 0
    assert to_chain_complex(triangulation("sphere")).euler_characteristic() == 2
    assert to_chain_complex(triangulation("genus2")).euler_characteristic() == -2


def _cocycle_reps(sc, f, k):
    return [Cochain(sc, k, f, z) for z in cohomology(to_chain_complex(sc), f, k).representatives]


def test_unit_law():
    for alpha in _cocycle_reps(TORUS, QQ, 1):
        assert cup(TORUS, alpha, unit_cochain(TORUS, QQ)) == alpha
        assert cup(TORUS, unit_cochain(TORUS, QQ), alpha) == alpha


def test_torus_pairing_with_fundamental_cycle():
    cc = to_chain_complex(TORUS)
    (z,) = kernel_basis(cc.boundary(2, QQ))
    a, b = _cocycle_reps(TORUS, QQ, 1)
    h2 = cohomology(cc, QQ, 2)

    def pair(c):
        return sum(x * y for x, y in zip(c.values, z))
    assert abs(pair(cup(TORUS, a, b))) == 1
    assert not any(h2.project(cup(TORUS, a, a).values))
    assert not any(h2.project(cup(TORUS, b, b).values))


def test_field_mismatch():
    a = unit_cochain(TORUS, QQ)
    with pytest.raises(FieldMismatchError):
        cup(TORUS, a, unit_cochain(TORUS, F2))


def test_cup_beyond_dimension_is_empty():
    a, _ = _cocycle_reps(TORUS, QQ, 1)
    two = cup(TORUS, a, a)
    assert cup(TORUS, two, a).values == ()


def random_cochain(draw, sc, k, f):
    return Cochain(sc, k, f, [draw(st.integers(-3, 3)) for _ in range(sc.count(k))])


@st.composite
def cochain_pairs(draw):
    f = draw(st.sampled_from([QQ, F2, FieldSpec(3)]))
    p = draw(st.integers(0, 1))
    q = draw(st.integers(0, 1))
    return f, random_cochain(draw, TORUS, p, f), random_cochain(draw, TORUS, q, f)


@settings(max_examples=60, deadline=None)
@given(cochain_pairs())
def test_leibniz(data):
    f, a, b = data
    lhs = coboundary(TORUS, cup(TORUS, a, b))
    rhs = cup(TORUS, coboundary(TORUS, a), b) + cup(TORUS, a, coboundary(TORUS, b)).scale((-1) ** a.degree)
    if a.degree + b.degree + 1 <= TORUS.dimension:
        assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_cochain_associativity(data):
    draw = data.draw
    f = QQ
    a, b, c = (random_cochain(draw, TORUS, k, f) for k in (draw(st.integers(0, 1)), 0, draw(st.integers(0, 1))))
    assert cup(TORUS, cup(TORUS, a, b), c) == cup(TORUS, a, cup(TORUS, b, c))


@pytest.mark.parametrize("name", ["torus", "genus2", "rp2"])
@pytest.mark.parametrize("f", [QQ, F2, FieldSpec(3)], ids=str)
def test_graded_commutativity_on_cohomology(name, f):
    A = cohomology_ring(triangulation(name), f)
    for i in range(A.size):
        for j in range(A.size):
            x, y = A.basis_element(i), A.basis_element(j)
            sign = (-1) ** (A.degrees[i] * A.degrees[j])
            assert x * y == (y * x).scale(sign)


def test_ring_examples():
    C = cohomology_ring(triangulation("circle"), QQ)
    assert C.dims == (1, 1)
    assert (C.basis_element(1) * C.basis_element(1)).is_zero()
    T = cohomology_ring(TORUS, QQ)
    a, b = T.basis_element(1), T.basis_element(2)
    assert (a * a).is_zero() and (b * b).is_zero()
    assert (a * b + b * a).is_zero()
    assert not (a * b).is_zero()
    P = cohomology_ring(triangulation("rp2"), F2)
    w = P.basis_element(1)
    assert P.dims == (1, 1, 1) and not (w * w).is_zero()


@pytest.mark.parametrize("name", ["circle", "torus", "rp2", "sphere", "genus2"])
def test_ring_dims_match_cohomology(name):
    sc = triangulation(name)
    for f in (QQ, F2):
        dims = list(cohomology_ring(sc, f).dims)
        b = betti_profile(to_chain_complex(sc), f)
        while b and b[-1] == 0:
            b.pop()
        assert dims == b


def test_disconnected_rejected():
    with pytest.raises(AlgebraError):
        cohomology_ring(SimplicialComplex(2, ((0,), (1,))), QQ)


def test_unknown_triangulation():
    with pytest.raises(KeyError):
        triangulation("klein")
