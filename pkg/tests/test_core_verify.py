from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tccert.core_verify import (
    TORUS_TABLE,
    AffineSimplexInTorus,
    FormalChain,
    boundary,
    prism_simplices,
    prism_volumes,
    run_all,
    torus_cycle,
    torus_faults,
    verify_prism_identity,
    verify_prism_volumes,
    verify_torus_cycle,
)

H = Fraction(1, 2)


def test_formal_chain_drops_zeros():
    c = FormalChain([("a", 1), ("a", -1), ("b", 2)])
    assert c.terms == {"b": 2}
    assert (c - c).is_zero()


def test_prism_simplices_examples():
    assert prism_simplices(0) == [[(0, 0), (0, 1)]]
    assert prism_simplices(1) == [[(0, 0), (0, 1), (1, 1)], [(0, 0), (1, 0), (1, 1)]]
    assert len(prism_simplices(2)) == 3
    with pytest.raises(ValueError):
        prism_simplices(-1)


def test_prism_simplex_shape():
    for k in range(5):
        for j, s in enumerate(prism_simplices(k)):
            assert s == [(i, 0) for i in range(j + 1)] + [(i, 1) for i in range(j, k + 1)]


def test_prism_identity_k0():
    rep = verify_prism_identity(0)
    assert rep.ok
    d = boundary(FormalChain({((0, 0), (0, 1)): 1}))
    assert d.terms == {((0, 1),): 1, ((0, 0),): -1}


@pytest.mark.parametrize("k", range(6))
def test_prism_identity(k):
    assert verify_prism_identity(k).ok


def test_prism_raw_term_count():
    assert verify_prism_identity(3).raw_terms == 20
    assert verify_prism_identity(1).raw_terms == 6


@pytest.mark.parametrize("k", range(1, 5))
def test_prism_sign_faults_detected(k):
    for j in range(k + 1):
        rep = verify_prism_identity(k, fault=j)
        assert not rep.ok and rep.residue


@pytest.mark.parametrize("k", range(4))
def test_prism_volumes(k):
    ok, _ = verify_prism_volumes(k)
    assert ok
    vols = prism_volumes(k)
    assert len(vols) == k + 1 and all(v > 0 for v in vols)


def test_torus_cycle_table():
    tau = torus_cycle()
    assert len(tau) == 4
    s10 = AffineSimplexInTorus.from_vertices(TORUS_TABLE[(1, 0)])
    assert s10.base == (0, 0) and s10.edges == ((0, H), (1, H))
    s21 = AffineSimplexInTorus.from_vertices(TORUS_TABLE[(2, 1)])
    assert s21.base == (0, 0) and s21.edges == ((1, 0), (1, -H))
    assert tau.terms[s10] == 1 and tau.terms[s21] == 1


def test_affine_simplex_equality_mod_lattice():
    a = AffineSimplexInTorus((0, 1), ((1, 0),))
    b = AffineSimplexInTorus((3, -2), ((1, 0),))
    c = AffineSimplexInTorus((0, 0), ((2, 0),))
    assert a == b and a != c


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_torus_cycle_translation_invariant(dx, dy):
    shifted = {k: [(x + dx, y + dy) for x, y in pts] for k, pts in TORUS_TABLE.items()}
    is_cycle, degree = verify_torus_cycle(torus_cycle(shifted))
    assert is_cycle and abs(degree) == 1


def test_torus_cycle():
    is_cycle, degree = verify_torus_cycle()
    assert is_cycle
    assert abs(degree) == 1


def test_torus_single_faults_detected():
    faults = list(torus_faults())
    assert len(faults) == 4 + 4 * 3 * 2
    for name, chain in faults:
        assert not verify_torus_cycle(chain)[0], name


def test_run_all():
    results = run_all()
    assert all(ok for _, ok, _ in results)
    assert all(ok for _, ok, _ in run_all(max_k=0))
    assert not all(ok for _, ok, _ in run_all(fault="prism-sign"))
    assert not all(ok for _, ok, _ in run_all(fault="torus-sign"))
    with pytest.raises(ValueError):
        run_all(fault="nope")
