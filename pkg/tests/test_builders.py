from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import F3, F5, Q, a5b5_presentation, genus2_presentation
from tccert.builders import (
    AssertionSet,
    GroupPresentation,
    MarkSpec,
    bundled,
    inverse_word,
    is_proper_power,
    presentation_chain_complex,
    presentation_complex,
    product,
    simplicial_space,
)
from tccert.chain import betti_profile
from tccert.errors import FieldMismatchError, UnknownProductError
from tccert.ring import ASSERTED, PULLBACK, exterior_algebra
from tccert.simplicial import triangulation


def test_presentation_examples(g2pres):
    assert presentation_chain_complex(g2pres.presentation).boundaries[1] == ((0,), (0,), (0,), (0,))
    assert g2pres.ring(Q).dims == (1, 4, 1)
    a5 = a5b5_presentation()
    assert a5.presentation.exponent_sums("aaaaabbbbb") == (5, 5)
    assert a5.ring(F5).dims == (1, 2, 1)
    assert a5.ring(Q).dims == (1, 1)
    free = presentation_complex(GroupPresentation(("a",)))
    assert free.chain.dims == (1, 1, 0)
    assert free.ring(Q).dims == (1, 1)


def test_undeclared_letter():
    with pytest.raises(ValueError, match="undeclared"):
        GroupPresentation(("a", "b"), ("abC",))


def test_h1_products_unknown(g2pres):
    A = g2pres.ring(Q)
    with pytest.raises(UnknownProductError):
        A.basis_element(1) * A.basis_element(2)
    v = A.marked["u"].element
    assert (v * v).is_zero()  # forced by dimension


@settings(max_examples=100)
@given(st.text(alphabet="abcABC", max_size=12))
def test_inverse_word_negates_exponent_sums(w):
    p = GroupPresentation(("a", "b", "c"), (w,))
    assert p.exponent_sums(inverse_word(w)) == tuple(-x for x in p.exponent_sums(w))


def test_proper_power_is_informational():
    assert is_proper_power("abab")
    assert not is_proper_power("abAB")
    assert is_proper_power("aaaaa")


def test_aspherical_implies_two_aspherical():
    a = AssertionSet(aspherical_space=True)
    assert a.two_aspherical
    assert "two_aspherical" in dict(a.provenance)
    assert AssertionSet.from_dict(a.to_dict()) == a


def test_product_examples(g2pres):
    C = bundled("circle")
    assert product([C, C]).ring(Q).dims == (1, 2, 1)
    P = product([g2pres, g2pres])
    A = P.ring(Q)
    assert A.dims == (1, 8, 18, 8, 1)
    assert P.dimension == 4
    u1, u2 = A.marked["u_1"], A.marked["u_2"]
    assert not (u1.element * u2.element).is_zero()
    assert product([g2pres]) is g2pres


def test_product_errors():
    with pytest.raises(ValueError):
        product([])
    from tccert.builders import algebra_space
    with pytest.raises(FieldMismatchError):
        product([algebra_space(exterior_algebra(Q, 1)), algebra_space(exterior_algebra(F3, 1))])


def test_product_assertions_conservative(g2pres):
    P = product([g2pres, g2pres])
    assert not P.assertions.pi1_no_Z2
    assert P.assertions.two_aspherical and P.assertions.pi1_torsion_free


def test_pullback_tags():
    P = product([bundled("genus2"), bundled("genus2")])
    assert all(mc.tag == "plain" for mc in P.ring(Q).marked.values())  # promotion happens in the engine
    a = AssertionSet(atoroidal_class_names=("u",))
    g = genus2_presentation(a)
    R = product([g, g]).ring(Q)
    assert g.ring(Q).marked["u"].tag == ASSERTED
    assert {mc.tag for mc in R.marked.values()} == {PULLBACK}


def test_bundled_examples():
    t = bundled("torus")
    assert t.chain_complex().euler_characteristic() == 0
    g = bundled("genus2")
    assert g.chain_complex().euler_characteristic() == -2
    assert betti_profile(g.chain_complex(), Q) == [1, 4, 1]
    with pytest.raises(KeyError):
        bundled("nonexistent")


@pytest.mark.parametrize("names", [("circle", "torus"), ("torus", "genus2"), ("circle", "circle", "tetrahedron")])
def test_euler_and_kunneth_for_products(names):
    spaces = [bundled(n) for n in names]
    for f in (Q, F3):
        A = product(spaces).ring(f)
        chis = [sum((-1) ** k * d for k, d in enumerate(s.ring(f).dims)) for s in spaces]
        prod_chi = 1
        for c in chis:
            prod_chi *= c
        assert sum((-1) ** k * d for k, d in enumerate(A.dims)) == prod_chi
        dims = [1]
        for s in spaces:
            b = s.ring(f).dims
            dims = [sum(dims[i] * b[k - i] for i in range(len(dims)) if 0 <= k - i < len(b))
                    for k in range(len(dims) + len(b) - 1)]
        assert list(A.dims) == dims


def test_marks():
    t = bundled("torus")
    assert set(t.ring(Q).marked) == {"u"}
    g = bundled("genus2").with_marks([MarkSpec("w", ["2"])])
    assert g.ring(Q).marked["w"].element.coefficient(g.ring(Q).size - 1) == 2
    with pytest.raises(ValueError):
        bundled("genus2").with_marks([MarkSpec("w", ["0"])]).ring(Q)
    with pytest.raises(ValueError):
        bundled("circle").with_marks([MarkSpec("w")]).ring(Q)
    assert bundled("circle").ring(Q).marked == {}


def test_space_id_is_stable():
    assert bundled("torus").space_id == bundled("torus").space_id
    assert bundled("torus").space_id != bundled("genus2").space_id
    s = simplicial_space(triangulation("torus"), "torus")
    assert s.space_id != bundled("torus").space_id  # assertions differ
