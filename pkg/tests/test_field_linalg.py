from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tccert.field_linalg import (
    QQ,
    FieldSpec,
    Matrix,
    binomial_in_field,
    image_basis,
    inverse,
    kernel_basis,
    rank,
    reduce_echelon,
)

F5 = FieldSpec(5)
FIELDS = [QQ, FieldSpec(2), FieldSpec(3), F5, FieldSpec(7)]


def test_fieldspec_rejects_composite():
    for bad in (1, 4, 6, 9, -3):
        with pytest.raises(ValueError):
            FieldSpec(bad)


def test_scalars_are_exact_and_reduced():
    assert QQ(Fraction(6, 4)) == Fraction(3, 2)
    assert F5(7) == 2
    assert F5(-1) == 4
    assert F5.parse("4 mod 5") == 4
    assert F5.parse("1/2") == 3
    assert QQ.parse("−2") == -2
    with pytest.raises(ValueError):
        F5.parse("1 mod 7")


def test_reduce_echelon_examples():
    r, piv, _ = reduce_echelon(Matrix.identity(F5, 2))
    assert (r, piv) == (2, [0, 1])
    r, piv, _ = reduce_echelon(Matrix.zeros(QQ, 3, 4))
    assert (r, piv) == (0, [])
    assert rank(Matrix.from_rows(QQ, [[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(QQ, 3)) == []
    assert len(kernel_basis(Matrix.zeros(QQ, 2, 3))) == 3
    m = Matrix.from_rows(F5, [[1, 2], [2, 4]])
    (v,) = kernel_basis(m)
    assert m.apply(v) == (0, 0)
    assert v[1] != 0 and v[0] == (3 * v[1]) % 5  # proportional to (-2, 1) = (3, 1)


def test_image_examples():
    assert image_basis(Matrix.identity(QQ, 2)) == [(1, 0), (0, 1)]
    assert image_basis(Matrix.zeros(QQ, 2, 2)) == []
    (v,) = image_basis(Matrix.from_rows(QQ, [[1, 2], [2, 4]]))
    assert v[1] == 2 * v[0]


def test_binomial_in_field():
    assert binomial_in_field(2, 1, F5) == 2
    assert binomial_in_field(4, 2, FieldSpec(3)) == 0
    assert binomial_in_field(9, 0, QQ) == 1
    with pytest.raises(ValueError):
        binomial_in_field(2, 3, QQ)


def test_inverse_roundtrip():
    m = Matrix.from_rows(QQ, [[2, 1], [1, 1]])
    assert (m @ inverse(m)) == Matrix.identity(QQ, 2)


@st.composite
def matrices(draw):
    f = draw(st.sampled_from(FIELDS))
    r = draw(st.integers(0, 5))
    c = draw(st.integers(0, 5))
    rows = [[draw(st.integers(-6, 6)) for _ in range(c)] for _ in range(r)]
    return Matrix.from_rows(f, rows, c)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == m.cols


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    _, _, rref = reduce_echelon(m)
    assert reduce_echelon(rref)[2] == rref


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_and_image_verify(m):
    for v in kernel_basis(m):
        assert not any(m.apply(v))
    img = image_basis(m)
    assert len(img) == rank(m)
    cols = [m.column(j) for j in range(m.cols)]
    for v in img:
        assert v in cols


@given(st.sampled_from(FIELDS[1:]), st.integers(-50, 50))
def test_characteristic_kills_p(f, a):
    p = f.characteristic
    assert f.mul(f(a), f(p)) == 0
