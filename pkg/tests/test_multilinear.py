from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, strategies as st

from grassbgg.field import GF, QQ, ScalarKindError
from grassbgg.multilinear import (ExteriorElement, SymmetricElement, exterior_basis,
                                  is_decomposable, merge_sign, sym_multiply, symmetric_basis,
                                  wedge, wedge_all)


def e(q, *idx):
    return ExteriorElement.basis_element(q, idx)


def w(k, *idx):
    return SymmetricElement.monomial(k, idx)


def test_repeated_factor_vanishes():
    assert wedge(e(4, 1), e(4, 1)).is_zero()


def test_antisymmetry():
    assert e(4, 1) ^ e(4, 2) == -(e(4, 2) ^ e(4, 1))


def test_disjoint_sorted_indices():
    x = (e(5, 1) ^ e(5, 2)) ^ (e(5, 3) ^ e(5, 4))
    assert x.items() == [((1, 2, 3, 4), 1)]


def test_merge_sign():
    assert merge_sign((0, 2), (1,)) == -1
    assert merge_sign((1,), (0, 2)) == -1
    assert merge_sign((0, 1), (2, 3)) == 1
    assert merge_sign((2, 3), (0, 1)) == 1
    assert merge_sign((0,), (0,)) == 0


def test_degree_overflow_gives_zero():
    x = e(3, 0, 1) ^ e(3, 1, 2)
    assert x.is_zero() and x.degree == 4


def test_errors():
    with pytest.raises(ValueError):
        e(4, 0) ^ e(5, 1)
    with pytest.raises(ScalarKindError):
        e(4, 0) ^ ExteriorElement.basis_element(4, (1,), GF(7))
    with pytest.raises(ValueError):
        ExteriorElement(2, 4, {(1, 0): 1})


def test_degree_zero_unit():
    u = ExteriorElement.unit(3)
    assert u.items() == [((), 1)]
    assert (u ^ e(3, 2)) == e(3, 2)


def test_symmetric_products():
    assert w(3, 0) * w(3, 1) == w(3, 1) * w(3, 0)
    assert sym_multiply(w(3, 0), w(3, 0)).items() == [((0, 0), 1)]
    assert (w(3, 0) + w(3, 1)) * w(3, 0) == w(3, 0, 0) + w(3, 0, 1)
    with pytest.raises(ValueError):
        SymmetricElement(2, 3, {(1, 0): 1})


@pytest.mark.parametrize("q", range(1, 8))
def test_basis_counts(q):
    for n in range(q + 1):
        assert len(exterior_basis(q, n)) == comb(q, n)
    for m in range(5):
        assert len(symmetric_basis(q, m)) == comb(q + m - 1, m)


def test_basis_is_lex_sorted():
    b = exterior_basis(5, 3)
    assert b == sorted(b)
    s = symmetric_basis(3, 3)
    assert s == sorted(s) and s[0] == (0, 0, 0)


coef = st.integers(-3, 3)


def ext(q, n):
    keys = exterior_basis(q, n)
    return st.lists(coef, min_size=len(keys), max_size=len(keys)).map(
        lambda cs: ExteriorElement.from_vector(cs, n, QQ, dim=q))


@st.composite
def triple(draw):
    q = draw(st.integers(1, 6))
    degs = [draw(st.integers(0, q)) for _ in range(3)]
    return [draw(ext(q, n)) for n in degs]


@given(triple())
def test_graded_anticommutativity(xs):
    a, b, _ = xs
    sign = -1 if (a.degree * b.degree) % 2 else 1
    assert wedge(a, b) == wedge(b, a).scale(sign)


@given(triple())
def test_associativity(xs):
    a, b, c = xs
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(triple())
def test_bilinearity(xs):
    a, b, _ = xs
    assert wedge(a + a, b) == wedge(a, b).scale(2)


def test_decomposability():
    assert is_decomposable(wedge_all([[1, 1, 0, 0], [0, 1, 2, 0]], 4))
    assert not is_decomposable(e(4, 0, 1) + e(4, 2, 3))
    assert is_decomposable(e(5, 0, 1, 2) + e(5, 0, 1, 3))
    assert not is_decomposable(ExteriorElement(2, 4))
