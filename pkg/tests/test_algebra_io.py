from __future__ import annotations

from fractions import Fraction

import pytest

from grassbgg.algebra import fixture_abelian, fixture_product_of_curves, fixture_quotient
from grassbgg.algebra_io import (AlgebraFormatError, format_bivector, parse_algebra, parse_basis,
                                 parse_bivector, serialize_algebra)
from grassbgg.bivector import Bivector

ALGEBRAS = [
    fixture_abelian(3), fixture_abelian(5), fixture_product_of_curves(2, 2),
    fixture_product_of_curves(2, 3),
    fixture_quotient(4, 3, [parse_bivector("e0^e1+e2^e3", 4)]),
    fixture_quotient(5, 3, [parse_bivector("e0^e1+1/2*e2^e3", 5)], depth=3),
]


@pytest.mark.parametrize("a", ALGEBRAS, ids=lambda a: a.name)
def test_round_trip(a):
    text = serialize_algebra(a)
    b = parse_algebra(text)
    assert b == a
    assert serialize_algebra(b) == text


PRODUCT_22 = """\
formalgebra v1
d 2
q 4
h 1 4 4
mult 1
v0 * b2 -> 1*b0
v0 * b3 -> 1*b1
v1 * b2 -> 1*b2
v1 * b3 -> 1*b3
v2 * b0 -> -1*b0
v2 * b1 -> -1*b2
v3 * b0 -> -1*b1
v3 * b1 -> -1*b3
"""


def test_golden_product():
    assert serialize_algebra(fixture_product_of_curves(2, 2)) == PRODUCT_22


def test_comments_zero_rhs_and_fractions():
    text = """formalgebra v1   # header
d 2
q 2
h 1 2 1
mult 1
v0 * b1 -> 3/6*b0 + 1/2*b0
v1 * b0 -> -1*b0
v0 * b0 -> 0
"""
    a = parse_algebra(text)
    assert a.product(1, 0, 1) == {0: Fraction(1)}
    assert a.validation.valid


@pytest.mark.parametrize("text,msg", [
    ("", "empty"),
    ("formalgebra v2\n", "header"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nfoo 3\n", "unknown directive"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nv0 * b0 -> 1*b0\n", "outside"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nmult 1\nmult 1\n", "duplicate"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nmult 1\nv0 * b1 -> 1*b0\nv0 * b1 -> 1*b0\n", "duplicate"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nmult 1\nv0 * b1 -> 0.5*b0\n", "bad term"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nmult 1\nv0 * b1 -> 1/0*b0\n", "zero denominator"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nmult 1\nv5 * b1 -> 1*b0\n", "out of range"),
    ("formalgebra v1\nd 2\nq 2\n", "missing"),
    ("formalgebra v1\nd 2\nq 2\nh 1 2 1\nmult 2\n", "outside"),
])
def test_rejects(text, msg):
    with pytest.raises(AlgebraFormatError, match=msg):
        parse_algebra(text)


def test_basis_file():
    m = parse_basis("1 0 0 0\n# comment\n0 1/2 0 0\n")
    assert m.shape == (2, 4) and m[1, 1] == Fraction(1, 2)
    with pytest.raises(AlgebraFormatError):
        parse_basis("1 0\n1\n")
    with pytest.raises(AlgebraFormatError):
        parse_basis("\n")


def test_bivector_literals():
    v = parse_bivector("e0^e1 + e2^e3", 4)
    assert v == Bivector.from_terms(4, {(0, 1): 1, (2, 3): 1})
    assert parse_bivector("e1^e0", 4) == Bivector.from_terms(4, {(0, 1): -1})
    w = parse_bivector("1/2*e0^e2-3*e1^e3", 4)
    assert format_bivector(w) == "1/2*e0^e2-3*e1^e3"
    assert parse_bivector(format_bivector(w), 4) == w
    assert format_bivector(Bivector.from_terms(4, {})) == "0"
    for bad in ["", "e0^e0", "e0^e9", "e0^e1 e2^e3", "x"]:
        with pytest.raises(ValueError):
            parse_bivector(bad, 4)
