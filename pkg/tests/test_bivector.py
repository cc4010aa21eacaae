from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from grassbgg.algebra import (DegreeUnavailable, fixture_product_of_curves, fixture_quotient,
                              psi, psi_kernel)
from grassbgg.algebra_io import parse_bivector
from grassbgg.bivector import (INFINITE_RANK, BudgetExceeded, Bivector, Consensus, ExhaustiveFp,
                               RandomizedQ, bivector_rank, min_rank_in_subspace, parse_mode,
                               pencil_witness, pfaffian, secant_membership, skew_normal_form,
                               sub_pfaffians_vanish)
from grassbgg.field import GF, QQ
from grassbgg.matrix import ExactMatrix, random_invertible, rank
from grassbgg.multilinear import ExteriorElement, is_decomposable, wedge_all


def B(text, q):
    return parse_bivector(text, q)


def random_bivector(q, seed, field=QQ, bound=3):
    rng = random.Random(seed)
    n = q * (q - 1) // 2
    return Bivector.from_coordinates([rng.randint(-bound, bound) for _ in range(n)], q, field)


def low_rank_bivector(q, k, seed):
    rng = random.Random(seed)
    vecs = [[rng.randint(-3, 3) for _ in range(q)] for _ in range(2 * k)]
    x = ExteriorElement(2, q)
    for i in range(k):
        x = x + wedge_all(vecs[2 * i:2 * i + 2], q)
    return Bivector.from_exterior(x)


def test_rank_examples():
    assert bivector_rank(B("e0^e1", 4)) == 2
    assert bivector_rank(B("e0^e1+e0^e2", 4)) == 2
    assert bivector_rank(B("e0^e1+e2^e3", 4)) == 4
    assert bivector_rank(Bivector.from_terms(4, {})) == 0


def test_skew_validation():
    with pytest.raises(ValueError):
        Bivector(ExactMatrix.from_rows([[0, 1], [1, 0]]))
    with pytest.raises(ValueError):
        Bivector(ExactMatrix.from_rows([[1, 0], [0, 0]]))


def test_exterior_round_trip():
    v = random_bivector(6, 1)
    assert Bivector.from_exterior(v.to_exterior()) == v


def test_pfaffian_examples():
    a = 7
    assert pfaffian(ExactMatrix.from_rows([[0, a], [-a, 0]])) == a
    assert pfaffian(B("e0^e1+e2^e3", 4).matrix) == 1
    with pytest.raises(ValueError):
        pfaffian(B("e0^e1", 3).matrix)
    with pytest.raises(ValueError):
        pfaffian(ExactMatrix.from_rows([[0, 1], [2, 0]]))


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_pfaffian_squared_is_det(half, seed):
    m = random_bivector(2 * half, seed).matrix
    assert pfaffian(m) ** 2 == m.det()


def test_normal_form_examples():
    nf = skew_normal_form(B("e0^e1", 4))
    assert nf.rank == 2 and nf.recompose(4, QQ) == B("e0^e1", 4).to_exterior()
    assert skew_normal_form(Bivector.from_terms(4, {})).vectors == ()
    v = low_rank_bivector(6, 2, 11)
    nf = skew_normal_form(v)
    assert nf.rank == 4 and nf.recompose(6, QQ) == v.to_exterior()


@given(st.integers(2, 8), st.integers(0, 10**6))
def test_normal_form_recomposes(q, seed):
    v = random_bivector(q, seed)
    nf = skew_normal_form(v)
    assert nf.recompose(q, QQ) == v.to_exterior()
    assert nf.rank == bivector_rank(v)
    if nf.vectors:
        assert rank(ExactMatrix.from_rows(nf.vectors, QQ)) == nf.rank


@given(st.integers(2, 7), st.integers(0, 10**6))
def test_rank_basis_invariant(q, seed):
    v = random_bivector(q, seed)
    M = random_invertible(q, seed)
    assert rank(M.T @ v.matrix @ M) == bivector_rank(v)


def test_rank_is_even():
    for s in range(30):
        assert bivector_rank(random_bivector(7, s)) % 2 == 0


def test_secant_examples():
    assert secant_membership(B("e0^e1", 5), 1)
    assert not secant_membership(B("e0^e1+e2^e3", 4), 1)
    for s in range(5):
        assert secant_membership(random_bivector(7, s), 3)


@given(st.integers(2, 8), st.integers(1, 4), st.integers(0, 10**6))
def test_secant_routes_agree(q, k, seed):
    v = low_rank_bivector(q, min(k, q // 2), seed)
    for j in range(1, q // 2 + 1):
        assert sub_pfaffians_vanish(v, 2 * j + 2) == (bivector_rank(v) <= 2 * j)


def test_min_rank_examples():
    c = min_rank_in_subspace([B("e0^e1", 4)], ExhaustiveFp(5))
    assert c.rank == 2 and c.witness == B("e0^e1", 4).change_field(GF(5))
    assert min_rank_in_subspace([B("e0^e1+e2^e3", 4)]).rank == 4
    assert min_rank_in_subspace([]).rank == INFINITE_RANK


def test_min_rank_product_23():
    K = psi_kernel(fixture_product_of_curves(2, 3), 2)
    c = min_rank_in_subspace(K, ExhaustiveFp(5))
    assert c.rank == 2 and c.check(K) and c.char0_caveat
    # the witness lives in Lambda^2 V2
    assert all(i >= 2 and j >= 2 for (i, j), _ in c.witness.to_exterior().items())
    # rational confirmation
    w = c.witness_coefficients
    rational = sum((Bivector.from_exterior(x).scale(cf) for x, cf in zip(K[1:], w[1:])),
                   Bivector.from_exterior(K[0]).scale(w[0]))
    assert bivector_rank(rational) == 2
    cons = min_rank_in_subspace(K, Consensus())
    assert cons.rank == 2 and cons.per_prime == {5: 2, 7: 2, 11: 2} and cons.params["agree"]


def test_min_rank_order_independent():
    K = [B("e0^e1+e2^e3", 5), B("e1^e2+e3^e4", 5), B("e0^e4+e1^e3", 5)]
    r = {min_rank_in_subspace(perm, ExhaustiveFp(7)).rank
         for perm in (K, K[::-1], K[1:] + K[:1])}
    assert len(r) == 1


def test_min_rank_lex_first_witness():
    K = [B("e0^e1", 4), B("e2^e3", 4)]
    c = min_rank_in_subspace(K, ExhaustiveFp(5))
    assert c.witness_coefficients == (0, 1)


def test_randomized_upper_bound():
    K = psi_kernel(fixture_product_of_curves(2, 3), 2)
    c = min_rank_in_subspace(K, RandomizedQ(20, seed=1))
    assert c.rank == 2 and c.upper_bound_only and c.check(K)
    assert c == min_rank_in_subspace(K, RandomizedQ(20, seed=1))


def test_line_descent_finds_hidden_decomposable():
    # e0^e1 is in the span but every basis vector and small combination has rank 4
    K = [B("e0^e1+e2^e3", 4), B("e0^e1+2*e2^e3", 4)]
    c = min_rank_in_subspace(K, RandomizedQ(1, seed=0))
    assert c.rank == 2 and c.check(K)


def test_budget_and_dependence():
    K = [random_bivector(6, s) for s in range(5)]
    with pytest.raises(BudgetExceeded):
        min_rank_in_subspace(K, ExhaustiveFp(11, budget=100))
    with pytest.raises(ValueError):
        min_rank_in_subspace([B("e0^e1", 4), B("e0^e1", 4).scale(3)])


def test_parse_mode():
    assert parse_mode("fp:5") == ExhaustiveFp(5)
    assert parse_mode("fp:5,7,11") == Consensus((5, 7, 11))
    assert parse_mode("rand:30", seed=4) == RandomizedQ(30, 4)
    with pytest.raises(ValueError):
        parse_mode("exact")


def test_pencil_witness_k1():
    a = fixture_product_of_curves(2, 2)
    v = B("e0^e1", 4)
    w = pencil_witness(v, a)
    assert w == v.to_exterior() and not any(psi(a, 2)(w))


def test_pencil_witness_k2_pins_indexing():
    a = fixture_quotient(5, 3, [B("e0^e1+e2^e3", 5)], depth=3)
    v = B("e0^e1+e2^e3", 5)
    nf = skew_normal_form(v)
    v1, v2, v3, v4 = nf.vectors
    w = pencil_witness(v, a)
    # reading: prefix = v1, witness = v1^v3^v4 = v ^ v1
    assert w == wedge_all([v1, v3, v4], 5)
    assert w == v.to_exterior() ^ wedge_all([v1], 5)
    assert w.degree == 3 and is_decomposable(w) and not any(psi(a, 3)(w))


def test_pencil_witness_errors():
    a = fixture_quotient(4, 3, [B("e0^e1+e2^e3", 4)])
    with pytest.raises(DegreeUnavailable):
        pencil_witness(B("e0^e1+e2^e3", 4), a)
    with pytest.raises(ValueError):
        pencil_witness(B("e0^e2", 4), a)
    p = fixture_product_of_curves(2, 2)
    with pytest.raises(ValueError):
        pencil_witness(B("e0^e1+e2^e3", 4), p)  # k = 2 >= d
