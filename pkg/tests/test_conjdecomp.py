import random
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from slnchar.conjdecomp import (alpha_beta_split, bezout_min_p, brenner_reduce, decompose,
                                decompose_two_factor, witness_to_json)
from slnchar.exactmat import DimensionError, IntMatrix, SLMatrix, elementary, from_json
from strategies import sl_matrices


# Membership predicates written out directly from the shape of each subgroup.
def in_G1t(m):  # first column is ±e_1
    return m.column(0)[0] in (1, -1) and not any(m.column(0)[1:])


def in_Gn(m):  # last row is ±e_n^t
    r = m.row(m.n - 1)
    return r[-1] in (1, -1) and not any(r[:-1])


def in_V1(m):  # identity outside the first column
    n = m.n
    return all(m[i, j] == (1 if i == j else 0)
               for i in range(n) for j in range(1, n))


def check_witness(gamma, w):
    c = w.conjugator
    assert c @ gamma @ c.inv() == w.product()
    assert in_G1t(w.g1) and in_Gn(w.g2)
    if len(w.factors) == 3:
        assert in_V1(w.g3)


@given(sl_matrices(3, 20))
def test_decompose_sound(gamma):
    check_witness(gamma, decompose(gamma))


@given(sl_matrices(5, 25))
def test_decompose_sound_n5(gamma):
    check_witness(gamma, decompose(gamma))


@given(sl_matrices(4, 20))
def test_two_factor_sound(gamma):
    w = decompose_two_factor(gamma)
    assert len(w.factors) == 2
    check_witness(gamma, w)


@given(sl_matrices(4, 20))
def test_brenner_column_shape(g):
    c0, red = brenner_reduce(g)
    assert c0 @ g @ c0.inv() == red
    col = red.column(0)
    assert col[1] == 0 and not any(col[3:])
    assert gcd(red[0, 0], red[2, 0]) == 1


def test_documented_example():
    gamma = SLMatrix.from_rows([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    w = decompose(gamma)
    assert w.reduced.column(0) == [1, 0, 1]
    assert (w.k, w.l) == (1, 1)
    check_witness(gamma, w)


def test_single_swap_moves_gcd_to_row_three():
    c0, red = brenner_reduce(elementary(3, 2, 1))
    assert red.column(0) == [1, 0, 1]
    c0, red = brenner_reduce(SLMatrix.identity(3))
    assert c0.is_identity() and red.is_identity()


def test_identity_and_minus_identity():
    check_witness(SLMatrix.identity(3), decompose(SLMatrix.identity(3)))
    minus = -SLMatrix.identity(4)
    check_witness(minus, decompose_two_factor(minus))


@given(st.integers(-200, 200), st.integers(-200, 200))
def test_bezout_min_p(k, l):
    assume(gcd(k, l) == 1)
    p, q = bezout_min_p(k, l)
    assert p * k + q * l == 1
    # no solution with smaller |p|
    if l:
        for p2 in range(-abs(p) + 1, abs(p)):
            assert (1 - p2 * k) % l != 0


def test_two_factor_rejects_n3():
    with pytest.raises(DimensionError):
        decompose_two_factor(SLMatrix.identity(3))
    with pytest.raises(DimensionError):
        decompose(SLMatrix.identity(2))


def test_rejects_non_unimodular():
    with pytest.raises(ValueError):
        decompose(IntMatrix.from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=2), st.integers(-6, 6))
def test_alpha_beta_identity(coords, k):
    n = 3
    g3 = SLMatrix.trusted(n, (1, 0, 0, coords[0], 1, 0, coords[1], 0, 1))
    alpha, beta = alpha_beta_split(g3, k)
    x = elementary(n, 2, n)
    assert alpha @ beta == (x ** k) @ g3 @ (x ** -k)
    assert alpha == elementary(n, 2, 1, k * coords[1])


def test_witness_json_exact():
    rng = random.Random(3)
    gens = [elementary(3, i, j, s) for i in (1, 2, 3) for j in (1, 2, 3) if i != j for s in (1, -1)]
    gamma = SLMatrix.identity(3)
    for _ in range(40):
        gamma = gamma @ rng.choice(gens)
    obj = witness_to_json(decompose(gamma))
    c = from_json(obj["conjugator"])
    factors = [from_json(f) for f in obj["factors"]]
    assert c @ gamma @ c.inv() == factors[0] @ factors[1] @ factors[2]
