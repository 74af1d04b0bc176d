import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from slnchar import modp
from slnchar.exactmat import det_key, elementary, mul_key_mod
from slnchar.finquot import (CharacterTable, closure, congruence_kernel, conjugacy_classes,
                             dixon_prime, elementary_generators, enumerate_group, inv_key_mod,
                             lift_character, sl_order, tits_containment_check)
from slnchar.subgroups import ResourceLimitError


def brute_sl(n, N):
    return {a for a in itertools.product(range(N), repeat=n * n) if det_key(a, n) % N == 1 % N}


@pytest.mark.parametrize("n,N", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2)])
def test_enumeration_matches_brute_force(n, N):
    g = enumerate_group(n, N)
    assert set(g.keys) == brute_sl(n, N)
    assert len(g) == sl_order(n, N)


def test_order_formula_values():
    assert [sl_order(2, 2), sl_order(2, 3), sl_order(3, 2), sl_order(3, 3)] == [6, 24, 168, 5616]
    assert sl_order(3, 8) == 168 * 2 ** 16
    assert sl_order(2, 12) == 12 ** 3 * (1 - Fraction(1, 4)) * (1 - Fraction(1, 9))


def test_group_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_group(3, 3, cap=1000)


@pytest.mark.parametrize("n,N", [(2, 3), (2, 4), (3, 2)])
def test_conjugacy_classes_brute_force(n, N):
    g = enumerate_group(n, N)
    cc = conjugacy_classes(g)
    for pos, x in enumerate(g.keys):
        cls = {mul_key_mod(mul_key_mod(y, x, n, N), inv_key_mod(y, n, N), n, N) for y in g.keys}
        assert {g.keys[i] for i in cc.members[cc.class_of[pos]]} == cls
    assert sum(cc.sizes) == len(g)
    assert cc.sizes[0] == 1


def test_dixon_prime():
    p = dixon_prime(168, 84)
    assert modp.is_prime(p) and p % 84 == 1 and p * p > 4 * 168
    assert p == 337


@pytest.mark.parametrize("n,N,degrees", [
    (2, 2, [1, 1, 2]),
    (2, 3, [1, 1, 1, 2, 2, 2, 3]),
    (3, 2, [1, 3, 3, 6, 7, 8]),
    (2, 4, None),
    (2, 5, [1, 2, 2, 3, 3, 4, 4, 5, 6]),
])
def test_character_tables(n, N, degrees):
    from slnchar.finquot import character_table
    t = character_table(enumerate_group(n, N))
    if degrees is not None:
        assert t.degrees == degrees
    assert sum(d * d for d in t.degrees) == t.order
    r, c = t.orthogonality_errors()
    assert r < 1e-9 and c < 1e-9
    assert np.allclose(t.values[0], 1)
    # values at the identity class are the degrees
    assert np.allclose(t.values[:, 0], t.degrees)


def test_permutation_character_decomposes(table_sl3_2):
    """SL_3(Z/2) acting on the 7 nonzero vectors of F_2^3: multiplicities are
    nonnegative integers and the trivial character occurs once."""
    t = table_sl3_2
    vecs = [v for v in itertools.product(range(2), repeat=3) if any(v)]
    fixed = []
    for rep in t.class_reps:
        m = [rep[0:3], rep[3:6], rep[6:9]]
        fixed.append(sum(1 for v in vecs
                         if tuple(sum(m[i][k] * v[k] for k in range(3)) % 2 for i in range(3)) == v))
    pi = np.array(fixed, dtype=float)
    h = np.array(t.class_sizes, dtype=float)
    mult = (t.values.conj() * h) @ pi / t.order
    assert np.allclose(mult.imag, 0, atol=1e-9)
    assert np.allclose(mult.real, np.round(mult.real), atol=1e-9)
    assert (np.round(mult.real) >= 0).all()
    assert round(mult[0].real) == 1
    assert sorted(int(round(x.real)) * d for x, d in zip(mult, t.degrees) if round(x.real)) == [1, 6]


def test_lifted_degree_three_at_transvection(table_sl3_2):
    row = table_sl3_2.degrees.index(3)
    lift = lift_character(table_sl3_2, row)
    assert abs(lift(elementary(3, 1, 2)) - (-1 / 3)) < 1e-12
    assert lift.level == 2 and lift.degree == 3
    # constant on cosets of the level-2 congruence subgroup
    g = elementary(3, 2, 3)
    assert abs(lift(g @ elementary(3, 1, 3, 2)) - lift(g)) < 1e-12
    assert abs(lift(elementary(3, 1, 2, 1) @ elementary(3, 1, 2, 1)) - 1) < 1e-12
    with pytest.raises(IndexError):
        lift_character(table_sl3_2, 99)


def test_lifted_character_is_class_function(table_sl2_3):
    t = table_sl2_3
    g = t.group
    for row in range(len(t)):
        lift = lift_character(t, row)
        for x in g.keys[::3]:
            for y in g.generators:
                conj = g.mul(g.mul(y, x), g.inv(y))
                assert abs(t.values[row, t.class_index(x)] - t.values[row, t.class_index(conj)]) < 1e-12
        assert lift.degree == t.degrees[row]


def test_table_json_and_csv_round_trip(table_sl2_3):
    t = table_sl2_3
    back = CharacterTable.from_json(json.loads(json.dumps(t.to_json())))
    assert back.degrees == t.degrees and back.class_sizes == t.class_sizes
    assert np.abs(back.values - t.values).max() == 0
    back.check()
    lines = t.to_csv().strip().splitlines()
    assert len(lines) == len(t) + 1 and lines[0].startswith("character,degree")


def test_congruence_kernel_order():
    K = congruence_kernel(3, 8, 4)
    assert len(K) == sl_order(3, 8) // sl_order(3, 4) == 256
    assert len(congruence_kernel(2, 9, 3)) == sl_order(2, 9) // sl_order(2, 3)
    with pytest.raises(ValueError):
        congruence_kernel(3, 8, 3)


def test_tits_small_cases():
    rep = tits_containment_check(2, 2, 8)
    assert rep.kernel_order == 8 and rep.subgroup_order == 32
    rep = tits_containment_check(3, 2, 4)
    assert rep.kernel_order == 1 and rep.contained
    with pytest.raises(ValueError):
        tits_containment_check(3, 2, 6)


def test_closure_of_squares_mod_4():
    H = closure(3, 4, elementary_generators(3, 4, power=2))
    # image of Gamma(2) in SL_3(Z/4): entries all even off the identity
    assert all(all((x - i) % 2 == 0 for x, i in zip(k, (1, 0, 0, 0, 1, 0, 0, 0, 1))) for k in H.keys)


@given(st.sampled_from([5, 7, 11, 13, 101]), st.integers(1, 4), st.data())
def test_charpoly_roots_match_brute(p, d, data):
    a = [[data.draw(st.integers(0, p - 1)) for _ in range(d)] for _ in range(d)]
    roots = modp.charpoly_roots(a, p)
    brute = [lam for lam in range(p)
             if modp.det_mod([[(a[i][j] - (lam if i == j else 0)) for j in range(d)]
                              for i in range(d)], p) == 0]
    assert roots == brute


@given(st.sampled_from([7, 13]), st.integers(1, 4), st.integers(1, 5), st.data())
def test_nullspace(p, r, c, data):
    a = [[data.draw(st.integers(0, p - 1)) for _ in range(c)] for _ in range(r)]
    basis = modp.nullspace(a, p)
    for v in basis:
        assert all(sum(x * y for x, y in zip(row, v)) % p == 0 for row in a)
    rank = len(modp.rref(a, p)[0])
    assert len(basis) == c - rank


def test_primitive_root():
    for p in (7, 337, 313):
        g = modp.primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1
