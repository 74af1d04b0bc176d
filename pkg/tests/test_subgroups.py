import itertools

import pytest
from hypothesis import given, strategies as st

from slnchar.exactmat import SLMatrix, elementary
from slnchar.subgroups import (CopySpec, ResourceLimitError, all_copies, ball_enumerate,
                               ball_from_jsonl, ball_is_symmetric, ball_to_jsonl,
                               centralizer_brute_check, centralizes_elementary,
                               congruence_membership, conjugates_into_copy, copy_intersection,
                               elementary_conjugator, embed_sl2_pair, generator_keys, is_in_copy,
                               is_in_normalizer, normalizer_brute_check)
from strategies import sl_matrices


def words_oracle(n, r):
    """All products of words of length <= r, without any BFS bookkeeping."""
    gens = [SLMatrix.trusted(n, g) for g in generator_keys(n)]
    seen = {SLMatrix.identity(n).entries: 0}
    for length in range(1, r + 1):
        for word in itertools.product(gens, repeat=length):
            g = SLMatrix.identity(n)
            for x in word:
                g = g @ x
            seen.setdefault(g.entries, length)
    return seen


@pytest.mark.parametrize("n,r", [(3, 1), (3, 2), (4, 1), (2, 3)])
def test_ball_matches_word_oracle(n, r):
    ball = ball_enumerate(n, r)
    oracle = words_oracle(n, r)
    assert set(ball.index) == set(oracle)
    assert all(ball.lengths[ball.index[k]] == l for k, l in oracle.items())


def test_ball_sizes():
    assert [len(ball_enumerate(3, r)) for r in range(4)] == [1, 13, 121, 883]
    assert len(ball_enumerate(4, 2)) == 433


def test_ball_symmetric_and_sub_ball(ball3_r3):
    assert ball_is_symmetric(ball3_r3)
    sub = ball3_r3.sub_ball(2)
    assert set(sub.index) == set(ball_enumerate(3, 2).index)
    with pytest.raises(ValueError):
        ball3_r3.sub_ball(4)


def test_central_ball_contains_minus_identity(ball4_r2c):
    minus = tuple(-x for x in SLMatrix.identity(4).entries)
    assert minus in ball4_r2c.index
    assert ball4_r2c.lengths[ball4_r2c.index[minus]] == 0
    assert len(ball4_r2c) == 2 * 433
    assert all(tuple(-x for x in k) in ball4_r2c.index for k in ball4_r2c.index)


def test_ball_cap():
    with pytest.raises(ResourceLimitError):
        ball_enumerate(3, 3, cap=100)


def test_ball_jsonl_round_trip(ball3_r2):
    back = ball_from_jsonl(ball_to_jsonl(ball3_r2))
    assert back.elements == ball3_r2.elements and back.lengths == ball3_r2.lengths
    assert back.radius == 2


def test_copy_basics():
    assert [str(c) for c in all_copies(3)] == ["V_1", "V_2", "V_3", "V_1^t", "V_2^t", "V_3^t"]
    v1 = CopySpec("col", 1)
    m = v1.element(3, (4, -7))
    assert m.rows() == [[1, 0, 0], [4, 1, 0], [-7, 0, 1]]
    assert v1.coordinates(m) == (4, -7)
    assert is_in_copy(m, v1) and not is_in_copy(m, CopySpec("row", 1))
    with pytest.raises(ValueError):
        CopySpec("diag", 1)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=2),
       st.lists(st.integers(-9, 9), min_size=2, max_size=2))
def test_copy_is_abelian_and_coordinates_add(a, b):
    for c in all_copies(3):
        x, y = c.element(3, a), c.element(3, b)
        assert x @ y == y @ x == c.element(3, [p + q for p, q in zip(a, b)])


def test_copy_intersections_by_brute_force():
    n = 3
    box = range(-2, 3)
    for c1, c2 in itertools.combinations(all_copies(n), 2):
        members = [c1.element(n, v) for v in itertools.product(box, repeat=n - 1)]
        common = [m for m in members if is_in_copy(m, c2) and not m.is_identity()]
        gen = copy_intersection(c1, c2, n)
        if gen is None:
            assert common == []
        else:
            assert {m.entries for m in common} == {(gen ** k).entries for k in (-2, -1, 1, 2)}


def test_normalizer_pattern_on_ball(ball3_r2):
    for c in all_copies(3):
        assert normalizer_brute_check(ball3_r2, c).ok


@given(sl_matrices(3, 12))
def test_normalizer_pattern_random(m):
    for c in all_copies(3):
        assert conjugates_into_copy(m, c) == is_in_normalizer(m, c)


def test_centralizer_pattern(ball3_r2):
    rep = centralizer_brute_check(ball3_r2, ks=(1, 2, -3))
    assert rep.ok and rep.checked == 121 * 18


def test_centralizer_sign_case():
    # -I sits in the centralizer pattern with sign -1
    minus = -SLMatrix.identity(4)
    assert centralizes_elementary(minus, 1, 2, 1)
    g = elementary(4, 3, 4, 5)
    assert centralizes_elementary(g, 1, 2, 1)
    assert not centralizes_elementary(elementary(4, 2, 1), 1, 2, 1)


def test_elementary_conjugator_all_pairs():
    for n in (3, 4):
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        for kl in pairs:
            for pq in pairs:
                c = elementary_conjugator(n, kl, pq)
                assert c @ elementary(n, *kl) @ c.inv() == elementary(n, *pq)


def test_congruence_membership_and_embedding():
    g = elementary(3, 1, 2, 6)
    assert congruence_membership(g, 3) and not congruence_membership(g, 4)
    a = SLMatrix.from_rows([[2, 1], [1, 1]])
    b = SLMatrix.from_rows([[1, 3], [0, 1]])
    d = embed_sl2_pair(a, b)
    assert d.rows() == [[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 3], [0, 0, 0, 1]]
    assert d.inv() == embed_sl2_pair(a.inv(), b.inv())
