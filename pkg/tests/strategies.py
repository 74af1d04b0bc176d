"""Hypothesis strategies for SL_n(Z) elements built as words."""
from hypothesis import strategies as st

from slnchar.exactmat import SLMatrix
from slnchar.subgroups import generator_keys


def words(n: int, max_len: int = 20):
    gens = generator_keys(n)
    return st.lists(st.sampled_from(gens), max_size=max_len)


def sl_matrices(n: int, max_len: int = 20):
    def build(word):
        g = SLMatrix.identity(n)
        for k in word:
            g = g @ SLMatrix.trusted(n, k)
        return g
    return words(n, max_len).map(build)
