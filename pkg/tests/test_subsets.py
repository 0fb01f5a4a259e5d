import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from curvcert.errors import SubsetError
from curvcert.subsets import (
    complement_table,
    permutation_sign,
    shuffle_sign,
    split_table,
    subset_rank,
    subset_unrank,
    subsets,
)
from oracles import perm_sign


@given(st.integers(1, 9).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_rank_matches_enumeration_order(nk):
    n, k = nk
    for r, s in enumerate(itertools.combinations(range(n), k)):
        assert subset_rank(s, n) == r
        assert subset_unrank(r, k, n) == s


def test_rank_errors():
    with pytest.raises(SubsetError):
        subset_rank((2, 1), 4)
    with pytest.raises(SubsetError):
        subset_rank((0, 4), 4)
    with pytest.raises(SubsetError):
        subset_unrank(comb(5, 2), 2, 5)


@given(st.lists(st.integers(0, 7), min_size=0, max_size=7))
def test_permutation_sign_against_inversion_count(seq):
    assert permutation_sign(seq) == perm_sign(seq)


def test_shuffle_sign_examples():
    assert shuffle_sign((0,), (1,)) == 1
    assert shuffle_sign((1,), (0,)) == -1
    assert shuffle_sign((0, 2), (1, 3)) == -1
    assert shuffle_sign((0, 1), (1,)) == 0


@pytest.mark.parametrize("n,k,l", [(4, 1, 1), (5, 2, 2), (6, 2, 3), (8, 4, 4)])
def test_split_table_reassembles_subsets(n, k, l):
    left, right, sign = split_table(n, k, l)
    sk, sl, sr = subsets(n, k), subsets(n, l), subsets(n, k + l)
    assert left.shape == (comb(n, k + l), comb(k + l, k))
    for r, R in enumerate(sr):
        seen = set()
        for m in range(left.shape[1]):
            P, Q = sk[left[r, m]], sl[right[r, m]]
            assert tuple(sorted(P + Q)) == R
            assert sign[r, m] == perm_sign(P + Q)
            seen.add(P)
        assert len(seen) == comb(k + l, k)


def test_complement_table():
    comp, sign = complement_table(4, 2)
    s2 = subsets(4, 2)
    for r, I in enumerate(s2):
        J = s2[comp[r]]
        assert set(I) | set(J) == {0, 1, 2, 3}
        assert sign[r] == perm_sign(I + J)
