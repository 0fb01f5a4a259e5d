"""Subset combinatorics for exterior bases.

Basis k-vectors e_I are indexed by increasing k-subsets of range(n) in
lexicographic order.  Ranks are positions in that order; everything here is
0-based.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .errors import SubsetError


def subset_rank(members: Sequence[int], n: int) -> int:
    """Lexicographic rank of an increasing tuple among all k-subsets of range(n)."""
    k = len(members)
    rank = 0
    prev = -1
    for i, c in enumerate(members):
        if not 0 <= c < n:
            raise SubsetError(f"member {c} outside range({n})")
        if c <= prev:
            raise SubsetError(f"members {tuple(members)} are not strictly increasing")
        # skip every tuple whose i-th entry lies strictly between prev and c
        for v in range(prev + 1, c):
            rank += comb(n - 1 - v, k - 1 - i)
        prev = c
    return rank


def subset_unrank(rank: int, k: int, n: int) -> tuple[int, ...]:
    if not 0 <= k <= n:
        raise SubsetError(f"degree {k} outside [0, {n}]")
    total = comb(n, k)
    if not 0 <= rank < total:
        raise SubsetError(f"rank {rank} outside [0, {total})")
    out = []
    v = 0
    for i in range(k):
        while True:
            block = comb(n - 1 - v, k - 1 - i)
            if rank < block:
                break
            rank -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All increasing k-subsets of range(n), in rank order."""
    return tuple(itertools.combinations(range(n), k))


@lru_cache(maxsize=None)
def rank_table(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {s: r for r, s in enumerate(subsets(n, k))}


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting `seq`; 0 if `seq` has a repeat."""
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inversions % 2 else 1


def sort_with_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Return (sign, sorted tuple) so that e_seq = sign * e_sorted."""
    return permutation_sign(seq), tuple(sorted(seq))


def shuffle_sign(first: Sequence[int], second: Sequence[int]) -> int:
    """Sign of the merge e_first ^ e_second -> e_{first u second}; 0 on overlap."""
    return permutation_sign(tuple(first) + tuple(second))


@lru_cache(maxsize=None)
def split_table(n: int, k: int, l: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ordered complementary splits of every (k+l)-subset R into (P, Q), |P| = k.

    Returns (left, right, sign), each of shape (C(n, k+l), C(k+l, k)); left and
    right hold ranks of P among k-subsets and of Q among l-subsets, sign is the
    shuffle sign of P followed by Q.
    """
    if k < 0 or l < 0 or k + l > n:
        raise SubsetError(f"cannot split degree {k}+{l} in dimension {n}")
    rk, rl = rank_table(n, k), rank_table(n, l)
    outer = subsets(n, k + l)
    width = comb(k + l, k)
    left = np.zeros((len(outer), width), dtype=np.intp)
    right = np.zeros((len(outer), width), dtype=np.intp)
    sign = np.zeros((len(outer), width), dtype=np.int64)
    for r, R in enumerate(outer):
        for m, pos in enumerate(itertools.combinations(range(k + l), k)):
            P = tuple(R[i] for i in pos)
            Q = tuple(R[i] for i in range(k + l) if i not in pos)
            left[r, m] = rk[P]
            right[r, m] = rl[Q]
            sign[r, m] = shuffle_sign(P, Q)
    for arr in (left, right, sign):
        arr.setflags(write=False)
    return left, right, sign


@lru_cache(maxsize=None)
def complement_table(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """For every k-subset I: rank of its complement and the sign of e_I ^ e_{I^c}."""
    rc = rank_table(n, n - k)
    comp = np.zeros(comb(n, k), dtype=np.intp)
    sign = np.zeros(comb(n, k), dtype=np.int64)
    for r, I in enumerate(subsets(n, k)):
        J = tuple(i for i in range(n) if i not in I)
        comp[r] = rc[J]
        sign[r] = shuffle_sign(I, J)
    return comp, sign
