"""Small dense linear algebra that stays exact on object (Fraction) arrays.

Float arrays are handed to numpy; object arrays go through fraction-exact
Gaussian elimination.  Matrices here are tiny (at most a few dozen rows).
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

import numpy as np


def is_exact(a: np.ndarray) -> bool:
    return a.dtype == object


def det(a: np.ndarray):
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("det needs a square matrix")
    if n == 0:
        return Fraction(1) if is_exact(a) else 1.0
    if not is_exact(a):
        return float(np.linalg.det(a))
    m = [[Fraction(x) for x in row] for row in a]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                row, prow = m[r], m[col]
                for c in range(col + 1, n):
                    row[c] -= f * prow[c]
    return sign * result


def rank(a: np.ndarray, tol: float | None = None) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if not is_exact(a):
        return int(np.linalg.matrix_rank(a, tol=tol))
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            f = m[i][c] / m[r][c]
            if f:
                for j in range(c, cols):
                    m[i][j] -= f * m[r][j]
        r += 1
        if r == rows:
            break
    return r


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b for square nonsingular a; b may be a vector or a matrix."""
    a = np.asarray(a)
    b = np.asarray(b)
    if not is_exact(a) and not is_exact(b):
        return np.linalg.solve(a.astype(float), b.astype(float))
    n = a.shape[0]
    vec = b.ndim == 1
    bb = b.reshape(n, -1)
    m = [[Fraction(x) for x in a[i]] + [Fraction(x) for x in bb[i]] for i in range(n)]
    width = len(m[0])
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            raise np.linalg.LinAlgError("singular matrix")
        m[c], m[pivot] = m[pivot], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    out = np.empty((n, width - n), dtype=object)
    for i in range(n):
        out[i, :] = m[i][n:]
    return out[:, 0] if vec else out


def integerize(arr: np.ndarray) -> tuple[np.ndarray, int]:
    """Scale a Fraction array to Python ints; returns (ints, common denominator)."""
    den = reduce(math.lcm, (x.denominator for x in arr.flat), 1)
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = [x.numerator * (den // x.denominator) for x in arr.flat]
    return out, den


def exact_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a @ b for Fraction arrays, done on integers with a single division at the end."""
    ia, da = integerize(a)
    ib, db = integerize(b)
    out = ia.dot(ib)
    den = da * db
    res = np.empty(out.shape, dtype=object)
    res.flat[:] = [Fraction(x, den) for x in out.flat]
    return res


def mdot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return exact_dot(a, b) if is_exact(a) or is_exact(b) else a.dot(b)
