"""Algebraic curvature tensors, curvature operators and the Ricci/Weyl split.

A curvature tensor is stored as the symmetric matrix M on the bivector basis,
M[I, J] = C(e_i1, e_i2, e_j1, e_j2) for increasing pairs I, J.  The
antisymmetries are then structural and the first Bianchi identity is the only
constraint left to check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .linalg import integerize
from .errors import BianchiViolation, DegreeError, DimensionTooSmall, SymmetryConflict
from .exterior import ExtOperator, ScalarSpace, _max_abs, _signed, wedge_coeffs
from .subsets import rank_table, split_table, subsets


@lru_cache(maxsize=None)
def _bianchi_index(n: int) -> tuple[np.ndarray, ...]:
    """For each increasing 4-subset a<b<c<d: ranks of ab, cd, ac, bd, ad, bc."""
    r = rank_table(n, 2)
    rows = [(r[a, b], r[c, d], r[a, c], r[b, d], r[a, d], r[b, c]) for a, b, c, d in subsets(n, 4)]
    arr = np.array(rows, dtype=np.intp).reshape(-1, 6)
    return tuple(arr[:, i] for i in range(6))


def bianchi_defect(space: ScalarSpace, m: np.ndarray) -> np.ndarray:
    """Cyclic sum C(a,b,c,d) + C(c,a,b,d) + C(b,c,a,d) on every increasing 4-subset.

    With the antisymmetries this is M[ab,cd] - M[ac,bd] + M[ad,bc]; cyclic
    sums with a repeated index vanish identically.
    """
    ab, cd, ac, bd, ad, bc = _bianchi_index(space.n)
    return m[ab, cd] - m[ac, bd] + m[ad, bc]


def _pair(a: int, b: int, n: int) -> tuple[int, int]:
    """(rank of the sorted pair, sign) with e_a ^ e_b = sign * e_pair."""
    if a == b:
        return -1, 0
    if a < b:
        return rank_table(n, 2)[a, b], 1
    return rank_table(n, 2)[b, a], -1


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    space: ScalarSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = self.space.asarray(self.matrix)
        d = comb(self.space.n, 2)
        if m.shape != (d, d):
            raise DegreeError(f"curvature matrix must be {d}x{d}, got {m.shape}")
        scale = _max_abs(m)
        if not self.space.all_zero(m - m.T, scale):
            raise SymmetryConflict("pair symmetry C(u,v,x,y) = C(x,y,u,v) fails")
        if self.space.n >= 4:
            defect = bianchi_defect(self.space, m)
            if not self.space.all_zero(defect, scale):
                bad = next(i for i, x in enumerate(defect) if not self.space.is_zero(x, scale))
                quad = tuple(i + 1 for i in subsets(self.space.n, 4)[bad])
                raise BianchiViolation(f"first Bianchi identity fails on indices {quad}: cyclic sum {defect[bad]}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def _closed(cls, space: ScalarSpace, m) -> "CurvatureTensor":
        """Result of an operation that maps curvature tensors to curvature tensors.

        Exact results are validated as usual.  Float results may be pure
        rounding noise after a cancellation, so checking them against their
        own scale is meaningless; they are symmetrized and accepted.
        """
        if space.exact:
            return cls(space, m)
        m = np.asarray(m, dtype=float)
        m = (m + m.T) / 2
        m.setflags(write=False)
        obj = object.__new__(cls)
        object.__setattr__(obj, "space", space)
        object.__setattr__(obj, "matrix", m)
        return obj

    @classmethod
    def zero(cls, space: ScalarSpace) -> "CurvatureTensor":
        d = comb(space.n, 2)
        return cls(space, space.zeros((d, d)))

    @property
    def n(self) -> int:
        return self.space.n

    def component(self, a: int, b: int, c: int, d: int):
        """C(e_a, e_b, e_c, e_d), 0-based indices."""
        r1, s1 = _pair(a, b, self.n)
        r2, s2 = _pair(c, d, self.n)
        if not s1 or not s2:
            return self.space.scalar(0)
        return s1 * s2 * self.matrix[r1, r2]

    def evaluate(self, u, v, x, y):
        """C(u, v, x, y) for coordinate vectors."""
        sp = self.space
        uv = wedge_coeffs(sp.asarray(u), sp.asarray(v), self.n, 1, 1, sp.exact)
        xy = wedge_coeffs(sp.asarray(x), sp.asarray(y), self.n, 1, 1, sp.exact)
        return uv.dot(self.matrix).dot(xy)

    def to_array(self) -> np.ndarray:
        """Dense rank-4 component array C[a, b, c, d]."""
        n = self.n
        out = self.space.zeros((n, n, n, n))
        pairs = subsets(n, 2)
        for r1, (a, b) in enumerate(pairs):
            for r2, (c, d) in enumerate(pairs):
                v = self.matrix[r1, r2]
                out[a, b, c, d] = v
                out[b, a, c, d] = -v
                out[a, b, d, c] = -v
                out[b, a, d, c] = v
        return out

    def __add__(self, other):
        _same_space(self, other)
        return CurvatureTensor._closed(self.space, self.matrix + other.matrix)

    def __sub__(self, other):
        _same_space(self, other)
        return CurvatureTensor._closed(self.space, self.matrix - other.matrix)

    def __neg__(self):
        return CurvatureTensor._closed(self.space, -self.matrix)

    def __mul__(self, scalar):
        return CurvatureTensor._closed(self.space, self.matrix * self.space.scalar(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.space.all_zero(self.matrix)

    def allclose(self, other, scale=None) -> bool:
        _same_space(self, other)
        if scale is None:
            scale = max(_max_abs(self.matrix), _max_abs(other.matrix))
        return self.space.all_zero(self.matrix - other.matrix, scale)

    def scale(self) -> float:
        return _max_abs(self.matrix)


def _same_space(a, b):
    if a.space != b.space:
        raise ValueError("tensors live on different spaces")


@dataclass(frozen=True, eq=False)
class SymBilinear:
    """Symmetric bilinear form on V in the orthonormal basis (Ricci, Schouten, ...)."""

    space: ScalarSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = self.space.asarray(self.matrix)
        n = self.space.n
        if m.shape != (n, n):
            raise DegreeError(f"bilinear form must be {n}x{n}")
        if not self.space.all_zero(m - m.T, _max_abs(m)):
            raise SymmetryConflict("bilinear form is not symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def metric(cls, space: ScalarSpace) -> "SymBilinear":
        return cls(space, space.metric())

    @classmethod
    def zero(cls, space: ScalarSpace) -> "SymBilinear":
        return cls(space, space.zeros((space.n, space.n)))

    def trace(self):
        """tr_g h = sum_i eps_i h_ii."""
        return sum((s * self.matrix[i, i] for i, s in enumerate(self.space.signs)), self.space.scalar(0))

    def __add__(self, other):
        _same_space(self, other)
        return SymBilinear(self.space, self.matrix + other.matrix)

    def __sub__(self, other):
        _same_space(self, other)
        return SymBilinear(self.space, self.matrix - other.matrix)

    def __neg__(self):
        return SymBilinear(self.space, -self.matrix)

    def __mul__(self, scalar):
        return SymBilinear(self.space, self.matrix * self.space.scalar(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymBilinear):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.space.all_zero(self.matrix)


def curvature_from_components(space: ScalarSpace, entries: Iterable[Sequence]) -> CurvatureTensor:
    """Build a tensor from (i, j, k, l, value) entries, 0-based, on any representatives.

    Missing slots are filled by antisymmetry and pair symmetry.  Entries that
    force different values onto one slot raise SymmetryConflict; the result
    must satisfy the first Bianchi identity as given (no silent projection).
    """
    n = space.n
    d = comb(n, 2)
    m = space.zeros((d, d))
    seen: dict[tuple[int, int], object] = {}
    for pos, entry in enumerate(entries):
        i, j, k, l, value = entry
        for idx in (i, j, k, l):
            if not 0 <= idx < n:
                raise SymmetryConflict(f"entry {pos}: index {idx + 1} outside [1, {n}]")
        value = space.scalar(value)
        r1, s1 = _pair(i, j, n)
        r2, s2 = _pair(k, l, n)
        if not s1 or not s2:
            if not space.is_zero(value):
                raise SymmetryConflict(f"entry {pos}: repeated index in an antisymmetric pair forces 0, got {value}")
            continue
        key = (min(r1, r2), max(r1, r2))
        v = s1 * s2 * value
        if key in seen:
            old = seen[key]
            if not space.is_zero(old - v, max(abs(old), abs(v))):
                raise SymmetryConflict(f"entry {pos}: implies {v} where an earlier entry implies {old}")
            continue
        seen[key] = v
        m[key[0], key[1]] = v
        m[key[1], key[0]] = v
    return CurvatureTensor(space, m)


def kulkarni_nomizu(h: SymBilinear, k: SymBilinear) -> CurvatureTensor:
    """(h o k)(u,v,x,y) = h(u,y)k(v,x) + h(v,x)k(u,y) - h(u,x)k(v,y) - h(v,y)k(u,x)."""
    _same_space(h, k)
    n = h.space.n
    pairs = np.array(subsets(n, 2), dtype=np.intp).reshape(-1, 2)
    a, b = pairs[:, 0][:, None], pairs[:, 1][:, None]
    c, d = pairs[:, 0][None, :], pairs[:, 1][None, :]
    H, K = h.matrix, k.matrix
    m = H[a, d] * K[b, c] + H[b, c] * K[a, d] - H[a, c] * K[b, d] - H[b, d] * K[a, c]
    return CurvatureTensor(h.space, m)


def curvature_operator(C: CurvatureTensor) -> ExtOperator:
    """The operator with <C^(u^v), x^y> = C(u,v,x,y): G2^-1 M with G2 = diag(eps_I)."""
    g = _signed(C.space.gram(2), C.space.exact)
    return ExtOperator(C.space, 2, C.matrix * g[:, None])


def operator_to_tensor(op: ExtOperator) -> CurvatureTensor:
    """Inverse of `curvature_operator`; validates the result."""
    if op.k != 2:
        raise DegreeError("curvature operators act on bivectors")
    g = _signed(op.space.gram(2), op.space.exact)
    return CurvatureTensor(op.space, op.matrix * g[:, None])


def star_product(A: ExtOperator, B: ExtOperator) -> ExtOperator:
    """Bivens/Thorpe product of exterior endomorphisms, End(L^k) x End(L^l) -> End(L^(k+l)).

    Uses the split expansion A*B = sum (alpha^P ^ beta^Q) (x) (e_P ^ e_Q): the
    (R, T) entry sums over ordered complementary splits R = P u Q and
    T = S u U of sign(P,Q) sign(S,U) A[P,S] B[Q,U].
    """
    if A.space != B.space:
        raise ValueError("operators on different spaces")
    n = A.space.n
    k, l = A.k, B.k
    if k + l > n:
        raise DegreeError(f"star product of degrees {k} and {l} exceeds dimension {n}")
    left, right, sign = split_table(n, k, l)
    exact = A.space.exact
    am, bm = A.matrix, B.matrix
    if exact:
        # Python ints are an order of magnitude cheaper than Fractions here
        am, da = integerize(am)
        bm, db = integerize(bm)
    s = _signed(sign, exact)
    a = am[left[:, :, None, None], left[None, None, :, :]]
    b = bm[right[:, :, None, None], right[None, None, :, :]]
    ss = s[:, :, None, None] * s[None, None, :, :]
    out = (a * b * ss).sum(axis=(1, 3))
    if exact:
        den = da * db
        out = np.vectorize(lambda x: Fraction(x, den), otypes=[object])(out)
    return ExtOperator(A.space, k + l, out)


def higher_curvature_operator(C: CurvatureTensor, k: int) -> ExtOperator:
    """C^_{2k} = C^ * ... * C^ (k factors)."""
    if k < 1 or 2 * k > C.n:
        raise DegreeError(f"higher curvature operator of order {k} needs 1 <= k <= n/2 (n={C.n})")
    base = curvature_operator(C)
    out = base
    for _ in range(k - 1):
        out = star_product(out, base)
    return out


def trace14(C: CurvatureTensor) -> SymBilinear:
    """Ric_kl = sum_i eps_i C(e_i, e_k, e_l, e_i)."""
    sp = C.space
    n = C.n
    ric = sp.zeros((n, n))
    for k in range(n):
        for l in range(k, n):
            total = sp.scalar(0)
            for i in range(n):
                if i != k and i != l:
                    total += sp.signs[i] * C.component(i, k, l, i)
            ric[k, l] = ric[l, k] = total
    return SymBilinear(sp, ric)


ricci = trace14


def scalar_curvature(C: CurvatureTensor):
    return trace14(C).trace()


def _need_three(C: CurvatureTensor):
    if C.n < 3:
        raise DimensionTooSmall(f"Schouten and Weyl tensors need n >= 3, got n = {C.n}")


def schouten(C: CurvatureTensor) -> SymBilinear:
    """P = (Ric - S / (2(n-1)) g) / (n-2)."""
    _need_three(C)
    n = C.n
    ric = trace14(C)
    s = ric.trace()
    g = SymBilinear.metric(C.space)
    return (ric - g * (s / (2 * (n - 1)))) * (C.space.scalar(1) / (n - 2))


def weyl(C: CurvatureTensor) -> CurvatureTensor:
    """W = C - P o g."""
    _need_three(C)
    return C - kulkarni_nomizu(schouten(C), SymBilinear.metric(C.space))


class Decomposition(NamedTuple):
    weyl: CurvatureTensor
    ric0: SymBilinear
    scalar: object

    def schouten(self) -> SymBilinear:
        sp = self.weyl.space
        n = sp.n
        g = SymBilinear.metric(sp)
        ric = self.ric0 + g * (self.scalar / n)
        return (ric - g * (self.scalar / (2 * (n - 1)))) * (sp.scalar(1) / (n - 2))

    def parts(self) -> tuple[CurvatureTensor, CurvatureTensor, CurvatureTensor]:
        """The three O(V,g)-components: W, ric0 o g / (n-2), S/(2n(n-1)) g o g."""
        sp = self.weyl.space
        n = sp.n
        g = SymBilinear.metric(sp)
        traceless = kulkarni_nomizu(self.ric0, g) * (sp.scalar(1) / (n - 2))
        pure = kulkarni_nomizu(g, g) * (self.scalar / (2 * n * (n - 1)))
        return self.weyl, traceless, pure

    def reconstruct(self) -> CurvatureTensor:
        return self.weyl + kulkarni_nomizu(self.schouten(), SymBilinear.metric(self.weyl.space))


def decompose(C: CurvatureTensor) -> Decomposition:
    _need_three(C)
    ric = trace14(C)
    s = ric.trace()
    ric0 = ric - SymBilinear.metric(C.space) * (s / C.n)
    return Decomposition(weyl(C), ric0, s)


def full_contraction(C: CurvatureTensor, D: CurvatureTensor):
    """sum over a,b,c,d of eps_a eps_b eps_c eps_d C_abcd D_abcd."""
    _same_space(C, D)
    g = _signed(C.space.gram(2), C.space.exact)
    return 4 * (C.matrix * D.matrix * g[:, None] * g[None, :]).sum()
