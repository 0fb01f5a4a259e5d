"""Scalar product spaces and the exterior algebra over them.

Everything works in an orthonormal basis e_0, ..., e_{n-1} with
g(e_i, e_j) = signs[i] * delta_ij.  Degree-k elements store one coefficient
per increasing k-subset (see `subsets`).  Two scalar modes exist: "rational"
(Fraction entries in object arrays, exact) and "float64".
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import DegreeError, NotAnIsometry, WrongSignature
from .subsets import complement_table, rank_table, sort_with_sign, split_table, subsets

RATIONAL = "rational"
FLOAT64 = "float64"
MODES = (RATIONAL, FLOAT64)

# relative to the largest absolute entry involved
FLOAT_RTOL = 1e-12


def to_scalar(x, mode: str):
    if mode == RATIONAL:
        if type(x) is Fraction:
            return x
        if isinstance(x, (float, np.floating)):
            # decimal reading: 0.1 means 1/10, not the nearest binary64
            return Fraction(repr(float(x)))
        if isinstance(x, np.integer):
            return Fraction(int(x))
        return Fraction(x)
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


@dataclass(frozen=True)
class ScalarSpace:
    """(V, g) with an orthonormal basis; `signs` are the causal characters eps_i."""

    signs: tuple[int, ...]
    orientation: int = 1
    mode: str = RATIONAL

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        object.__setattr__(self, "signs", signs)
        if len(signs) < 1:
            raise ValueError("dimension must be at least 1")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError(f"signs must be +-1, got {signs}")
        if self.orientation not in (-1, 1):
            raise ValueError("orientation must be +-1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    @classmethod
    def euclidean(cls, n: int, mode: str = RATIONAL) -> "ScalarSpace":
        return cls((1,) * n, mode=mode)

    @classmethod
    def lorentzian(cls, n: int, time_index: int = 0, mode: str = RATIONAL) -> "ScalarSpace":
        signs = [1] * n
        signs[time_index] = -1
        return cls(tuple(signs), mode=mode)

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def timelike(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def exact(self) -> bool:
        return self.mode == RATIONAL

    @property
    def dtype(self):
        return object if self.exact else np.float64

    def with_mode(self, mode: str) -> "ScalarSpace":
        return replace(self, mode=mode)

    def scalar(self, x):
        return to_scalar(x, self.mode)

    def asarray(self, values) -> np.ndarray:
        if not self.exact and isinstance(values, np.ndarray) and values.dtype == np.float64:
            return values.copy()
        a = np.asarray(values, dtype=object)
        out = np.empty(a.shape, dtype=object if self.exact else np.float64)
        out.flat[:] = [to_scalar(x, self.mode) for x in a.flat]
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.exact:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape)

    def eye(self, size: int) -> np.ndarray:
        out = self.zeros((size, size))
        for i in range(size):
            out[i, i] = self.scalar(1)
        return out

    def metric(self) -> np.ndarray:
        return self.asarray(np.diag(self.signs))

    def is_zero(self, value, scale=1.0) -> bool:
        if self.exact:
            return value == 0
        return abs(value) <= FLOAT_RTOL * max(float(scale), 1.0)

    def all_zero(self, arr, scale=None) -> bool:
        arr = np.asarray(arr)
        if arr.size == 0:
            return True
        if self.exact:
            return all(x == 0 for x in arr.flat)
        if scale is None:
            scale = 1.0
        return float(np.max(np.abs(arr))) <= FLOAT_RTOL * max(float(scale), 1.0)

    def gram(self, k: int) -> np.ndarray:
        """Diagonal of the induced inner product on the degree-k subset basis."""
        return _gram(self.signs, k)

    def inner(self, u, v):
        """g(u, v) for coordinate vectors."""
        return sum((s * a * b for s, a, b in zip(self.signs, u, v)), self.scalar(0))


@lru_cache(maxsize=None)
def _gram(signs: tuple[int, ...], k: int) -> np.ndarray:
    g = np.array([prod(signs[i] for i in I) for I in subsets(len(signs), k)], dtype=np.int64)
    g.setflags(write=False)
    return g


def causal_sign(space: ScalarSpace, members: Sequence[int]) -> int:
    """eps_I for a multi-index I: product of the signs, 0 on a repeated index."""
    if len(set(members)) != len(members):
        return 0
    return prod(space.signs[i] for i in members)


def _check_degree(space: ScalarSpace, k: int):
    if not 0 <= k <= space.n:
        raise DegreeError(f"degree {k} outside [0, {space.n}]")


def _signed(sign: np.ndarray, exact: bool) -> np.ndarray:
    return sign.astype(object) if exact else sign


@dataclass(frozen=True, eq=False)
class _Graded:
    space: ScalarSpace
    k: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_degree(self.space, self.k)
        c = self.space.asarray(self.coeffs).reshape(-1)
        if c.shape[0] != comb(self.space.n, self.k):
            raise DegreeError(
                f"{type(self).__name__} of degree {self.k} in dimension {self.space.n} "
                f"needs {comb(self.space.n, self.k)} coefficients, got {c.shape[0]}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, space: ScalarSpace, k: int):
        return cls(space, k, space.zeros(comb(space.n, k)))

    @classmethod
    def basis(cls, space: ScalarSpace, members: Sequence[int]):
        """e_I for an arbitrary (possibly unsorted or repeating) multi-index."""
        k = len(members)
        c = space.zeros(comb(space.n, k))
        sign, key = sort_with_sign(members)
        if sign:
            c[rank_table(space.n, k)[key]] = space.scalar(sign)
        return cls(space, k, c)

    @classmethod
    def from_terms(cls, space: ScalarSpace, k: int, terms: Iterable[tuple[Sequence[int], object]]):
        c = space.zeros(comb(space.n, k))
        table = rank_table(space.n, k)
        for members, value in terms:
            sign, key = sort_with_sign(members)
            if sign:
                c[table[key]] += sign * space.scalar(value)
        return cls(space, k, c)

    def _like(self, coeffs):
        return type(self)(self.space, self.k, coeffs)

    def _check_compatible(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.space != self.space:
            raise ValueError("elements live on different spaces")

    def __add__(self, other):
        self._check_compatible(other)
        if other.k != self.k:
            raise DegreeError("degree mismatch")
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._like(-self.coeffs)

    def __mul__(self, scalar):
        return self._like(self.coeffs * self.space.scalar(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.space == other.space and self.k == other.k and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.space.all_zero(self.coeffs)

    def terms(self):
        """Nonzero (members, coefficient) pairs in rank order."""
        for I, c in zip(subsets(self.space.n, self.k), self.coeffs):
            if c != 0:
                yield I, c

    def __getitem__(self, members):
        sign, key = sort_with_sign(tuple(members))
        if not sign:
            return self.space.scalar(0)
        return sign * self.coeffs[rank_table(self.space.n, self.k)[key]]

    def __repr__(self):
        body = " + ".join(f"{c}*{self._prefix}{''.join(str(i + 1) for i in I)}" for I, c in self.terms())
        return f"{type(self).__name__}[{self.k}]({body or '0'})"


class KVector(_Graded):
    """Element of the k-th exterior power of V."""

    _prefix = "e"

    def flat(self) -> "KForm":
        """Musical isomorphism: coefficients times eps_I."""
        return KForm(self.space, self.k, self.coeffs * _signed(self.space.gram(self.k), self.space.exact))


class KForm(_Graded):
    """Element of the k-th exterior power of V*; coeffs[I] is the value on e_I."""

    _prefix = "e^"

    def sharp(self) -> KVector:
        return KVector(self.space, self.k, self.coeffs * _signed(self.space.gram(self.k), self.space.exact))


def wedge_coeffs(a: np.ndarray, b: np.ndarray, n: int, k: int, l: int, exact: bool) -> np.ndarray:
    """Coefficient-level wedge product; works for vectors and forms alike."""
    left, right, sign = split_table(n, k, l)
    terms = a[left] * b[right]
    return (terms * _signed(sign, exact)).sum(axis=1)


def wedge(a: _Graded, b: _Graded) -> _Graded:
    a._check_compatible(b)
    n = a.space.n
    if a.k + b.k > n:
        raise DegreeError(f"wedge of degrees {a.k} and {b.k} exceeds dimension {n}")
    return type(a)(a.space, a.k + b.k, wedge_coeffs(a.coeffs, b.coeffs, n, a.k, b.k, a.space.exact))


def induced_inner(a: KVector, b: KVector):
    """<a, b>_g: diagonal on the subset basis with entries eps_I."""
    a._check_compatible(b)
    if a.k != b.k:
        raise DegreeError("inner product needs equal degrees")
    return (a.coeffs * b.coeffs * _signed(a.space.gram(a.k), a.space.exact)).sum()


def decomposable_inner(space: ScalarSpace, vs: Sequence[Sequence], ws: Sequence[Sequence]):
    """<v_1 ^ ... ^ v_k, w_1 ^ ... ^ w_k> as the Gram determinant det g(v_i, w_j)."""
    if len(vs) != len(ws):
        raise DegreeError("inner product needs equal degrees")
    gram = space.zeros((len(vs), len(ws)))
    for i, v in enumerate(vs):
        for j, w in enumerate(ws):
            gram[i, j] = space.inner(space.asarray(v), space.asarray(w))
    return linalg.det(gram)


def vector_as_kvector(space: ScalarSpace, v) -> KVector:
    return KVector(space, 1, space.asarray(v))


@dataclass(frozen=True, eq=False)
class ExtOperator:
    """Endomorphism of the k-th exterior power as a C(n,k) x C(n,k) matrix.

    Column J holds the coefficients of A(e_J).
    """

    space: ScalarSpace
    k: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_degree(self.space, self.k)
        m = self.space.asarray(self.matrix)
        d = comb(self.space.n, self.k)
        if m.shape != (d, d):
            raise DegreeError(f"operator on degree {self.k} needs shape {(d, d)}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, space: ScalarSpace, k: int) -> "ExtOperator":
        return cls(space, k, space.eye(comb(space.n, k)))

    @classmethod
    def zero(cls, space: ScalarSpace, k: int) -> "ExtOperator":
        d = comb(space.n, k)
        return cls(space, k, space.zeros((d, d)))

    def _check(self, other):
        if not isinstance(other, ExtOperator) or other.space != self.space or other.k != self.k:
            raise DegreeError("operators act on different exterior powers")

    def __matmul__(self, other):
        if isinstance(other, ExtOperator):
            self._check(other)
            return ExtOperator(self.space, self.k, self.matrix.dot(other.matrix))
        if isinstance(other, KVector):
            if other.space != self.space or other.k != self.k:
                raise DegreeError("operator and k-vector degrees differ")
            return KVector(self.space, self.k, self.matrix.dot(other.coeffs))
        return NotImplemented

    def __call__(self, xi: KVector) -> KVector:
        return self @ xi

    def __add__(self, other):
        self._check(other)
        return ExtOperator(self.space, self.k, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return ExtOperator(self.space, self.k, self.matrix - other.matrix)

    def __neg__(self):
        return ExtOperator(self.space, self.k, -self.matrix)

    def __mul__(self, scalar):
        return ExtOperator(self.space, self.k, self.matrix * self.space.scalar(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ExtOperator):
            return NotImplemented
        return self.space == other.space and self.k == other.k and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.space.all_zero(self.matrix)

    def allclose(self, other, scale=None) -> bool:
        self._check(other)
        if scale is None:
            scale = max(_max_abs(self.matrix), _max_abs(other.matrix))
        return self.space.all_zero(self.matrix - other.matrix, scale)

    def adjoint(self) -> "ExtOperator":
        """Adjoint with respect to the induced inner product: G^-1 A^T G."""
        g = _signed(self.space.gram(self.k), self.space.exact)
        return ExtOperator(self.space, self.k, (self.matrix.T * g[None, :]) * g[:, None])

    def trace(self):
        return self.matrix.trace()


def _max_abs(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(max(abs(x) for x in a.flat))


@dataclass(frozen=True, eq=False)
class Isometry:
    """Linear isometry theta of (V, g); column j holds theta(e_j)."""

    space: ScalarSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = self.space.asarray(self.matrix)
        n = self.space.n
        if m.shape != (n, n):
            raise NotAnIsometry(f"expected a {n}x{n} matrix, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        G = self.space.metric()
        defect = m.T.dot(G).dot(m) - G
        if not self.space.all_zero(defect, scale=1.0):
            raise NotAnIsometry("theta^T G theta != G")
        d = linalg.det(m)
        if self.space.exact:
            ok = d in (1, -1)
        else:
            ok = abs(abs(d) - 1.0) <= 1e-9
        if not ok:
            raise NotAnIsometry(f"determinant {d} is not +-1")
        object.__setattr__(self, "_det", int(round(float(d))) if not self.space.exact else int(d))

    @property
    def det(self) -> int:
        return self._det

    @classmethod
    def identity(cls, space: ScalarSpace) -> "Isometry":
        return cls(space, space.eye(space.n))

    @classmethod
    def signed_permutation(cls, space: ScalarSpace, perm: Sequence[int], flips: Sequence[int] | None = None) -> "Isometry":
        """theta(e_j) = flips[j] * e_{perm[j]}; perm must preserve the signs."""
        n = space.n
        flips = flips if flips is not None else (1,) * n
        m = space.zeros((n, n))
        for j, (i, f) in enumerate(zip(perm, flips)):
            m[i, j] = space.scalar(f)
        return cls(space, m)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if other.space != self.space:
            raise ValueError("isometries of different spaces")
        return Isometry(self.space, self.matrix.dot(other.matrix))

    def apply(self, v):
        return self.matrix.dot(self.space.asarray(v))

    def is_identity(self) -> bool:
        return self.space.all_zero(self.matrix - self.space.eye(self.space.n))


def ext_power_map(theta: Isometry, k: int) -> ExtOperator:
    """The induced map on the k-th exterior power: e_I -> theta e_{i1} ^ ... ^ theta e_{ik}.

    Built column by column by wedging columns of theta, so it is multiplicative
    on wedges by construction.  Also accepts any square matrix wrapped in an
    object exposing `space` and `matrix`.
    """
    space = theta.space
    _check_degree(space, k)
    n = space.n
    cols = space.eye(1)  # degree 0: the scalar 1
    for d in range(1, k + 1):
        prev = cols
        cur = space.zeros((comb(n, d), comb(n, d)))
        prev_rank = rank_table(n, d - 1)
        for r, I in enumerate(subsets(n, d)):
            head = prev[:, prev_rank[I[:-1]]]
            cur[:, r] = wedge_coeffs(head, theta.matrix[:, I[-1]], n, d - 1, 1, space.exact)
        cols = cur
    return ExtOperator(space, k, cols)


def pullback_form(theta: Isometry, alpha: KForm) -> KForm:
    """(theta^* alpha)(x_1, ..., x_k) = alpha(theta x_1, ..., theta x_k)."""
    lam = ext_power_map(theta, alpha.k)
    return KForm(alpha.space, alpha.k, linalg.mdot(lam.matrix.T, alpha.coeffs[:, None])[:, 0])


def top_power_action(theta: Isometry):
    """theta e_0 ^ ... ^ theta e_{n-1} as a multiple of e_0...n-1.

    The induced map on the one-dimensional top power, computed by wedging and
    independent of the determinant routine.
    """
    sp = theta.space
    acc = theta.matrix[:, 0]
    for d in range(1, sp.n):
        acc = wedge_coeffs(acc, theta.matrix[:, d], sp.n, d, 1, sp.exact)
    return acc[0]


def _require_lorentz4(space: ScalarSpace):
    if space.n != 4 or space.timelike != 1:
        raise WrongSignature(f"Hodge star on bivectors needs 4D Lorentzian signature, got {space.signs}")


def hodge_star_operator(space: ScalarSpace) -> ExtOperator:
    """The star on bivectors defined by xi ^ *eta = -<xi, eta> omega, omega = orientation * e_0123."""
    _require_lorentz4(space)
    comp, sign = complement_table(4, 2)
    eps = space.gram(2)
    m = space.zeros((6, 6))
    for J in range(6):
        # e_J ^ e_Jc = sign[J] * e_0123, so *e_J = -eps_J * sign[J] * orientation * e_Jc
        m[comp[J], J] = space.scalar(-int(eps[J]) * int(sign[J]) * space.orientation)
    return ExtOperator(space, 2, m)


def hodge_star(xi: KVector) -> KVector:
    if xi.k != 2:
        raise DegreeError("the star is implemented on bivectors only")
    return hodge_star_operator(xi.space) @ xi
