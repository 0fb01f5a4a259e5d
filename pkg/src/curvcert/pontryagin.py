"""Pontryagin forms of an algebraic curvature tensor, by two independent routes.

Determinant route: the even elementary symmetric polynomial sigma_2k of the
curvature matrix of 2-forms, summed over principal minors.  Operator route:
F_2k(C^*k, C^*k) / k!^2 built from Thorpe's higher curvature operators.

Forms are kept as (2 pi)^(2k) * varpi_k ("reduced") so every coefficient
stays rational; the power of 2 pi travels as metadata.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import comb, factorial
from typing import Sequence

import numpy as np

from . import linalg
from .linalg import integerize
from .curvature import CurvatureTensor, _pair, higher_curvature_operator
from .errors import DegreeError
from .exterior import ExtOperator, KForm, KVector, ScalarSpace, _signed, wedge, wedge_coeffs
from .subsets import permutation_sign, split_table, subsets


def sgn_IJ(I: Sequence[int], J: Sequence[int]) -> int:
    """sgn(sigma) when I has no repeats and J = I_sigma; 0 otherwise."""
    if len(I) != len(J) or len(set(I)) != len(I) or sorted(I) != sorted(J):
        return 0
    pos = {v: p for p, v in enumerate(I)}
    return permutation_sign([pos[v] for v in J])


def sigma_poly(X: np.ndarray, k: int):
    """k-th coefficient of det(1 + tX): sum of the principal k x k minors."""
    X = np.asarray(X)
    r = X.shape[0]
    if not 0 <= k <= r:
        raise DegreeError(f"sigma_{k} undefined for a {r}x{r} matrix")
    total = Fraction(0) if X.dtype == object else 0.0
    for S in itertools.combinations(range(r), k):
        idx = np.array(S, dtype=np.intp)
        total += linalg.det(X[np.ix_(idx, idx)])
    return total


def sigma_poly_signed_sum(X: np.ndarray, k: int):
    """The same coefficient as (1/k!) sum over I, J in [r]^k of sgn(I;J) x_i1j1 ... x_ikjk.

    Factorial cost; kept as an independent oracle for small matrices.
    """
    X = np.asarray(X)
    r = X.shape[0]
    if not 0 <= k <= r:
        raise DegreeError(f"sigma_{k} undefined for a {r}x{r} matrix")
    total = Fraction(0) if X.dtype == object else 0.0
    for I in itertools.permutations(range(r), k):
        for J in itertools.permutations(I):
            s = sgn_IJ(I, J)
            term = s
            for i, j in zip(I, J):
                term = term * X[i, j]
            total += term
    return total / factorial(k)


@dataclass(frozen=True, eq=False)
class FormMatrix:
    """n x n grid of 2-forms; entries[i, j] holds the C(n,2) coefficients of one form.

    kind "matrix": the curvature matrix Omega_i^j.  kind "operator": the
    antisymmetric 2-forms Omega^{ij} with C^(xi) = sum_ij Omega^{ij}(xi) e_i ^ e_j.
    """

    space: ScalarSpace
    kind: str
    entries: np.ndarray = field(repr=False)

    def form(self, i: int, j: int) -> KForm:
        return KForm(self.space, 2, self.entries[i, j])


def curvature_matrix(C: CurvatureTensor) -> FormMatrix:
    """Omega_i^j(x, y) = eps_j C(x, y, e_i, e_j) in the orthonormal basis."""
    sp = C.space
    n = sp.n
    out = sp.zeros((n, n, comb(n, 2)))
    for i in range(n):
        for j in range(n):
            r, s = _pair(i, j, n)
            if s:
                out[i, j, :] = C.matrix[:, r] * (s * sp.signs[j])
    return FormMatrix(sp, "matrix", out)


def operator_forms(C: CurvatureTensor) -> FormMatrix:
    """Omega^{ij} = (1/2) eps_i Omega_i^j (the appendix writes sigma_i for eps_i)."""
    sp = C.space
    mat = curvature_matrix(C).entries
    half = sp.scalar(Fraction(1, 2))
    signs = sp.asarray(sp.signs)
    return FormMatrix(sp, "operator", mat * signs[:, None, None] * half)


def operator_from_forms(forms: FormMatrix) -> ExtOperator:
    """Rebuild C^ from its operator 2-forms: column xi of C^ is sum_ij Omega^{ij}(xi) e_i ^ e_j."""
    if forms.kind != "operator":
        raise ValueError("need the operator 2-forms")
    sp = forms.space
    n = sp.n
    d = comb(n, 2)
    m = sp.zeros((d, d))
    for i in range(n):
        for j in range(n):
            r, s = _pair(i, j, n)
            if s:
                m[r, :] += s * forms.entries[i, j]
    return ExtOperator(sp, 2, m)


def sigma_forms(entries: np.ndarray, m: int, n: int, exact: bool) -> np.ndarray:
    """sigma_m of an n x n matrix of 2-forms: sum over m-subsets S of det(Omega_S).

    2-forms commute, so the Leibniz determinant is well defined.  Minors are
    expanded along their first row and memoised on (rows, cols), which lets
    principal minors of different S share their sub-minors.  Returns the
    coefficients of a 2m-form.
    """
    memo: dict[tuple[tuple[int, ...], tuple[int, ...]], np.ndarray] = {}

    def minor(rows: tuple[int, ...], cols: tuple[int, ...]) -> np.ndarray:
        if len(rows) == 1:
            return entries[rows[0], cols[0]]
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        r0, rest = rows[0], rows[1:]
        deg = 2 * (len(rows) - 1)
        acc = None
        for p, c in enumerate(cols):
            head = entries[r0, c]
            if not any(head):
                continue
            sub = minor(rest, cols[:p] + cols[p + 1:])
            term = wedge_coeffs(head, sub, n, 2, deg, exact)
            if p % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = np.zeros(comb(n, 2 * len(rows)), dtype=object if exact else np.float64)
            if exact:
                acc[:] = 0
        memo[key] = acc
        return acc

    total = np.zeros(comb(n, 2 * m), dtype=object if exact else np.float64)
    if exact:
        total[:] = 0
    for S in itertools.combinations(range(n), m):
        total = total + minor(S, S)
    return total


@dataclass(frozen=True, eq=False)
class PontryaginForm:
    """(2 pi)^(2|alpha|) * varpi_alpha held exactly.

    `reduced` is None when 4|alpha| exceeds the dimension: the form is then
    zero for degree reasons.
    """

    space: ScalarSpace
    alpha: tuple[int, ...]
    reduced: KForm | None

    @property
    def weight(self) -> int:
        return sum(self.alpha)

    @property
    def degree(self) -> int:
        return 4 * self.weight

    @property
    def two_pi_power(self) -> int:
        return 2 * self.weight

    @property
    def degenerate(self) -> bool:
        return self.reduced is None

    def is_zero(self) -> bool:
        return self.reduced is None or self.reduced.is_zero()

    def top_coefficient(self):
        if self.degree != self.space.n:
            raise DegreeError(f"form of degree {self.degree} is not top-degree in dimension {self.space.n}")
        return self.reduced.coeffs[0]

    def values(self) -> np.ndarray:
        """Float coefficients of varpi itself (2 pi expanded)."""
        if self.reduced is None:
            return np.zeros(0)
        scale = (2 * math.pi) ** self.two_pi_power
        return np.array([float(x) / scale for x in self.reduced.coeffs])

    def __eq__(self, other):
        if not isinstance(other, PontryaginForm):
            return NotImplemented
        if self.space != other.space or self.degree != other.degree:
            return False
        if self.reduced is None or other.reduced is None:
            return self.is_zero() and other.is_zero()
        return self.reduced == other.reduced

    __hash__ = None


def _check_index(C: CurvatureTensor, k: int):
    if k < 1 or 2 * k > C.n:
        raise DegreeError(f"Pontryagin index {k} needs 1 <= k <= n/2 (n = {C.n})")


def pontryagin_form_det(C: CurvatureTensor, k: int) -> PontryaginForm:
    """(2 pi)^2k varpi_k = sigma_2k(Omega_C), via principal minors of the curvature matrix."""
    _check_index(C, k)
    sp = C.space
    n = sp.n
    if 4 * k > n:
        return PontryaginForm(sp, (k,), None)
    entries = curvature_matrix(C).entries
    if sp.exact:
        ints, den = integerize(entries)
        raw = sigma_forms(ints, 2 * k, n, True)
        scale = Fraction(1, den ** (2 * k))
        coeffs = [Fraction(x) * scale for x in raw]
    else:
        coeffs = sigma_forms(entries, 2 * k, n, False)
    return PontryaginForm(sp, (k,), KForm(sp, 4 * k, coeffs))


def F_pairing(A: ExtOperator, B: ExtOperator) -> KForm:
    """F_k(A, B) as a 2k-form, summed over ordered complementary splits.

    F(A,B)[T] = sum over T = S u U (|S| = k) of sign(S,U) <A e_S, B e_U>; the
    k!^2 internal orderings of the defining permutation sum cancel the prefactor.
    """
    if A.space != B.space or A.k != B.k:
        raise DegreeError("F pairing needs two operators on the same exterior power")
    sp = A.space
    n, k = sp.n, A.k
    if 2 * k > n:
        raise DegreeError(f"F_{k} would be a {2 * k}-form in dimension {n}")
    g = _signed(sp.gram(k), sp.exact)
    gb = B.matrix * g[:, None]
    # pair[S, U] = <A e_S, B e_U>
    pair = linalg.exact_dot(A.matrix.T, gb) if sp.exact else A.matrix.T.dot(gb)
    left, right, sign = split_table(n, k, k)
    coeffs = (pair[left, right] * _signed(sign, sp.exact)).sum(axis=1)
    return KForm(sp, 2 * k, coeffs)


def F_pairing_permutation(A: ExtOperator, B: ExtOperator) -> KForm:
    """Literal evaluation of F_k through the (2k)! permutation sum; oracle only."""
    if A.space != B.space or A.k != B.k:
        raise DegreeError("F pairing needs two operators on the same exterior power")
    sp = A.space
    n, k = sp.n, A.k
    g = _signed(sp.gram(k), sp.exact)
    out = sp.zeros(comb(n, 2 * k))
    norm = sp.scalar(Fraction(1, factorial(k) ** 2))
    for r, T in enumerate(subsets(n, 2 * k)):
        total = sp.scalar(0)
        for perm in itertools.permutations(range(2 * k)):
            s = permutation_sign(perm)
            x = KVector.basis(sp, [T[p] for p in perm[:k]])
            y = KVector.basis(sp, [T[p] for p in perm[k:]])
            ax = A.matrix.dot(x.coeffs)
            by = B.matrix.dot(y.coeffs)
            total += s * (ax * by * g).sum()
        out[r] = total * norm
    return KForm(sp, 2 * k, out)


def pontryagin_form_op(C: CurvatureTensor, k: int) -> PontryaginForm:
    """(2 pi)^2k varpi_k = F_2k(C^*k, C^*k) / k!^2."""
    _check_index(C, k)
    sp = C.space
    if 4 * k > sp.n:
        return PontryaginForm(sp, (k,), None)
    H = higher_curvature_operator(C, k)
    F = F_pairing(H, H)
    return PontryaginForm(sp, (k,), F * sp.scalar(Fraction(1, factorial(k) ** 2)))


def pontryagin_form(C: CurvatureTensor, k: int, route: str = "det") -> PontryaginForm:
    if route == "det":
        return pontryagin_form_det(C, k)
    if route == "op":
        return pontryagin_form_op(C, k)
    raise ValueError(f"unknown route {route!r}")


def wedge_pontryagin(a: PontryaginForm, b: PontryaginForm) -> PontryaginForm:
    alpha = a.alpha + b.alpha
    if a.reduced is None or b.reduced is None or 4 * sum(alpha) > a.space.n:
        return PontryaginForm(a.space, alpha, None)
    return PontryaginForm(a.space, alpha, wedge(a.reduced, b.reduced))


def pontryagin_product(C: CurvatureTensor, alpha: Sequence[int], route: str = "det") -> PontryaginForm:
    """varpi_alpha1 ^ ... ^ varpi_alphal, reduced by (2 pi)^(2|alpha|)."""
    alpha = tuple(int(a) for a in alpha)
    if not alpha or any(a < 1 for a in alpha):
        raise DegreeError(f"alpha must be a nonempty tuple of positive integers, got {alpha}")
    sp = C.space
    if 4 * sum(alpha) > sp.n:
        return PontryaginForm(sp, alpha, None)
    cache: dict[int, PontryaginForm] = {}
    forms = []
    for a in alpha:
        if a not in cache:
            cache[a] = pontryagin_form(C, a, route)
        forms.append(cache[a])
    return reduce(wedge_pontryagin, forms)


def higher_curvature_operator_expansion(C: CurvatureTensor, k: int) -> ExtOperator:
    """C^*k = sum over I in [n]^2k of (Omega^{i1 i2} ^ ... ^ Omega^{i2k-1 i2k}) (x) e_I.

    Only multi-indices without repeats contribute; each is a permutation of an
    increasing R and e_I = sgn * e_R.  Independent of `star_product`.
    """
    if k < 1 or 2 * k > C.n:
        raise DegreeError(f"order {k} out of range")
    sp = C.space
    n = sp.n
    forms = operator_forms(C).entries
    d = comb(n, 2 * k)
    m = sp.zeros((d, d))
    for r, R in enumerate(subsets(n, 2 * k)):
        row = sp.zeros(d)
        for perm in itertools.permutations(R):
            s = permutation_sign(perm)
            acc = forms[perm[0], perm[1]]
            deg = 2
            for p in range(2, 2 * k, 2):
                acc = wedge_coeffs(acc, forms[perm[p], perm[p + 1]], n, deg, 2, sp.exact)
                deg += 2
            row = row + s * acc
        m[r, :] = row
    return ExtOperator(sp, 2 * k, m)
