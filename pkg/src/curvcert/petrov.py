"""Petrov classification of 4D Lorentzian Weyl tensors.

The Weyl operator commutes with the Hodge star on bivectors and star squares
to -1, so declaring i := star turns real Lambda^2 into a 3-dimensional complex
space with basis b_a = e_t ^ e_a (t the time index, a spatial).  Writing
W^(b_j) = sum_i (A_ij b_i + B_ij *b_i) gives the complex 3x3 matrix Q = A + iB,
whose Jordan structure is the Petrov type.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from sympy import QQ_I, Poly, symbols
from sympy.polys.matrices import DomainMatrix

from . import linalg
from .curvature import CurvatureTensor, _pair, curvature_operator, trace14
from .errors import CertificateViolation, IndeterminateClassification, NotWeyl, StarCommutationFailed
from .exterior import ScalarSpace, _require_lorentz4, _signed, hodge_star_operator
from .pontryagin import pontryagin_form

TYPES = ("O", "I", "D", "II", "N", "III")
ALL_REAL = "allReal"
ALL_IMAGINARY = "allImaginary"
GENERIC = "generic"

DEFAULT_TOLERANCE = 1e-9


# --- the complex basis -----------------------------------------------------------

def bivector_frame(space: ScalarSpace) -> np.ndarray:
    """6x6 matrix with columns b_1, b_2, b_3, *b_1, *b_2, *b_3 in the subset basis."""
    _require_lorentz4(space)
    t = space.signs.index(-1)
    spatial = [a for a in range(4) if a != t]
    frame = space.zeros((6, 6))
    for col, a in enumerate(spatial):
        r, s = _pair(t, a, 4)
        frame[r, col] = space.scalar(s)
    star = hodge_star_operator(space).matrix
    frame[:, 3:] = star.dot(frame[:, :3])
    return frame


@dataclass(frozen=True, eq=False)
class ComplexOperator:
    """Q = re + i im on the basis b_1, b_2, b_3."""

    re: np.ndarray = field(repr=False)
    im: np.ndarray = field(repr=False)

    @property
    def exact(self) -> bool:
        return self.re.dtype == object

    def trace(self) -> tuple:
        return self.re.trace(), self.im.trace()

    def is_zero(self) -> bool:
        if self.exact:
            return all(x == 0 for x in self.re.flat) and all(x == 0 for x in self.im.flat)
        return not np.any(self.re) and not np.any(self.im)

    def to_numpy(self) -> np.ndarray:
        return self.re.astype(float) + 1j * self.im.astype(float)

    def to_domain(self) -> DomainMatrix:
        rows = [[QQ_I(_q(self.re[i, j]), _q(self.im[i, j])) for j in range(3)] for i in range(3)]
        return DomainMatrix(rows, (3, 3), QQ_I)

    def rows(self) -> list[list[tuple]]:
        return [[(self.re[i, j], self.im[i, j]) for j in range(3)] for i in range(3)]


def _q(x: Fraction):
    from sympy import Rational

    return Rational(x.numerator, x.denominator)


def complexify_weyl(W: CurvatureTensor) -> ComplexOperator:
    sp = W.space
    _require_lorentz4(sp)
    if not sp.all_zero(trace14(W).matrix, W.scale()):
        raise NotWeyl("trace14 of the input does not vanish")
    Wh = curvature_operator(W).matrix
    star = hodge_star_operator(sp).matrix
    if not sp.all_zero(Wh.dot(star) - star.dot(Wh), W.scale()):
        raise StarCommutationFailed("Weyl operator does not commute with the star")
    frame = bivector_frame(sp)
    coeffs = linalg.solve(frame, Wh.dot(frame[:, :3]))
    Q = ComplexOperator(coeffs[:3], coeffs[3:])
    tr_re, tr_im = Q.trace()
    scale = W.scale()
    if not (sp.is_zero(tr_re, scale) and sp.is_zero(tr_im, scale)):
        raise NotWeyl(f"complex trace {tr_re} + {tr_im} i is not zero")
    return Q


def weyl_from_complex_matrix(space: ScalarSpace, Q: ComplexOperator) -> CurvatureTensor:
    """Inverse of `complexify_weyl`, verified.

    W^ is A b + B *b on the b's and is extended star-linearly, then M = G2 W^.
    The tensor constructor checks pair symmetry and Bianchi; trace-freeness
    and the round trip are checked here.
    """
    _require_lorentz4(space)
    A, B = space.asarray(Q.re), space.asarray(Q.im)
    block = space.zeros((6, 6))
    block[:3, :3], block[:3, 3:] = A, -B
    block[3:, :3], block[3:, 3:] = B, A
    frame = bivector_frame(space)
    # W^ frame = frame block  =>  W^ = frame block frame^-1
    Wh = linalg.solve(frame.T, (frame.dot(block)).T).T
    g = _signed(space.gram(2), space.exact)
    W = CurvatureTensor(space, Wh * g[:, None])
    if not space.all_zero(trace14(W).matrix, W.scale()):
        raise NotWeyl("constructed tensor is not trace-free; the complex matrix must be symmetric and trace-free")
    back = complexify_weyl(W)
    if not (space.all_zero(back.re - A, W.scale()) and space.all_zero(back.im - B, W.scale())):
        raise AssertionError("complexification round trip failed")
    return W


# --- normal forms ------------------------------------------------------------------

def gauss(z) -> tuple[Fraction, Fraction]:
    """Exact (re, im) from an int, Fraction, str, complex or (re, im) pair."""
    if isinstance(z, (tuple, list)):
        re, im = z
        return Fraction(re), Fraction(im)
    if isinstance(z, complex):
        return Fraction(repr(z.real)), Fraction(repr(z.imag))
    if isinstance(z, float):
        return Fraction(repr(z)), Fraction(0)
    return Fraction(z), Fraction(0)


def _from_complex_rows(rows) -> ComplexOperator:
    re = np.empty((3, 3), dtype=object)
    im = np.empty((3, 3), dtype=object)
    for i in range(3):
        for j in range(3):
            re[i, j], im[i, j] = gauss(rows[i][j])
    return ComplexOperator(re, im)


def normal_form(petrov_type: str, eigenvalues=None) -> ComplexOperator:
    """Complex-symmetric trace-free representative of a Petrov type.

    I: `eigenvalues` is a triple with zero sum (default (1, 2, -3)).
    D, II: `eigenvalues` is lam (default 1), spectrum (2 lam, -lam, -lam) for D
    and (lam, lam, -2 lam) for II.  O, N, III take no data.  N and III use the
    nilpotent symmetric blocks [[1, i], [i, -1]] and [[0,1,0],[1,0,i],[0,i,0]].
    """
    t = petrov_type.upper()
    z0 = (0, 0)
    if t == "O":
        rows = [[z0] * 3 for _ in range(3)]
    elif t == "I":
        ev = [gauss(e) for e in (eigenvalues if eigenvalues is not None else (1, 2, -3))]
        if len(ev) != 3:
            raise ValueError("type I needs three eigenvalues")
        if sum(e[0] for e in ev) != 0 or sum(e[1] for e in ev) != 0:
            raise ValueError(f"eigenvalues must sum to zero, got {ev}")
        if len(set(ev)) != 3:
            raise ValueError("type I needs three distinct eigenvalues")
        rows = [[ev[i] if i == j else z0 for j in range(3)] for i in range(3)]
    elif t in ("D", "II"):
        lam = gauss(eigenvalues if eigenvalues is not None else 1)
        if lam == (0, 0):
            raise ValueError(f"type {t} needs a nonzero eigenvalue parameter")
        if t == "D":
            d = [(2 * lam[0], 2 * lam[1]), (-lam[0], -lam[1]), (-lam[0], -lam[1])]
            rows = [[d[i] if i == j else z0 for j in range(3)] for i in range(3)]
        else:
            rows = [
                [(lam[0] + 1, lam[1]), (0, 1), z0],
                [(0, 1), (lam[0] - 1, lam[1]), z0],
                [z0, z0, (-2 * lam[0], -2 * lam[1])],
            ]
    elif t == "N":
        rows = [[(1, 0), (0, 1), z0], [(0, 1), (-1, 0), z0], [z0, z0, z0]]
    elif t == "III":
        rows = [[z0, (1, 0), z0], [(1, 0), z0, (0, 1)], [z0, (0, 1), z0]]
    else:
        raise ValueError(f"unknown Petrov type {petrov_type!r}; expected one of {TYPES}")
    return _from_complex_rows(rows)


# --- classification ------------------------------------------------------------------

@dataclass(frozen=True)
class PetrovReport:
    type: str
    eigenvalues: tuple[tuple, ...]          # distinct eigenvalues as (re, im)
    multiplicities: tuple[int, ...]
    jordan_profile: tuple[tuple[int, ...], ...]  # ranks of (Q - lam)^m, m = 1..mult
    is_real: bool
    is_imaginary: bool
    exact: bool
    tolerance: float | None = None

    @property
    def subtype(self) -> str:
        """allReal / allImaginary / generic; an all-zero spectrum reports allReal."""
        if self.is_real:
            return ALL_REAL
        if self.is_imaginary:
            return ALL_IMAGINARY
        return GENERIC

    def spectrum(self) -> list[tuple]:
        out = []
        for ev, m in zip(self.eigenvalues, self.multiplicities):
            out.extend([ev] * m)
        return out


def _type_from_ranks(distinct: int, mults: Sequence[int], ranks: Sequence[Sequence[int]], zero: bool) -> str:
    if zero:
        return "O"
    if distinct == 3:
        return "I"
    if distinct == 2:
        double = mults.index(2)
        return "D" if ranks[double][0] == 1 else "II"
    r1 = ranks[0][0]
    return {0: "O", 1: "N", 2: "III"}[r1]


def _classify_exact(Q: ComplexOperator) -> PetrovReport | None:
    dm = Q.to_domain()
    x = symbols("x")
    poly = Poly(dm.charpoly(), x, domain=QQ_I)
    _, factors = poly.factor_list()
    if any(f.degree() != 1 for f, _ in factors):
        return None
    roots = []
    for f, m in factors:
        a, b = f.all_coeffs()  # a x + b
        roots.append((QQ_I.from_sympy(-b / a), m))
    roots.sort(key=lambda r: (-r[1], float(r[0].x), float(r[0].y)))
    eye = DomainMatrix.eye(3, QQ_I)
    eigen, mults, ranks = [], [], []
    for lam, m in roots:
        shifted = dm - eye * lam
        prof, power = [], shifted
        for _ in range(m):
            prof.append(power.rank())
            power = power * shifted
        eigen.append((Fraction(int(lam.x.numerator), int(lam.x.denominator)),
                      Fraction(int(lam.y.numerator), int(lam.y.denominator))))
        mults.append(m)
        ranks.append(tuple(prof))
    ptype = _type_from_ranks(len(eigen), mults, ranks, Q.is_zero())
    return PetrovReport(
        ptype, tuple(eigen), tuple(mults), tuple(ranks),
        all(e[1] == 0 for e in eigen), all(e[0] == 0 for e in eigen), True,
    )


def _classify_float(Q: np.ndarray, tolerance: float) -> PetrovReport:
    """Numeric classification.

    Eigenvalues of a defective matrix move by about eps^(1/m) under rounding,
    so multiplicities are decided from the trace-free characteristic
    polynomial x^3 + p x + q instead: its discriminant -4p^3 - 27q^2 is a
    polynomial in the entries and is computed stably.  Diagonalizability is
    then read off the minimal polynomial: the squared norm of (Q - lam)(Q - mu)
    (or Q^2 for a triple zero) is a degree-4 quantity on the same footing.
    Values within `tolerance` times the matching power of the entry scale
    count as zero; values within 10x of that are refused as indeterminate.
    """
    s = max(1.0, float(np.max(np.abs(Q))))
    tol = tolerance * s
    eye = np.eye(3)
    p = complex(-np.trace(Q @ Q) / 2)
    q = complex(-np.linalg.det(Q))
    disc = -4 * p ** 3 - 27 * q ** 2

    def small(x, power):
        if tolerance * s ** power < abs(x) <= 10 * tolerance * s ** power:
            raise IndeterminateClassification(f"|{x:.3g}| is within 10x of the tolerance band")
        return abs(x) <= tolerance * s ** power

    def sq(a):
        return float(np.sum(np.abs(a) ** 2))

    if float(np.max(np.abs(Q))) <= tol:
        ptype, clusters, ranks = "O", [(0j, 3)], [(0, 0, 0)]
    elif small(disc, 6):
        if small(p, 2) and small(q, 3):
            clusters = [(0j, 3)]
            if small(sq(Q @ Q), 4):
                ptype, ranks = "N", [(1, 0, 0)]
            else:
                ptype, ranks = "III", [(2, 1, 0)]
        else:
            lam, mu = -3 * q / (2 * p), 3 * q / p
            clusters = [(lam, 2), (mu, 1)]
            if small(sq((Q - lam * eye) @ (Q - mu * eye)), 4):
                ptype, ranks = "D", [(1, 1), (2,)]
            else:
                ptype, ranks = "II", [(2, 1), (2,)]
    else:
        vals = sorted((complex(v) for v in np.linalg.eigvals(Q)), key=lambda v: (v.real, v.imag))
        ptype, clusters, ranks = "I", [(v, 1) for v in vals], [(2,)] * 3
    eigen = tuple((lam.real, lam.imag) for lam, _ in clusters)
    return PetrovReport(
        ptype, eigen, tuple(m for _, m in clusters), tuple(ranks),
        all(abs(e[1]) <= tol for e in eigen), all(abs(e[0]) <= tol for e in eigen), False, tolerance,
    )


def classify(W: CurvatureTensor, tolerance: float = DEFAULT_TOLERANCE) -> PetrovReport:
    """Petrov type from eigenvalue multiplicities and ranks of (Q - lam)^m.

    Exact over Q(i) when the characteristic polynomial splits there; otherwise
    numeric with `tolerance` relative to the largest entry.
    """
    Q = complexify_weyl(W)
    if Q.exact:
        report = _classify_exact(Q)
        if report is not None:
            return report
    return _classify_float(Q.to_numpy(), tolerance)


class TypeVanishing(NamedTuple):
    applicable: bool
    vanishes: bool | None
    witness: object
    alpha: tuple = (1,)

    def __bool__(self):
        return bool(self.applicable and self.vanishes)


def theorem_applies(report: PetrovReport) -> bool:
    if report.type in ("O", "N", "III"):
        return True
    return report.type in ("I", "D", "II") and (report.is_real or report.is_imaginary)


def pontryagin_vanishing_for_type(report: PetrovReport, W: CurvatureTensor) -> TypeVanishing:
    """For the types/subtypes covered by the theorem, varpi_1(W) must vanish exactly.

    Returns applicability and the witness; a nonzero witness where the theorem
    applies raises CertificateViolation.
    """
    form = pontryagin_form(W, 1)
    witness = form.top_coefficient()
    if not theorem_applies(report):
        return TypeVanishing(False, None, witness)
    zero = W.space.is_zero(witness, max(W.scale(), 1.0) ** 2)
    result = TypeVanishing(True, zero, witness)
    if not zero:
        raise CertificateViolation(result)
    return result
