"""Reflections, the pullback action on curvature tensors, parity splits and
the vanishing certificates for Pontryagin products of theta-even/odd tensors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import linalg
from .curvature import CurvatureTensor, curvature_operator, weyl
from .errors import CertificateViolation, NullVector, PreconditionFailed
from .exterior import Isometry, ScalarSpace, _max_abs, ext_power_map, pullback_form, top_power_action
from .pontryagin import pontryagin_form, pontryagin_product

EVEN = "even"
ODD = "odd"


def reflection(space: ScalarSpace, u) -> Isometry:
    """theta_u(x) = x - 2 g(x,u)/g(u,u) u, for any non-null u."""
    u = space.asarray(u)
    if u.shape != (space.n,):
        raise ValueError(f"axis must have {space.n} components")
    guu = space.inner(u, u)
    if space.is_zero(guu, _max_abs(u) ** 2):
        raise NullVector(f"g(u,u) = 0 for u = {list(u)}")
    G = space.metric()
    # column j: e_j - 2 eps_j u_j / g(u,u) * u
    m = space.eye(space.n) - np.outer(u, G.dot(u)) * (space.scalar(2) / guu)
    theta = Isometry(space, m)
    if theta.det != -1:
        raise AssertionError("reflection with det != -1")
    return theta


def basis_reflection(space: ScalarSpace, i: int) -> Isometry:
    u = [0] * space.n
    u[i] = 1
    return reflection(space, u)


def pullback(theta: Isometry, C: CurvatureTensor) -> CurvatureTensor:
    """(theta^* C)(w,x,y,z) = C(theta w, theta x, theta y, theta z)."""
    if theta.space != C.space:
        raise ValueError("isometry and tensor live on different spaces")
    lam = ext_power_map(theta, 2).matrix
    return CurvatureTensor._closed(C.space, linalg.mdot(linalg.mdot(lam.T, C.matrix), lam))


@dataclass(frozen=True, eq=False)
class EMSplit:
    """C = electric + magnetic with theta^* fixing the first and negating the second."""

    electric: CurvatureTensor
    magnetic: CurvatureTensor
    theta: Isometry = field(repr=False)
    axis: np.ndarray | None = field(default=None, repr=False)

    def total(self) -> CurvatureTensor:
        return self.electric + self.magnetic


def parity_split(C: CurvatureTensor, theta: Isometry) -> EMSplit:
    """C_pm = (C +- theta^* C) / 2."""
    pc = pullback(theta, C)
    half = C.space.scalar(Fraction(1, 2))
    return EMSplit((C + pc) * half, (C - pc) * half, theta)


def em_split(C: CurvatureTensor, u) -> EMSplit:
    theta = reflection(C.space, u)
    s = parity_split(C, theta)
    return EMSplit(s.electric, s.magnetic, theta, C.space.asarray(u))


def parity(C: CurvatureTensor, theta: Isometry) -> str | None:
    """"even", "odd" or None.  The zero tensor is reported as even."""
    pc = pullback(theta, C)
    scale = C.scale()
    if C.space.all_zero(pc.matrix - C.matrix, scale):
        return EVEN
    if C.space.all_zero(pc.matrix + C.matrix, scale):
        return ODD
    return None


def _contract(arr: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    """Replace index `axis` of arr by mat^T applied to it: out[.., j, ..] = sum_a arr[.., a, ..] mat[a, j]."""
    out = np.tensordot(arr, mat, axes=([axis], [0]))
    return np.moveaxis(out, -1, axis)


class AxisTest(NamedTuple):
    holds: bool
    residual: float
    degenerate: bool


def _orth_projector(space: ScalarSpace, u: np.ndarray) -> np.ndarray:
    """Columns P e_j = e_j - g(e_j,u)/g(u,u) u; they span the orthogonal complement of u."""
    G = space.metric()
    guu = space.inner(u, u)
    return space.eye(space.n) - np.outer(u, G.dot(u)) * (space.scalar(1) / guu)


def _components_pe_pm(C: CurvatureTensor, u) -> tuple[np.ndarray, list[np.ndarray]]:
    """Component families of the axis criteria.

    PE: C(u, x, y, z) for x, y, z orthogonal to u.  PM: C(u, x, y, u) and
    C(w, x, y, z) for w, x, y, z orthogonal to u.
    """
    sp = C.space
    u = sp.asarray(u)
    if sp.is_zero(sp.inner(u, u), _max_abs(u) ** 2):
        raise NullVector("axis must be non-null")
    P = _orth_projector(sp, u)
    T = C.to_array()
    uT = np.tensordot(u, T, axes=([0], [0]))  # C(u, ., ., .)
    pe = _contract(_contract(_contract(uT, P, 0), P, 1), P, 2)
    uxyu = np.tensordot(_contract(_contract(uT, P, 0), P, 1), u, axes=([2], [0]))
    wxyz = T
    for ax in range(4):
        wxyz = _contract(wxyz, P, ax)
    return pe, [uxyu, wxyz]


def _residual(arrs) -> float:
    return max((_max_abs(np.asarray(a)) for a in arrs), default=0.0)


def is_PE_components(C: CurvatureTensor, u) -> bool:
    pe, _ = _components_pe_pm(C, u)
    return C.space.all_zero(pe, C.scale())


def is_PM_components(C: CurvatureTensor, u) -> bool:
    _, pm = _components_pe_pm(C, u)
    return all(C.space.all_zero(a, C.scale()) for a in pm)


def is_PE(C: CurvatureTensor, u) -> AxisTest:
    """Purely electric w.r.t. u; component and eigen-split criteria must agree."""
    split = em_split(C, u)
    eigen = split.magnetic.is_zero() if C.space.exact else C.space.all_zero(split.magnetic.matrix, C.scale())
    comp = is_PE_components(C, u)
    if eigen != comp:
        raise AssertionError(f"PE criteria disagree: eigen={eigen}, components={comp}")
    return AxisTest(eigen, _residual([split.magnetic.matrix]), C.is_zero())


def is_PM(C: CurvatureTensor, u) -> AxisTest:
    split = em_split(C, u)
    eigen = split.electric.is_zero() if C.space.exact else C.space.all_zero(split.electric.matrix, C.scale())
    comp = is_PM_components(C, u)
    if eigen != comp:
        raise AssertionError(f"PM criteria disagree: eigen={eigen}, components={comp}")
    return AxisTest(eigen, _residual([split.electric.matrix]), C.is_zero())


def commutation_check(C: CurvatureTensor, theta: Isometry) -> int:
    """Sign s with C^ o L2(theta) = s L2(theta) o C^, or 0 if neither sign works.

    The zero tensor commutes with both signs and reports +1.
    """
    lam = ext_power_map(theta, 2)
    Ch = curvature_operator(C)
    left = (Ch @ lam).matrix
    right = (lam @ Ch).matrix
    scale = C.scale()
    if C.space.all_zero(left - right, scale):
        return 1
    if C.space.all_zero(left + right, scale):
        return -1
    return 0


def form_fixed_check(C: CurvatureTensor, theta: Isometry, k: int, route: str = "det") -> bool:
    """Is varpi_k(C) fixed by the pullback along theta?"""
    form = pontryagin_form(C, k, route)
    if form.reduced is None:
        return True
    pulled = pullback_form(theta, form.reduced)
    return C.space.all_zero(pulled.coeffs - form.reduced.coeffs, _max_abs(form.reduced.coeffs))


def top_degree_action(theta: Isometry):
    """The induced map on the top exterior power is multiplication by this; equals det theta."""
    return top_power_action(theta)


@dataclass(frozen=True, eq=False)
class VanishingCertificate:
    dimension: int
    alpha: tuple[int, ...]
    parity: str
    theta: Isometry = field(repr=False)
    all_coefficients_zero: bool
    witness: object
    top_action: object
    route: str = "det"

    @property
    def preconditions(self) -> dict:
        return {
            "dimension": self.dimension,
            "n_equals_4k": self.dimension == 4 * sum(self.alpha),
            "det_theta": self.theta.det,
            "parity": self.parity,
        }

    @property
    def valid(self) -> bool:
        return self.all_coefficients_zero and self.theta.det == -1 and self.dimension == 4 * sum(self.alpha)


def vanishing_certificate(C: CurvatureTensor, theta: Isometry, alpha: Sequence[int], route: str = "det") -> VanishingCertificate:
    """Check that varpi_alpha(C) vanishes for C even or odd under a det -1 isometry.

    Preconditions are verified, not assumed.  A nonzero witness raises
    CertificateViolation: under valid preconditions it can only mean a bug.
    """
    alpha = tuple(int(a) for a in alpha)
    sp = C.space
    if not alpha or any(a < 1 for a in alpha):
        raise PreconditionFailed(f"alpha must be positive integers, got {alpha}")
    k = sum(alpha)
    if sp.n != 4 * k:
        raise PreconditionFailed(f"dimension {sp.n} is not 4|alpha| = {4 * k}")
    if theta.space != sp:
        raise PreconditionFailed("isometry lives on a different space")
    if theta.det != -1:
        raise PreconditionFailed(f"det theta = {theta.det}, need -1")
    par = parity(C, theta)
    if par is None:
        raise PreconditionFailed("tensor is neither theta-even nor theta-odd")
    top = top_degree_action(theta)
    if top != theta.det:
        raise AssertionError(f"top-degree action {top} differs from det {theta.det}")
    form = pontryagin_product(C, alpha, route)
    witness = form.top_coefficient()
    scale = max(C.scale(), 1.0) ** (2 * k)
    zero = sp.is_zero(witness, scale)
    cert = VanishingCertificate(sp.n, alpha, par, theta, zero, witness, top, route)
    if not zero:
        raise CertificateViolation(cert)
    return cert


def weyl_parity_descends(C: CurvatureTensor, theta: Isometry) -> bool:
    """If C has a parity, weyl(C) has the same one (zero Weyl counts as both)."""
    par = parity(C, theta)
    if par is None:
        return True
    W = weyl(C)
    pw = pullback(theta, W)
    target = W if par == EVEN else -W
    return W.space.all_zero(pw.matrix - target.matrix, W.scale())
