"""Exact Pontryagin forms, parity splits and vanishing certificates for
algebraic curvature tensors."""
from .curvature import (
    CurvatureTensor,
    Decomposition,
    SymBilinear,
    curvature_from_components,
    curvature_operator,
    decompose,
    higher_curvature_operator,
    kulkarni_nomizu,
    ricci,
    scalar_curvature,
    schouten,
    star_product,
    trace14,
    weyl,
)
from .errors import *  # noqa: F401,F403
from .exterior import (
    FLOAT64,
    RATIONAL,
    ExtOperator,
    Isometry,
    KForm,
    KVector,
    ScalarSpace,
    ext_power_map,
    hodge_star,
    hodge_star_operator,
    induced_inner,
    pullback_form,
    wedge,
)
from .generators import (
    TopologyExpr,
    bianchi_project,
    chi_sigma,
    constant_curvature,
    direct_sum,
    fubini_study_cp2,
    minkowski_fs_block,
    p1_integral,
    random_curvature,
    random_parity,
    verdict,
    weyl_of_petrov_type,
)
from .petrov import PetrovReport, classify, complexify_weyl, pontryagin_vanishing_for_type
from .pontryagin import (
    PontryaginForm,
    pontryagin_form,
    pontryagin_form_det,
    pontryagin_form_op,
    pontryagin_product,
)
from .symmetry import (
    EMSplit,
    VanishingCertificate,
    commutation_check,
    em_split,
    form_fixed_check,
    is_PE,
    is_PM,
    parity,
    parity_split,
    pullback,
    reflection,
    vanishing_certificate,
)

__version__ = "0.1.0"
