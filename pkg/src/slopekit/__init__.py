"""Exact Newton-polygon slope bounds for lattice endomorphisms, with seeded
randomized verification."""

from .bounds import (
    B_function,
    PiecewiseBound,
    SigmaProfile,
    T_function,
    chord_findings,
    closed_form_c,
    critical_slope_c,
    iq_bound_paper,
    iq_lower_bound,
    max_chord_above,
    n_alpha,
    shape_from_profile,
    sigma_profile,
)
from .harness import (
    TrialConfig,
    VerificationReport,
    gen_matrix,
    layer_sizes,
    perturb_matrix,
    random_subquotient,
    run_campaign,
    verify_coeff_congruence,
    verify_divisibility,
    verify_layer_monotonic,
    verify_slope_match,
)
from .kernels import BACKEND
from .linalg import IntegerMatrix, QuotientShape, char_poly, quotient_shape, snf_p_exponents
from .newton import NewtonPolygon, count_slope, newton_polygon, slope_multiplicities
from .symmetric import HomogPoly, Mat2, TensorPolynomial, act, tensor_act, w_basis
from .valuation import INF, Prime, vp, vp_rational

__version__ = "0.1.0"
