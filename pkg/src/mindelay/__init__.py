"""Minimum-phase factorization and energy delay verification."""

from .delay import (
    DelayReport,
    check_equal_gain,
    delay_ordering,
    energy_curve,
    generate_equal_gain_pair,
    proof_chain,
    verify_energy_delay,
)
from .errors import *  # noqa: F401,F403
from .matrix import (
    InnerMatrixCertificate,
    ParaHermitianSamples,
    analytic_defect,
    blaschke_potapov_factor,
    factorization_residual,
    generate_matrix_pair,
    inner_quotient_matrix,
    outer_certificate,
    para_hermitian_product,
    spectral_factor_outer,
    unitarity_defect_matrix,
)
from .polynomial import (
    DEFAULT_GRID_SIZE,
    GridSamples,
    MatrixPoly,
    Poly,
    coefficients_from_grid,
    evaluate_on_grid,
    grid_size_for,
    h2_norm_sq,
    matrix_inverse_on_grid,
    multiply,
    project,
    roots,
)
from .scalar import (
    BlaschkeProduct,
    DegenerateGridWarning,
    ScalarFactorization,
    blaschke_eval,
    factorize,
    inner_quotient,
    is_minimum_phase,
    minimum_phase_equivalent,
    optimality_gap,
    outer_from_magnitude,
    outer_from_zeros,
    paley_wiener_integral,
    unitarity_defect,
)

__version__ = "0.1.0"
