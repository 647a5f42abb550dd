"""Numerical laboratory for radial dispersive flows on compact rank-one
symmetric spaces: zonal-function spectral calculus, maximal-function scans,
quadratic exponential sums and the rational-time divergence experiment."""

from .errors import DomainError, PreconditionError, ResourceError
from .geometry import (
    Family,
    RootData2,
    SpaceParams,
    density,
    eigenvalue_sq,
    make_space,
    rank2_eigen_lower,
    rank2_norm_sq,
    spectral_tail_sum,
)
from .jacobi import (
    ZonalTable,
    asymptotic_main_term,
    build_zonal_table,
    jacobi_at_one,
    jacobi_eval,
    lead_coeffs,
    zonal_l2norms,
    zonal_matrix,
)
from .numtheory import (
    CongruenceSet,
    build_EN,
    divisor_count,
    gauss_sum_direct,
    gauss_sum_phase_ratio,
    mobius,
    mobius_identity_check,
    odd_totient_sum,
    r2,
    strichartz_count,
    strichartz_table,
    totient,
    zeta_odd_euler,
    zeta_odd_mobius,
)
from .spectral import (
    PhaseFunction,
    SphericalSeries,
    beam,
    boussinesq,
    comparable_oscillation_bound,
    custom_phase,
    dyadic_decompose,
    evaluate,
    evaluate_at,
    fractional,
    parse_phase,
    phase_difference,
    propagate,
    schrodinger,
    sobolev_compare_check,
    sobolev_norm,
    time_grid,
    transfer_residual,
)
from .maximal import (
    MaximalReport,
    circle_maximal_l6,
    lp_norm_on_space,
    maximal_function,
    strichartz_l6_torus,
    uniform_grid,
)
from .counterexample import (
    DivergenceReport,
    build_fN,
    divergence_scan,
    gauss_block_prediction,
    kappa,
    oscillatory_sum_S,
    oscillatory_sum_S_plus,
)

__version__ = "0.1.0"
