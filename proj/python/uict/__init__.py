"""Growth processes, exact kernels and diffusion limits of layered causal
triangulations.

The heavy lifting lives in the C++ extension module; this package re-exports
its surface.
"""

from ._core import (  # noqa: F401
    EPSILON_FLOOR,
    AlmostCausalTriangulation,
    BoundaryTrajectory,
    CausalStrip,
    CausalTriangulation,
    GrownStrip,
    IllegalMoveError,
    InsufficientTrajectoryError,
    RootedForest,
    ScalingReport,
    SdePath,
    StripStops,
    build_from_moves,
    chi_square,
    conditioned_kernel,
    discrete_generator_coeffs,
    duality_ratio,
    euler_path,
    euler_terminal,
    fractal_dimension,
    gw_kernel,
    ks_distance,
    ks_distance_cdf,
    martingale_residuals,
    moves_from_triangulation,
    offspring_prob,
    path_probability,
    remove_defects,
    rescaled_growth_marginal,
    rescaled_slice_marginal,
    rewrite_defect_runs,
    sample_conditioned_chain,
    sample_trajectory,
    slice_marginal_dp,
    step_prob,
    strip_kernel_bruteforce,
    strip_kernel_exact,
    strip_kernel_row,
    strip_stops,
    time_change,
    to_forest,
    validate_almost_causal,
    validate_causal,
    verify,
)

__version__ = "1.0.0"
