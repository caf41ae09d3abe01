"""Matrix Nevanlinna interpolation: abstract interpolation problems, resolvent
matrices, linear-fractional parametrization of solutions, and an independent
check through selfadjoint extensions."""

__version__ = "0.1.0"

from .matkit import DEFAULT_TOL, Tolerance
from .nevanlinna import (
    DEFAULT_GRID,
    AffineFunction,
    ConstantPair,
    DiscreteMeasure,
    HerglotzFunction,
    HerglotzOfMeasure,
    membership_check,
)
from .aip import (
    AipDataSet,
    build_theta,
    build_theta_auto,
    build_theta_shifted,
    forced_parameter,
    lft_solve,
    make_data,
    theta_j_checks,
    validate_data,
)
from .problems import (
    MomentSequence,
    TangentialSpec,
    build_tangential,
    build_truncated_moment,
    extract_measure,
    hankel_exactness,
    hankel_pseudo_x,
    orthogonal_polynomials,
    theta_series,
    verify_moments,
)

__all__ = [
    "DEFAULT_GRID", "DEFAULT_TOL", "Tolerance", "AffineFunction", "ConstantPair",
    "DiscreteMeasure", "HerglotzFunction", "HerglotzOfMeasure", "membership_check",
    "AipDataSet", "build_theta", "build_theta_auto", "build_theta_shifted",
    "forced_parameter", "lft_solve", "make_data", "theta_j_checks", "validate_data",
    "MomentSequence", "TangentialSpec", "build_tangential", "build_truncated_moment",
    "extract_measure", "hankel_exactness", "hankel_pseudo_x", "orthogonal_polynomials",
    "theta_series", "verify_moments",
]
