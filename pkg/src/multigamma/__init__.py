"""Multiple gamma functions G_r: exact polynomial layer, numeric routes, CLI."""

from .constants import Precision, hurwitz_zeta, hurwitz_zeta_sderiv, zeta_prime_neg
from .conventions import UNRESOLVED, ConventionError, ConventionSet
from .evaluate import (
    CalibrationError,
    EvalConfig,
    LogValue,
    ResidualReport,
    SectorError,
    SingularInputError,
    barnes_zeta_oracle,
    calibrate_conventions,
    euler_partial,
    extrapolate,
    gauss_partial,
    log_gamma_r,
    log_multigamma,
    log_multigamma_asymptotic,
    multiple_sine,
    multiplication_residual,
)
from .exact_poly import (
    GrjTable,
    IdentityReport,
    RationalPoly,
    bernoulli_numbers,
    bernoulli_poly,
    binom_poly,
    check_identities,
    composition_counts,
    grj_poly,
    phi_rj_poly,
    psi_poly,
    q_poly,
    stirling_first_row,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ConventionError",
    "ConventionSet",
    "EvalConfig",
    "GrjTable",
    "IdentityReport",
    "LogValue",
    "Precision",
    "RationalPoly",
    "ResidualReport",
    "SectorError",
    "SingularInputError",
    "UNRESOLVED",
    "__version__",
    "barnes_zeta_oracle",
    "bernoulli_numbers",
    "bernoulli_poly",
    "binom_poly",
    "calibrate_conventions",
    "check_identities",
    "composition_counts",
    "euler_partial",
    "extrapolate",
    "gauss_partial",
    "grj_poly",
    "hurwitz_zeta",
    "hurwitz_zeta_sderiv",
    "log_gamma_r",
    "log_multigamma",
    "log_multigamma_asymptotic",
    "multiple_sine",
    "multiplication_residual",
    "phi_rj_poly",
    "psi_poly",
    "q_poly",
    "stirling_first_row",
    "zeta_prime_neg",
]
