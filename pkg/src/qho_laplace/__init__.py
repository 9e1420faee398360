"""Exact solver for the one-dimensional quantum harmonic oscillator.

The eigenproblem is solved on the transform side: after factoring the
Gaussian decay, the Laplace transform of the remaining factor satisfies a
first-order equation whose terminating Frobenius series quantizes the
energies and inverts, term by term, onto Hermite polynomials.  All series
and polynomial algebra is exact (rationals extended by half powers of pi);
an independent finite-difference eigensolver and direct quadrature provide
the numeric cross-checks.
"""

__version__ = "0.1.0"

from .exact_scalar import (
    ExactScalar,
    IncommensurableScalarError,
    ONE,
    SQRT_PI,
    ZERO,
    gamma_of_half_integer,
    gamma_ratio_half,
)
from .hermite import (
    HermiteMatchError,
    HermitePolynomial,
    hermite_explicit,
    hermite_recurrence,
    match_to_hermite,
    parity_identity_check,
)
from .inversion import (
    Eigenfunction,
    InversionDomainError,
    ParityMismatchError,
    SchrodingerResidual,
    XiPolynomial,
    assemble_wavefunction,
    boundary_exponent,
    eval_wavefunction,
    invert_transform,
    normalize,
    schrodinger_residual,
)
from .laplace_series import (
    ConfluentForm,
    InternalConsistencyError,
    OdeIdentityResult,
    Parity,
    QuantumNumbers,
    TransformSeries,
    build_transform,
    coefficients_closed_form,
    eval_transform,
    quantize,
    recurrence_step,
    spectral_condition,
    verify_ode_identity,
)
from .oracle import (
    DEFAULTS,
    Grid,
    GridError,
    OracleConvergenceError,
    OracleDefaults,
    TridiagonalOperator,
    asymptotic_large_s,
    asymptotic_small_s,
    eigenvalue_count_below,
    eigenvector,
    fd_hamiltonian,
    inner_product,
    lowest_eigenvalues,
    make_grid,
    numeric_laplace,
    quadrature,
)
from .units import DIMENSIONLESS, Units

__all__ = [
    "__version__",
    "ExactScalar",
    "IncommensurableScalarError",
    "ONE",
    "SQRT_PI",
    "ZERO",
    "gamma_of_half_integer",
    "gamma_ratio_half",
    "HermiteMatchError",
    "HermitePolynomial",
    "hermite_explicit",
    "hermite_recurrence",
    "match_to_hermite",
    "parity_identity_check",
    "Eigenfunction",
    "InversionDomainError",
    "ParityMismatchError",
    "SchrodingerResidual",
    "XiPolynomial",
    "assemble_wavefunction",
    "boundary_exponent",
    "eval_wavefunction",
    "invert_transform",
    "normalize",
    "schrodinger_residual",
    "ConfluentForm",
    "InternalConsistencyError",
    "OdeIdentityResult",
    "Parity",
    "QuantumNumbers",
    "TransformSeries",
    "build_transform",
    "coefficients_closed_form",
    "eval_transform",
    "quantize",
    "recurrence_step",
    "spectral_condition",
    "verify_ode_identity",
    "DEFAULTS",
    "Grid",
    "GridError",
    "OracleConvergenceError",
    "OracleDefaults",
    "TridiagonalOperator",
    "asymptotic_large_s",
    "asymptotic_small_s",
    "eigenvalue_count_below",
    "eigenvector",
    "fd_hamiltonian",
    "inner_product",
    "lowest_eigenvalues",
    "make_grid",
    "numeric_laplace",
    "quadrature",
    "DIMENSIONLESS",
    "Units",
]
