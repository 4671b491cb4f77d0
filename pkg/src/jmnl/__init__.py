"""Nonlinear short-range scattering in a tridiagonal (J-matrix) basis.

The package builds, for a quartic self-interaction projected on a Gaussian
radial basis, the product-linearization coupling matrix, the finite Green's
function of the truncated wave operator, and the unitary scattering matrix
S(E) = e^{2 i delta(E)}, together with a CSV scan front end.
"""

__version__ = "0.1.0"

from .nonlinear import (
    LambdaMatrix,
    ModelConfig,
    OmegaTransform,
    PositivityCertificateError,
    ansatz_coefficients,
    lambda_matrix,
    omega_transform,
    wave_operator,
    weight,
)
from .orthopoly import (
    JacobiMatrix,
    LinearizationTable,
    OrthonormalLaguerre,
    gauss_laguerre_rule,
    jacobi_matrix,
    laguerre,
    laguerre_orthonormal,
    linearization_identity_residual,
    linearization_table,
    ln_gamma,
    matrix_polynomial,
)
from .reference import (
    BasisParams,
    CoefficientVector,
    Kinematics,
    RecurrenceOverflowError,
    basis_function,
    cosine_coefficients,
    cosine_seed,
    h0_element,
    h0_matrix,
    regular_solution_residual,
    regular_wave,
    sine_coefficients,
)
from .scattering import (
    DegenerateEnergyError,
    Pencil,
    PoleError,
    ScatterPoint,
    generalized_eigen,
    green_corner_determinant,
    green_corner_spectral,
    green_direct,
    s_matrix,
    s_matrix_tr_form,
)

__all__ = [
    "__version__",
    "BasisParams",
    "CoefficientVector",
    "DegenerateEnergyError",
    "JacobiMatrix",
    "Kinematics",
    "LambdaMatrix",
    "LinearizationTable",
    "ModelConfig",
    "OmegaTransform",
    "OrthonormalLaguerre",
    "Pencil",
    "PoleError",
    "PositivityCertificateError",
    "RecurrenceOverflowError",
    "ScatterPoint",
    "ansatz_coefficients",
    "basis_function",
    "cosine_coefficients",
    "cosine_seed",
    "gauss_laguerre_rule",
    "generalized_eigen",
    "green_corner_determinant",
    "green_corner_spectral",
    "green_direct",
    "h0_element",
    "h0_matrix",
    "jacobi_matrix",
    "laguerre",
    "laguerre_orthonormal",
    "lambda_matrix",
    "linearization_identity_residual",
    "linearization_table",
    "ln_gamma",
    "matrix_polynomial",
    "omega_transform",
    "regular_solution_residual",
    "regular_wave",
    "s_matrix",
    "s_matrix_tr_form",
    "sine_coefficients",
    "wave_operator",
    "weight",
]
