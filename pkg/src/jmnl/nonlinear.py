"""Nonlinear interaction block: weight, ansatz, coupling matrix, normalizer.

The short-range nonlinear potential acts on the expansion coefficients as a
rank-dense N x N block  W(E) = g * omega(E)^2 * Lambda, where Lambda sums the
product-linearization tables of the ansatz polynomials:

    Lambda = sum_{i<K} Lt_i(J)^2  restricted to the leading N x N block.

Lambda is a sum of squares of symmetric matrices, hence positive definite for
any nu > -1.  Its entries are extremely graded (the high-index corner grows
factorially, reaching ~1e17 at nu = 1, K = 8, N = 20), so the positivity
certificate and the whitening transform are computed from the stacked factor
rather than from an eigendecomposition of the assembled entries, which is the
only way to resolve the small end of the spectrum in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .orthopoly import laguerre_orthonormal_sequence, linearization_table
from .reference import BasisParams, CoefficientVector, Kinematics, h0_matrix

__all__ = [
    "WEIGHT_CHOICES",
    "ModelConfig",
    "LambdaMatrix",
    "OmegaTransform",
    "PositivityCertificateError",
    "weight",
    "ansatz_coefficients",
    "lambda_matrix",
    "omega_transform",
    "wave_operator",
]

WEIGHT_CHOICES = ("resonance", "sine")
_WEIGHT_ALIASES = {"fig1": "resonance"}

_EPS = float(np.finfo(float).eps)


class PositivityCertificateError(RuntimeError):
    """The coupling matrix failed its positive-definiteness certificate.

    For nu > -1 this cannot happen mathematically; seeing it signals an
    implementation bug, not a legitimate parameter regime.
    """


@dataclass(frozen=True)
class ModelConfig:
    """All physical and computational parameters of the scattering model."""

    basis: BasisParams
    g: float
    nu: float
    size: int
    terms: int
    weight_choice: str = "resonance"

    def __post_init__(self):
        object.__setattr__(
            self, "weight_choice", _WEIGHT_ALIASES.get(self.weight_choice, self.weight_choice)
        )
        if not self.nu > -1:
            raise ValueError("ansatz parameter must satisfy nu > -1")
        if self.size < 2:
            raise ValueError("matrix size must be at least 2")
        if not 1 <= self.terms <= self.size:
            raise ValueError("need 1 <= terms <= size")
        if self.weight_choice not in WEIGHT_CHOICES:
            raise ValueError(
                f"weight_choice must be one of {WEIGHT_CHOICES} (got {self.weight_choice!r})"
            )
        if not math.isfinite(self.g):
            raise ValueError("coupling g must be finite")


def weight(energy: float, config: ModelConfig) -> float:
    """Energy-dependent weight of the ansatz coefficients."""
    kin = Kinematics.from_energy(energy, config.basis)
    if config.weight_choice == "resonance":
        return kin.mu ** (2.0 * config.nu) * math.exp(-kin.mu**2)
    return 2.0 * kin.mu ** (config.basis.ell + 1) * math.exp(-kin.mu**2 / 2.0)


def ansatz_coefficients(energy: float, config: ModelConfig, count: int) -> CoefficientVector:
    """Weighted orthonormal-Laguerre ansatz f_n(E) = omega(E) Lt_n(mu^2)."""
    kin = Kinematics.from_energy(energy, config.basis)
    lt = laguerre_orthonormal_sequence(count - 1, config.nu, kin.mu**2)
    return CoefficientVector(
        kind="ansatz", energy=energy, values=weight(energy, config) * lt
    )


@dataclass(frozen=True)
class LambdaMatrix:
    """Coupling matrix with its positivity certificate and stacked factor."""

    entries: np.ndarray
    nu: float
    terms: int
    min_eigenvalue: float
    factor: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)
        self.factor.setflags(write=False)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@lru_cache(maxsize=64)
def _lambda_core(nu: float, terms: int, size: int) -> LambdaMatrix:
    table = linearization_table(terms, size, nu)
    entries = table.entries.sum(axis=0)
    entries = 0.5 * (entries + entries.T)
    singular = np.linalg.svd(table.factor, compute_uv=False)
    min_eig = float(singular[-1] ** 2)
    # noise floor of the factored certificate; the analytic lower bound
    # 1/Gamma(nu+1) sits far above it for every admissible nu
    floor = 16.0 * _EPS * float(singular[0])
    if not singular[-1] > floor:
        raise PositivityCertificateError(
            f"min eigenvalue {min_eig:.3e} indistinguishable from zero "
            f"(floor {float(floor**2):.3e}) for nu={nu}, terms={terms}, size={size}"
        )
    return LambdaMatrix(
        entries=entries, nu=nu, terms=terms, min_eigenvalue=min_eig, factor=table.factor
    )


def lambda_matrix(config: ModelConfig) -> LambdaMatrix:
    """Assemble the coupling matrix for a model configuration.

    Results are cached per (nu, terms, size); the returned object is
    immutable and safe to share across scan workers.
    """
    return _lambda_core(config.nu, config.terms, config.size)


@dataclass(frozen=True)
class OmegaTransform:
    """Whitening transform with Omega @ Lambda @ Omega.T = identity.

    `u` holds orthonormal eigenvectors of the coupling matrix, `q` the
    inverse square roots of its eigenvalues (the diagonal of Q), and
    omega = Q @ u.T.  `residual` is the measured max-norm defect of the
    identity and `floor` the double-precision evaluation limit of that
    product; for well-conditioned matrices the residual is below 1e-10,
    for strongly graded ones it can only be certified down to the floor.
    """

    omega: np.ndarray
    u: np.ndarray
    q: np.ndarray
    residual: float
    floor: float

    def __post_init__(self):
        self.omega.setflags(write=False)
        self.u.setflags(write=False)
        self.q.setflags(write=False)


def omega_transform(lam: LambdaMatrix | np.ndarray) -> OmegaTransform:
    """Build the transform that maps the coupling matrix to the identity."""
    if isinstance(lam, LambdaMatrix):
        entries = lam.entries
        _, singular, v_t = np.linalg.svd(lam.factor, full_matrices=False)
        u = v_t.T
        sigma = singular**2
    else:
        entries = np.asarray(lam, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("expected a square matrix")
        sigma, u = np.linalg.eigh(entries)
        if sigma[0] <= 0:
            raise PositivityCertificateError(
                f"matrix is not positive definite (min eigenvalue {sigma[0]:.3e})"
            )
    q = 1.0 / np.sqrt(sigma)
    omega = q[:, None] * u.T
    defect = omega @ entries @ omega.T - np.eye(entries.shape[0])
    residual = float(np.abs(defect).max())
    abs_product = np.abs(omega) @ np.abs(entries) @ np.abs(omega.T)
    floor = 16.0 * _EPS * float(abs_product.max())
    if residual > max(1e-10, floor):
        raise np.linalg.LinAlgError(
            f"whitening failed: residual {residual:.3e} above tolerance "
            f"max(1e-10, {floor:.3e})"
        )
    return OmegaTransform(omega=omega, u=u, q=q, residual=residual, floor=floor)


def wave_operator(energy: float, config: ModelConfig) -> np.ndarray:
    """N x N wave-operator matrix H0 + g omega^2 Lambda - E."""
    h0 = h0_matrix(config.basis, config.size)
    w = weight(energy, config)
    lam = lambda_matrix(config)
    return h0 + (config.g * w * w) * lam.entries - energy * np.eye(config.size)
