"""
Defect of an attached disc.

The defect counts the covectors b in R^q for which b nu(zeta) r_z(A(zeta))
extends holomorphically to the disc, where nu is the real matrix function with
nu(1) = I making nu(zeta) r_z(A(zeta)) D holomorphic.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .bishop import AnalyticDisc, DiscJacobian
from .circle_ops import CircleGrid, fourier, interpolate
from .errors import (
    FactorizationError,
    IndeterminateRankWarning,
    InsufficientSliceError,
    OutOfContractionError,
)
from .fixed_point import damped_picard, sup_norm
from .linalg import (
    complexify,
    null_space,
    numerical_rank,
    orthonormal_basis,
    projection_residual,
    realify,
)
from .manifold import DefiningData, GenericManifold

logger = logging.getLogger(__name__)

CONTRACTION_BOUND = 0.5
RANK_RTOL = 1e-6
RANK_ATOL = 1e-10


def _negative_coefficient_norm(values: np.ndarray) -> float:
    n = values.shape[0]
    modes = np.fft.fftfreq(n, d=1.0 / n)
    c = fourier(values)
    return float(np.linalg.norm(c[(modes < 0) & (modes != -(n // 2))]))


@dataclass(frozen=True)
class NuFactorization:
    """nu with nu(1) = I such that nu m extends holomorphically, m = r_z(A) D."""
    grid: CircleGrid
    nu: np.ndarray
    m: np.ndarray
    residual: float
    iterations: int
    trace: List[float] = field(default_factory=list)

    @property
    def product(self) -> np.ndarray:
        return self.nu @ self.m

    def nu_at(self, theta: float) -> np.ndarray:
        return interpolate(self.nu, theta)

    def min_singular_value(self) -> float:
        return float(np.min(np.linalg.svd(self.nu, compute_uv=False)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "grid": self.grid.size,
            "residual": self.residual,
            "iterations": self.iterations,
            "nu_at_one": self.nu[0].tolist(),
            "nu_sup_deviation": sup_norm(self.nu - np.eye(self.nu.shape[1])),
            "min_singular_value": self.min_singular_value(),
        }


class NuFactorizer:
    """Fixed-point solver for the real factor nu."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize factorizer.

        Args:
            config: Optional settings (tol, max_iter, damping, contraction_bound)
        """
        self.config = config or {}
        self.logger = logging.getLogger(self.__class__.__name__)
        self._load_config()

    def _load_config(self) -> None:
        self.tol = self.config.get("factor_tol", 1e-10)
        self.max_iter = self.config.get("factor_max_iter", 200)
        self.damping = self.config.get("factor_damping", 1.0)
        self.contraction_bound = self.config.get("contraction_bound", CONTRACTION_BOUND)

    def factor(self, m: np.ndarray) -> NuFactorization:
        """
        Factor the (N, q, q) matrix function m.

        Each step sets the strictly negative modes of mu = nu - I to those of
        -(e + mu e) with e = m - I, mirrors them to the positive modes and picks
        the constant term so that mu(1) = 0.
        """
        n, q = m.shape[0], m.shape[1]
        grid = CircleGrid(n)
        eye = np.eye(q)
        e = m - eye
        distance = sup_norm(e)
        if distance >= self.contraction_bound:
            raise OutOfContractionError(
                f"|m - I| = {distance:.3e} exceeds the contraction bound {self.contraction_bound}",
                {"distance": distance},
            )
        modes = np.fft.fftfreq(n, d=1.0 / n)
        negative = (modes < 0) & (modes != -(n // 2))
        positive = (modes > 0) & (modes != n // 2)

        def update(mu):
            c = fourier(e + mu @ e)
            new = np.zeros_like(c)
            new[negative] = -c[negative]
            new[positive] = np.conj(new[negative][::-1])
            new[0] = -np.sum(new[1:], axis=0)
            return np.real(np.fft.ifft(new * n, axis=0))

        def residual(mu, _):
            return _negative_coefficient_norm((eye + mu) @ m)

        result = damped_picard(
            update,
            np.zeros((n, q, q)),
            tol=self.tol,
            max_iter=self.max_iter,
            damping=self.damping,
            residual=residual,
            error_cls=FactorizationError,
            label="nu factorization",
        )
        nu = eye + result.x
        nu[0] = eye
        factorization = NuFactorization(grid, nu, m, result.residual, result.iterations, result.trace)
        smin = factorization.min_singular_value()
        if smin <= 1e-6:
            raise FactorizationError(f"nu is singular on the grid (min singular value {smin:.3e})", {"min_singular_value": smin})
        self.logger.debug("nu factorization converged in %d iterations (residual %.3e)", result.iterations, result.residual)
        return factorization


def m_matrix(disc: AnalyticDisc, manifold: GenericManifold, dd: DefiningData) -> np.ndarray:
    """m(zeta) = r_z(A(zeta)) D on the grid."""
    return manifold.r_z(disc.boundary) @ dd.d_matrix


def factor_nu(
    disc: AnalyticDisc,
    dd: DefiningData,
    manifold: GenericManifold,
    config: Optional[Dict[str, Any]] = None,
) -> NuFactorization:
    """
    Compute the nu-factorization of a disc.

    Args:
        disc: Disc attached to ``manifold``
        dd: Defining data at the base point
        manifold: The manifold the disc is attached to
        config: Optional factorizer settings

    Returns:
        NuFactorization with nu(1) = I

    Raises:
        OutOfContractionError: if |m - I| >= 0.5
        FactorizationError: on non-convergence or a singular factor
    """
    return NuFactorizer(config).factor(m_matrix(disc, manifold, dd))


@dataclass
class DefectReport:
    """Defect with the admissible covectors and the rank diagnostics behind it."""
    defect: int
    basis_b: np.ndarray
    singular_values: np.ndarray
    threshold: float
    ambiguous: bool
    per_zeta: Dict[float, int]
    truncation: int
    truncation_stable: bool
    warnings: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(value == self.defect for value in self.per_zeta.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "defect": self.defect,
            "basis_b": self.basis_b.tolist(),
            "singular_values": self.singular_values.tolist(),
            "threshold": self.threshold,
            "ambiguous": self.ambiguous,
            "per_zeta": [{"theta": theta, "defect": value} for theta, value in sorted(self.per_zeta.items())],
            "consistent": self.consistent,
            "truncation": self.truncation,
            "truncation_stable": self.truncation_stable,
            "warnings": self.warnings,
        }


def _constraint_matrix(product: np.ndarray, truncation: int) -> np.ndarray:
    """Realified map b -> modes -1..-K of b P(zeta) for P of shape (N, q, n)."""
    n = product.shape[0]
    c = fourier(product)
    rows = [c[n - k] for k in range(1, truncation + 1)]
    block = np.concatenate(rows, axis=1) if rows else np.zeros((product.shape[1], 0), dtype=complex)
    return np.concatenate([block.real, block.imag], axis=1).T


def _rank_of_constraints(matrix: np.ndarray, scale: float):
    return numerical_rank(matrix, rtol=RANK_RTOL, atol=RANK_ATOL * scale)


def compute_defect(
    disc: AnalyticDisc,
    dd: DefiningData,
    fac: NuFactorization,
    manifold: GenericManifold,
    sample_thetas: Optional[Sequence[float]] = None,
    config: Optional[Dict[str, Any]] = None,
) -> DefectReport:
    """
    Compute the defect of a disc from its nu-factorization.

    The admissible covectors are the null space of the realified map sending b
    to the first K strictly negative Fourier coefficients of b nu r_z(A). The
    defect is recomputed at sample points zeta0 as the dimension of
    {b nu(zeta0) r_z(A(zeta0))} and the decision is repeated with 2K modes.

    Args:
        disc: The disc
        dd: Defining data at the base point
        fac: Its nu-factorization
        manifold: The manifold the disc is attached to
        sample_thetas: Angles of zeta0 (default 8 equispaced grid nodes)
        config: Optional settings (truncation)

    Returns:
        DefectReport
    """
    config = config or {}
    grid = disc.grid
    truncation = min(int(config.get("truncation", grid.size // 4)), grid.size // 2 - 1)
    rz = manifold.r_z(disc.boundary)
    product = fac.nu.astype(complex) @ rz
    scale = max(1.0, sup_norm(product))

    matrix = _constraint_matrix(product, truncation)
    decision = _rank_of_constraints(matrix, scale)
    defect = manifold.q - decision.rank
    basis_b = null_space(matrix, rtol=RANK_RTOL, atol=RANK_ATOL * scale).T

    notes: List[str] = []
    if basis_b.shape[0] != defect:
        message = (
            f"null space has dimension {basis_b.shape[0]} but the rank decision gives defect {defect}; "
            "using the trailing singular vectors"
        )
        warnings.warn(message, IndeterminateRankWarning)
        logger.warning(message)
        notes.append(message)
        basis_b = null_space(matrix, dim=defect).T
    if decision.ambiguous:
        message = f"defect rank decision is within 10x of the threshold {decision.threshold:.2e}"
        warnings.warn(message, IndeterminateRankWarning)
        logger.warning(message)
        notes.append(message)

    doubled = min(2 * truncation, grid.size // 2 - 1)
    stable = manifold.q - _rank_of_constraints(_constraint_matrix(product, doubled), scale).rank == defect
    if not stable:
        notes.append(f"defect changes when the truncation grows from {truncation} to {doubled}")

    if sample_thetas is None:
        sample_thetas = [float(grid.theta[s * grid.size // 8]) for s in range(8)]
    per_zeta: Dict[float, int] = {}
    for theta in sample_thetas:
        if defect == 0:
            per_zeta[float(theta)] = 0
            continue
        point = disc.at_angle(theta)
        covectors = basis_b @ fac.nu_at(theta) @ manifold.r_z(point)[0]
        per_zeta[float(theta)] = numerical_rank(realify(covectors.T), rtol=RANK_RTOL).rank

    logger.info("Disc defect %d (truncation %d, stable %s)", defect, truncation, stable)
    return DefectReport(defect, basis_b, decision.singular_values, decision.threshold, decision.ambiguous, per_zeta, truncation, stable, notes)


@dataclass
class RankVerdict:
    """Codimensions of the evaluation-map images compared with the defect."""
    codim_f: int
    codim_g: int
    defect: int
    tc_inclusion: bool
    tc_residual: float
    orthogonality: float
    singular_values_f: np.ndarray
    singular_values_g: np.ndarray

    @property
    def equal(self) -> bool:
        return self.codim_f == self.defect and self.codim_g == self.defect

    def to_dict(self) -> Dict[str, Any]:
        return {
            "codim_F": self.codim_f,
            "codim_G": self.codim_g,
            "defect": self.defect,
            "equal": self.equal,
            "Tc_inclusion": self.tc_inclusion,
            "Tc_residual": self.tc_residual,
            "orthogonality": self.orthogonality,
            "singular_values_F": self.singular_values_f.tolist(),
            "singular_values_G": self.singular_values_g.tolist(),
        }


def verify_rank_theorem(
    jacobian: DiscJacobian,
    report: DefectReport,
    manifold: GenericManifold,
    fac: Optional[NuFactorization] = None,
    tol: float = 1e-6,
) -> RankVerdict:
    """
    Compare the images of the evaluation maps with the defect.

    Args:
        jacobian: Jacobians of A -> A(zeta0) and A -> dA/dtheta(1) over a slice
        report: DefectReport of the base disc
        manifold: The manifold
        fac: nu-factorization of the base disc, for the orthogonality check
        tol: Rank and inclusion threshold

    Returns:
        RankVerdict

    Raises:
        InsufficientSliceError: if the slice has fewer than 2p+q parameters
    """
    dim = manifold.real_dim
    if jacobian.nparams < dim:
        raise InsufficientSliceError(
            f"slice has {jacobian.nparams} parameters, at least {dim} are needed",
            {"parameters": jacobian.nparams, "required": dim},
        )
    disc = jacobian.disc
    point = disc.at_angle(jacobian.theta0)
    rank_f = numerical_rank(jacobian.evaluation, rtol=tol)
    rank_g = numerical_rank(jacobian.tangent, rtol=tol)

    image = orthonormal_basis(jacobian.evaluation, rtol=tol)
    tc = manifold.complex_tangent_basis(point)
    tc_residual = float(np.max(np.linalg.norm(projection_residual(tc, image), axis=0), initial=0.0))

    orthogonality = 0.0
    if fac is not None and report.basis_b.shape[0] and jacobian.nparams:
        covectors = 1j * report.basis_b @ fac.nu_at(jacobian.theta0) @ manifold.r_z(point)[0]
        vectors = complexify(jacobian.evaluation)
        pairing = np.real(covectors @ vectors)
        norms = np.outer(np.linalg.norm(covectors, axis=1), np.linalg.norm(vectors, axis=0))
        norms[norms == 0.0] = 1.0
        orthogonality = float(np.max(np.abs(pairing) / norms))

    return RankVerdict(
        codim_f=dim - rank_f.rank,
        codim_g=dim - rank_g.rank,
        defect=report.defect,
        tc_inclusion=tc_residual < tol,
        tc_residual=tc_residual,
        orthogonality=orthogonality,
        singular_values_f=rank_f.singular_values,
        singular_values_g=rank_g.singular_values,
    )
