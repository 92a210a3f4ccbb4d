"""
SVD-based rank, null-space and subspace helpers.

Tolerances combine as ``max(atol, rtol * s_max)``; singular values below the
combined tolerance count as zero.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import DegenerateGeometryWarning

logger = logging.getLogger(__name__)


def realify(vectors: np.ndarray) -> np.ndarray:
    """Stack real and imaginary parts: C^n columns become R^{2n} columns."""
    vectors = np.asarray(vectors, dtype=complex)
    return np.concatenate([vectors.real, vectors.imag], axis=0)


def complexify(vectors: np.ndarray) -> np.ndarray:
    """Inverse of :func:`realify`."""
    vectors = np.asarray(vectors, dtype=float)
    n = vectors.shape[0] // 2
    return vectors[:n] + 1j * vectors[n:]


def complex_structure(n: int) -> np.ndarray:
    """Multiplication by i acting on realified C^n."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


@dataclass(frozen=True)
class RankDecision:
    """Outcome of a thresholded rank computation."""
    rank: int
    singular_values: np.ndarray
    threshold: float
    ambiguous: bool

    @property
    def nullity(self) -> int:
        return len(self.singular_values) - self.rank


def numerical_rank(
    matrix: np.ndarray,
    rtol: float = 1e-8,
    atol: float = 0.0,
    band: float = 10.0,
) -> RankDecision:
    """
    Rank of a matrix from its singular values.

    A singular value within a factor ``band`` of the threshold marks the
    decision as ambiguous.
    """
    matrix = np.atleast_2d(np.asarray(matrix))
    if matrix.size == 0:
        return RankDecision(0, np.zeros(0), atol, False)
    s = scipy.linalg.svd(matrix, compute_uv=False)
    smax = float(s[0]) if len(s) else 0.0
    threshold = max(atol, rtol * smax)
    rank = int(np.sum(s > threshold))
    ambiguous = bool(np.any((s > threshold / band) & (s < threshold * band))) and threshold > 0
    return RankDecision(rank, s, threshold, ambiguous)


def null_space(matrix: np.ndarray, rtol: float = 1e-8, atol: float = 0.0, dim: Optional[int] = None) -> np.ndarray:
    """
    Orthonormal basis (columns) of the numerical null space.

    With ``dim`` the trailing ``dim`` right singular vectors are returned
    whatever the threshold says.
    """
    matrix = np.atleast_2d(np.asarray(matrix))
    if matrix.shape[0] == 0:
        basis = np.eye(matrix.shape[1], dtype=matrix.dtype)
        return basis if dim is None else basis[:, matrix.shape[1] - dim:]
    u, s, vh = scipy.linalg.svd(matrix)
    if dim is not None:
        return vh[vh.shape[0] - dim:].conj().T
    smax = float(s[0]) if len(s) else 0.0
    tol = max(atol, rtol * smax)
    nnz = int((s > tol).sum())
    return vh[nnz:].conj().T


def orthonormal_basis(vectors: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (columns) of the column span."""
    vectors = np.atleast_2d(np.asarray(vectors))
    if vectors.shape[1] == 0:
        return np.zeros((vectors.shape[0], 0))
    return scipy.linalg.orth(vectors, rcond=rtol)


def projection_residual(vectors: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Components of ``vectors`` orthogonal to the orthonormal ``basis``."""
    if basis.shape[1] == 0:
        return vectors
    return vectors - basis @ (basis.conj().T @ vectors)


def distance_to_subspace(vector: np.ndarray, basis: np.ndarray) -> float:
    """Relative distance of a vector from span(basis)."""
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(projection_residual(vector[:, None], basis))) / norm


def subspace_containment(
    inner: np.ndarray,
    outer: np.ndarray,
    rtol: float = 1e-8,
) -> Tuple[bool, Optional[np.ndarray], np.ndarray]:
    """
    Decide whether span(inner) lies in span(outer).

    Both arguments are matrices with orthonormal columns. Returns the decision,
    a witness vector of span(inner) farthest from span(outer) when the
    containment fails, and the singular values of the residual.
    """
    if inner.shape[1] == 0:
        return True, None, np.zeros(0)
    residual = projection_residual(inner, outer)
    _, s, vh = scipy.linalg.svd(residual)
    smax = float(s[0]) if len(s) else 0.0
    if rtol / 10.0 < smax < rtol * 10.0:
        warnings.warn(
            f"subspace containment residual {smax:.2e} is at the threshold {rtol:.1e}",
            DegenerateGeometryWarning,
        )
        logger.warning("Degenerate containment decision: residual %.3e", smax)
    if smax <= rtol:
        return True, None, s
    witness = inner @ vh[0].conj()
    return False, witness, s
