"""
Exception and warning types raised by cr-discs.

Errors fall in three families that map onto CLI exit codes: configuration
problems (1), domain errors where the input geometry violates a hypothesis (2),
and convergence errors where a numerical procedure failed (3).
"""

from typing import Any, Dict, Optional


class CRDiscsError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert the error to a JSON-friendly dictionary."""
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "details": self.details,
        }


class ConfigurationError(CRDiscsError):
    """Malformed configuration, scenario, or grid."""

    exit_code = 1

    def __init__(self, message: str, line: Optional[int] = None, details: Optional[Dict[str, Any]] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, details)
        self.line = line


class DomainError(CRDiscsError):
    """The input violates a geometric or analytic hypothesis."""

    exit_code = 2


class ConvergenceError(CRDiscsError):
    """A numerical procedure did not converge."""

    exit_code = 3


class RealValueError(CRDiscsError, TypeError):
    """A real-only operator received complex data."""

    exit_code = 2


class OutsideDiscError(DomainError, ValueError):
    """Interior evaluation requested at |zeta| >= 1."""


class NotHolomorphicError(DomainError):
    """Boundary data carries negative Fourier modes above tolerance."""


class PreconditionError(DomainError):
    """A documented precondition of an operation does not hold."""


class NotGenericError(DomainError):
    """r_z(z0) is rank deficient."""


class OffManifoldError(DomainError):
    """A point is not on the manifold or submanifold it should lie on."""


class GeometryError(DomainError):
    """Boundary crossing structure differs from the expected one."""


class NoGoodDiscError(DomainError):
    """The good-disc search exhausted its budget."""


class InsufficientSliceError(DomainError):
    """A parameter slice is too small to reach maximal rank."""


class ERankError(DomainError):
    """The tangent direction cloud does not span T_0 M."""


class NonEmbeddedError(DomainError):
    """A disc is not injective on the grid."""


class MonodromyError(DomainError):
    """Germ values disagree on overlapping polydiscs."""


class PropagationGapError(DomainError):
    """Consecutive discs of a family are too far apart to propagate an extension."""


class IsotopyBlockedError(DomainError):
    """A disc boundary reaches the singular set along an isotopy."""


class NonExtendibleBoundaryError(DomainError):
    """f restricted to a disc boundary has no holomorphic extension."""


class StageError(CRDiscsError):
    """Failure of a pipeline stage, wrapping the original error."""

    def __init__(self, stage: str, cause: CRDiscsError):
        super().__init__(f"stage '{stage}' failed: {cause.message}", dict(cause.details, stage=stage))
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code


class ContractionError(ConvergenceError):
    """Fixed-point iteration did not reach tolerance."""


class TrustRegionError(ConvergenceError):
    """Iterates left the trust region of the polynomial model."""


class OutOfContractionError(ConvergenceError):
    """The input is too far from the identity for the factorization iteration."""


class FactorizationError(ConvergenceError):
    """The nu-factorization did not converge."""


class QuadratureError(ConvergenceError):
    """Quadrature refinement disagrees beyond tolerance."""


class DegenerateGeometryWarning(UserWarning):
    """A subspace decision sits at the SVD threshold."""


class IndeterminateRankWarning(UserWarning):
    """A rank decision sits near the threshold."""
