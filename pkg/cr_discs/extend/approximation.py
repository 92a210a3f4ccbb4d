"""
Gaussian approximation operator over maximally real patches.

    G_tau f(zhat) = (tau / pi)^(n/2) * integral over L of exp(-tau (z - zhat)^2) f(z) dz

with (z - zhat)^2 the holomorphic square sum and dz = dz_1 ^ ... ^ dz_n pulled
back to the parameter box as det(dz/ds) ds.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import least_squares

from ..errors import PreconditionError, QuadratureError

logger = logging.getLogger(__name__)

C1_BOUND = 0.1
RICHARDSON_TOLERANCE = 1e-6
WINDOW_WIDTH = 8.0
DEFAULT_TAUS = (10.0, 40.0, 160.0, 640.0)


class MaximallyRealPatch:
    """
    A parameterized n-real-dimensional patch s -> z(s) in C^n over a box.

    The map is z(s) = offset + matrix @ s + i * curvature * s**2 (componentwise
    square), so the complex Jacobian is matrix + 2i diag(curvature * s).
    """

    def __init__(
        self,
        matrix: np.ndarray,
        offset: Optional[np.ndarray] = None,
        curvature: Optional[np.ndarray] = None,
        lower: Optional[Sequence[float]] = None,
        upper: Optional[Sequence[float]] = None,
    ):
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n):
            raise PreconditionError(f"patch matrix must be square, got {self.matrix.shape}")
        self.offset = np.zeros(n, dtype=complex) if offset is None else np.asarray(offset, dtype=complex)
        self.curvature = np.zeros(n) if curvature is None else np.asarray(curvature, dtype=float)
        self.lower = np.full(n, -1.0) if lower is None else np.asarray(lower, dtype=float)
        self.upper = np.full(n, 1.0) if upper is None else np.asarray(upper, dtype=float)

    @classmethod
    def affine(cls, matrix: np.ndarray, offset: Optional[np.ndarray] = None, half_width: float = 1.0) -> "MaximallyRealPatch":
        n = np.atleast_2d(matrix).shape[0]
        return cls(matrix, offset, None, np.full(n, -half_width), np.full(n, half_width))

    @classmethod
    def real_box(cls, n: int, half_width: float = 1.0) -> "MaximallyRealPatch":
        return cls.affine(np.eye(n), half_width=half_width)

    @classmethod
    def curved(cls, n: int, curvature: float = 0.2, half_width: float = 1.0) -> "MaximallyRealPatch":
        return cls(np.eye(n), None, np.full(n, curvature), np.full(n, -half_width), np.full(n, half_width))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return self.offset + s @ self.matrix.T + 1j * self.curvature * s ** 2

    def jacobian(self, s: np.ndarray) -> np.ndarray:
        s = np.atleast_2d(np.asarray(s, dtype=float))
        bend = 2j * self.curvature * s
        return self.matrix[None, :, :] + bend[:, :, None] * np.eye(self.n)[None, :, :]

    def jacobian_det(self, s: np.ndarray) -> np.ndarray:
        return np.linalg.det(self.jacobian(s))

    def is_maximally_real(self, samples: int = 5, tol: float = 1e-10) -> bool:
        """True when dz/ds is complex-invertible on a sample grid of the box."""
        axes = [np.linspace(lo, hi, samples) for lo, hi in zip(self.lower, self.upper)]
        nodes = np.array(list(itertools.product(*axes)))
        return bool(np.min(np.abs(self.jacobian_det(nodes))) > tol)

    def shifted(self, h: np.ndarray, bound: float = C1_BOUND) -> "MaximallyRealPatch":
        """
        Translate the patch by h (the L_h family). The derivative is unchanged,
        so the C^1 distance to the original is |h|.

        Raises:
            PreconditionError: if |h| exceeds the C^1 bound
        """
        h = np.asarray(h, dtype=complex)
        size = float(np.linalg.norm(h))
        if size > bound:
            raise PreconditionError(f"shift of size {size:.3e} exceeds the C1 bound {bound}", {"shift": size})
        return MaximallyRealPatch(self.matrix, self.offset + h, self.curvature, self.lower, self.upper)

    def locate(self, zhat: np.ndarray) -> Tuple[np.ndarray, float]:
        """Parameter of the patch point nearest to zhat and the remaining distance."""
        zhat = np.asarray(zhat, dtype=complex)

        def residual(s):
            gap = self(s) - zhat
            return np.concatenate([gap.real, gap.imag])

        start = np.clip(np.real(np.linalg.solve(self.matrix, zhat - self.offset)), self.lower, self.upper)
        result = least_squares(residual, start, bounds=(self.lower, self.upper), xtol=1e-14, ftol=1e-14, gtol=1e-14)
        return result.x, float(np.linalg.norm(residual(result.x)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in self.matrix],
            "offset": [[float(v.real), float(v.imag)] for v in self.offset],
            "curvature": self.curvature.tolist(),
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
        }


def _tensor_rule(lower: np.ndarray, upper: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(order)
    half = 0.5 * (upper - lower)
    mid = 0.5 * (upper + lower)
    axes = [mid[k] + half[k] * x for k in range(len(lower))]
    weights = [half[k] * w for k in range(len(lower))]
    nodes = np.array(list(itertools.product(*axes)))
    product = np.prod(np.array(list(itertools.product(*weights))), axis=1)
    return nodes, product


def _kernel_integral(
    f: Callable[[np.ndarray], np.ndarray],
    patch: MaximallyRealPatch,
    zhat: np.ndarray,
    tau: float,
    lower: np.ndarray,
    upper: np.ndarray,
    order: int,
) -> complex:
    nodes, weights = _tensor_rule(lower, upper, order)
    z = patch(nodes)
    square = np.sum((z - zhat) ** 2, axis=1)
    integrand = np.exp(-tau * square) * f(z) * patch.jacobian_det(nodes)
    return complex((tau / np.pi) ** (patch.n / 2.0) * np.sum(weights * integrand))


def gauss_approx(
    f: Callable[[np.ndarray], np.ndarray],
    patch: MaximallyRealPatch,
    zhat: np.ndarray,
    tau: float,
    order: int = 64,
    window: bool = True,
) -> complex:
    """
    Evaluate G_tau f(zhat) by tensor-product Gauss-Legendre quadrature.

    Args:
        f: Evaluator on points of shape (K, n)
        patch: Maximally real patch L
        zhat: Evaluation point
        tau: Kernel scale, positive
        order: Nodes per axis; the value is checked against twice the order
        window: Restrict the box to 8/sqrt(tau) around the parameter of zhat

    Returns:
        The value at doubled order

    Raises:
        PreconditionError: for tau <= 0 or a patch that is not maximally real
        QuadratureError: if the two orders disagree by more than 1e-6
    """
    if tau <= 0:
        raise PreconditionError(f"tau must be positive, got {tau}")
    if not patch.is_maximally_real():
        raise PreconditionError("patch is not maximally real")
    zhat = np.atleast_1d(np.asarray(zhat, dtype=complex))
    lower, upper = patch.lower, patch.upper
    if window:
        center, _ = patch.locate(zhat)
        width = WINDOW_WIDTH / np.sqrt(tau)
        lower = np.maximum(lower, center - width)
        upper = np.minimum(upper, center + width)

    coarse = _kernel_integral(f, patch, zhat, tau, lower, upper, order)
    fine = _kernel_integral(f, patch, zhat, tau, lower, upper, 2 * order)
    gap = abs(fine - coarse)
    if gap > RICHARDSON_TOLERANCE * max(1.0, abs(fine)):
        raise QuadratureError(
            f"Gauss-Legendre orders {order} and {2 * order} disagree by {gap:.3e}",
            {"tau": tau, "order": order, "coarse": [coarse.real, coarse.imag], "fine": [fine.real, fine.imag]},
        )
    logger.debug("G_tau at tau=%g: %s (order gap %.2e)", tau, fine, gap)
    return fine


def exponential_oracle(coefficients: Sequence[complex], zhat: np.ndarray, tau: float) -> complex:
    """Closed form of G_tau exp(a . z) at zhat: exp(a . zhat + a . a / (4 tau))."""
    a = np.asarray(coefficients, dtype=complex)
    return complex(np.exp(a @ np.asarray(zhat, dtype=complex) + (a @ a) / (4.0 * tau)))


@dataclass
class ApproximationTable:
    """Convergence of G_tau f(zhat) towards f(zhat) over increasing tau."""
    taus: List[float]
    values: List[complex]
    errors: List[float]
    oracle_errors: List[float] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return all(later < earlier for earlier, later in zip(self.errors, self.errors[1:]))

    def rows(self) -> List[List[Any]]:
        rows = []
        for index, tau in enumerate(self.taus):
            value = self.values[index]
            row = [repr(float(tau)), repr(float(value.real)), repr(float(value.imag)), repr(float(self.errors[index]))]
            if self.oracle_errors:
                row.append(repr(float(self.oracle_errors[index])))
            rows.append(row)
        return rows

    def header(self) -> List[str]:
        columns = ["tau", "value_re", "value_im", "error"]
        return columns + (["oracle_error"] if self.oracle_errors else [])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "taus": self.taus,
            "values": [[v.real, v.imag] for v in self.values],
            "errors": self.errors,
            "oracle_errors": self.oracle_errors,
            "monotone": self.monotone,
        }


def approximation_table(
    f: Callable[[np.ndarray], np.ndarray],
    patch: MaximallyRealPatch,
    zhat: np.ndarray,
    taus: Sequence[float] = DEFAULT_TAUS,
    order: int = 64,
    oracle: Optional[Callable[[float], complex]] = None,
) -> ApproximationTable:
    """Tabulate |G_tau f(zhat) - f(zhat)| and, given a closed form, the quadrature error."""
    zhat = np.atleast_1d(np.asarray(zhat, dtype=complex))
    target = complex(np.asarray(f(zhat[None, :])).reshape(-1)[0])
    values, errors, oracle_errors = [], [], []
    for tau in taus:
        value = gauss_approx(f, patch, zhat, tau, order)
        values.append(value)
        errors.append(abs(value - target))
        if oracle is not None:
            oracle_errors.append(abs(value - oracle(tau)))
    table = ApproximationTable(list(map(float, taus)), values, errors, oracle_errors)
    if not table.monotone:
        logger.warning("G_tau error is not decreasing over tau = %s", list(taus))
    return table
