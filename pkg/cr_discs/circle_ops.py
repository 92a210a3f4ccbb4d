"""
Spectral primitives on the unit circle.

Functions are sampled on the equispaced grid theta_j = 2*pi*j/N with node 0 at
zeta = 1. Fourier coefficients follow numpy's FFT ordering scaled by 1/N, so
f(theta) = sum_k c_k exp(i k theta) with k taken from ``np.fft.fftfreq``.
The Nyquist mode is treated as a cosine and dropped by the conjugation
operator.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    ConfigurationError,
    NotHolomorphicError,
    OutsideDiscError,
    PreconditionError,
    RealValueError,
)

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 512
REAL_TOLERANCE = 1e-12
HOLOMORPHIC_TOLERANCE = 1e-8
ALIASING_TOLERANCE = 1e-8
VANISHING_TOLERANCE = 1e-10


class ValueKind(str, Enum):
    """Shape and field of the sampled values."""
    REAL_SCALAR = "real-scalar"
    COMPLEX_SCALAR = "complex-scalar"
    REAL_VECTOR = "real-vector"
    COMPLEX_VECTOR = "complex-vector"
    REAL_MATRIX = "real-matrix"
    COMPLEX_MATRIX = "complex-matrix"

    @property
    def is_real(self) -> bool:
        return self.value.startswith("real")


@dataclass(frozen=True)
class CircleGrid:
    """Equispaced grid on the unit circle."""
    size: int = DEFAULT_GRID_SIZE

    def __post_init__(self):
        size = self.size
        if not isinstance(size, (int, np.integer)) or size < 16 or size & (size - 1):
            raise ConfigurationError(
                f"grid size must be a power of two >= 16, got {size!r} (size must be a power of two)"
            )

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @property
    def zeta(self) -> np.ndarray:
        z = np.exp(1j * self.theta)
        z[0] = 1.0
        return z

    @property
    def modes(self) -> np.ndarray:
        """Integer Fourier modes in FFT order; the Nyquist mode appears as -N/2."""
        return np.fft.fftfreq(self.size, d=1.0 / self.size).astype(int)

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.size


def _kind_for(values: np.ndarray, real: bool) -> ValueKind:
    ndim = values.ndim
    if ndim == 1:
        return ValueKind.REAL_SCALAR if real else ValueKind.COMPLEX_SCALAR
    if ndim == 2:
        return ValueKind.REAL_VECTOR if real else ValueKind.COMPLEX_VECTOR
    if ndim == 3:
        return ValueKind.REAL_MATRIX if real else ValueKind.COMPLEX_MATRIX
    raise ValueError(f"unsupported value shape {values.shape}")


def is_real_valued(values: np.ndarray, tol: float = REAL_TOLERANCE) -> bool:
    """Whether the imaginary part is negligible relative to the data scale."""
    values = np.asarray(values)
    if not np.iscomplexobj(values):
        return True
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    return float(np.max(np.abs(values.imag), initial=0.0)) <= tol * scale


@dataclass(frozen=True)
class CircleFunction:
    """A sampled function on the unit circle."""
    grid: CircleGrid
    values: np.ndarray
    kind: ValueKind

    def __post_init__(self):
        if self.values.shape[0] != self.grid.size:
            raise ValueError(
                f"values length {self.values.shape[0]} does not match grid size {self.grid.size}"
            )
        self.values.setflags(write=False)

    @classmethod
    def from_values(
        cls,
        grid: CircleGrid,
        values: Any,
        kind: Optional[ValueKind] = None,
    ) -> "CircleFunction":
        """
        Build a circle function, inferring the value kind when not given.

        Real-tagged data must have imaginary parts below 1e-12 relative to its
        scale; they are stored as float arrays.
        """
        arr = np.array(values)
        if kind is None:
            kind = _kind_for(arr, is_real_valued(arr))
        if kind.is_real:
            if not is_real_valued(arr):
                raise RealValueError(f"values tagged {kind.value} carry an imaginary part")
            arr = np.real(arr).astype(float)
        else:
            arr = arr.astype(complex)
        return cls(grid, arr, kind)

    @classmethod
    def from_callable(cls, grid: CircleGrid, func, kind: Optional[ValueKind] = None) -> "CircleFunction":
        """Sample ``func(theta)`` on the grid."""
        return cls.from_values(grid, func(grid.theta), kind)

    @property
    def at_one(self) -> np.ndarray:
        return self.values[0]

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values), initial=0.0))


@dataclass(frozen=True)
class FourierCoefficients:
    """Fourier coefficients of a circle function in FFT order."""
    grid: CircleGrid
    coeffs: np.ndarray

    @property
    def modes(self) -> np.ndarray:
        return self.grid.modes

    def negative_content(self) -> float:
        """Largest magnitude among strictly negative modes."""
        return float(np.max(np.abs(self.coeffs[self.modes < 0]), initial=0.0))

    def to_dict(self) -> Dict[str, Any]:
        order = np.argsort(self.modes, kind="stable")
        coeffs = self.coeffs[order]
        return {
            "modes": self.modes[order].tolist(),
            "real": np.real(coeffs).tolist(),
            "imag": np.imag(coeffs).tolist(),
        }


def fourier(values: np.ndarray) -> np.ndarray:
    """Fourier coefficients along the grid axis."""
    values = np.asarray(values)
    return np.fft.fft(values, axis=0) / values.shape[0]


def inverse_fourier(coeffs: np.ndarray) -> np.ndarray:
    """Samples from Fourier coefficients along the grid axis."""
    coeffs = np.asarray(coeffs)
    return np.fft.ifft(coeffs * coeffs.shape[0], axis=0)


def fft(f: CircleFunction) -> FourierCoefficients:
    """Fourier transform of a circle function."""
    return FourierCoefficients(f.grid, fourier(f.values))


def ifft(c: FourierCoefficients, kind: Optional[ValueKind] = None) -> CircleFunction:
    """Inverse transform; real kinds drop the round-off imaginary part."""
    return CircleFunction.from_values(c.grid, inverse_fourier(c.coeffs), kind)


def _broadcast_modes(modes: np.ndarray, ndim: int) -> np.ndarray:
    return modes.reshape((-1,) + (1,) * (ndim - 1))


def negative_mode_content(values: np.ndarray) -> float:
    """Largest magnitude among strictly negative Fourier modes of the samples."""
    values = np.asarray(values)
    c = fourier(values)
    modes = np.fft.fftfreq(values.shape[0], d=1.0 / values.shape[0])
    return float(np.max(np.abs(c[modes < 0]), initial=0.0))


def check_holomorphic(values: np.ndarray, tol: float = HOLOMORPHIC_TOLERANCE) -> float:
    """Raise if the samples are not holomorphic boundary values; return the content."""
    content = negative_mode_content(values)
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    if content > tol * scale:
        raise NotHolomorphicError(
            f"negative-mode content {content:.3e} exceeds {tol:.1e}",
            {"negative_mode_content": content},
        )
    return content


def conjugate_values(values: np.ndarray) -> np.ndarray:
    """Harmonic conjugate T u with multiplier -i sgn(k); Nyquist dropped."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    modes = _broadcast_modes(np.fft.fftfreq(n, d=1.0 / n), values.ndim)
    multiplier = -1j * np.sign(modes)
    multiplier = np.where(np.abs(modes) == n // 2, 0.0, multiplier)
    return np.real(np.fft.ifft(np.fft.fft(values, axis=0) * multiplier, axis=0))


def t1_values(values: np.ndarray) -> np.ndarray:
    """Normalized conjugation T1 u = T u - (T u)(1) on raw samples."""
    tu = conjugate_values(values)
    return tu - tu[0]


def hilbert_t1(u: CircleFunction) -> CircleFunction:
    """
    Normalized Hilbert transform of a real circle function.

    Args:
        u: Real scalar, vector or matrix valued function

    Returns:
        T1 u, vanishing exactly at node 0
    """
    if not u.kind.is_real:
        raise RealValueError(f"hilbert_t1 needs real input, got {u.kind.value}")
    return CircleFunction(u.grid, t1_values(u.values), u.kind)


def _aliasing_guard(c: np.ndarray, modes: np.ndarray, tol: float = ALIASING_TOLERANCE) -> None:
    n = c.shape[0]
    energy = np.abs(c) ** 2
    total = float(np.sum(energy))
    if total == 0.0:
        return
    top = np.broadcast_to(np.abs(modes) > (3 * n) // 8, c.shape)
    ratio = float(np.sum(energy[top])) / total
    if ratio > tol:
        raise PreconditionError(
            f"spectrum not resolved on grid {n}: top-quarter energy ratio {ratio:.3e}",
            {"energy_ratio": ratio, "grid": n},
        )


def derivative_values(values: np.ndarray) -> np.ndarray:
    """Spectral theta-derivative of the samples (complex output)."""
    values = np.asarray(values)
    n = values.shape[0]
    modes = _broadcast_modes(np.fft.fftfreq(n, d=1.0 / n), values.ndim)
    multiplier = np.where(np.abs(modes) == n // 2, 0.0, 1j * modes)
    return np.fft.ifft(np.fft.fft(values, axis=0) * multiplier, axis=0)


def derivative_at_one(values: np.ndarray, guard: bool = True) -> np.ndarray:
    """
    Theta-derivative at zeta = 1 by term-by-term differentiation.

    Raises PreconditionError when the top quarter of the spectrum carries more
    than 1e-8 of the energy.
    """
    values = np.asarray(values)
    n = values.shape[0]
    modes = np.fft.fftfreq(n, d=1.0 / n)
    c = fourier(values)
    if guard:
        _aliasing_guard(c, _broadcast_modes(modes, values.ndim))
    weights = _broadcast_modes(np.where(np.abs(modes) == n // 2, 0.0, 1j * modes), values.ndim)
    return np.sum(weights * c, axis=0)


def interior_eval_values(values: np.ndarray, zeta: Any, check: bool = True) -> np.ndarray:
    """
    Evaluate the holomorphic extension of boundary samples inside the disc.

    Args:
        values: Samples of shape (N, ...)
        zeta: Scalar or array of points with |zeta| < 1
        check: Reject data with negative-mode content above 1e-8; when False the
            nonnegative part is used as is (Cauchy projection)

    Returns:
        Array of shape zeta.shape + values.shape[1:]
    """
    zeta_arr = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(zeta_arr) >= 1.0):
        raise OutsideDiscError("interior evaluation requires |zeta| < 1", {"zeta": str(zeta)})
    values = np.asarray(values)
    if check:
        check_holomorphic(values)
    n = values.shape[0]
    c = fourier(values)[: n // 2]
    result = npoly.polyval(zeta_arr, c)
    # polyval puts the polynomial axes first
    tail = c.ndim - 1
    return np.moveaxis(result, list(range(tail)), list(range(result.ndim - tail, result.ndim)))


def interior_eval(f: CircleFunction, zeta: complex) -> Union[complex, np.ndarray]:
    """Interior value of a holomorphic-boundary circle function at |zeta| < 1."""
    result = interior_eval_values(f.values, zeta)
    return result if np.ndim(result) else complex(result)


def interpolate(values: np.ndarray, theta: Any) -> np.ndarray:
    """Trigonometric interpolant of the samples at arbitrary angles."""
    values = np.asarray(values)
    n = values.shape[0]
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    c = fourier(values)
    modes = np.fft.fftfreq(n, d=1.0 / n)
    basis = np.exp(1j * np.outer(theta_arr, modes))
    nyquist = np.abs(modes) == n // 2
    basis[:, nyquist] = np.cos(0.5 * n * theta_arr)[:, None]
    result = np.tensordot(basis, c, axes=(1, 0))
    if not np.iscomplexobj(values):
        result = np.real(result)
    return result if np.ndim(theta) else result[0]


def _check_vanishing_at_one(values: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    if float(np.max(np.abs(values[0]), initial=0.0)) > VANISHING_TOLERANCE * scale:
        raise PreconditionError(
            "functional needs g(1) = 0",
            {"g_at_one": float(np.max(np.abs(values[0])))},
        )


def j_functional_values(values: np.ndarray) -> Union[float, np.ndarray]:
    """J(g) = -(d/dtheta T1 g)(0) for real samples vanishing at 1."""
    values = np.asarray(values)
    if not is_real_valued(values):
        raise RealValueError("j_functional needs real input")
    values = np.real(values)
    _check_vanishing_at_one(values)
    result = -np.real(derivative_at_one(t1_values(values)))
    return float(result) if np.ndim(result) == 0 else result


def j_functional(g: CircleFunction) -> Union[float, np.ndarray]:
    """
    Principal-value functional of a real function vanishing at zeta = 1.

    Computed as -Re[(g + i T1 g)'(1)]; equals the principal value of
    (1/pi) * integral of g / |e^{i theta} - 1|^2.
    """
    if not g.kind.is_real:
        raise RealValueError(f"j_functional needs real input, got {g.kind.value}")
    return j_functional_values(g.values)


def j_functional_holo(g: CircleFunction) -> Union[complex, np.ndarray]:
    """-g'(1) for holomorphic boundary values vanishing at 1."""
    _check_vanishing_at_one(g.values)
    check_holomorphic(g.values)
    result = 1j * derivative_at_one(g.values)
    return complex(result) if np.ndim(result) == 0 else result


def right_inverse_s(f: CircleFunction, d_matrix: np.ndarray) -> CircleFunction:
    """
    Right inverse of the linearized attachment map, S(f) = D (f + i T1 f) / 2.

    For f with values in R^q and D an n x q matrix with r_z(z0) D = I, the
    result is holomorphic-boundary and 2 Re(r_z(z0) S(f)) = f.
    """
    if f.kind is not ValueKind.REAL_VECTOR:
        raise RealValueError("right_inverse_s needs a real vector function")
    holo = f.values + 1j * t1_values(f.values)
    values = 0.5 * holo @ np.asarray(d_matrix).T
    return CircleFunction(f.grid, values, ValueKind.COMPLEX_VECTOR)


def holder_diagnostics(values: np.ndarray, alpha: float = 0.5) -> Dict[str, float]:
    """Discrete C^1 norm and the finest-scale Hoelder quotient of the derivative."""
    values = np.asarray(values)
    n = values.shape[0]
    deriv = derivative_values(values)
    if not np.iscomplexobj(values):
        deriv = np.real(deriv)
    h = 2.0 * np.pi / n
    jumps = np.abs(np.roll(deriv, -1, axis=0) - deriv)
    return {
        "c0": float(np.max(np.abs(values), initial=0.0)),
        "c1": float(np.max(np.abs(values), initial=0.0) + np.max(np.abs(deriv), initial=0.0)),
        "holder_quotient": float(np.max(jumps, initial=0.0) / h ** alpha),
        "alpha": alpha,
    }
