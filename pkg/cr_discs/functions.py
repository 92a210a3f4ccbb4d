"""Closed-form holomorphic functions used as scenario truths."""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError


class ScenarioFunction(ABC):
    """A holomorphic function on an open subset of C^n with a known singular set."""

    kind = ""

    @abstractmethod
    def __call__(self, z: np.ndarray) -> np.ndarray:
        """Values at points of shape (K, n) or (n,)."""

    @property
    def entire(self) -> bool:
        return True

    def singular_distance(self, z: np.ndarray) -> np.ndarray:
        """Distance from points to the singular set (inf for entire functions)."""
        z = np.atleast_2d(z)
        return np.full(z.shape[0], np.inf)

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        pass


def _complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigurationError(f"complex numbers are written [re, im], got {value}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


class PolynomialFunction(ScenarioFunction):
    """sum c_a z^a with complex coefficients."""

    kind = "polynomial"

    def __init__(self, terms: Sequence[Tuple[Sequence[int], complex]]):
        self.exponents = np.array([list(e) for e, _ in terms], dtype=int)
        self.coefficients = np.array([c for _, c in terms], dtype=complex)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_2d(z)
        if len(self.coefficients) == 0:
            values = np.zeros(flat.shape[0], dtype=complex)
        else:
            values = np.prod(flat[:, None, :] ** self.exponents[None, :, :], axis=2) @ self.coefficients
        return values if z.ndim > 1 else values[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "terms": [[e.tolist(), [c.real, c.imag]] for e, c in zip(self.exponents, self.coefficients)],
        }


class PoleFunction(ScenarioFunction):
    """1 / (z_k - a), singular on the complex hyperplane {z_k = a}."""

    kind = "pole"

    def __init__(self, index: int, at: complex = 0.0):
        self.index = index
        self.at = complex(at)

    @property
    def entire(self) -> bool:
        return False

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return 1.0 / (z[..., self.index] - self.at)

    def singular_distance(self, z: np.ndarray) -> np.ndarray:
        return np.abs(np.atleast_2d(z)[:, self.index] - self.at)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "index": self.index, "at": [self.at.real, self.at.imag]}


class ExponentialFunction(ScenarioFunction):
    """exp(sum a_k z_k)."""

    kind = "exponential"

    def __init__(self, coefficients: Sequence[complex]):
        self.coefficients = np.array(coefficients, dtype=complex)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return np.exp(np.asarray(z, dtype=complex) @ self.coefficients)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "coefficients": [[c.real, c.imag] for c in self.coefficients]}


def function_from_dict(data: Dict[str, Any], n: int) -> ScenarioFunction:
    """Build a scenario function from its description in an n-dimensional scenario."""
    kind = data.get("kind")
    try:
        if kind == "polynomial":
            terms: List[Tuple[Sequence[int], complex]] = []
            for exponents, coefficient in data["terms"]:
                if len(exponents) != n:
                    raise ConfigurationError(f"polynomial exponents {exponents} must have {n} entries")
                terms.append((exponents, _complex(coefficient)))
            return PolynomialFunction(terms)
        if kind == "pole":
            index = int(data["index"])
            if not 0 <= index < n:
                raise ConfigurationError(f"pole index {index} is out of range for n = {n}")
            return PoleFunction(index, _complex(data.get("at", 0.0)))
        if kind == "exponential":
            coefficients = [_complex(c) for c in data["coefficients"]]
            if len(coefficients) != n:
                raise ConfigurationError(f"exponential needs {n} coefficients")
            return ExponentialFunction(coefficients)
    except KeyError as e:
        raise ConfigurationError(f"function of kind {kind!r} is missing {e}")
    raise ConfigurationError(f"unknown function kind {kind!r}")
