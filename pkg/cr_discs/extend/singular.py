"""Oracles for the closed singular set Phi inside M."""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np
from scipy.spatial import cKDTree

from ..manifold import Submanifold


class SingularSet(ABC):
    """Distance and nearest-point queries for a closed subset of M."""

    name = "Phi"

    @abstractmethod
    def distance(self, z: np.ndarray) -> np.ndarray:
        """Distance estimate from points (K, n) of M to the set."""

    @abstractmethod
    def nearest(self, z: np.ndarray) -> np.ndarray:
        """Nearest points of the set, or NaN rows when the set is empty."""

    def crossing(self, before: np.ndarray, after: np.ndarray) -> bool:
        """Whether a path of boundaries passed through the set between two samples."""
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name}


class EmptySet(SingularSet):
    name = "empty"

    def distance(self, z: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(z).shape[0], np.inf)

    def nearest(self, z: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(z).shape, np.nan, dtype=complex)


class SubmanifoldSet(SingularSet):
    """A submanifold of M given by polynomial equations."""

    def __init__(self, submanifold: Submanifold):
        self.submanifold = submanifold
        self.name = submanifold.name

    def distance(self, z: np.ndarray) -> np.ndarray:
        return self.submanifold.distance(z)

    def nearest(self, z: np.ndarray) -> np.ndarray:
        return self.submanifold.nearest(z)

    def crossing(self, before: np.ndarray, after: np.ndarray) -> bool:
        """Sign change of a hypersurface equation at some boundary node."""
        if self.submanifold.codim != 1:
            return False
        g0 = self.submanifold.residual_at(before)[:, 0]
        g1 = self.submanifold.residual_at(after)[:, 0]
        return bool(np.any(g0 * g1 < 0.0))

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "submanifold": self.submanifold.to_dict()}


class TubeOracle:
    """
    Distance to the boundary of a tube {z : |z - P| < radius for some sample P}.

    Used as the domain omega of a continuity-principle run.
    """

    def __init__(self, samples: np.ndarray, radius: float):
        samples = np.atleast_2d(samples)
        self.radius = radius
        self.tree = cKDTree(np.concatenate([samples.real, samples.imag], axis=1))

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.atleast_2d(z)
        d, _ = self.tree.query(np.concatenate([z.real, z.imag], axis=1))
        return self.radius - d


class ComplementOracle:
    """Distance to the boundary of C^n minus the singular set of a scenario function."""

    def __init__(self, function, limit: Optional[float] = None):
        self.function = function
        self.limit = limit

    def __call__(self, z: np.ndarray) -> np.ndarray:
        d = self.function.singular_distance(z)
        if self.limit is not None:
            d = np.minimum(d, self.limit)
        return d
