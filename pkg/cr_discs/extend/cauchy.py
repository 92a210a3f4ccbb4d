"""
Cauchy-integral extension of boundary values over a sampled disc family.

For a disc whose boundary values f o A extend holomorphically to the unit
disc, F(A(zeta)) is the Cauchy integral of f o A, evaluated spectrally from the
nonnegative Fourier modes.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from scipy.spatial import cKDTree

from ..circle_ops import interior_eval_values, negative_mode_content
from ..deform import WedgeSample
from ..errors import NonExtendibleBoundaryError
from ..linalg import realify

logger = logging.getLogger(__name__)

EXTENDIBLE_TOLERANCE = 1e-8


@dataclass
class CauchyExtension:
    """Values of F at the sampled wedge points with per-disc extendibility."""
    values: np.ndarray
    valid: np.ndarray
    contents: np.ndarray
    non_extendible: List[Dict[str, Any]]
    spread: float
    near_pairs: int
    errors: Optional[np.ndarray] = None
    skipped: List[int] = field(default_factory=list)

    @property
    def max_error(self) -> float:
        if self.errors is None or not np.any(self.valid):
            return 0.0
        return float(np.max(self.errors[self.valid]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "points": int(np.sum(self.valid)),
            "non_extendible": self.non_extendible,
            "skipped_discs": self.skipped,
            "max_negative_content": float(np.max(self.contents, initial=0.0)),
            "max_error": self.max_error,
            "spread_quotient": self.spread,
            "near_pairs": self.near_pairs,
        }


def cauchy_extension(
    f: Callable[[np.ndarray], np.ndarray],
    sample: WedgeSample,
    strict: bool = True,
    truth: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    config: Optional[Dict[str, Any]] = None,
) -> CauchyExtension:
    """
    Evaluate F at every sampled wedge point.

    Args:
        f: Boundary function, evaluated on disc boundaries (K, n) -> (K,)
        sample: Wedge sample with its generating discs
        strict: Raise on the first non-extendible disc instead of recording it
        truth: Optional closed-form extension for error reporting
        config: extendible_tol (default 1e-8), spread_radius (default 1e-2)

    Returns:
        CauchyExtension. Discs whose base point lies on N are skipped.

    Raises:
        NonExtendibleBoundaryError: in strict mode, when f o A has negative
            Fourier content above the threshold
    """
    config = config or {}
    threshold = config.get("extendible_tol", EXTENDIBLE_TOLERANCE)
    radius = config.get("spread_radius", 1e-2)
    count = len(sample)
    values = np.full(count, np.nan + 0j)
    valid = np.zeros(count, dtype=bool)
    contents = np.zeros(len(sample.discs))
    non_extendible: List[Dict[str, Any]] = []
    skipped: List[int] = []

    for index, disc in enumerate(sample.discs):
        mask = sample.point_disc == index
        if np.any(sample.unattainable[mask]):
            skipped.append(index)
            continue
        boundary_values = f(disc.boundary)
        content = negative_mode_content(boundary_values)
        contents[index] = content
        if content > threshold:
            record = {"disc": index, "negative_content": content, "params": sample.params[index].to_dict()}
            if strict:
                raise NonExtendibleBoundaryError(
                    f"f o A has negative-mode content {content:.3e} on disc {index}",
                    record,
                )
            non_extendible.append(record)
            continue
        values[mask] = interior_eval_values(boundary_values, sample.zetas[mask], check=False)
        valid[mask] = True

    spread, pairs = 0.0, 0
    if np.sum(valid) > 1:
        points = sample.points[valid]
        tree = cKDTree(realify(points.T).T)
        found = np.array(sorted(tree.query_pairs(radius)), dtype=int).reshape(-1, 2)
        pairs = len(found)
        if pairs:
            local = values[valid]
            distance = np.linalg.norm(points[found[:, 0]] - points[found[:, 1]], axis=1)
            distance[distance == 0.0] = np.finfo(float).tiny
            spread = float(np.max(np.abs(local[found[:, 0]] - local[found[:, 1]]) / distance))

    errors = None
    if truth is not None:
        errors = np.zeros(count)
        errors[valid] = np.abs(values[valid] - truth(sample.points[valid]))
    logger.info(
        "Cauchy extension: %d points, %d non-extendible discs, %d skipped",
        int(np.sum(valid)),
        len(non_extendible),
        len(skipped),
    )
    return CauchyExtension(values, valid, contents, non_extendible, spread, pairs, errors, skipped)
