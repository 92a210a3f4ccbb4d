"""
Continuity principle along attached discs.

A function holomorphic on a neighborhood omega of A(bDelta) extends to the
sigma-neighborhood of A(closed disc), sigma = r c / (2C), where r is the
distance from A(bDelta) to the boundary of omega and c, C are bi-Lipschitz
constants of A on the circle. The extension is represented by germ values at
the centers of a chain of overlapping polydiscs.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from ..bishop import AnalyticDisc
from ..circle_ops import derivative_values, interior_eval_values
from ..errors import MonodromyError, NonEmbeddedError, PreconditionError, PropagationGapError
from ..linalg import realify

logger = logging.getLogger(__name__)

AGREEMENT_TOLERANCE = 1e-9
MONODROMY_TOLERANCE = 1e-6
MAX_LIPSCHITZ_NODES = 512

Evaluator = Callable[[np.ndarray], np.ndarray]


def bilipschitz_constants(disc: AnalyticDisc) -> Tuple[float, float]:
    """
    Bi-Lipschitz constants of zeta -> A(zeta) on the circle.

    c and C are the extreme difference quotients over pairs of grid nodes,
    widened by the extreme derivative norms for coincident limits.

    Raises:
        NonEmbeddedError: if c < 1e-8
    """
    stride = max(1, disc.grid.size // MAX_LIPSCHITZ_NODES)
    boundary = disc.boundary[::stride]
    zeta = disc.grid.zeta[::stride]
    image = pdist(realify(boundary.T).T)
    source = pdist(np.stack([zeta.real, zeta.imag], axis=1))
    ratios = image / source
    speed = np.linalg.norm(derivative_values(disc.boundary), axis=1)
    lower = float(min(np.min(ratios), np.min(speed)))
    upper = float(max(np.max(ratios), np.max(speed)))
    if lower < 1e-8:
        raise NonEmbeddedError(f"disc is not embedded (lower Lipschitz constant {lower:.3e})", {"c": lower})
    return lower, upper


def disc_points(disc: AnalyticDisc, zetas: np.ndarray) -> np.ndarray:
    """A(zeta) for points of the closed disc; circle points use the boundary interpolant."""
    zetas = np.asarray(zetas, dtype=complex)
    points = np.zeros((len(zetas), disc.n), dtype=complex)
    on_circle = np.abs(zetas) >= 1.0 - 1e-12
    if np.any(on_circle):
        points[on_circle] = disc.at_angle(np.angle(zetas[on_circle]))
    if np.any(~on_circle):
        points[~on_circle] = disc.evaluate(zetas[~on_circle])
    return points


def chain_layout(spacing: float, max_centers: int = 20000) -> np.ndarray:
    """Rings of parameter points covering the closed disc with the given spacing."""
    rings = max(1, int(np.ceil(1.0 / spacing)))
    zetas: List[complex] = []
    for k in range(rings):
        radius = 1.0 - k / rings
        count = max(8, int(np.ceil(2.0 * np.pi * radius / spacing)))
        zetas.extend(radius * np.exp(2j * np.pi * np.arange(count) / count))
        if len(zetas) > max_centers:
            raise PreconditionError(
                f"polydisc chain needs more than {max_centers} centers",
                {"spacing": spacing},
            )
    zetas.append(0.0)
    return np.array(zetas, dtype=complex)


@dataclass
class PolydiscChain:
    """Germ values of the extension at the centers of overlapping polydiscs."""
    centers: np.ndarray
    center_zetas: np.ndarray
    sigma: float
    r: float
    c: float
    big_c: float
    germ_values: np.ndarray
    boundary_mask: np.ndarray
    edges: np.ndarray
    connected: bool
    max_discrepancy: float
    warnings: List[str] = field(default_factory=list)

    @property
    def trivial(self) -> bool:
        return len(self.centers) == 0

    def truth_error(self, truth: Evaluator) -> float:
        if self.trivial:
            return 0.0
        return float(np.max(np.abs(self.germ_values - truth(self.centers))))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma": self.sigma,
            "r": self.r,
            "c": self.c,
            "C": self.big_c,
            "centers": len(self.centers),
            "edges": len(self.edges),
            "connected": self.connected,
            "max_discrepancy": self.max_discrepancy,
            "warnings": self.warnings,
        }


def _trivial_chain(r: float) -> PolydiscChain:
    empty = np.zeros(0, dtype=complex)
    return PolydiscChain(
        np.zeros((0, 0), dtype=complex), empty, 0.0, r, 0.0, 0.0, empty, np.zeros(0, dtype=bool), np.zeros((0, 2), dtype=int), True, 0.0
    )


def continuity_extend(
    f: Evaluator,
    disc: AnalyticDisc,
    oracle: Evaluator,
    config: Optional[Dict[str, Any]] = None,
) -> PolydiscChain:
    """
    Extend f from a neighborhood of A(bDelta) along the disc.

    Boundary centers carry the values of f itself; interior centers carry the
    Cauchy projection of f o A. Every overlap between a boundary polydisc and
    an interior one compares f with the projected value at the interior center.

    Args:
        f: Function holomorphic on omega, evaluated at points (K, n)
        disc: The disc
        oracle: Distance from points to the boundary of omega
        config: Optional settings (max_centers)

    Returns:
        PolydiscChain; trivial when r = 0

    Raises:
        MonodromyError: if germs disagree on an overlap by more than 1e-6
    """
    config = config or {}
    r = float(np.min(oracle(disc.boundary)))
    if r <= 0.0:
        logger.info("Boundary touches the edge of omega (r = %.3e); chain is trivial", r)
        return _trivial_chain(max(r, 0.0))
    c, big_c = bilipschitz_constants(disc)
    sigma = r * c / (2.0 * big_c)
    zetas = chain_layout(sigma / big_c, config.get("max_centers", 20000))
    centers = disc_points(disc, zetas)
    boundary_mask = np.abs(zetas) >= 1.0 - 1e-12

    germ = np.zeros(len(zetas), dtype=complex)
    germ[boundary_mask] = f(centers[boundary_mask])
    projected = interior_eval_values(f(disc.boundary), zetas[~boundary_mask], check=False)
    germ[~boundary_mask] = projected

    tree = cKDTree(realify(centers.T).T)
    edges = np.array(sorted(tree.query_pairs(2.0 * sigma)), dtype=int).reshape(-1, 2)
    size = len(zetas)
    adjacency = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(size, size))
    ncomponents, _ = connected_components(adjacency, directed=False)

    mixed = edges[boundary_mask[edges[:, 0]] != boundary_mask[edges[:, 1]]]
    discrepancy = 0.0
    worst: Optional[Tuple[int, int]] = None
    if len(mixed):
        inner = np.where(boundary_mask[mixed[:, 0]], mixed[:, 1], mixed[:, 0])
        gaps = np.abs(f(centers[inner]) - germ[inner])
        index = int(np.argmax(gaps))
        discrepancy = float(gaps[index])
        worst = (int(mixed[index, 0]), int(mixed[index, 1]))
    notes: List[str] = []
    if discrepancy > MONODROMY_TOLERANCE:
        raise MonodromyError(
            f"germs disagree by {discrepancy:.3e} on an overlap",
            {"discrepancy": discrepancy, "edge": worst, "sigma": sigma},
        )
    if discrepancy > AGREEMENT_TOLERANCE:
        notes.append(f"overlap agreement {discrepancy:.2e} is above {AGREEMENT_TOLERANCE:.0e}")
    if ncomponents != 1:
        notes.append(f"overlap graph has {ncomponents} components")
    logger.debug("Chain: sigma=%.3e, %d centers, %d overlaps", sigma, size, len(edges))
    return PolydiscChain(centers, zetas, sigma, r, c, big_c, germ, boundary_mask, edges, ncomponents == 1, discrepancy, notes)


@dataclass
class FamilyExtension:
    """Chains along a disc family with the propagation bookkeeping between steps."""
    chains: List[PolydiscChain]
    gaps: List[float]
    margin: float
    thin_margin: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "steps": len(self.chains),
            "sigmas": [chain.sigma for chain in self.chains],
            "gaps": self.gaps,
            "margin": self.margin,
            "thin_margin": self.thin_margin,
        }


def continuity_extend_family(
    f: Evaluator,
    discs: Sequence[AnalyticDisc],
    oracle: Evaluator,
    config: Optional[Dict[str, Any]] = None,
) -> FamilyExtension:
    """
    Propagate the extension along a family A_s.

    The extension at s0 seeds the one at s1 when A_{s1}(closed disc) lies in
    the sigma_{s0}-neighborhood of A_{s0}(closed disc); the gap is bounded by
    max |A_{s1}(zeta) - A_{s0}(zeta)| over the chain points of s1.

    Raises:
        PropagationGapError: if a step moves farther than sigma of the previous chain
    """
    chains: List[PolydiscChain] = []
    gaps: List[float] = []
    previous: Optional[AnalyticDisc] = None
    for index, disc in enumerate(discs):
        chain = continuity_extend(f, disc, oracle, config)
        if previous is not None and not chain.trivial:
            gap = float(np.max(np.linalg.norm(chain.centers - disc_points(previous, chain.center_zetas), axis=1)))
            gaps.append(gap)
            if gap >= chains[-1].sigma:
                raise PropagationGapError(
                    f"step {index} moves by {gap:.3e}, beyond sigma = {chains[-1].sigma:.3e}",
                    {"step": index, "gap": gap, "sigma": chains[-1].sigma},
                )
        chains.append(chain)
        previous = disc
    margin = chains[-1].r if chains else 0.0
    thin = bool(chains) and margin < 2.0 * chains[-1].sigma
    if thin:
        logger.warning("Final disc sits within 2 sigma of the edge of omega (margin %.3e)", margin)
    return FamilyExtension(chains, gaps, margin, thin)
