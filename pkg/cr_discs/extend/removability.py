"""
End-to-end removability experiment.

The pipeline finds a good disc at z0, computes its defect, samples the wedge
swept by the deformed family, extends f by Cauchy integrals over every
generating disc and compares the result with the closed-form truth. Removal
discs through points of N record whether small discs centered on N keep their
boundaries off N.
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Optional, TypeVar

import numpy as np

from ..bishop import AnalyticDisc, BishopSolver, find_good_disc
from ..circle_ops import CircleGrid
from ..defect import compute_defect, factor_nu
from ..deform import DeformedGraph, sample_wedge
from ..errors import CRDiscsError, PreconditionError, StageError
from ..manifold import GenericManifold, Submanifold, build_defining_data
from .cauchy import cauchy_extension

if TYPE_CHECKING:
    from ..scenario import Scenario

logger = logging.getLogger(__name__)

T = TypeVar("T")


def run_stage(stage: str, func: Callable[[], T]) -> T:
    """Run one pipeline stage, wrapping package errors with the stage label."""
    logger.info("Stage: %s", stage)
    try:
        return func()
    except StageError:
        raise
    except CRDiscsError as e:
        logger.error("Stage %s failed: %s", stage, e.message)
        raise StageError(stage, e) from e


@dataclass
class RemovalDiscs:
    """Discs A_{c,p0} centered near points p0 of N."""
    discs: List[AnalyticDisc]
    centers: np.ndarray
    clearances: np.ndarray
    center_offsets: np.ndarray

    @property
    def clear(self) -> int:
        """Number of discs whose boundary stays off N."""
        return int(np.sum(self.clearances > 0.0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "discs": len(self.discs),
            "clear": self.clear,
            "min_clearance": float(np.min(self.clearances, initial=np.inf)) if len(self.clearances) else None,
            "max_center_offset": float(np.max(self.center_offsets, initial=0.0)),
        }


def removal_w(grid: CircleGrid, p: int, c: float, w0: np.ndarray) -> np.ndarray:
    """(c zeta, i c zeta, 0, ...) + w0; the second component needs p >= 2."""
    w = np.tile(np.asarray(w0, dtype=complex), (grid.size, 1))
    w[:, 0] += c * grid.zeta
    if p >= 2:
        w[:, 1] += 1j * c * grid.zeta
    return w


def removal_discs(
    manifold: GenericManifold,
    submanifold: Submanifold,
    points: np.ndarray,
    c: float,
    grid: Optional[CircleGrid] = None,
    config: Optional[Dict[str, Any]] = None,
) -> RemovalDiscs:
    """
    Attach A_{c,p0}(zeta) = (c zeta, i c zeta, 0, ...) + p0 for each p0 on N.

    The x-component is re-attached by Bishop's equation with x0 = x(p0), so
    A(0) lies near p0 rather than on it; the offset is reported.

    Args:
        manifold: M
        submanifold: N
        points: Points of N, shape (K, n)
        c: Disc size
        grid: Circle grid

    Returns:
        RemovalDiscs with the boundary clearance of each disc from N
    """
    if c <= 0:
        raise PreconditionError(f"removal disc size must be positive, got {c}")
    grid = grid or CircleGrid()
    solver = BishopSolver(manifold, config)
    p = manifold.p
    discs, clearances, offsets = [], [], []
    for point in np.atleast_2d(points):
        disc = solver.solve(removal_w(grid, p, c, point[:p]), x0=point[p:].real)
        discs.append(disc)
        clearances.append(float(np.min(submanifold.distance(disc.boundary))))
        offsets.append(float(np.linalg.norm(disc.evaluate(np.array([0.0]))[0] - point)))
    return RemovalDiscs(discs, np.atleast_2d(points), np.array(clearances), np.array(offsets))


def points_on(submanifold: Submanifold, count: int, radius: float, seed: int = 0) -> np.ndarray:
    """Points of N near z0: random parameter offsets projected onto N."""
    manifold = submanifold.manifold
    rng = np.random.default_rng(seed)
    base = manifold.params_of(manifold.base_point)
    offsets = rng.uniform(-radius, radius, (count, manifold.real_dim))
    return manifold.point_from_params(submanifold.project_params(base + offsets))


@dataclass
class RemovabilityReport:
    """Stage-by-stage outcome of a removability experiment."""
    scenario: str
    good_disc: Dict[str, Any]
    defect: Dict[str, Any]
    wedge: Dict[str, Any]
    extension: Dict[str, Any]
    removal: Dict[str, Any]
    max_error: float
    non_extendible: List[Dict[str, Any]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def removable(self) -> bool:
        return not self.non_extendible

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "good_disc": self.good_disc,
            "defect": self.defect,
            "wedge": self.wedge,
            "extension": self.extension,
            "removal": self.removal,
            "max_error": self.max_error,
            "non_extendible": self.non_extendible,
            "removable": self.removable,
            "warnings": self.warnings,
        }


def removability_experiment(scenario: "Scenario", config: Optional[Dict[str, Any]] = None) -> RemovabilityReport:
    """
    Run good disc, defect, wedge sampling, Cauchy extension and removal discs.

    Args:
        scenario: Geometry, N, f and the family box
        config: Solver and stage settings passed through to each worker;
            removal_points (default 8) and removal_radius (default 0.02)

    Returns:
        RemovabilityReport. Non-extendible discs are listed, not raised.

    Raises:
        StageError: labeled with the failing stage
    """
    config = dict(config or {})
    manifold = scenario.manifold
    grid = CircleGrid(scenario.grid)

    good = run_stage(
        "good_disc",
        lambda: find_good_disc(manifold, scenario.submanifold, scenario.m1, scenario.c, scenario.delta, grid, config),
    )
    disc = good.disc

    def defect_stage():
        dd = build_defining_data(manifold)
        return compute_defect(disc, dd, factor_nu(disc, dd, manifold, config), manifold, config=config)

    defect = run_stage("defect", defect_stage)

    def wedge_stage():
        dg = DeformedGraph(manifold, disc, dict(config, **scenario.deformation))
        return sample_wedge(
            disc,
            dg,
            scenario.box,
            kgraph=scenario.kgraph,
            submanifold=scenario.submanifold,
            manifold=manifold,
            config=config,
        )

    sample = run_stage("wedge", wedge_stage)
    extension = run_stage(
        "cauchy",
        lambda: cauchy_extension(scenario.function, sample, strict=False, truth=scenario.function, config=config),
    )

    def removal_stage():
        points = points_on(
            scenario.submanifold,
            config.get("removal_points", 8),
            config.get("removal_radius", 0.02),
            scenario.box.seed,
        )
        return removal_discs(manifold, scenario.submanifold, points, scenario.c, grid, config)

    removal = run_stage("removal", removal_stage)

    warnings = list(defect.warnings)
    if extension.max_error > 1e-6:
        warnings.append(f"extension error {extension.max_error:.3e} exceeds 1e-6")
    report = RemovabilityReport(
        scenario=scenario.name,
        good_disc=good.to_dict(),
        defect=defect.to_dict(),
        wedge=sample.summary(),
        extension=extension.to_dict(),
        removal=removal.to_dict(),
        max_error=extension.max_error,
        non_extendible=extension.non_extendible,
        warnings=warnings,
    )
    logger.info(
        "Removability %s: %d wedge points, max error %.3e, %d non-extendible discs",
        scenario.name,
        len(sample),
        report.max_error,
        len(report.non_extendible),
    )
    return report
