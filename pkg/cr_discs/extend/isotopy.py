"""
Analytic isotopies of attached discs to a point.

Two recipes are provided. ``shrink-w`` scales the holomorphic part towards its
value at 1, x_s = -T1 h((1 - s)(w - w(1)) + w(1), x_s) + x0, ending at a
constant disc. ``move-base`` translates the base point along a curve mu(s) in
M1, x_s = -T1 h(w + mu_w(s), x_s) + mu_x(s). ``combined`` moves the base and
then shrinks. Every step is checked for clearance from the singular set.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..bishop import AnalyticDisc, BishopSolver
from ..errors import IsotopyBlockedError, PreconditionError
from ..manifold import GenericManifold, Submanifold
from .singular import SingularSet

logger = logging.getLogger(__name__)

TERMINAL_DIAMETER = 1e-9


class Recipe(str, Enum):
    SHRINK_W = "shrink-w"
    MOVE_BASE = "move-base"
    COMBINED = "combined"


@dataclass
class IsotopyPath:
    """A discretized isotopy s -> A_s with boundary clearances."""
    recipe: Recipe
    s_values: np.ndarray
    discs: List[AnalyticDisc]
    clearances: np.ndarray
    residuals: np.ndarray
    builder: Optional[Callable[[float], AnalyticDisc]] = field(default=None, repr=False)
    singular: Optional[SingularSet] = field(default=None, repr=False)
    manifold: Optional[GenericManifold] = field(default=None, repr=False)

    @property
    def terminal_diameter(self) -> float:
        return self.discs[-1].diameter()

    @property
    def terminal(self) -> bool:
        return self.terminal_diameter < TERMINAL_DIAMETER

    @property
    def min_clearance(self) -> float:
        return float(np.min(self.clearances))

    def validate(self, refine: int = 2) -> bool:
        """Re-run every clearance and attachment check on a refined s-grid."""
        if self.builder is None or self.singular is None or self.manifold is None:
            raise PreconditionError("path was built without its recipe and cannot be revalidated")
        count = (len(self.s_values) - 1) * refine + 1
        for s in np.linspace(0.0, 1.0, count):
            disc = self.builder(float(s))
            if disc.attachment_residual(self.manifold) > 1e-9:
                return False
            if s < 1.0 and float(np.min(self.singular.distance(disc.boundary))) <= 0.0:
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "recipe": self.recipe.value,
            "steps": len(self.s_values),
            "min_clearance": self.min_clearance,
            "clearances": self.clearances.tolist(),
            "max_residual": float(np.max(self.residuals)),
            "terminal_diameter": self.terminal_diameter,
            "terminal": self.terminal,
        }


class IsotopyBuilder:
    """Builds the discs of a recipe for s in [0, 1]."""

    def __init__(
        self,
        manifold: GenericManifold,
        disc: AnalyticDisc,
        m1: Optional[Submanifold] = None,
        config: Optional[Dict[str, Any]] = None,
    ):
        self.manifold = manifold
        self.disc = disc
        self.m1 = m1
        self.config = config or {}
        self.logger = logging.getLogger(self.__class__.__name__)
        self._load_config()
        self.solver = BishopSolver(manifold, self.config)

    def _load_config(self) -> None:
        self.steps = self.config.get("steps", 16)
        self.min_clearance = self.config.get("min_clearance", 1e-6)
        self.direction = self.config.get("direction")
        self.distance = self.config.get("distance", 0.0)

    def base_curve(self, s: float) -> np.ndarray:
        """mu(s): parameters of the moved base point, projected onto M1 when given."""
        start = self.disc.params[0]
        if self.direction is None:
            return start
        direction = np.asarray(self.direction, dtype=float)
        if direction.shape != start.shape:
            raise PreconditionError(f"move direction must have {start.shape[0]} entries")
        target = start + s * self.distance * direction / np.linalg.norm(direction)
        if self.m1 is not None:
            target = self.m1.project_params(target)[0]
        return target

    def moved(self, s: float) -> AnalyticDisc:
        p = self.manifold.p
        mu = self.base_curve(s)
        start = self.disc.params[0]
        shift = (mu[:p] - start[:p]) + 1j * (mu[p: 2 * p] - start[p: 2 * p])
        return self.solver.solve(self.disc.w + shift, x0=mu[2 * p:], x_init=self.disc.x - self.disc.x0 + mu[2 * p:])

    def shrunk(self, disc: AnalyticDisc, s: float) -> AnalyticDisc:
        w_one = disc.w[0]
        w = (1.0 - s) * (disc.w - w_one) + w_one
        return self.solver.solve(w, x0=disc.x0)

    def recipe_builder(self, recipe: Recipe) -> Callable[[float], AnalyticDisc]:
        if recipe is Recipe.SHRINK_W:
            return lambda s: self.shrunk(self.disc, s)
        if recipe is Recipe.MOVE_BASE:
            return self.moved
        end = self.moved(1.0)

        def combined(s: float) -> AnalyticDisc:
            return self.moved(2.0 * s) if s <= 0.5 else self.shrunk(end, 2.0 * s - 1.0)

        return combined


def isotopy_to_point(
    disc: AnalyticDisc,
    manifold: GenericManifold,
    singular: SingularSet,
    m1: Optional[Submanifold] = None,
    recipe: str = "shrink-w",
    config: Optional[Dict[str, Any]] = None,
) -> IsotopyPath:
    """
    Deform a disc attached to M minus Phi through attached discs.

    Args:
        disc: Starting disc with positive clearance from Phi
        manifold: M
        singular: Oracle for Phi
        m1: Hypersurface the base-point curve stays in (move-base)
        recipe: ``shrink-w``, ``move-base`` or ``combined``
        config: steps, min_clearance, direction and distance of the base move

    Returns:
        IsotopyPath

    Raises:
        IsotopyBlockedError: when a boundary comes within min_clearance of Phi
            or crosses it between steps
    """
    recipe = Recipe(recipe)
    builder = IsotopyBuilder(manifold, disc, m1, config)
    build = builder.recipe_builder(recipe)
    s_values = np.linspace(0.0, 1.0, builder.steps + 1)
    discs: List[AnalyticDisc] = []
    clearances: List[float] = []
    residuals: List[float] = []
    for s in s_values:
        current = build(float(s))
        distances = singular.distance(current.boundary)
        index = int(np.argmin(distances))
        clearance = float(distances[index])
        crossed = bool(discs) and singular.crossing(discs[-1].boundary, current.boundary)
        if crossed or clearance <= builder.min_clearance:
            nearest = singular.nearest(current.boundary[index])[0]
            raise IsotopyBlockedError(
                f"{recipe.value} isotopy blocked by {singular.name} at s = {s:.4f}",
                {
                    "s": float(s),
                    "clearance": clearance,
                    "crossed": crossed,
                    "nearest": [[float(v.real), float(v.imag)] for v in nearest],
                },
            )
        discs.append(current)
        clearances.append(clearance)
        residuals.append(current.attachment_residual(manifold))
    logger.info("%s isotopy: min clearance %.3e, terminal diameter %.3e", recipe.value, min(clearances), discs[-1].diameter())
    return IsotopyPath(recipe, s_values, discs, np.array(clearances), np.array(residuals), build, singular, manifold)
