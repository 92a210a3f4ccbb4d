"""
Experiment deforming a disc off the singular set to a point.
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from ..bishop import section2_w, solve_bishop
from ..config import ExperimentConfig
from ..errors import ConfigurationError
from ..extend.isotopy import Recipe, isotopy_to_point
from ..extend.singular import EmptySet, SubmanifoldSet
from ..scenario import Scenario
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)


class IsotopyExperiment(BaseExperiment):
    """Run one isotopy recipe from a translated section disc."""

    name = "isotopy"
    defaults = {
        "recipe": "shrink-w",
        "c": 0.05,
        "offset": None,
        "steps": 16,
        "direction": None,
        "distance": 0.0,
        "singular": None,
        "validate": True,
    }

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        recipe = self.config.get("recipe", "shrink-w")
        if recipe not in [r.value for r in Recipe]:
            raise ConfigurationError(f"unknown isotopy recipe {recipe!r}", self.settings.line_of("recipe"))
        self.recipe = recipe
        self.c = float(self.config.get("c", 0.05))
        self.offset = self.config.get("offset")
        self.steps = int(self.config.get("steps", 16))
        self.direction = self.config.get("direction")
        self.distance = float(self.config.get("distance", 0.0))
        self.singular = self.config.get("singular")
        self.validate = bool(self.config.get("validate", True))

    def start_offset(self, p: int) -> np.ndarray:
        """Translation of the holomorphic part; default i/10 on the last w-component."""
        if self.offset is None:
            offset = np.zeros(p, dtype=complex)
            offset[-1] = 0.1j
            return offset
        if len(self.offset) != p:
            raise ConfigurationError(f"isotopy offset needs {p} [re, im] entries", self.settings.line_of("offset"))
        return np.array([complex(re, im) for re, im in self.offset])

    def execute(self) -> Dict[str, Any]:
        scenario = self.scenario
        manifold = scenario.manifold
        grid = self.grid()
        config = self.solver_config(steps=self.steps, direction=self.direction, distance=self.distance)
        w = section2_w(grid, manifold.p, self.c) + self.start_offset(manifold.p)[None, :]
        disc = solve_bishop(manifold, w, config=config)

        singular = scenario.singular
        if self.singular == "none":
            singular = EmptySet()
        elif self.singular == "N":
            singular = SubmanifoldSet(scenario.submanifold)
        m1 = scenario.m1 if scenario.m1.contains(disc.base_point) else None

        path = isotopy_to_point(disc, manifold, singular, m1, self.recipe, config)
        payload: Dict[str, Any] = {"singular": singular.to_dict(), "path": path.to_dict()}
        self.check(path.min_clearance > 0.0, "isotopy clearance reached zero")
        self.check(float(np.max(path.residuals[:-1], initial=0.0)) <= 1e-9, "an intermediate disc is not attached")
        if path.recipe is not Recipe.MOVE_BASE:
            self.check(path.terminal, f"terminal diameter {path.terminal_diameter:.3e} is not below 1e-9")
        if self.validate:
            payload["validated"] = path.validate(refine=2)
            self.check(payload["validated"], "path fails its checks on the refined s-grid")
        self.tables["clearances"] = (
            ["s", "clearance", "residual", "diameter"],
            [
                [repr(float(s)), repr(float(c)), repr(float(r)), repr(d.diameter())]
                for s, c, r, d in zip(path.s_values, path.clearances, path.residuals, path.discs)
            ],
        )
        return payload
