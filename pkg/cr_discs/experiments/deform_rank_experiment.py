"""
Experiment tabulating the normal derivative D'(0) of the deformed family.
"""

import logging
from typing import Any, Dict, Optional

from ..bishop import section2_w, solve_bishop
from ..config import ExperimentConfig
from ..deform import DeformedGraph, normal_derivative_map
from ..scenario import Scenario
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)

CHI_GRID = 2048


class DeformRankExperiment(BaseExperiment):
    """Rank of D'(0), its functional cross-check and the normalization of chi."""

    name = "deform-rank"
    defaults = {"c": 0.05, "step": 1e-4, "t_values": None}

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        self.c = float(self.config.get("c", 0.05))
        self.step = float(self.config.get("step", 1e-4))
        self.t_values = self.config.get("t_values")

    def execute(self) -> Dict[str, Any]:
        manifold = self.scenario.manifold
        grid = self.grid(max(CHI_GRID, self.scenario.grid))
        config = self.solver_config()
        disc = solve_bishop(manifold, section2_w(grid, manifold.p, self.c), config=config)
        dg = DeformedGraph(manifold, disc, dict(config, **self.scenario.deformation))
        result = normal_derivative_map(disc, dg, self.t_values, self.step, config)

        q = manifold.q
        self.check(result.rank.rank == q, f"D'(0) has rank {result.rank.rank}, expected {q}")
        self.check(result.discrepancy < 1e-6, f"D'(0) differs from its functional cross-check by {result.discrepancy:.3e}")
        self.check(abs(result.chi_functional - 1.0) <= 1e-8, f"J(chi) = {result.chi_functional:.12f}, expected 1")
        self.check(result.y_dot_discrepancy < 1e-6, f"J(Ydot) differs from the cross-check by {result.y_dot_discrepancy:.3e}")
        self.check(result.g.identity_defect < 1e-6, f"T1 G + G H_x(A) has size {result.g.identity_defect:.3e}")

        self.tables["d_prime"] = (
            ["row"] + [f"t{j + 1}" for j in range(q)] + [f"check_t{j + 1}" for j in range(q)],
            [
                [i + 1] + [repr(float(v)) for v in result.d_prime[i]] + [repr(float(v)) for v in result.cross_check[i]]
                for i in range(q)
            ],
        )
        return {"c": self.c, "step": self.step, "grid": grid.size, "normal_derivative": result.to_dict()}
