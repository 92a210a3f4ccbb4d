"""
Experiment solving Bishop's equation for the section disc of a scenario.
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from ..bishop import section2_w, solve_bishop
from ..circle_ops import holder_diagnostics
from ..config import ExperimentConfig
from ..manifold import GenericManifold
from ..scenario import Scenario
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)


def is_sum_of_squares(manifold: GenericManifold) -> bool:
    """True for h = |w_1|^2 + ... + |w_p|^2 with q = 1."""
    if manifold.q != 1:
        return False
    p, dim = manifold.p, manifold.real_dim
    expected = {}
    for k in range(2 * p):
        exponents = [0] * dim
        exponents[k] = 2
        expected[tuple(exponents)] = 1.0
    return dict(manifold.h.tables[0]) == expected and len(manifold.h.tables[0]) == len(expected)


def quadric_closed_form(zeta: np.ndarray, c: float) -> np.ndarray:
    """z-boundary 2 i c^2 (1 - zeta) of the section disc on the sum-of-squares quadric."""
    return 2j * c ** 2 * (1.0 - zeta)


class BishopExperiment(BaseExperiment):
    """Attach w_c = (c(1 - zeta), 0, ...) and report the disc."""

    name = "bishop"
    defaults = {"c": 0.05, "x0": None, "scaling": [0.01, 0.03, 0.05], "holder_alpha": 0.5}

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        self.c = float(self.config.get("c", 0.05))
        self.x0 = self.config.get("x0")
        self.scaling = [float(c) for c in self.config.get("scaling", [])]
        self.holder_alpha = float(self.config.get("holder_alpha", 0.5))

    def execute(self) -> Dict[str, Any]:
        manifold = self.scenario.manifold
        grid = self.grid()
        config = self.solver_config()
        disc = solve_bishop(manifold, section2_w(grid, manifold.p, self.c), x0=self.x0, config=config)
        attachment = disc.attachment_residual(manifold)
        self.check(attachment < 1e-9, f"attachment residual {attachment:.3e} exceeds 1e-9")

        payload: Dict[str, Any] = {
            "c": self.c,
            "disc": disc.to_dict(),
            "attachment_residual": attachment,
            "iterations": disc.iterations,
            "holder": holder_diagnostics(disc.x, self.holder_alpha),
        }
        if is_sum_of_squares(manifold) and self.x0 is None:
            error = float(np.max(np.abs(disc.boundary[:, manifold.p] - quadric_closed_form(grid.zeta, self.c))))
            payload["closed_form_error"] = error
            self.check(error < 1e-10, f"z-boundary differs from 2ic^2(1 - zeta) by {error:.3e}")
            if len(self.scaling) >= 2:
                sizes = []
                for c in self.scaling:
                    scaled = solve_bishop(manifold, section2_w(grid, manifold.p, c), config=config)
                    sizes.append(float(np.max(np.abs(scaled.x))))
                slope = float(np.polyfit(np.log(self.scaling), np.log(sizes), 1)[0])
                payload["scaling"] = {"c": self.scaling, "sup_x": sizes, "slope": slope}
                self.check(abs(slope - 2.0) <= 0.01, f"x scales like c^{slope:.3f}, expected c^2")
        else:
            self.logger.info("No closed form for this manifold; only residual checks apply")
        self.tables["boundary"] = (
            ["theta"] + [f"z{k + 1}_{part}" for k in range(disc.n) for part in ("re", "im")],
            [
                [repr(float(theta))] + [repr(float(v)) for value in point for v in (value.real, value.imag)]
                for theta, point in zip(grid.theta, disc.boundary)
            ],
        )
        self.logger.info("Bishop disc c=%.3g: residual %.3e in %d iterations", self.c, disc.residual, disc.iterations)
        return payload
