"""
Experiment sampling the wedge swept by the deformed disc family.
"""

import logging
from typing import Any, Dict, Optional

from ..bishop import find_good_disc
from ..config import ExperimentConfig
from ..deform import DeformedGraph, sample_wedge
from ..findings import FindingType, Severity
from ..scenario import Scenario
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)


class WedgeExperiment(BaseExperiment):
    """Good disc, deformation and a WedgeSample written as CSV."""

    name = "wedge"
    defaults = {
        "deform": True,
        "radii": [0.95, 0.9, 0.85, 0.8],
        "angles": [-0.5, -0.25, 0.0, 0.25, 0.5],
        "subbox_gap": 0.25,
    }

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        self.deform = bool(self.config.get("deform", True))
        self.radii = [float(r) for r in self.config.get("radii", [])]
        self.angles = [float(a) for a in self.config.get("angles", [])]
        self.subbox_gap = float(self.config.get("subbox_gap", 0.25))

    def execute(self) -> Dict[str, Any]:
        scenario = self.scenario
        manifold = scenario.manifold
        grid = self.grid(scenario.grid)
        config = self.solver_config(subbox_gap=self.subbox_gap)
        good = find_good_disc(manifold, scenario.submanifold, scenario.m1, scenario.c, scenario.delta, grid, config)
        dg = DeformedGraph(manifold, good.disc, dict(config, **scenario.deformation)) if self.deform else None
        sample = sample_wedge(
            good.disc,
            dg,
            scenario.box,
            radii=self.radii,
            angles=self.angles,
            kgraph=scenario.kgraph,
            submanifold=scenario.submanifold,
            manifold=manifold,
            config=config,
        )
        summary = sample.summary()
        if not sample.is_empty:
            if not sample.cone.interior:
                self.create_finding(
                    FindingType.DEGENERATE_GEOMETRY,
                    Severity.MEDIUM,
                    f"v0 is not interior to the direction cone (margin {sample.cone.margin:.3e})",
                )
            residual = summary["max_attachment_residual"]
            self.check(residual < 1e-9, f"family attachment residual {residual:.3e} exceeds 1e-9")
            if sample.subcones.get("overlap"):
                self.create_finding(
                    FindingType.SUBCONES_OVERLAP,
                    Severity.LOW,
                    "the gamma2 and gamma2_prime sub-cones intersect",
                    metadata=sample.subcones,
                )
        self.tables["points"] = (sample.header(), sample.rows())
        return {"good_disc": good.to_dict(), "sample": summary, "box": scenario.box.to_dict()}
