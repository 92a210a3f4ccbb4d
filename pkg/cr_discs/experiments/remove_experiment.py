"""
Experiment running the end-to-end removability pipeline on a scenario.
"""

import logging
from typing import Any, Dict, Optional

from ..config import ExperimentConfig
from ..extend.removability import removability_experiment
from ..findings import FindingType, Severity
from ..scenario import Scenario
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)

EXTENSION_TOLERANCE = 1e-6


class RemoveExperiment(BaseExperiment):
    """Compare the Cauchy extension over the wedge with the scenario truth."""

    name = "remove"
    defaults = {"removal_points": 8, "removal_radius": 0.02, "min_points": 500}

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        self.removal_points = int(self.config.get("removal_points", 8))
        self.removal_radius = float(self.config.get("removal_radius", 0.02))
        self.min_points = int(self.config.get("min_points", 500))

    def execute(self) -> Dict[str, Any]:
        scenario = self.scenario
        scenario.grid = max(scenario.grid, self.settings.grid)
        config = self.solver_config(removal_points=self.removal_points, removal_radius=self.removal_radius)
        report = removability_experiment(scenario, config)

        for record in report.non_extendible:
            self.create_finding(
                FindingType.NON_EXTENDIBLE_DISC,
                Severity.LOW if scenario.removable is False else Severity.HIGH,
                f"f o A has negative-mode content {record['negative_content']:.3e} on disc {record['disc']}",
                stage="cauchy",
                metadata=record,
            )
        for note in report.defect.get("warnings", []):
            self.create_finding(FindingType.TRUNCATION_SENSITIVE, Severity.MEDIUM, note)
        self.check(report.max_error < EXTENSION_TOLERANCE, f"extension error {report.max_error:.3e} exceeds {EXTENSION_TOLERANCE:.0e}")
        if scenario.removable is False:
            self.check(not report.removable, "no non-extendible disc was found on a non-removable scenario")
        elif scenario.removable:
            points = report.extension["points"]
            self.check(points >= self.min_points, f"only {points} wedge points were extended, {self.min_points} required")
        return report.to_dict()
