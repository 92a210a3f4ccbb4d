"""Base class for experiments run by the CLI and the self-test."""

import hashlib
import json
import logging
from typing import Any, Dict, List, Optional

from .. import __version__
from ..circle_ops import CircleGrid
from ..config import ExperimentConfig
from ..findings import ExperimentResults, Finding, FindingType, Severity
from ..scenario import Scenario, load_scenario

DEFAULT_SCENARIO = "quadric-c3"


class BaseExperiment:
    """Base class for all experiments."""

    name = ""
    defaults: Dict[str, Any] = {}

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        """
        Initialize experiment.

        Args:
            settings: File-level configuration; its block for this experiment
                overrides ``defaults``
            scenario: Scenario to run on (default: the configured or bundled one)
        """
        self.settings = settings or ExperimentConfig()
        self.config = self.settings.block(self.name, self.defaults)
        self.logger = logging.getLogger(self.__class__.__name__)
        self._scenario = scenario
        self.findings: List[Finding] = []
        self.tables: Dict[str, Any] = {}

    def _load_config(self) -> None:
        """Load experiment-specific configuration."""
        raise NotImplementedError("Experiments must implement _load_config")

    @property
    def scenario(self) -> Scenario:
        if self._scenario is None:
            self._scenario = load_scenario(self.settings.scenario or DEFAULT_SCENARIO, self.settings.base_dir)
        return self._scenario

    def solver_config(self, **extra: Any) -> Dict[str, Any]:
        """Worker configuration: solver tolerance, named tolerances and extras."""
        config: Dict[str, Any] = {"tol": self.settings.tol}
        config.update(self.settings.tolerances)
        config.update(extra)
        return config

    def grid(self, minimum: int = 16) -> CircleGrid:
        return CircleGrid(max(self.settings.grid, minimum))

    def create_finding(
        self,
        finding_type: FindingType,
        severity: Severity,
        description: str,
        stage: str = "",
        metadata: Optional[Dict[str, Any]] = None,
    ) -> Finding:
        """
        Create a finding and record it on the experiment.

        Args:
            finding_type: Type of the finding
            severity: Severity level
            description: Description of the finding
            stage: Pipeline stage the finding belongs to
            metadata: Optional additional metadata

        Returns:
            Finding object
        """
        finding = Finding(
            finding_type=finding_type,
            severity=severity,
            description=description,
            stage=stage or self.name,
            metadata=metadata,
        )
        self.findings.append(finding)
        return finding

    def check(self, condition: bool, description: str, metadata: Optional[Dict[str, Any]] = None) -> bool:
        """Record a high-severity failed check unless ``condition`` holds."""
        if not condition:
            self.logger.error("Check failed: %s", description)
            self.create_finding(FindingType.CHECK_FAILED, Severity.HIGH, description, metadata=metadata)
        return bool(condition)

    def manifest(self) -> Dict[str, Any]:
        """Reproducibility data; contains no timestamps."""
        canonical = self.settings.to_dict()
        canonical["experiment"] = self.name
        canonical["parameters"] = self.config
        if self._scenario is not None:
            canonical["scenario_data"] = self._scenario.to_dict()
        digest = hashlib.sha256(json.dumps(canonical, sort_keys=True, default=str).encode("utf-8")).hexdigest()
        return {
            "tool": "cr-discs",
            "version": __version__,
            "config_sha256": digest,
            "grid": self.settings.grid,
            "tol": self.settings.tol,
            "seed": self.settings.seed,
            "tolerances": dict(sorted(self.settings.tolerances.items())),
            "scenario": self._scenario.name if self._scenario is not None else None,
        }

    def execute(self) -> Dict[str, Any]:
        """
        Run the experiment and return its payload.

        Returns:
            JSON-serializable payload
        """
        raise NotImplementedError("Experiments must implement execute")

    def run(self) -> ExperimentResults:
        self.findings = []
        self.tables = {}
        payload = self.execute()
        return ExperimentResults(self.name, payload, list(self.findings), self.manifest(), dict(self.tables))
