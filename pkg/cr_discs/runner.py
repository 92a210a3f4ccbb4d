"""
Runs experiments and writes their reports.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

from .config import ExperimentConfig
from .errors import ConfigurationError, CRDiscsError
from .experiments import EXPERIMENTS
from .findings import ExperimentResults, Finding, FindingType, Severity
from .scenario import Scenario, bundled_scenarios, load_scenario

logger = logging.getLogger(__name__)


def failed_results(name: str, error: CRDiscsError, stage: str = "") -> ExperimentResults:
    """Results standing in for an experiment that raised."""
    finding = Finding(
        finding_type=FindingType.STAGE_ERROR,
        severity=Severity.CRITICAL,
        description=error.message,
        stage=stage or getattr(error, "stage", "") or name,
        metadata=error.details,
    )
    return ExperimentResults(name, {"error": error.to_dict(), "exit_code": error.exit_code}, [finding])


class ExperimentRunner:
    """Class to run experiments against a configuration."""

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        """
        Initialize the runner.

        Args:
            settings: File-level configuration with CLI overrides applied
            scenario: Scenario shared by every experiment (default: load per experiment)
        """
        self.settings = settings or ExperimentConfig()
        self.scenario = scenario
        self.logger = logging.getLogger(self.__class__.__name__)

    def run(self, name: str) -> ExperimentResults:
        """
        Run one experiment.

        Raises:
            ConfigurationError: for an unknown experiment name
            CRDiscsError: whatever the experiment raises
        """
        if name not in EXPERIMENTS:
            raise ConfigurationError(f"unknown experiment {name!r} (available: {', '.join(EXPERIMENTS)})")
        self.logger.info("Running experiment: %s", name)
        return EXPERIMENTS[name](self.settings, self.scenario).run()

    def run_all(self, names: Optional[Iterable[str]] = None) -> List[ExperimentResults]:
        """
        Run several experiments, isolating each failure.

        Args:
            names: Experiments to run (default: every experiment except the self-test)

        Returns:
            One ExperimentResults per experiment; a failed experiment carries a critical finding
        """
        names = list(names) if names is not None else [name for name in EXPERIMENTS if name != "selftest"]
        results = []
        for name in names:
            try:
                results.append(self.run(name))
            except CRDiscsError as e:
                self.logger.error("Error in experiment %s: %s", name, e.message)
                results.append(failed_results(name, e))
        return results

    def run_scenarios(
        self,
        directory: Optional[Union[str, Path]] = None,
        names: Optional[Sequence[str]] = None,
    ) -> List[ExperimentResults]:
        """
        Run experiments on every scenario file of a directory.

        Args:
            directory: Directory of .json/.toml scenario files (default: the bundled ones)
            names: Experiments to run on each scenario (default: remove where
                the scenario states a removability expectation, defect elsewhere)

        Returns:
            Results named ``<experiment>:<scenario>``
        """
        if directory is None:
            paths = bundled_scenarios()
        else:
            directory = Path(directory)
            if not directory.is_dir():
                raise ConfigurationError(f"invalid scenario directory: {directory}")
            paths = sorted(p for p in directory.iterdir() if p.suffix.lower() in (".json", ".toml"))

        results = []
        for path in paths:
            try:
                planned = names or (("remove",) if load_scenario(path).removable is not None else ("defect",))
            except CRDiscsError as e:
                self.logger.error("Error loading %s: %s", path, e.message)
                results.append(failed_results(f"load:{path.stem}", e))
                continue
            for name in planned:
                try:
                    # Fresh scenario per experiment: experiments may raise its grid.
                    scenario = load_scenario(path)
                    runner = ExperimentRunner(self.settings, scenario)
                    result = runner.run(name)
                    result.name = f"{name}:{scenario.name}"
                except CRDiscsError as e:
                    self.logger.error("Error running %s on %s: %s", name, path, e.message)
                    result = failed_results(f"{name}:{path.stem}", e)
                results.append(result)
        return results

    def save(self, results: ExperimentResults, out: Optional[Union[str, Path]] = None) -> List[str]:
        """
        Write ``<out>/<name>.json`` and the CSV tables of one result.

        Returns:
            Paths written, JSON first
        """
        directory = Path(out or self.settings.out)
        directory.mkdir(parents=True, exist_ok=True)
        stem = results.name.replace(":", "_")
        json_path = directory / f"{stem}.json"
        results.save_json(str(json_path))
        paths = results.save_tables(str(directory), stem)
        self.logger.info("Wrote %s", json_path)
        return [str(json_path)] + paths
