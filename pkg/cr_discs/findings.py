"""
Module for representing experiment diagnostics and results.
"""

from dataclasses import dataclass
from enum import Enum
import json
import csv
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple


def _jsonable(value: Any) -> Any:
    """Fallback encoder for numpy scalars and arrays."""
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class FindingType(str, Enum):
    """Types of diagnostics an experiment can report."""
    CHECK_FAILED = "check_failed"
    INDETERMINATE_RANK = "indeterminate_rank"
    DEGENERATE_GEOMETRY = "degenerate_geometry"
    TRUNCATION_SENSITIVE = "truncation_sensitive"
    THIN_MARGIN = "thin_margin"
    OVERLAP_DRIFT = "overlap_drift"
    NON_EXTENDIBLE_DISC = "non_extendible_disc"
    SUBCONES_OVERLAP = "subcones_overlap"
    HOLDER_DIAGNOSTIC = "holder_diagnostic"
    STAGE_ERROR = "stage_error"


class Severity(str, Enum):
    """Severity levels for findings."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


@dataclass
class Finding:
    """A diagnostic produced while running an experiment."""
    finding_type: FindingType
    severity: Severity
    description: str
    stage: str = ""
    metadata: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert finding to dictionary format."""
        return {
            "type": self.finding_type.value,
            "severity": self.severity.value,
            "description": self.description,
            "stage": self.stage,
            "metadata": self.metadata,
        }


class ExperimentResults:
    """Container for the payload and findings of one experiment run."""

    def __init__(
        self,
        name: str,
        payload: Dict[str, Any],
        findings: List[Finding],
        manifest: Optional[Dict[str, Any]] = None,
        tables: Optional[Dict[str, Tuple[List[str], List[List[Any]]]]] = None,
    ):
        """
        Initialize experiment results.

        Args:
            name: Experiment (subcommand) name
            payload: JSON-serializable numeric results
            findings: Diagnostics collected during the run
            manifest: Reproducibility data (config hash, version, tolerances)
            tables: Named CSV tables as (header, rows)
        """
        self.name = name
        self.payload = payload
        self.findings = findings
        self.manifest = manifest or {}
        self.tables = tables or {}
        self.status = self._determine_status()

    def _determine_status(self) -> str:
        """
        Determine the overall status from findings.

        Returns:
            str: Status string
        """
        if not self.findings:
            return "All checks passed"
        if self.has_failures():
            return "Checks failed"
        return "Checks passed with diagnostics"

    def has_failures(self) -> bool:
        """Return True if any finding is high or critical."""
        return any(f.severity in (Severity.HIGH, Severity.CRITICAL) for f in self.findings)

    def to_dict(self) -> Dict[str, Any]:
        """Convert results to dictionary format."""
        return {
            "experiment": self.name,
            "manifest": self.manifest,
            "payload": self.payload,
            "findings": [finding.to_dict() for finding in self.findings],
            "status": self.status,
        }

    def to_json(self, indent: int = 2) -> str:
        """Convert results to a deterministic JSON string."""
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True, default=_jsonable)

    def save_json(self, output_path: str, indent: int = 2) -> None:
        """
        Save results to JSON file.

        Args:
            output_path: Path to save JSON file
            indent: Number of spaces for JSON indentation
        """
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(self.to_json(indent=indent))
            f.write("\n")

    def summary(self) -> str:
        """Return a human-readable summary of findings."""
        if not self.findings:
            return f"No findings for {self.name}."
        summary_lines = [f"Findings for {self.name}:"]
        for finding in self.findings:
            summary_lines.append(
                f"- [{finding.severity.value}] {finding.finding_type.value}: {finding.description}"
            )
        summary_lines.append(f"\nStatus: {self.status}")
        return "\n".join(summary_lines)

    def has_findings(self) -> bool:
        """Return True if there are any findings."""
        return bool(self.findings)

    def save_tables(self, directory: str, prefix: Optional[str] = None) -> List[str]:
        """Write every table to ``<directory>/<prefix>_<table>.csv`` and return the paths."""
        prefix = prefix or self.name
        paths = []
        for table, (header, rows) in sorted(self.tables.items()):
            path = Path(directory) / f"{prefix}_{table}.csv"
            with open(path, "w", newline="", encoding="utf-8") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(rows)
            paths.append(str(path))
        return paths
