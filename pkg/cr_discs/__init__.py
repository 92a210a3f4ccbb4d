"""
cr-discs: analytic discs attached to generic CR manifolds, their defect and
the wedge extension and removability experiments built on them.
"""

__version__ = "0.1.0"

from .bishop import AnalyticDisc, BishopSolver, find_good_disc, solve_bishop
from .circle_ops import CircleFunction, CircleGrid
from .config import ExperimentConfig
from .defect import DefectReport, compute_defect, factor_nu
from .errors import ConfigurationError, ConvergenceError, CRDiscsError, DomainError
from .findings import ExperimentResults, Finding, FindingType, Severity
from .manifold import GenericManifold, Submanifold
from .runner import ExperimentRunner
from .scenario import Scenario, load_scenario


def get_version():
    """Return the version of cr-discs."""
    return __version__


__all__ = [
    "__version__",
    "get_version",
    "AnalyticDisc",
    "BishopSolver",
    "CircleFunction",
    "CircleGrid",
    "ConfigurationError",
    "ConvergenceError",
    "CRDiscsError",
    "DefectReport",
    "DomainError",
    "ExperimentConfig",
    "ExperimentResults",
    "ExperimentRunner",
    "Finding",
    "FindingType",
    "GenericManifold",
    "Scenario",
    "Severity",
    "Submanifold",
    "compute_defect",
    "factor_nu",
    "find_good_disc",
    "load_scenario",
    "solve_bishop",
]
