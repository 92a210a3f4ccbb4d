"""
Experiment computing the defect of a disc and checking the rank law.
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from ..bishop import disc_jacobian, section2_w, solve_bishop, two_component_w, w_slice_family
from ..config import ExperimentConfig
from ..defect import compute_defect, factor_nu, verify_rank_theorem
from ..errors import ConfigurationError
from ..findings import FindingType, Severity
from ..manifold import build_defining_data
from ..scenario import Scenario
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)

DISC_KINDS = ("section", "two-component", "constant")


class DefectExperiment(BaseExperiment):
    """Factor nu, compute the defect and compare it with the evaluation-map ranks."""

    name = "defect"
    defaults = {"disc": "section", "c": 0.05, "verify_rank": True, "modes": 3, "theta0": 1.5707963267948966}

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        self.disc_kind = self.config.get("disc", "section")
        if self.disc_kind not in DISC_KINDS:
            raise ConfigurationError(
                f"defect disc must be one of {', '.join(DISC_KINDS)}, got {self.disc_kind!r}",
                self.settings.line_of("disc"),
            )
        self.c = float(self.config.get("c", 0.05))
        self.verify_rank = bool(self.config.get("verify_rank", True))
        self.modes = int(self.config.get("modes", 3))
        self.theta0 = float(self.config.get("theta0", np.pi / 2))

    def execute(self) -> Dict[str, Any]:
        manifold = self.scenario.manifold
        grid = self.grid()
        config = self.solver_config()
        if self.disc_kind == "constant":
            w = np.zeros((grid.size, manifold.p), dtype=complex)
        elif self.disc_kind == "two-component":
            w = two_component_w(grid, manifold.p, self.c)
        else:
            w = section2_w(grid, manifold.p, self.c)
        disc = solve_bishop(manifold, w, config=config)
        dd = build_defining_data(manifold)
        fac = factor_nu(disc, dd, manifold, config)
        report = compute_defect(disc, dd, fac, manifold, config=config)
        payload: Dict[str, Any] = {
            "disc_kind": self.disc_kind,
            "c": self.c,
            "factorization": fac.to_dict(),
            "defect": report.to_dict(),
        }

        if report.ambiguous:
            self.create_finding(FindingType.INDETERMINATE_RANK, Severity.MEDIUM, "defect rank decision is near the threshold")
        if not report.truncation_stable:
            self.create_finding(FindingType.TRUNCATION_SENSITIVE, Severity.MEDIUM, "defect changes with the mode truncation")
        self.check(report.consistent, "defect differs between sample points zeta0", {"per_zeta": payload["defect"]["per_zeta"]})
        expected = self.scenario.expected_defect
        if self.disc_kind == "constant":
            expected = manifold.q
        if expected is not None:
            self.check(report.defect == expected, f"defect {report.defect} differs from the expected {expected}")

        if self.verify_rank:
            family = w_slice_family(manifold, disc, self.modes, config)
            jacobian = disc_jacobian(family, np.zeros(family.dim), self.theta0)
            verdict = verify_rank_theorem(jacobian, report, manifold, fac)
            payload["rank"] = verdict.to_dict()
            self.check(verdict.equal, f"image codimensions {verdict.codim_f}/{verdict.codim_g} differ from the defect {report.defect}")
            self.check(verdict.tc_residual < 1e-6, f"T^c inclusion residual {verdict.tc_residual:.3e} exceeds 1e-6")
        self.logger.info("Defect of the %s disc: %d", self.disc_kind, report.defect)
        return payload
