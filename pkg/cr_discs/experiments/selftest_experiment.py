"""
Self-test: operator identities, closed forms and a stage-by-stage pass over
every bundled scenario.
"""

import logging
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..bishop import build_section2_disc, disc_jacobian, find_good_disc, section2_w, solve_bishop, w_slice_family
from ..circle_ops import CircleGrid, t1_values
from ..config import ExperimentConfig
from ..defect import compute_defect, factor_nu, verify_rank_theorem
from ..errors import CRDiscsError
from ..extend.continuity import bilipschitz_constants, continuity_extend
from ..extend.removability import removability_experiment, run_stage
from ..extend.singular import ComplementOracle
from ..findings import FindingType, Severity
from ..functions import ExponentialFunction
from ..manifold import GenericManifold, PolynomialMap, build_defining_data, variable_names
from ..scenario import Scenario, bundled_scenarios, load_scenario
from .approx_experiment import MOMENT_TOLERANCE, moment_checks
from .bishop_experiment import quadric_closed_form
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)


def sum_of_squares_quadric(p: int = 1) -> GenericManifold:
    """y = |w_1|^2 + ... + |w_p|^2 in C^{p+1}."""
    terms = []
    for k in range(2 * p):
        exponents = [0] * (2 * p + 1)
        exponents[k] = 2
        terms.append([exponents, 1.0])
    return GenericManifold(p, 1, PolynomialMap.from_tables([terms], variable_names(p, 1)))


def band_limited(rng: np.random.Generator, grid: CircleGrid, modes: int) -> np.ndarray:
    """Random real trigonometric polynomial of degree ``modes``."""
    k = np.arange(1, modes + 1)
    a = rng.standard_normal(modes) / k ** 2
    b = rng.standard_normal(modes) / k ** 2
    theta = grid.theta[:, None]
    return rng.standard_normal() + np.sum(a * np.cos(k * theta) + b * np.sin(k * theta), axis=1)


class SelfTestExperiment(BaseExperiment):
    """Run the invariant suite; every failed check becomes a finding."""

    name = "selftest"
    defaults = {"random_functions": 50, "band": 16, "max_mode": 64, "scenarios": True, "removability": False}

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        self.random_functions = int(self.config.get("random_functions", 50))
        self.band = int(self.config.get("band", 16))
        self.max_mode = int(self.config.get("max_mode", 64))
        self.scenarios = bool(self.config.get("scenarios", True))
        self.removability = bool(self.config.get("removability", False))

    def section(self, name: str, body: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        """Run one group of checks; a package error fails the group instead of the run."""
        self.logger.info("Self-test: %s", name)
        try:
            return body()
        except CRDiscsError as e:
            self.create_finding(FindingType.STAGE_ERROR, Severity.HIGH, e.message, stage=name, metadata=e.details)
            return {"error": e.to_dict()}

    def circle_identities(self) -> Dict[str, Any]:
        grid = CircleGrid(max(self.settings.grid, 4 * self.max_mode))
        theta = grid.theta
        worst_trig = 0.0
        for k in range(1, self.max_mode + 1):
            worst_trig = max(
                worst_trig,
                float(np.max(np.abs(t1_values(np.cos(k * theta)) - np.sin(k * theta)))),
                float(np.max(np.abs(t1_values(np.sin(k * theta)) - (1.0 - np.cos(k * theta))))),
            )
        self.check(worst_trig < 1e-12, f"T1 of cos/sin differs from its closed form by {worst_trig:.3e}")

        rng = np.random.default_rng(self.settings.seed)
        worst_involution = 0.0
        worst_at_one = 0.0
        for _ in range(self.random_functions):
            u = band_limited(rng, grid, self.band)
            tu = t1_values(u)
            worst_involution = max(worst_involution, float(np.max(np.abs(t1_values(tu) + u - u[0]))))
            worst_at_one = max(worst_at_one, abs(float(tu[0])))
        self.check(worst_involution < 1e-10, f"T1^2 u + u - u(1) has size {worst_involution:.3e}")
        self.check(worst_at_one == 0.0, f"(T1 u)(1) = {worst_at_one:.3e}, expected exactly 0")
        return {"trig_error": worst_trig, "involution_error": worst_involution, "value_at_one": worst_at_one}

    def bishop_closed_form(self) -> Dict[str, Any]:
        manifold = sum_of_squares_quadric(1)
        grid = CircleGrid(self.settings.grid)
        config = self.solver_config()
        sizes: List[float] = []
        errors: List[float] = []
        scales = (0.01, 0.03, 0.05)
        for c in scales:
            disc = solve_bishop(manifold, section2_w(grid, 1, c), config=config)
            errors.append(float(np.max(np.abs(disc.boundary[:, 1] - quadric_closed_form(grid.zeta, c)))))
            self.check(disc.attachment_residual(manifold) < 1e-9, f"disc c={c} is not attached")
            sizes.append(float(np.max(np.abs(disc.x))))
        slope = float(np.polyfit(np.log(scales), np.log(sizes), 1)[0])
        self.check(max(errors) < 1e-10, f"quadric disc differs from its closed form by {max(errors):.3e}")
        self.check(abs(slope - 2.0) <= 0.01, f"x scales like c^{slope:.3f}, expected c^2")
        return {"closed_form_errors": errors, "slope": slope}

    def constant_disc_defect(self) -> Dict[str, Any]:
        manifold = sum_of_squares_quadric(2)
        grid = CircleGrid(self.settings.grid)
        config = self.solver_config()
        disc = solve_bishop(manifold, np.zeros((grid.size, 2), dtype=complex), config=config)
        dd = build_defining_data(manifold)
        report = compute_defect(disc, dd, factor_nu(disc, dd, manifold, config), manifold, config=config)
        self.check(report.defect == manifold.q, f"constant disc has defect {report.defect}, expected {manifold.q}")
        self.check(report.consistent, "constant disc defect depends on zeta0")
        return {"defect": report.defect}

    def continuity(self) -> Dict[str, Any]:
        manifold = sum_of_squares_quadric(2)
        grid = CircleGrid(self.settings.grid)
        disc = solve_bishop(manifold, section2_w(grid, 2, 0.05), config=self.solver_config())
        f = ExponentialFunction([1.0, 0.5j, 1.0])
        chain = continuity_extend(f, disc, ComplementOracle(f, limit=0.01))
        c, big_c = bilipschitz_constants(disc)
        sigma_error = abs(chain.sigma - chain.r * c / (2.0 * big_c))
        truth_error = chain.truth_error(f)
        self.check(sigma_error == 0.0, f"sigma differs from rc/(2C) by {sigma_error:.3e}")
        self.check(truth_error < 1e-10, f"entire-function chain differs from the truth by {truth_error:.3e}")
        return {"chain": chain.to_dict(), "truth_error": truth_error}

    def moments(self) -> Dict[str, Any]:
        rows = moment_checks(0.3, (10.0, 40.0, 160.0, 640.0))
        worst = max(row["error"] for row in rows)
        self.check(worst < MOMENT_TOLERANCE, f"G_tau moments differ from closed forms by {worst:.3e}")
        return {"max_error": worst}

    def scenario_stages(self, scenario: Scenario) -> Dict[str, Any]:
        manifold = scenario.manifold
        grid = CircleGrid(max(scenario.grid, self.settings.grid))
        config = self.solver_config()
        disc, crossings = run_stage("section_disc", lambda: build_section2_disc(manifold, scenario.m1, scenario.c, grid, config))
        dd = build_defining_data(manifold)
        fac = run_stage("factor_nu", lambda: factor_nu(disc, dd, manifold, config))
        defect = run_stage("defect", lambda: compute_defect(disc, dd, fac, manifold, config=config))
        if scenario.expected_defect is not None:
            self.check(
                defect.defect == scenario.expected_defect,
                f"scenario {scenario.name}: defect {defect.defect}, expected {scenario.expected_defect}",
            )

        def rank_stage():
            family = w_slice_family(manifold, disc, 3, config)
            return verify_rank_theorem(disc_jacobian(family, np.zeros(family.dim), np.pi / 2), defect, manifold, fac)

        verdict = run_stage("rank", rank_stage)
        self.check(verdict.equal, f"scenario {scenario.name}: image codimensions differ from the defect {defect.defect}")
        self.check(verdict.tc_residual < 1e-6, f"scenario {scenario.name}: T^c inclusion residual {verdict.tc_residual:.3e}")
        payload: Dict[str, Any] = {
            "crossings": crossings.to_dict(),
            "defect": defect.defect,
            "rank": verdict.to_dict(),
        }
        # Good discs only exist where v0 leaves T^c, which a flat scenario never allows.
        if scenario.removable is None:
            return payload
        good = run_stage(
            "good_disc",
            lambda: find_good_disc(manifold, scenario.submanifold, scenario.m1, scenario.c, scenario.delta, grid, config),
        )
        payload["good_disc"] = good.to_dict()
        if self.removability:
            scenario.grid = grid.size
            report = removability_experiment(scenario, config)
            payload["removable"] = report.removable
            self.check(
                report.removable == scenario.removable,
                f"scenario {scenario.name}: removable={report.removable}, expected {scenario.removable}",
            )
        return payload

    def execute(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "circle": self.section("circle", self.circle_identities),
            "bishop": self.section("bishop", self.bishop_closed_form),
            "defect": self.section("defect", self.constant_disc_defect),
            "continuity": self.section("continuity", self.continuity),
            "approx": self.section("approx", self.moments),
        }
        if self.scenarios:
            results = {}
            for path in bundled_scenarios():
                scenario = load_scenario(path)
                results[scenario.name] = self.section(f"scenario:{scenario.name}", lambda s=scenario: self.scenario_stages(s))
            payload["scenarios"] = results
        payload["checks_failed"] = sum(1 for f in self.findings if f.severity is Severity.HIGH)
        return payload
