"""
Experiment tabulating the Gaussian approximation operator.
"""

import logging
from typing import Any, Dict, List, Optional

import numpy as np

from ..config import ExperimentConfig
from ..errors import ConfigurationError
from ..extend.approximation import (
    DEFAULT_TAUS,
    MaximallyRealPatch,
    approximation_table,
    exponential_oracle,
    gauss_approx,
)
from ..scenario import Scenario
from .base_experiment import BaseExperiment

logger = logging.getLogger(__name__)

MOMENT_TOLERANCE = 1e-8


def moment_checks(x: float, taus, order: int = 64, half_width: float = 8.0) -> List[Dict[str, Any]]:
    """G_tau of 1, z and z^2 on the real line against their closed forms."""
    line = MaximallyRealPatch.real_box(1, half_width)
    zhat = np.array([x], dtype=complex)
    cases = [
        ("1", lambda z: np.ones(z.shape[0], dtype=complex), lambda tau: 1.0),
        ("z", lambda z: z[:, 0], lambda tau: x),
        ("z^2", lambda z: z[:, 0] ** 2, lambda tau: x ** 2 + 1.0 / (2.0 * tau)),
    ]
    rows = []
    for label, f, exact in cases:
        for tau in taus:
            value = gauss_approx(f, line, zhat, tau, order)
            rows.append({"f": label, "tau": float(tau), "value": [value.real, value.imag], "error": abs(value - exact(tau))})
    return rows


class ApproxExperiment(BaseExperiment):
    """Convergence of G_tau exp(a . z) on a curved patch plus the real-line moments."""

    name = "approx"
    defaults = {
        "n": 1,
        "curvature": 0.2,
        "half_width": 3.0,
        "s_hat": None,
        "shift": None,
        "coefficients": None,
        "taus": list(DEFAULT_TAUS),
        "order": 64,
        "moments_at": 0.3,
    }

    def __init__(self, settings: Optional[ExperimentConfig] = None, scenario: Optional[Scenario] = None):
        super().__init__(settings, scenario)
        self._load_config()

    def _load_config(self) -> None:
        self.n = int(self.config.get("n", 1))
        if self.n < 1:
            raise ConfigurationError("approx needs n >= 1", self.settings.line_of("n"))
        self.curvature = float(self.config.get("curvature", 0.2))
        self.half_width = float(self.config.get("half_width", 3.0))
        s_hat = self.config.get("s_hat")
        self.s_hat = np.full(self.n, 0.1) if s_hat is None else np.asarray(s_hat, dtype=float)
        shift = self.config.get("shift")
        self.shift = None if shift is None else np.array([complex(re, im) for re, im in shift])
        coefficients = self.config.get("coefficients")
        self.coefficients = np.ones(self.n, dtype=complex) if coefficients is None else np.array(
            [complex(re, im) for re, im in coefficients]
        )
        self.taus = [float(t) for t in self.config.get("taus", DEFAULT_TAUS)]
        self.order = int(self.config.get("order", 64))
        self.moments_at = self.config.get("moments_at")

    def execute(self) -> Dict[str, Any]:
        patch = MaximallyRealPatch.curved(self.n, self.curvature, self.half_width)
        if self.shift is not None:
            patch = patch.shifted(self.shift)
        zhat = patch(self.s_hat)
        a = self.coefficients

        def f(z):
            return np.exp(z @ a)

        table = approximation_table(f, patch, zhat, self.taus, self.order, lambda tau: exponential_oracle(a, zhat, tau))
        self.check(table.monotone, "G_tau error does not decrease over the tau table", {"errors": table.errors})
        worst = max(table.oracle_errors, default=0.0)
        self.check(worst < 1e-8, f"G_tau differs from its closed form by {worst:.3e}")
        self.tables["convergence"] = (table.header(), table.rows())
        payload: Dict[str, Any] = {
            "patch": patch.to_dict(),
            "zhat": [[float(v.real), float(v.imag)] for v in zhat],
            "table": table.to_dict(),
        }
        if self.moments_at is not None:
            moments = moment_checks(float(self.moments_at), self.taus, self.order)
            payload["moments"] = moments
            worst = max(row["error"] for row in moments)
            self.check(worst < MOMENT_TOLERANCE, f"real-line moments differ from closed forms by {worst:.3e}")
        return payload
