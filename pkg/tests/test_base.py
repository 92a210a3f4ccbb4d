"""
Base test class for cr-discs experiments and pipelines.
"""

import copy

from cr_discs.circle_ops import CircleGrid

from .scenario_generator import generate_all_scenarios


class BaseScenarioTest:
    """Base class for tests that run on scenarios."""

    grid_size = 512

    @classmethod
    def setup_class(cls):
        """Set up test class by building every scenario once."""
        cls.scenarios = generate_all_scenarios()
        cls.grid = CircleGrid(cls.grid_size)

    def get_scenario(self, name):
        """A private copy of a scenario; experiments may change its grid."""
        scenario = self.scenarios.get(name)
        if scenario is None:
            raise KeyError(f"unknown test scenario {name}")
        return copy.copy(scenario)
