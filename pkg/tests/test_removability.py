"""
Tests for the Cauchy extension over sampled wedges and the removability pipeline.
"""

import numpy as np
import pytest

from cr_discs.bishop import section2_w, solve_bishop
from cr_discs.circle_ops import CircleGrid
from cr_discs.deform import ParameterBox, sample_wedge
from cr_discs.errors import NoGoodDiscError, NonExtendibleBoundaryError, PreconditionError, StageError
from cr_discs.extend.cauchy import cauchy_extension
from cr_discs.extend.removability import points_on, removability_experiment, removal_discs, run_stage
from cr_discs.functions import ExponentialFunction, PoleFunction

from .scenario_generator import linear_submanifold, quadric
from .test_base import BaseScenarioTest


class TestCauchyExtension:
    """Tests for Cauchy integrals over the discs of a wedge sample."""

    @classmethod
    def setup_class(cls):
        cls.grid = CircleGrid(256)
        cls.manifold = quadric(1, 1)
        disc = solve_bishop(cls.manifold, section2_w(cls.grid, 1, 0.05))
        cls.sample = sample_wedge(disc, None, ParameterBox(tau=0.3, samples=6, seed=2), manifold=cls.manifold)

    def test_entire_function_is_reproduced(self):
        f = ExponentialFunction([1.0, 0.5])
        extension = cauchy_extension(f, self.sample, truth=f)
        assert np.all(extension.valid)
        assert extension.max_error < 1e-10
        assert not extension.non_extendible

    def test_pole_off_the_discs(self):
        f = PoleFunction(0, -0.05)
        extension = cauchy_extension(f, self.sample, truth=f)
        assert extension.max_error < 1e-8
        assert extension.near_pairs > 0
        assert extension.spread > 0.0

    def test_pole_inside_the_discs_strict(self):
        with pytest.raises(NonExtendibleBoundaryError) as excinfo:
            cauchy_extension(PoleFunction(0, 0.05), self.sample)
        assert excinfo.value.details["disc"] == 0

    def test_pole_inside_the_discs_recorded(self):
        extension = cauchy_extension(PoleFunction(0, 0.05), self.sample, strict=False)
        assert len(extension.non_extendible) == len(self.sample.discs)
        assert not np.any(extension.valid)
        assert extension.to_dict()["points"] == 0


class TestRemovalDiscs:
    """Tests for discs centered on points of N."""

    @classmethod
    def setup_class(cls):
        cls.grid = CircleGrid(256)
        cls.manifold = quadric(2, 1)
        cls.submanifold = linear_submanifold(cls.manifold, ["v1", "v2"])

    def test_points_lie_on_submanifold(self):
        points = points_on(self.submanifold, 5, 0.02, seed=1)
        assert points.shape == (5, 3)
        for point in points:
            assert self.submanifold.contains(point)

    def test_boundaries_avoid_submanifold(self):
        points = points_on(self.submanifold, 4, 0.02, seed=1)
        removal = removal_discs(self.manifold, self.submanifold, points, 0.05, self.grid)
        assert removal.clear == 4
        assert np.max(removal.center_offsets) < 0.01

    def test_size_must_be_positive(self):
        with pytest.raises(PreconditionError):
            removal_discs(self.manifold, self.submanifold, np.zeros((1, 3)), 0.0, self.grid)


class TestStages:
    """Tests for stage labeling."""

    def test_stage_error_keeps_cause(self):
        def failing():
            raise PreconditionError("bad input")

        with pytest.raises(StageError) as excinfo:
            run_stage("defect", failing)
        assert excinfo.value.stage == "defect"
        assert isinstance(excinfo.value.cause, PreconditionError)
        assert excinfo.value.exit_code == PreconditionError("x").exit_code


@pytest.mark.slow
@pytest.mark.integration
class TestRemovabilityPipeline(BaseScenarioTest):
    """End-to-end runs on the bundled scenarios."""

    def test_removable_quadric(self):
        scenario = self.get_scenario("quadric-c3")
        report = removability_experiment(scenario)
        assert report.removable
        assert report.max_error < 1e-6
        assert report.defect["defect"] == 0
        assert report.extension["points"] >= 500

    def test_pole_is_not_removable(self):
        scenario = self.get_scenario("pole-c2")
        report = removability_experiment(scenario)
        assert not report.removable
        assert report.non_extendible

    def test_flat_scenario_has_no_good_disc(self):
        scenario = self.get_scenario("flat-c2")
        with pytest.raises(StageError) as excinfo:
            removability_experiment(scenario)
        assert excinfo.value.stage == "good_disc"
        assert isinstance(excinfo.value.cause, NoGoodDiscError)
        assert excinfo.value.exit_code == 2
