"""
Tests for analytic isotopies to a point.
"""

import numpy as np
import pytest

from cr_discs.bishop import section2_w, solve_bishop
from cr_discs.circle_ops import CircleGrid
from cr_discs.errors import IsotopyBlockedError, PreconditionError
from cr_discs.extend.isotopy import Recipe, isotopy_to_point
from cr_discs.extend.singular import EmptySet, SubmanifoldSet

from .scenario_generator import linear_submanifold, quadric


class TestIsotopy:
    """Tests for the shrink-w, move-base and combined recipes."""

    @classmethod
    def setup_class(cls):
        cls.grid = CircleGrid(256)
        cls.manifold = quadric(2, 1)
        cls.singular = SubmanifoldSet(linear_submanifold(cls.manifold, ["v1", "v2"]))
        w = section2_w(cls.grid, 2, 0.05)
        w[:, 1] += 0.1j
        cls.disc = solve_bishop(cls.manifold, w)

    def test_shrink_reaches_a_point(self):
        path = isotopy_to_point(self.disc, self.manifold, self.singular)
        assert path.recipe is Recipe.SHRINK_W
        assert path.terminal
        assert path.min_clearance > 0.05
        assert np.max(path.residuals) < 1e-9
        assert path.validate(refine=2)

    def test_move_base_through_singular_set(self):
        config = {"direction": [0.0, 0.0, 0.0, -1.0, 0.0], "distance": 0.2, "steps": 16}
        with pytest.raises(IsotopyBlockedError) as excinfo:
            isotopy_to_point(self.disc, self.manifold, self.singular, recipe="move-base", config=config)
        details = excinfo.value.details
        assert details["s"] == pytest.approx(0.5)
        assert details["clearance"] <= 1e-6

    def test_move_base_away_from_singular_set(self):
        config = {"direction": [0.0, 0.0, 0.0, 1.0, 0.0], "distance": 0.1, "steps": 8}
        path = isotopy_to_point(self.disc, self.manifold, self.singular, recipe="move-base", config=config)
        assert not path.terminal
        assert path.clearances[-1] > path.clearances[0]

    def test_combined_ends_at_a_point(self):
        config = {"direction": [0.0, 0.0, 0.0, 1.0, 0.0], "distance": 0.05, "steps": 8}
        path = isotopy_to_point(self.disc, self.manifold, EmptySet(), recipe="combined", config=config)
        assert path.terminal
        assert np.isinf(path.min_clearance)

    def test_bad_direction(self):
        config = {"direction": [1.0, 0.0], "distance": 0.1}
        with pytest.raises(PreconditionError):
            isotopy_to_point(self.disc, self.manifold, self.singular, recipe="move-base", config=config)

    def test_unknown_recipe(self):
        with pytest.raises(ValueError):
            isotopy_to_point(self.disc, self.manifold, self.singular, recipe="teleport")
