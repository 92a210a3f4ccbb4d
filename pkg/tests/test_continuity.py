"""
Tests for the continuity principle along attached discs.
"""

import numpy as np
import pytest

from cr_discs.bishop import section2_w, solve_bishop
from cr_discs.circle_ops import CircleGrid
from cr_discs.errors import MonodromyError, NonEmbeddedError, PropagationGapError
from cr_discs.extend.continuity import bilipschitz_constants, continuity_extend, continuity_extend_family
from cr_discs.extend.singular import ComplementOracle, TubeOracle
from cr_discs.functions import ExponentialFunction, PoleFunction

from .scenario_generator import quadric

C = 0.05


def translated_disc(manifold, grid, shift):
    """Disc with w = c(1 - zeta) + shift on the quadric in C^2."""
    return solve_bishop(manifold, section2_w(grid, 1, C) + shift)


def tube_around(disc, pole):
    """Tube around the boundary reaching half way to the pole."""
    radius = 0.5 * float(np.min(np.abs(disc.w[:, 0] - pole)))
    return TubeOracle(disc.boundary, radius)


class TestContinuityPrinciple:
    """Tests for polydisc chains along a single disc."""

    @classmethod
    def setup_class(cls):
        cls.grid = CircleGrid(512)
        cls.manifold = quadric(1, 1)

    def test_sigma_formula(self):
        disc = translated_disc(self.manifold, self.grid, C)
        f = PoleFunction(0, 0.0)
        chain = continuity_extend(f, disc, tube_around(disc, 0.0))
        c, big_c = bilipschitz_constants(disc)
        assert chain.sigma == chain.r * c / (2.0 * big_c)
        assert chain.connected
        assert not chain.trivial

    def test_entire_function(self):
        disc = translated_disc(self.manifold, self.grid, 0.0)
        f = ExponentialFunction([1.0, 0.5j])
        chain = continuity_extend(f, disc, ComplementOracle(f, limit=0.01))
        assert chain.truth_error(f) < 1e-10
        assert chain.max_discrepancy < 1e-9

    @pytest.mark.parametrize("ratio", np.linspace(0.4, 1.6, 10))
    def test_pole_outside_disc_agrees(self, ratio):
        disc = translated_disc(self.manifold, self.grid, ratio * C)
        f = PoleFunction(0, 0.0)
        chain = continuity_extend(f, disc, tube_around(disc, 0.0))
        assert chain.truth_error(f) < 1e-9

    @pytest.mark.parametrize("ratio", np.linspace(-1.6, -0.4, 10))
    def test_pole_inside_disc_is_detected(self, ratio):
        disc = translated_disc(self.manifold, self.grid, ratio * C)
        f = PoleFunction(0, 0.0)
        with pytest.raises(MonodromyError) as excinfo:
            continuity_extend(f, disc, tube_around(disc, 0.0))
        assert excinfo.value.details["discrepancy"] > 1e-6

    def test_trivial_chain_when_boundary_touches_edge(self):
        disc = translated_disc(self.manifold, self.grid, C)
        chain = continuity_extend(PoleFunction(0, 0.0), disc, lambda z: np.zeros(np.atleast_2d(z).shape[0]))
        assert chain.trivial
        assert chain.sigma == 0.0

    def test_constant_disc_is_not_embedded(self):
        disc = solve_bishop(self.manifold, np.zeros((self.grid.size, 1), dtype=complex))
        with pytest.raises(NonEmbeddedError):
            bilipschitz_constants(disc)


class TestFamilyPropagation:
    """Tests for propagating chains along a disc family."""

    @classmethod
    def setup_class(cls):
        cls.grid = CircleGrid(256)
        cls.manifold = quadric(1, 1)
        cls.f = PoleFunction(0, 0.0)

    def test_small_steps_propagate(self):
        discs = [translated_disc(self.manifold, self.grid, s * C) for s in np.linspace(1.0, 1.1, 6)]
        result = continuity_extend_family(self.f, discs, ComplementOracle(self.f))
        assert len(result.chains) == 6
        assert len(result.gaps) == 5
        assert all(gap < chain.sigma for gap, chain in zip(result.gaps, result.chains))

    def test_large_step_is_a_gap(self):
        discs = [translated_disc(self.manifold, self.grid, s * C) for s in (1.0, 2.0)]
        with pytest.raises(PropagationGapError) as excinfo:
            continuity_extend_family(self.f, discs, ComplementOracle(self.f))
        assert excinfo.value.details["step"] == 1
