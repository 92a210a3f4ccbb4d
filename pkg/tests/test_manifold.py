"""
Tests for generic manifolds, submanifolds and the tangency check.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cr_discs.errors import ConfigurationError, NotGenericError, OffManifoldError, PreconditionError
from cr_discs.manifold import (
    GenericManifold,
    PolynomialMap,
    Submanifold,
    build_defining_data,
    tangency_check,
    variable_names,
)

from .scenario_generator import linear_submanifold, monomial, quadric, x_coupled

small = st.floats(-0.3, 0.3, allow_nan=False)


class TestGenericManifold:
    """Tests for manifold construction and geometry."""

    def test_rejects_zero_cr_dimension(self):
        with pytest.raises(PreconditionError):
            GenericManifold(0, 1, PolynomialMap.from_tables([[]], variable_names(0, 1)))

    def test_rejects_linear_part(self):
        tables = [[[monomial(1, 1, u1=1), 1.0]]]
        with pytest.raises(PreconditionError, match="dh\\(0\\) = 0"):
            GenericManifold(1, 1, PolynomialMap.from_tables(tables, variable_names(1, 1)))

    @pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (1, 2), (2, 2)])
    def test_quadratic_height_is_accepted(self, p, q):
        manifold = quadric(p, q)
        assert manifold.h.vanishes_to_second_order()
        assert (manifold.p, manifold.q) == (p, q)

    def test_second_order_check_on_real_coefficients(self):
        names = variable_names(1, 1)
        assert PolynomialMap.from_tables([[[monomial(1, 1, u1=1, x1=1), 0.5]]], names).vanishes_to_second_order()
        assert PolynomialMap.from_tables([[]], names).vanishes_to_second_order()
        assert not PolynomialMap.from_tables([[[monomial(1, 1), 0.25]]], names).vanishes_to_second_order()
        assert not PolynomialMap.from_tables([[[monomial(1, 1, x1=1), 1e-3]]], names).vanishes_to_second_order()

    def test_rejects_high_degree(self):
        tables = [[[monomial(1, 1, u1=5), 1.0]]]
        with pytest.raises(ConfigurationError, match="degree"):
            GenericManifold(1, 1, PolynomialMap.from_tables(tables, variable_names(1, 1)))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ConfigurationError):
            GenericManifold(1, 2, PolynomialMap.from_tables([[]], variable_names(1, 2)))

    def test_rejects_base_point_off_manifold(self):
        manifold = quadric(1, 1)
        with pytest.raises(OffManifoldError):
            GenericManifold(1, 1, manifold.h, base_point=[0.1, 0.0])

    def test_malformed_table(self):
        with pytest.raises(ConfigurationError, match="malformed"):
            PolynomialMap.from_tables([[[1]]], variable_names(1, 1))

    def test_from_dict_roundtrip(self):
        manifold = x_coupled(1)
        again = GenericManifold.from_dict(manifold.to_dict())
        assert again.to_dict() == manifold.to_dict()

    @settings(max_examples=40, deadline=None)
    @given(small, small, small, small, small)
    def test_points_from_params_lie_on_manifold(self, u1, u2, v1, v2, x1):
        manifold = quadric(2, 1)
        z = manifold.point_from_params(np.array([u1, u2, v1, v2, x1]))
        assert abs(manifold.eval_r(z)[0]) < 1e-14
        assert np.allclose(manifold.params_of(z), [u1, u2, v1, v2, x1])

    @settings(max_examples=20, deadline=None)
    @given(small, small, small)
    def test_complex_tangent_dimension(self, u1, v1, x1):
        manifold = x_coupled(1)
        z = manifold.point_from_params(np.array([u1, v1, x1]))
        assert manifold.complex_tangent_basis(z).shape[1] == 2
        assert manifold.tangent_basis(z).shape[1] == 3

    def test_defining_data_right_inverse(self):
        manifold = quadric(2, 1)
        dd = build_defining_data(manifold)
        assert np.allclose(dd.r_z0 @ dd.d_matrix, np.eye(1))

    def test_defining_data_needs_generic_base(self, monkeypatch):
        manifold = quadric(1, 1)
        monkeypatch.setattr(manifold, "r_z", lambda z: np.zeros((1, 1, 2), dtype=complex))
        with pytest.raises(NotGenericError):
            build_defining_data(manifold)


class TestTangency:
    """Tests for the T^c M in T N decision."""

    @classmethod
    def setup_class(cls):
        cls.manifold = quadric(2, 1)

    def test_hypersurface_contains_complex_tangent(self):
        submanifold = linear_submanifold(self.manifold, ["x1"])
        report = tangency_check(submanifold, self.manifold, self.manifold.base_point)
        assert report.contains_tc
        assert report.witness is None

    def test_totally_real_directions_fail(self):
        submanifold = linear_submanifold(self.manifold, ["v1", "v2"])
        report = tangency_check(submanifold, self.manifold, self.manifold.base_point)
        assert not report.contains_tc
        witness = report.witness
        # witness lies in T^c M = C^2 x {0} and is not tangent to {v = 0}
        assert np.allclose(witness[2], 0.0)
        assert np.linalg.norm(witness[:2].imag) > 0.1

    def test_point_off_submanifold(self):
        submanifold = linear_submanifold(self.manifold, ["x1"])
        z = self.manifold.point_from_params(np.array([0.0, 0.0, 0.0, 0.0, 0.1]))
        with pytest.raises(OffManifoldError):
            tangency_check(submanifold, self.manifold, z)

    def test_submanifold_from_dict(self):
        data = {"equations": [[[monomial(2, 1, v1=1), 1.0]]]}
        submanifold = Submanifold.from_dict(self.manifold, data, "N")
        assert submanifold.codim == 1
        assert submanifold.through_base

    def test_submanifold_missing_equations(self):
        with pytest.raises(ConfigurationError, match="equations"):
            Submanifold.from_dict(self.manifold, {}, "N")

    def test_projection_onto_submanifold(self):
        submanifold = linear_submanifold(self.manifold, ["v1", "v2"])
        params = submanifold.project_params(np.array([0.1, 0.0, 0.2, -0.1, 0.0]))
        assert np.allclose(params[0], [0.1, 0.0, 0.0, 0.0, 0.0])
