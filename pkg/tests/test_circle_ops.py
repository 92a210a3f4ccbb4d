"""
Tests for the circle operators.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cr_discs.circle_ops import (
    CircleFunction,
    CircleGrid,
    ValueKind,
    derivative_at_one,
    hilbert_t1,
    holder_diagnostics,
    interior_eval_values,
    interpolate,
    j_functional_values,
    right_inverse_s,
    t1_values,
)
from cr_discs.errors import (
    ConfigurationError,
    NotHolomorphicError,
    OutsideDiscError,
    PreconditionError,
    RealValueError,
)

GRID = CircleGrid(256)

coefficients = st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=1, max_size=12)


def trig_poly(cos_coeffs, sin_coeffs):
    theta = GRID.theta
    total = np.zeros_like(theta)
    for k, (a, b) in enumerate(zip(cos_coeffs, sin_coeffs), start=1):
        total += a * np.cos(k * theta) + b * np.sin(k * theta)
    return total


class TestCircleGrid:
    """Tests for grid construction."""

    @pytest.mark.parametrize("size", [8, 100, 1000])
    def test_rejects_bad_sizes(self, size):
        with pytest.raises(ConfigurationError, match="size must be a power of two"):
            CircleGrid(size)

    def test_zeta_starts_at_one(self):
        assert GRID.zeta[0] == 1.0
        assert np.allclose(np.abs(GRID.zeta), 1.0)
        assert GRID.modes[1] == 1 and GRID.modes[-1] == -1


class TestHilbertTransform:
    """Tests for the normalized harmonic conjugate."""

    @pytest.mark.parametrize("k", [1, 2, 7, 31])
    def test_trig_closed_forms(self, k):
        theta = GRID.theta
        assert np.max(np.abs(t1_values(np.cos(k * theta)) - np.sin(k * theta))) < 1e-12
        assert np.max(np.abs(t1_values(np.sin(k * theta)) - (1.0 - np.cos(k * theta)))) < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(coefficients, coefficients, st.floats(-2.0, 2.0, allow_nan=False))
    def test_involution(self, cos_coeffs, sin_coeffs, mean):
        u = mean + trig_poly(cos_coeffs, sin_coeffs)
        tu = t1_values(u)
        assert tu[0] == 0.0
        assert np.max(np.abs(t1_values(tu) + u - u[0])) < 1e-10

    @settings(max_examples=30, deadline=None)
    @given(coefficients, coefficients)
    def test_boundary_values_are_holomorphic(self, cos_coeffs, sin_coeffs):
        u = trig_poly(cos_coeffs, sin_coeffs)
        holo = u + 1j * t1_values(u)
        interior_eval_values(holo, 0.5)

    def test_vector_input_is_columnwise(self):
        theta = GRID.theta
        u = np.stack([np.cos(theta), np.sin(2 * theta)], axis=1)
        tu = t1_values(u)
        assert np.allclose(tu[:, 0], np.sin(theta), atol=1e-12)
        assert np.allclose(tu[:, 1], 1.0 - np.cos(2 * theta), atol=1e-12)

    def test_rejects_complex_input(self):
        f = CircleFunction.from_values(GRID, np.exp(1j * GRID.theta))
        with pytest.raises(RealValueError):
            hilbert_t1(f)

    def test_real_tag_with_imaginary_part(self):
        with pytest.raises(RealValueError):
            CircleFunction.from_values(GRID, GRID.zeta, ValueKind.REAL_SCALAR)


class TestInteriorEvaluation:
    """Tests for evaluation inside the unit disc."""

    def test_polynomial(self):
        zeta = GRID.zeta
        values = 1.0 + 2.0 * zeta - zeta ** 3
        z = 0.3 - 0.4j
        assert abs(interior_eval_values(values, z) - (1.0 + 2.0 * z - z ** 3)) < 1e-12

    def test_outside_disc(self):
        with pytest.raises(OutsideDiscError):
            interior_eval_values(GRID.zeta, 1.0)

    def test_not_holomorphic(self):
        with pytest.raises(NotHolomorphicError):
            interior_eval_values(np.conj(GRID.zeta), 0.2)

    def test_projection_when_unchecked(self):
        values = GRID.zeta + np.conj(GRID.zeta)
        assert abs(interior_eval_values(values, 0.5, check=False) - 0.5) < 1e-12

    def test_interpolate_between_nodes(self):
        theta = 0.123
        assert abs(interpolate(np.cos(3 * GRID.theta), theta) - np.cos(3 * theta)) < 1e-12


class TestFunctionals:
    """Tests for the principal-value functional and derivative at one."""

    @pytest.mark.parametrize("k", [1, 2, 5])
    def test_j_of_one_minus_cos(self, k):
        # T1(1 - cos k) = -sin k, so J = k
        g = 1.0 - np.cos(k * GRID.theta)
        assert abs(j_functional_values(g) - k) < 1e-10

    def test_j_of_product_identity(self):
        # g g' - T1 g T1 g' is the real part of a product vanishing to second order at 1
        rng = np.random.default_rng(16)
        k = np.arange(1, 9)[:, None]

        def random_g():
            g = rng.standard_normal(8) @ np.cos(k * GRID.theta) + rng.standard_normal(8) @ np.sin(k * GRID.theta)
            return g - g[0]

        for _ in range(20):
            g, g_prime = random_g(), random_g()
            value = j_functional_values(g * g_prime - t1_values(g) * t1_values(g_prime))
            assert abs(value) < 1e-8

    def test_j_needs_vanishing_at_one(self):
        with pytest.raises(PreconditionError, match="g\\(1\\) = 0"):
            j_functional_values(np.cos(GRID.theta))

    def test_derivative_aliasing_guard(self):
        values = np.cos(120 * GRID.theta)
        with pytest.raises(PreconditionError, match="spectrum not resolved"):
            derivative_at_one(values)

    def test_derivative_at_one(self):
        values = GRID.zeta ** 3
        assert abs(derivative_at_one(values) - 3j) < 1e-10

    def test_derivative_at_one_is_columnwise(self):
        theta = GRID.theta
        values = np.stack([GRID.zeta ** 3, 2.0 * GRID.zeta ** 2, np.sin(2 * theta) + 0j], axis=1)
        assert np.allclose(derivative_at_one(values), [3j, 4j, 2.0], atol=1e-10)
        matrix = np.stack([values, 1j * values], axis=2)
        assert derivative_at_one(matrix).shape == (3, 2)

    def test_aliasing_guard_checks_every_column(self):
        values = np.stack([np.cos(GRID.theta), np.cos(120 * GRID.theta)], axis=1)
        with pytest.raises(PreconditionError, match="spectrum not resolved"):
            derivative_at_one(values)

    def test_holder_diagnostics_of_smooth_function(self):
        diag = holder_diagnostics(np.cos(GRID.theta))
        assert diag["c0"] == pytest.approx(1.0)
        assert diag["holder_quotient"] < 1.0


class TestRightInverse:
    """Tests for the right inverse of the linearized attachment map."""

    def test_attachment_identity(self):
        rng = np.random.default_rng(3)
        r_z0 = np.array([[0.0, -0.5j]])
        d_matrix = np.array([[0.0], [2.0j]])
        assert np.allclose(r_z0 @ d_matrix, np.eye(1))
        f_values = (1.0 + np.cos(GRID.theta) + 0.3 * rng.standard_normal() * np.sin(2 * GRID.theta))[:, None]
        f = CircleFunction.from_values(GRID, f_values, ValueKind.REAL_VECTOR)
        s = right_inverse_s(f, d_matrix)
        interior_eval_values(s.values, 0.0)
        recovered = 2.0 * np.real(s.values @ r_z0.T)
        assert np.max(np.abs(recovered - f_values)) < 1e-12

    def test_rejects_scalar(self):
        f = CircleFunction.from_values(GRID, np.cos(GRID.theta))
        with pytest.raises(RealValueError):
            right_inverse_s(f, np.eye(1))
