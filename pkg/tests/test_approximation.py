"""
Tests for the Gaussian approximation operator on maximally real patches.
"""

import numpy as np
import pytest

from cr_discs.errors import PreconditionError, QuadratureError
from cr_discs.experiments.approx_experiment import MOMENT_TOLERANCE, moment_checks
from cr_discs.extend.approximation import (
    DEFAULT_TAUS,
    MaximallyRealPatch,
    approximation_table,
    exponential_oracle,
    gauss_approx,
)


class TestPatches:
    """Tests for the patch parameterizations."""

    def test_real_box_is_maximally_real(self):
        assert MaximallyRealPatch.real_box(2).is_maximally_real()

    def test_curved_patch_is_maximally_real(self):
        patch = MaximallyRealPatch.curved(1, 0.2, 3.0)
        assert patch.is_maximally_real()
        s = np.array([[0.5]])
        assert patch(s)[0, 0] == pytest.approx(0.5 + 0.05j)

    def test_complex_line_is_not_maximally_real(self):
        patch = MaximallyRealPatch.affine(np.array([[1.0, 1j], [1j, -1.0]]))
        assert not patch.is_maximally_real()
        with pytest.raises(PreconditionError, match="not maximally real"):
            gauss_approx(lambda z: np.ones(z.shape[0]), patch, np.zeros(2), 10.0)

    def test_non_square_matrix_rejected(self):
        with pytest.raises(PreconditionError, match="square"):
            MaximallyRealPatch(np.ones((1, 2)))

    def test_shift_within_bound(self):
        patch = MaximallyRealPatch.curved(1).shifted(np.array([0.05j]))
        assert patch.offset[0] == 0.05j
        assert patch.is_maximally_real()

    def test_shift_beyond_bound(self):
        with pytest.raises(PreconditionError, match="C1 bound"):
            MaximallyRealPatch.curved(1).shifted(np.array([0.2]))

    def test_locate_recovers_parameter(self):
        patch = MaximallyRealPatch.curved(1, 0.2, 3.0)
        s, distance = patch.locate(patch(np.array([0.7])))
        assert s[0] == pytest.approx(0.7, abs=1e-8)
        assert distance < 1e-10


class TestGaussApprox:
    """Tests for the quadrature of the Gaussian kernel."""

    def test_real_line_moments(self):
        rows = moment_checks(0.3, DEFAULT_TAUS)
        assert len(rows) == 3 * len(DEFAULT_TAUS)
        assert max(row["error"] for row in rows) < MOMENT_TOLERANCE

    def test_exponential_on_curved_patch(self):
        patch = MaximallyRealPatch.curved(1, 0.2, 3.0)
        zhat = patch(np.array([0.1]))
        a = np.array([1.0 + 0j])
        for tau in (10.0, 160.0):
            value = gauss_approx(lambda z: np.exp(z @ a), patch, zhat, tau)
            assert abs(value - exponential_oracle(a, zhat, tau)) < 1e-8

    def test_exponential_on_plane(self):
        patch = MaximallyRealPatch.real_box(2, 3.0)
        zhat = np.array([0.2, -0.1], dtype=complex)
        a = np.array([1.0, 0.5j])
        value = gauss_approx(lambda z: np.exp(z @ a), patch, zhat, 40.0)
        assert abs(value - exponential_oracle(a, zhat, 40.0)) < 1e-8

    def test_exponential_on_shifted_patch(self):
        patch = MaximallyRealPatch.curved(1, 0.2, 3.0).shifted(np.array([0.05j]))
        zhat = patch(np.array([0.1]))
        a = np.array([1.0 + 0j])
        value = gauss_approx(lambda z: np.exp(z @ a), patch, zhat, 40.0)
        assert abs(value - exponential_oracle(a, zhat, 40.0)) < 1e-8

    def test_nonpositive_tau(self):
        patch = MaximallyRealPatch.real_box(1)
        for tau in (0.0, -1.0):
            with pytest.raises(PreconditionError, match="tau must be positive"):
                gauss_approx(lambda z: z[:, 0], patch, np.zeros(1), tau)

    def test_order_disagreement(self):
        # Order 3 has a node at the kernel peak, order 6 has none near it.
        patch = MaximallyRealPatch.real_box(1, 8.0)
        with pytest.raises(QuadratureError) as excinfo:
            gauss_approx(lambda z: np.ones(z.shape[0]), patch, np.zeros(1), 640.0, order=3, window=False)
        assert excinfo.value.details["order"] == 3


class TestApproximationTable:
    """Tests for the convergence table."""

    @classmethod
    def setup_class(cls):
        cls.patch = MaximallyRealPatch.curved(1, 0.2, 3.0)
        cls.zhat = cls.patch(np.array([0.1]))
        cls.a = np.array([1.0 + 0j])
        cls.table = approximation_table(
            lambda z: np.exp(z @ cls.a),
            cls.patch,
            cls.zhat,
            oracle=lambda tau: exponential_oracle(cls.a, cls.zhat, tau),
        )

    def test_errors_decrease(self):
        assert self.table.monotone
        assert self.table.errors[-1] < self.table.errors[0] / 16

    def test_error_rate(self):
        # |exp(a.a / 4 tau) - 1| ~ 1 / (4 tau)
        for tau, error in zip(self.table.taus, self.table.errors):
            assert error == pytest.approx(abs(np.exp(1.0 / (4.0 * tau)) - 1.0) * abs(np.exp(self.zhat[0])), rel=1e-4)

    def test_oracle_errors(self):
        assert max(self.table.oracle_errors) < 1e-8

    def test_rows_match_header(self):
        header = self.table.header()
        assert header[-1] == "oracle_error"
        assert all(len(row) == len(header) for row in self.table.rows())
        assert self.table.to_dict()["monotone"] is True
