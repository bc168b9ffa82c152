import numpy as np
import pytest
from hypothesis import given, strategies as st

from udwmi import (
    DomainError,
    detector_from_accel_radius,
    omega_from_accel_radius,
    trajectory_point,
)


class TestDerivedQuantities:
    def test_unit_accel_unit_radius(self):
        det = detector_from_accel_radius(0.1, 1.0, 1.0)
        assert np.isclose(det.omega, 0.70710678118654752, rtol=1e-15)
        assert np.isclose(det.speed, 0.70710678118654752, rtol=1e-15)
        assert np.isclose(det.gamma, 1.4142135623730951, rtol=1e-15)

    def test_fast_small_orbit(self):
        det = detector_from_accel_radius(0.1, 5.0, 0.02)
        assert np.isclose(det.omega, 15.075567228888181, rtol=1e-15)
        assert np.isclose(det.speed, 0.30151134457776362, rtol=1e-15)
        # v^2 = aR/(1+aR) = 1/11, gamma = sqrt(11/10)
        assert np.isclose(det.gamma, 1.0488088481701515, rtol=1e-15)

    def test_slow_large_orbit(self):
        det = detector_from_accel_radius(0.1, 0.1, 10.0)
        assert np.isclose(det.omega, 0.070710678118654752, rtol=1e-15)
        assert np.isclose(det.gamma, 1.4142135623730951, rtol=1e-15)

    def test_zero_accel_is_static(self):
        det = detector_from_accel_radius(0.1, 0.0, 1.0)
        assert det.omega == 0.0
        assert det.speed == 0.0
        assert det.gamma == 1.0

    @given(
        accel=st.floats(min_value=1e-6, max_value=1e3),
        radius=st.floats(min_value=1e-6, max_value=1e3),
    )
    def test_accel_round_trip(self, accel, radius):
        # a = gamma^2 omega^2 R inverts the construction; the float error
        # grows like gamma^2 = 1 + aR through the cancellation in 1 - v^2
        det = detector_from_accel_radius(0.1, accel, radius)
        recon = det.gamma**2 * det.omega**2 * det.radius
        assert np.isclose(recon, accel, rtol=1e-13 * (1.0 + accel * radius) + 1e-12)

    @given(
        accel=st.floats(min_value=0.0, max_value=1e3),
        radius=st.floats(min_value=1e-6, max_value=1e3),
    )
    def test_speed_subluminal(self, accel, radius):
        det = detector_from_accel_radius(0.1, accel, radius)
        assert 0.0 <= det.speed < 1.0
        assert det.gamma >= 1.0

    def test_omega_matches_detector(self):
        assert omega_from_accel_radius(5.0, 0.02) == detector_from_accel_radius(
            0.1, 5.0, 0.02
        ).omega


class TestTrajectory:
    def test_frozen_point(self):
        det = detector_from_accel_radius(0.1, 1.0, 1.0)
        p = trajectory_point(det, 0.5, 0.3)
        assert np.isclose(p.t, 0.42426406871192851, rtol=1e-15)
        assert np.isclose(p.x, 0.95533648912560602, rtol=1e-15)
        assert np.isclose(p.y, 0.29552020666133958, rtol=1e-15)
        assert p.z == 0.5

    def test_starts_on_x_axis(self):
        det = detector_from_accel_radius(0.1, 2.0, 0.5)
        p = trajectory_point(det, 1.0, 0.0)
        assert p.t == 0.0
        assert p.x == 0.5
        assert p.y == 0.0

    def test_array_tau(self):
        det = detector_from_accel_radius(0.1, 5.0, 0.02)
        tau = np.linspace(-2.0, 2.0, 41)
        p = trajectory_point(det, 0.1, tau)
        assert p.t.shape == tau.shape
        np.testing.assert_allclose(p.x**2 + p.y**2, det.radius**2, rtol=1e-12)
        np.testing.assert_allclose(p.t, det.gamma * tau, rtol=1e-15)

    def test_static_detector_does_not_move(self):
        det = detector_from_accel_radius(0.1, 0.0, 1.0)
        p = trajectory_point(det, 0.7, 3.0)
        assert p.t == 3.0
        assert p.x == 1.0
        assert p.y == 0.0
        assert p.z == 0.7

    @given(tau=st.floats(min_value=-50.0, max_value=50.0))
    def test_lightlike_bound(self, tau):
        # the worldline is timelike: |dx| < dt between any event and start
        det = detector_from_accel_radius(0.1, 3.0, 0.4)
        p0 = trajectory_point(det, 0.0, 0.0)
        p1 = trajectory_point(det, 0.0, tau)
        spatial = np.hypot(p1.x - p0.x, p1.y - p0.y)
        assert spatial <= abs(p1.t - p0.t) + 1e-12


class TestValidation:
    def test_negative_radius_rejected(self):
        with pytest.raises(DomainError):
            detector_from_accel_radius(0.1, 1.0, -1.0)

    def test_zero_radius_rejected(self):
        with pytest.raises(DomainError):
            detector_from_accel_radius(0.1, 1.0, 0.0)

    def test_negative_accel_rejected(self):
        with pytest.raises(DomainError):
            detector_from_accel_radius(0.1, -0.5, 1.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            detector_from_accel_radius(np.nan, 1.0, 1.0)
        with pytest.raises(DomainError):
            detector_from_accel_radius(0.1, np.inf, 1.0)
