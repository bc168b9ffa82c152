import numpy as np
import pytest

from udwmi import (
    DomainError,
    PairConfig,
    correlation_equal,
    correlation_general_result,
    correlation_s_only,
    detector_from_accel_radius,
    trajectory_point,
    wightman_boundary,
    wightman_free,
)

# Frozen expected values come from an independent mpmath implementation of
# the reduced single-integral form (50 significant digits; dps-30 and
# dps-50 runs agree to 25+ digits).


def pair(accel, radius, sep, dz=None, gap_a=0.1, gap_b=0.1):
    da = detector_from_accel_radius(gap_a, accel, radius)
    db = detector_from_accel_radius(gap_b, accel, radius)
    return PairConfig(det_a=da, det_b=db, sep=sep, dz=dz)


class TestWightman:
    def test_free_hermiticity(self):
        d = detector_from_accel_radius(0.1, 2.0, 0.5)
        p1 = trajectory_point(d, 0.3, 0.7)
        p2 = trajectory_point(d, 1.1, -0.2)
        w12 = wightman_free(p1, p2, 1e-3)
        w21 = wightman_free(p2, p1, 1e-3)
        assert np.isclose(w12, np.conj(w21), rtol=1e-12)

    def test_boundary_is_free_minus_image(self):
        d = detector_from_accel_radius(0.1, 2.0, 0.5)
        p1 = trajectory_point(d, 0.3, 0.7)
        p2 = trajectory_point(d, 1.1, -0.2)
        from udwmi import SpacetimePoint

        mirror2 = SpacetimePoint(t=p2.t, x=p2.x, y=p2.y, z=-p2.z)
        expected = wightman_free(p1, p2, 1e-3) - wightman_free(p1, mirror2, 1e-3)
        assert np.isclose(wightman_boundary(p1, p2, 1e-3), expected, rtol=1e-12)

    def test_vanishes_on_the_mirror(self):
        # Dirichlet condition: put the second point on the plane
        d = detector_from_accel_radius(0.1, 2.0, 0.5)
        p1 = trajectory_point(d, 0.3, 0.7)
        p2 = trajectory_point(d, 0.0, -0.2)
        assert abs(wightman_boundary(p1, p2, 1e-3)) < 1e-15


class TestEqualKinematics:
    def test_frozen_free_and_image_parts(self):
        r = correlation_equal(pair(5.0, 0.02, sep=1.0, dz=0.1), tol=1e-10)
        assert np.isclose(r.c_free.real, 0.05307594501528353, rtol=1e-8)
        assert np.isclose(r.c_boundary.real, 0.049269391167126248, rtol=1e-8)
        assert np.isclose(r.c_total, r.c_free - r.c_boundary, rtol=1e-12)
        assert r.converged

    def test_equal_gaps_give_real_correlation(self):
        # the odd part of the numerator integrates to zero against an even
        # denominator and the residue pair is real, so Im C vanishes
        # identically for matching kinematics
        for sep in (0.5, 1.0, 4.0):
            r = correlation_equal(pair(5.0, 0.02, sep=sep, dz=0.1), tol=1e-10)
            assert abs(r.c_total.imag) < 1e-10 * max(abs(r.c_total), 1e-3)

    def test_free_space_has_no_image_part(self):
        r = correlation_equal(pair(5.0, 0.02, sep=1.0), tol=1e-10)
        assert r.c_boundary == 0.0
        assert np.isclose(r.c_total.real, 0.05307594501528353, rtol=1e-8)

    def test_far_boundary_image_part(self):
        # image separation L + 2 dz = 101: the pole leaves the Gaussian
        # support and only an algebraic tail survives
        r = correlation_equal(pair(5.0, 0.02, sep=1.0, dz=50.0), tol=1e-10)
        assert np.isclose(r.c_boundary.real, 1.5449920273105971e-5, rtol=1e-6)

    def test_frozen_detuned_value(self):
        r = correlation_equal(pair(5.0, 0.02, sep=1.0, gap_b=1.1), tol=1e-10)
        assert np.isclose(r.c_free.real, 0.014467020484832148, rtol=1e-8)

    def test_detuning_suppression_factor(self):
        # the gap difference enters only through exp(-dgap^2/4) and the
        # oscillation wavenumber; the Gaussian prefactor dominates
        base = abs(correlation_equal(pair(0.1, 0.02, sep=1.0), tol=1e-11).c_total)
        detuned = abs(
            correlation_equal(pair(0.1, 0.02, sep=1.0, gap_b=2.1), tol=1e-11).c_total
        )
        assert detuned < np.exp(-(2.0**2) / 4) * base

    def test_frozen_large_radius_value(self):
        r = correlation_equal(pair(0.1, 10.0, sep=2.0), tol=1e-10)
        assert np.isclose(r.c_free.real, 0.037549137046217741, rtol=1e-8)

    def test_frozen_static_value(self):
        # omega = 0 pair: the denominator reduces to L^2 - s^2 with poles
        # exactly at the light cone
        r = correlation_equal(pair(0.0, 1.0, sep=2.0), tol=1e-10)
        assert np.isclose(r.c_free.real, 0.037602960559004461, rtol=1e-8)

    def test_label_swap_invariance(self):
        da = detector_from_accel_radius(0.1, 5.0, 0.02)
        db = detector_from_accel_radius(0.3, 5.0, 0.02)
        fwd = correlation_equal(PairConfig(det_a=da, det_b=db, sep=1.0, dz=0.1),
                                tol=1e-10)
        rev = correlation_equal(PairConfig(det_a=db, det_b=da, sep=1.0, dz=0.1),
                                tol=1e-10)
        assert np.isclose(abs(fwd.c_total), abs(rev.c_total), rtol=1e-9)

    def test_decays_with_separation(self):
        vals = [
            abs(correlation_equal(pair(0.1, 0.02, sep=s), tol=1e-10).c_total)
            for s in (1.0, 3.0, 6.0, 9.0)
        ]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_mismatched_kinematics_rejected(self):
        da = detector_from_accel_radius(0.1, 5.0, 0.02)
        db = detector_from_accel_radius(0.1, 1.0, 0.02)
        with pytest.raises(DomainError):
            correlation_equal(PairConfig(det_a=da, det_b=db, sep=1.0))


class TestReductionCrossCheck:
    def test_s_only_matches_equal(self):
        # same reduction done in two algebraic arrangements
        for cfg in (pair(5.0, 0.02, sep=1.0, dz=0.1),
                    pair(0.1, 10.0, sep=2.0),
                    pair(5.0, 0.02, sep=1.0, gap_b=1.1)):
            a = correlation_equal(cfg, tol=1e-11).c_total
            b = correlation_s_only(cfg, tol=1e-11)
            assert np.isclose(a.real, b.real, rtol=1e-6, atol=1e-13)
            assert np.isclose(a.imag, b.imag, rtol=1e-6, atol=1e-13)


class TestDefinitionOracle:
    # the oracle evaluates the defining double integral at three regulator
    # values and extrapolates; independent of the reduction
    def test_boundary_point(self):
        cfg = pair(5.0, 0.02, sep=1.0, dz=0.1)
        fast = correlation_equal(cfg, tol=1e-10)
        est = correlation_general_result(cfg, tol=1e-6)
        assert est.monotone
        assert abs(est.value - fast.c_total) < 1e-3 * abs(fast.c_total)

    def test_unequal_gamma_pair(self):
        # different radii force the general route; the pair state must
        # still produce a finite correlation with a sane magnitude
        da = detector_from_accel_radius(0.1, 5.0, 0.02)
        db = detector_from_accel_radius(0.1, 5.0, 0.03)
        cfg = PairConfig(det_a=da, det_b=db, sep=1.0, dz=0.1)
        assert not cfg.equal_kinematics
        est = correlation_general_result(cfg, tol=1e-5)
        assert np.isfinite(est.value.real) and np.isfinite(est.value.imag)
        assert 0.0 < abs(est.value) < 1.0


class TestPairValidation:
    def test_negative_sep_rejected(self):
        with pytest.raises(DomainError):
            pair(5.0, 0.02, sep=-1.0)

    def test_nonpositive_dz_rejected(self):
        with pytest.raises(DomainError):
            pair(5.0, 0.02, sep=1.0, dz=0.0)

    def test_coincident_worldlines_rejected(self):
        with pytest.raises(DomainError):
            pair(5.0, 0.02, sep=0.0)

    def test_equal_kinematics_flag(self):
        assert pair(5.0, 0.02, sep=1.0).equal_kinematics
        da = detector_from_accel_radius(0.1, 5.0, 0.02)
        db = detector_from_accel_radius(0.1, 4.0, 0.02)
        assert not PairConfig(det_a=da, det_b=db, sep=1.0).equal_kinematics
