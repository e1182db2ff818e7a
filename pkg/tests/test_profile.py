"""Profile construction, jets, boundary conditions, serialization."""

import dataclasses
import math

import numpy as np
import pytest

from handlepsc.profile import (HALF_PI, HandleProfile, Variant,
                               check_boundary_conditions, eval_jet,
                               load_params, make_profile, profile_from_params,
                               profile_to_params, save_params)
from conftest import REF_EPS1, REF_R0, REF_T, REF_THETA0

NORMALIZATION = 142.25037577709588


class TestMakeProfile:
    def test_reference_parameters_are_valid(self, step):
        p = make_profile(Variant.CLASSIC_R0, 0.25, 10.0, 0.8,
                         (HALF_PI - 0.8) / 100.0, step)
        assert p.plateau == 0.25
        assert p.amplitude == 1.0

    def test_r0_above_half_rejected(self, step):
        with pytest.raises(ValueError):
            make_profile(Variant.CLASSIC_R0, 0.6, 10.0, 0.8, REF_EPS1, step)

    def test_wide_eps1_rejected(self, step):
        with pytest.raises(ValueError):
            make_profile(Variant.CLASSIC_R0, 0.25, 10.0, 0.8,
                         (HALF_PI - 0.8) / 10.0, step)

    def test_negative_T_rejected(self, step):
        with pytest.raises(ValueError):
            make_profile(Variant.CLASSIC_R0, 0.25, -1.0, 0.8, REF_EPS1, step)

    def test_theta0_range_enforced(self, step):
        with pytest.raises(ValueError):
            make_profile(Variant.CLASSIC_R0, 0.25, 10.0, HALF_PI, REF_EPS1, step)

    def test_radius_one_amplitude(self, step):
        p = make_profile(Variant.RADIUS_ONE_M, 4.0, 1.0, 0.8, REF_EPS1, step)
        assert p.plateau == 1.0
        assert p.amplitude == 4.0
        with pytest.raises(ValueError):
            make_profile(Variant.RADIUS_ONE_M, -1.0, 1.0, 0.8, REF_EPS1, step)
        # zero amplitude is the no-surgery baseline and stays constructible
        assert make_profile(Variant.RADIUS_ONE_M, 0.0, 1.0, 0.8, REF_EPS1,
                            step).amplitude == 0.0


class TestEvalJet:
    def test_flat_region_jet(self, reference_profile):
        jet = eval_jet(reference_profile, REF_THETA0 / 2.0, -2.0 * REF_T)
        assert jet.r == REF_R0
        assert (jet.r_theta, jet.r_t, jet.r_thetatheta, jet.r_thetat, jet.r_tt) \
            == (0.0, 0.0, 0.0, 0.0, 0.0)

    def test_full_transition_corner(self, reference_profile):
        jet = eval_jet(reference_profile, HALF_PI, 2.0 * REF_T)
        assert jet.r == REF_R0 - 1.0
        assert jet.r < 0.0
        assert (jet.r_theta, jet.r_t, jet.r_thetatheta, jet.r_thetat, jet.r_tt) \
            == (0.0, 0.0, 0.0, 0.0, 0.0)

    def test_plateau_bit_identical_across_calls(self, reference_profile):
        a = eval_jet(reference_profile, 0.3, -25.0).r
        b = eval_jet(reference_profile, 0.3, -25.0).r
        assert a == b == REF_R0

    def test_mixed_partial_at_support_centers(self, reference_profile):
        """r_thetat at the two step midpoints is a product of pinned slopes."""
        theta_mid = (REF_THETA0 + HALF_PI) / 2.0
        width = HALF_PI - REF_THETA0 - 2.0 * REF_EPS1
        slope = NORMALIZATION * math.exp(-4.0)
        expected = -(slope / (2.0 * REF_T)) * (slope / width)
        jet = eval_jet(reference_profile, theta_mid, 0.0)
        assert jet.r_thetat == pytest.approx(expected, rel=1e-10)

    def test_jet_matches_finite_differences(self, reference_profile):
        """Orders 1-2 against Richardson differences of order 0 at 200 points."""
        rng = np.random.default_rng(42)
        lo, hi = reference_profile.q_support
        theta = rng.uniform(lo, hi, 200)
        t = rng.uniform(-REF_T, REF_T, 200)
        h = 1e-3

        def r_of(th, tt):
            return np.asarray(eval_jet(reference_profile, th, tt).r)

        def rich(f):
            return (4.0 * f(h / 2.0) - f(h)) / 3.0

        jet = eval_jet(reference_profile, theta, t)
        d_theta = rich(lambda d: (r_of(theta + d, t) - r_of(theta - d, t)) / (2 * d))
        d_t = rich(lambda d: (r_of(theta, t + d) - r_of(theta, t - d)) / (2 * d))
        d_tt = rich(lambda d: (r_of(theta, t + d) - 2 * r_of(theta, t)
                               + r_of(theta, t - d)) / d**2)
        d_thth = rich(lambda d: (r_of(theta + d, t) - 2 * r_of(theta, t)
                                 + r_of(theta - d, t)) / d**2)
        d_tht = rich(lambda d: (r_of(theta + d, t + d) - r_of(theta + d, t - d)
                                - r_of(theta - d, t + d) + r_of(theta - d, t - d))
                     / (4 * d**2))
        np.testing.assert_allclose(jet.r_theta, d_theta, atol=1e-6)
        np.testing.assert_allclose(jet.r_t, d_t, atol=1e-6)
        np.testing.assert_allclose(jet.r_thetatheta, d_thth, atol=1e-6)
        np.testing.assert_allclose(jet.r_tt, d_tt, atol=1e-6)
        np.testing.assert_allclose(jet.r_thetat, d_tht, atol=1e-6)

    def test_vanishing_gradient_forces_plateau_values(self, reference_profile):
        """Where both slopes vanish, r sits at one of the two plateau levels."""
        theta = np.linspace(0.0, HALF_PI, 201)
        t = np.linspace(-2 * REF_T, 2 * REF_T, 201)
        jet = eval_jet(reference_profile, theta[:, None], t[None, :])
        mask = (np.asarray(jet.r_theta) == 0.0) & (np.asarray(jet.r_t) == 0.0)
        r = np.asarray(np.broadcast_to(jet.r, mask.shape))[mask]
        near_levels = np.minimum(np.abs(r - REF_R0), np.abs(r - (REF_R0 - 1.0)))
        assert np.max(near_levels) < 1e-12


class TestBoundaryConditions:
    def test_reference_profile_passes_all_six(self, reference_profile):
        verdicts = check_boundary_conditions(reference_profile)
        assert [v.passed for v in verdicts] == [True] * 6

    def test_radius_one_profile_passes_all_six(self, step):
        p = make_profile(Variant.RADIUS_ONE_M, 4.0, 1.0, 0.8, REF_EPS1, step)
        verdicts = check_boundary_conditions(p, (128, 128))
        assert [v.passed for v in verdicts] == [True] * 6

    def test_small_grid_rejected(self, reference_profile):
        with pytest.raises(ValueError):
            check_boundary_conditions(reference_profile, (64, 64))

    def test_offset_one_fault_hits_plateau_corner(self, reference_profile):
        """r0 = 1 (validation bypassed) zeroes r where both slopes vanish."""
        broken = dataclasses.replace(reference_profile, r0=1.0)
        verdicts = {v.item: v for v in check_boundary_conditions(broken)}
        assert not verdicts[6].passed
        theta_w, t_w = verdicts[6].witness
        assert theta_w >= HALF_PI - broken.eps1 and t_w >= broken.t_half_width
        # the corner value r = 0 also stops being strictly negative at the pole
        assert not verdicts[4].passed
        for item in (1, 2, 3, 5):
            assert verdicts[item].passed

    def test_constant_zero_q_fault_fails_pole_sign(self, reference_profile):
        class ZeroQ(HandleProfile):
            def q_value(self, theta, order=0):
                return np.zeros_like(np.asarray(theta, dtype=float))

        broken = ZeroQ(variant=reference_profile.variant, r0=reference_profile.r0,
                       big_m=reference_profile.big_m,
                       t_half_width=reference_profile.t_half_width,
                       theta0=reference_profile.theta0, eps1=reference_profile.eps1,
                       step=reference_profile.step)
        verdicts = {v.item: v for v in check_boundary_conditions(broken)}
        assert not verdicts[4].passed
        for item in (1, 2, 3, 5, 6):
            assert verdicts[item].passed


class TestSerialization:
    def test_round_trip(self, reference_profile, tmp_path):
        params = profile_to_params(reference_profile)
        path = tmp_path / "profile.params"
        save_params(params, path)
        loaded = load_params(path)
        rebuilt = profile_from_params(loaded, step=reference_profile.step)
        assert rebuilt.variant == reference_profile.variant
        assert rebuilt.r0 == reference_profile.r0
        assert rebuilt.t_half_width == reference_profile.t_half_width
        assert rebuilt.theta0 == reference_profile.theta0
        assert rebuilt.eps1 == reference_profile.eps1

    def test_comments_and_blanks_ignored(self, tmp_path):
        path = tmp_path / "p.params"
        path.write_text("# heading\n\nvariant = classic_r0 # inline\nr0 = 0.2\n"
                        "T = 5\ntheta0 = 0.9\neps1 = 0.005\n")
        params = load_params(path)
        assert params["variant"] == "classic_r0"
        assert params["r0"] == "0.2"

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "p.params"
        path.write_text("variant classic_r0\n")
        with pytest.raises(ValueError):
            load_params(path)
