"""Step-function construction, derivatives, and the limit-ratio ladder."""

import math

import numpy as np
import pytest

from handlepsc.stepfn import (LadderUnderflowError, build_step,
                              check_limit_ratios, default_ratio_ladder,
                              eval_step)

# adaptive-quadrature oracle values for the bump integral, pinned ahead of the
# table build: integral of exp(-1/y - 1/(1-y)) over [0, 1] and its reciprocal
BUMP_INTEGRAL = 0.007029858406609656
NORMALIZATION = 142.25037577709588


class TestBuildStep:
    def test_normalization_is_forced(self, step_1024):
        assert eval_step(step_1024, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_midpoint(self, step_1024):
        assert eval_step(step_1024, 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_normalization_matches_quadrature_oracle(self, step_1024, step):
        assert step_1024.normalization == pytest.approx(NORMALIZATION, rel=1e-12)
        assert step.normalization == pytest.approx(NORMALIZATION, rel=1e-12)

    def test_rejects_coarse_grids(self):
        with pytest.raises(ValueError):
            build_step(63)

    def test_table_invariants(self, step_1024):
        assert step_1024.table_s[0] == 0.0
        assert step_1024.table_s[-1] == 1.0
        assert np.all(np.diff(step_1024.table_s) >= 0.0)
        assert np.all(np.isfinite(step_1024.table_s))


class TestEvalStep:
    def test_endpoint_derivatives_vanish(self, step_1024):
        for order in (1, 2, 3):
            assert eval_step(step_1024, 0.0, order) == 0.0
            assert eval_step(step_1024, 1.0, order) == 0.0

    def test_clamping_outside_unit_interval(self, step_1024):
        assert eval_step(step_1024, -0.5) == 0.0
        assert eval_step(step_1024, 1.5) == 1.0
        for order in (1, 2, 3):
            assert eval_step(step_1024, -0.5, order) == 0.0
            assert eval_step(step_1024, 1.5, order) == 0.0

    def test_slope_at_half_matches_closed_form(self, step_1024):
        expected = NORMALIZATION * math.exp(-4.0)
        assert eval_step(step_1024, 0.5, 1) == pytest.approx(expected, rel=1e-12)

    def test_second_derivative_vanishes_at_half(self, step_1024):
        # the slope is symmetric about 1/2, so its maximum sits there
        assert eval_step(step_1024, 0.5, 2) == 0.0

    def test_rejects_bad_order(self, step_1024):
        with pytest.raises(ValueError):
            eval_step(step_1024, 0.5, 4)

    def test_vectorized_matches_scalar(self, step_1024):
        xs = np.linspace(-0.2, 1.2, 29)
        for order in (0, 1, 2, 3):
            vec = eval_step(step_1024, xs, order)
            scal = [eval_step(step_1024, float(x), order) for x in xs]
            np.testing.assert_array_equal(vec, scal)


class TestStepProperties:
    def test_complement_symmetry(self, step):
        """s(x) + s(1 - x) = 1 everywhere on the unit interval."""
        rng = np.random.default_rng(42)
        x = np.concatenate([np.linspace(0.0, 1.0, 501), rng.uniform(0, 1, 2000)])
        total = eval_step(step, x) + eval_step(step, 1.0 - x)
        np.testing.assert_allclose(total, 1.0, atol=1e-10)

    def test_slope_matches_finite_differences(self, step):
        """Analytic order 1 against Richardson central differences of order 0."""
        x = np.linspace(0.0, 1.0, 102)[1:-1]
        h = 1e-3

        def fd(delta):
            return (eval_step(step, x + delta) - eval_step(step, x - delta)) / (2 * delta)

        numeric = (4.0 * fd(h / 2) - fd(h)) / 3.0
        np.testing.assert_allclose(eval_step(step, x, 1), numeric, atol=1e-6)

    def test_monotone_on_table(self, step):
        assert np.all(np.diff(step.table_s) >= 0.0)

    def test_positive_slope_inside(self, step):
        x = np.linspace(0.05, 0.95, 200)
        assert np.all(eval_step(step, x, 1) > 0.0)


class TestLimitRatios:
    def test_default_ladder_passes(self, step):
        report = check_limit_ratios(step, default_ratio_ladder())
        assert report.verdict == "PASS"
        assert all(v > 0.0 for v in report.ratio_step)
        assert all(v > 0.0 for v in report.ratio_slope)

    def test_differences_shrink(self, step):
        report = check_limit_ratios(step, default_ratio_ladder(length=8))
        for seq in (report.ratio_step, report.ratio_slope):
            diffs = np.abs(np.diff(seq))
            assert np.all(np.diff(diffs) < 0.0)

    def test_ladder_with_zero_blows_up(self, step):
        with pytest.raises(LadderUnderflowError):
            check_limit_ratios(step, (0.25, 0.12, 0.06, 0.03, 0.015, 0.0))

    def test_ladder_reaching_flat_tail_blows_up(self, step):
        # below ~1/700 the slope underflows to exact zero
        ladder = tuple(1e-3 * 0.5**k for k in range(6))
        with pytest.raises(LadderUnderflowError):
            check_limit_ratios(step, ladder)

    def test_short_ladder_rejected(self, step):
        with pytest.raises(ValueError):
            check_limit_ratios(step, (0.25,))

    def test_non_decreasing_ladder_rejected(self, step):
        with pytest.raises(ValueError):
            check_limit_ratios(step, (0.25, 0.25, 0.1, 0.05, 0.02, 0.01))

    def test_ladder_above_quarter_rejected(self, step):
        with pytest.raises(ValueError):
            check_limit_ratios(step, (0.3, 0.2, 0.1, 0.05, 0.02, 0.01))
