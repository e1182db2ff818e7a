"""Smoothed step function built from the bump integrand exp(-1/y - 1/(1-y)).

The step s maps [0, 1] onto [0, 1], is flat to all orders at both endpoints,
and is normalized so that s(1) = 1.  Order-0 evaluation interpolates a
precomputed quadrature table with a monotone cubic scheme; orders 1-3 use the
analytic integrand, so derivative values carry no table error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import PchipInterpolator

# exp underflows to 0 below this exponent; computing the exponent first and
# clamping avoids 1/0 overflow at the interval endpoints
_EXP_FLOOR = -745.0

MIN_QUADRATURE_POINTS = 64
# dense enough that the interpolated order-0 values are consistent with the
# analytic derivatives to ~1e-9, which downstream curvature checks rely on
DEFAULT_QUADRATURE_POINTS = 131072


class QuadratureError(RuntimeError):
    """The evaluation grid produced a non-finite integrand sample."""


class LadderUnderflowError(ArithmeticError):
    """A ratio-ladder point reached the flat tail where s' or s'' underflows."""


def bump_integrand(x):
    """exp(-1/x - 1/(1-x)) on (0, 1), exactly 0 outside."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < 1.0)
    safe = np.where(inside, x, 0.5)
    with np.errstate(over="ignore", divide="ignore"):
        expo = -1.0 / safe - 1.0 / (1.0 - safe)
    out = np.where(inside & (expo > _EXP_FLOOR), np.exp(np.maximum(expo, _EXP_FLOOR)), 0.0)
    return out if out.ndim else float(out)


def _exponent_d1(x):
    # d/dx of (-1/x - 1/(1-x))
    return 1.0 / x**2 - 1.0 / (1.0 - x) ** 2


def _exponent_d2(x):
    return -2.0 / x**3 - 2.0 / (1.0 - x) ** 3


@dataclass(frozen=True, eq=False)
class SmoothStep:
    """Normalized step function with its quadrature table.

    ``normalization`` is the constant C with s(x) = C * integral of the bump
    integrand over [0, x]; the table holds dense monotone (x, s(x)) samples.
    Instances are immutable and safe for concurrent use.
    """

    normalization: float
    table_x: np.ndarray
    table_s: np.ndarray
    _interp: PchipInterpolator = field(repr=False)

    def __call__(self, x, order: int = 0):
        return eval_step(self, x, order)


def build_step(quadrature_points: int = DEFAULT_QUADRATURE_POINTS) -> SmoothStep:
    """Build a SmoothStep from a composite-Simpson table with the given resolution.

    ``quadrature_points`` is the number of cells (rounded up to even); the
    table then has one more node.  Must be at least 64.
    """
    if quadrature_points < MIN_QUADRATURE_POINTS:
        raise ValueError(
            f"quadrature_points must be >= {MIN_QUADRATURE_POINTS}, got {quadrature_points}")
    n_cells = int(quadrature_points)
    if n_cells % 2:
        n_cells += 1
    xs = np.linspace(0.0, 1.0, n_cells + 1)
    fs = bump_integrand(xs)
    if not np.all(np.isfinite(fs)):
        raise QuadratureError("non-finite integrand sample on the evaluation grid")
    cum = cumulative_simpson(fs, x=xs, initial=0.0)
    # the parabolic rule can dip by ~1e-42 where the integrand grows through
    # hundreds of orders of magnitude per cell; clamp to restore monotonicity
    cum = np.maximum.accumulate(np.maximum(cum, 0.0))
    total = cum[-1]
    if not (np.isfinite(total) and total > 0.0):
        raise QuadratureError("quadrature of the bump integrand failed")
    normalization = 1.0 / total
    table = cum * normalization
    table[0] = 0.0
    table[-1] = 1.0
    if np.any(np.diff(table) < 0.0):
        raise QuadratureError("quadrature table is not monotone")
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        # scipy's harmonic-mean slope estimate overflows harmlessly on the
        # denormal increments in the flat tails
        interp = PchipInterpolator(xs, table, extrapolate=False)
    return SmoothStep(normalization=normalization, table_x=xs, table_s=table, _interp=interp)


def eval_step(s: SmoothStep, x, order: int = 0):
    """Evaluate s or one of its first three derivatives; total on the reals.

    Order 0 clamps to 0 below and 1 above the unit interval; orders 1-3 are
    exactly 0 outside (0, 1) and come from the closed-form integrand.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError(f"order must be 0, 1, 2 or 3, got {order}")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    if order == 0:
        out = np.asarray(s._interp(np.clip(x, 0.0, 1.0)), dtype=float)
    else:
        f = np.asarray(s.normalization * np.asarray(bump_integrand(x)), dtype=float)
        if order == 1:
            out = f
        else:
            # wherever f underflowed to 0 the true derivative is 0 as well;
            # mask before multiplying so 0 * inf cannot produce nan
            inside = (x > 0.0) & (x < 1.0) & (f != 0.0)
            safe = np.where(inside, x, 0.5)
            if order == 2:
                out = np.where(inside, f * _exponent_d1(safe), 0.0)
            else:
                out = np.where(inside, f * (_exponent_d1(safe) ** 2 + _exponent_d2(safe)), 0.0)
    return float(out) if scalar else out


@dataclass(frozen=True)
class RatioReport:
    """Ladder evidence for the positive limits of s/(s'*x^2) and s'/(s''*x^2)."""

    ladder: tuple
    ratio_step: tuple
    ratio_slope: tuple
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def check_limit_ratios(s: SmoothStep, ladder) -> RatioReport:
    """Evaluate both limit ratios along a decreasing ladder of points.

    PASS means every ratio is positive and the successive differences of both
    sequences shrink in magnitude, numerical evidence that the limits exist
    and are positive.  s(x) is evaluated here by direct adaptive quadrature of
    the integrand; the table cannot resolve relative values this close to 0.
    """
    ladder = tuple(float(x) for x in ladder)
    if len(ladder) < 6:
        raise ValueError(f"ladder must have at least 6 points, got {len(ladder)}")
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be strictly decreasing")
    if ladder[0] > 0.25:
        raise ValueError("ladder must stay within (0, 1/4]")

    ratio_step = []
    ratio_slope = []
    for x in ladder:
        sp = eval_step(s, x, 1)
        spp = eval_step(s, x, 2)
        if sp == 0.0 or spp == 0.0:
            raise LadderUnderflowError(
                f"s' or s'' underflows at x={x!r}; shorten the ladder")
        val, _ = quad(lambda y: bump_integrand(y), 0.0, x, epsabs=0.0,
                      epsrel=1e-12, limit=200)
        ratio_step.append(s.normalization * val / (sp * x * x))
        ratio_slope.append(sp / (spp * x * x))

    def shrinking(seq):
        diffs = np.abs(np.diff(seq))
        return bool(np.all(np.diff(diffs) < 0.0))

    ok = (all(v > 0.0 for v in ratio_step)
          and all(v > 0.0 for v in ratio_slope)
          and shrinking(ratio_step)
          and shrinking(ratio_slope))
    return RatioReport(ladder=ladder, ratio_step=tuple(ratio_step),
                       ratio_slope=tuple(ratio_slope),
                       verdict="PASS" if ok else "FAIL")


def default_ratio_ladder(length: int = 6, start: float = 0.25) -> tuple:
    """Halving ladder start, start/2, ... used by the step self-check."""
    return tuple(start * 0.5**k for k in range(length))
