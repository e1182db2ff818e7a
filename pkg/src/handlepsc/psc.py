"""Scalar-curvature positivity certificates for the handle metrics.

Certificates here are grid certificates: a reported resolution, the minimum of
the (closed-form) scalar curvature over the admissible part of the band, and a
POSITIVE/NEGATIVE verdict.  The module also carries the supporting machinery:
the dominant term of the curvature numerator under joint (R, T) scaling, the
five-block inequality check behind it, a bisection search for the smallest
certified radius, the fiber-rescaling invariance probe, and the radius-one
variant scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import HALF_PI, HandleProfile, Variant, eval_jet, make_profile
from .stepfn import SmoothStep, build_step
from .tensor import (ChartPoint, FiberRescaledMetric, HandleMetric,
                     ricci_and_scalar, scalar_curvature_closed,
                     scalar_curvature_radius_one, tan_weighted)

REGION_TOLERANCE = -1e-12
RADIUS_ONE_FLOOR = 1e-6
DEFAULT_SCAN_GRID = (200, 200)
DEFAULT_REGION_GRID = (128, 128)


class BracketError(RuntimeError):
    """The positivity bracket for the radius search is unusable."""


# ---------------------------------------------------------------------------
# leading terms


def leading_term(p: HandleProfile, theta, t, R: float):
    """Dominant part of the curvature numerator under joint (R, T) scaling.

    Broadcasts over arrays; the tangent-weighted term is exactly 0 wherever
    the profile is constant in theta.
    """
    jet = eval_jet(p, theta, t)
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtt = jet.r_thetatheta, jet.r_tt
    R2 = R * R
    tn = tan_weighted(rth, theta)
    return (16.0 * r * r * R2 + 4.0 * R2 * R2 * rt * rt + 4.0 * R2 * rth * rth
            - 8.0 * R2 * R2 * r * rtt - 8.0 * R2 * r * rthth
            + 8.0 * r * R2 * tn)


def leading_term_radius_one(p: HandleProfile, theta, t):
    """Dominant part of the radius-one numerator for large R (R-independent)."""
    jet = eval_jet(p, theta, t)
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtt = jet.r_thetatheta, jet.r_tt
    tn = tan_weighted(rth, theta)
    return (16.0 * r * r - 8.0 * r * rtt + 8.0 * r * tn - 8.0 * r * rthth
            + 4.0 * rt * rt + 4.0 * rth * rth)


# ---------------------------------------------------------------------------
# block partition for the step-shape inequality


@dataclass(frozen=True)
class Rect:
    theta_lo: float
    theta_hi: float
    t_lo: float
    t_hi: float

    @property
    def is_empty(self) -> bool:
        return self.theta_lo >= self.theta_hi or self.t_lo >= self.t_hi

    def contains(self, theta: float, t: float) -> bool:
        return (self.theta_lo <= theta <= self.theta_hi
                and self.t_lo <= t <= self.t_hi)


@dataclass(frozen=True)
class RegionPartition:
    """Five rectangles tiling the margin band where r >= 0 can hold.

    The tiled set is {theta <= theta0 + eps1 + eps} union {t <= -T + eps}
    inside [theta0, pi/2] x [-T, T]: a vertical leg split at t = 0 into A
    (upper) and C, with D the corner strip below C, and the bottom strip split
    at theta = (3 theta0 + pi/2)/4 into E and B.
    """

    A: Rect
    B: Rect
    C: Rect
    D: Rect
    E: Rect
    theta0: float
    eps1: float
    eps: float
    T: float

    def blocks(self) -> dict:
        return {"A": self.A, "B": self.B, "C": self.C, "D": self.D, "E": self.E}


def region_partition(theta0: float, eps1: float, eps: float, T: float) -> RegionPartition:
    """Build the five blocks; eps must lie in (0, (pi/2 - theta0 - eps1)/2)."""
    bound = (HALF_PI - theta0 - eps1) / 2.0
    if not (0.0 < eps < bound):
        raise ValueError(f"eps must lie in (0, {bound:.6g}), got {eps}")
    leg_hi = theta0 + eps1 + eps
    split = (3.0 * theta0 + HALF_PI) / 4.0
    A = Rect(theta0, leg_hi, 0.0, T)
    C = Rect(theta0, leg_hi, -T + eps, 0.0)
    D = Rect(theta0, leg_hi, -T, -T + eps)
    E = Rect(min(leg_hi, split), split, -T, -T + eps)
    B = Rect(split, HALF_PI, -T, -T + eps)
    return RegionPartition(A=A, B=B, C=C, D=D, E=E,
                           theta0=theta0, eps1=eps1, eps=eps, T=T)


def step_inequality(p: HandleProfile, theta, t):
    """Q(theta) P''(t) + Q''(theta) P(t) - Q'(theta) P(t) tan(theta).

    Nonnegativity of this expression on the margin band is what makes the
    dominant curvature term positive; it broadcasts over arrays.
    """
    theta = np.asarray(theta, dtype=float)
    t = np.asarray(t, dtype=float)
    P = p.p_value(t, 0)
    P2 = p.p_value(t, 2)
    Q = p.q_value(theta, 0)
    Q1 = p.q_value(theta, 1)
    Q2 = p.q_value(theta, 2)
    return Q * P2 + Q2 * P - tan_weighted(Q1, theta) * P


def region_inequality_min(p: HandleProfile, region: Rect,
                          grid=DEFAULT_REGION_GRID) -> tuple:
    """Minimum of the step-shape inequality over a block grid.

    Returns (min value, argmin (theta, t)); an empty block reports +inf with
    no argmin.
    """
    n_theta, n_t = grid
    if n_theta < 2 or n_t < 2:
        raise ValueError(f"region grid must be at least 2x2, got {grid}")
    if region.is_empty:
        return math.inf, None
    theta = np.linspace(region.theta_lo, region.theta_hi, n_theta)
    t = np.linspace(region.t_lo, region.t_hi, n_t)
    lhs = step_inequality(p, theta[:, None], t[None, :])
    k = int(np.argmin(lhs))
    i, j = np.unravel_index(k, lhs.shape)
    return float(lhs[i, j]), (float(theta[i]), float(t[j]))


@dataclass(frozen=True)
class EpsilonReport:
    passed: bool
    epsilon: float | None
    minima: dict
    attempts: tuple
    tolerance: float = REGION_TOLERANCE


def default_epsilon_ladder(p: HandleProfile, length: int = 8) -> tuple:
    """Halving ladder below the admissible upper bound."""
    bound = (HALF_PI - p.theta0 - p.eps1) / 2.0
    return tuple(bound * 0.5**k for k in range(1, length + 1))


def find_epsilon(p: HandleProfile, ladder=None, grid=DEFAULT_REGION_GRID) -> EpsilonReport:
    """First ladder entry for which all five block minima clear the tolerance."""
    if ladder is None:
        ladder = default_epsilon_ladder(p)
    ladder = tuple(float(e) for e in ladder)
    if not ladder:
        raise ValueError("epsilon ladder must not be empty")
    attempts = []
    for eps in ladder:
        part = region_partition(p.theta0, p.eps1, eps, p.t_half_width)
        minima = {name: region_inequality_min(p, rect, grid)[0]
                  for name, rect in part.blocks().items()}
        attempts.append((eps, minima))
        if all(v >= REGION_TOLERANCE for v in minima.values()):
            return EpsilonReport(True, eps, minima, tuple(attempts))
    return EpsilonReport(False, None, attempts[-1][1], tuple(attempts))


# ---------------------------------------------------------------------------
# scalar-curvature scans


@dataclass(frozen=True)
class ScanReport:
    """Grid certificate: minimum scalar curvature over the admissible points."""

    variant: str
    R: float
    T: float
    theta0: float
    eps1: float
    r0: float
    big_m: float
    grid: tuple
    n_evaluated: int
    n_excluded: int
    min_scalar: float
    argmin: tuple
    verdict: str

    @property
    def positive(self) -> bool:
        return self.verdict == "POSITIVE"

    def to_json_dict(self) -> dict:
        return {
            "variant": self.variant,
            "R": self.R,
            "T": self.T,
            "theta0": self.theta0,
            "eps1": self.eps1,
            "r0": self.r0,
            "M": self.big_m,
            "grid": list(self.grid),
            "n_evaluated": self.n_evaluated,
            "n_excluded": self.n_excluded,
            "min_scalar": self.min_scalar,
            "argmin": {"theta": self.argmin[0], "t": self.argmin[1]},
            "verdict": self.verdict,
        }


def scan_axes(p: HandleProfile, grid) -> tuple:
    """Default scan window: theta up to just short of the pole, |t| <= 2T."""
    n_theta, n_t = grid
    if n_theta < 2 or n_t < 2:
        raise ValueError(f"scan grid must be at least 2x2, got {grid}")
    theta = np.linspace(0.0, HALF_PI - p.eps1 / 2.0, n_theta)
    t = np.linspace(-2.0 * p.t_half_width, 2.0 * p.t_half_width, n_t)
    return theta, t


def scalar_grid(p: HandleProfile, R: float, grid=DEFAULT_SCAN_GRID) -> tuple:
    """(theta axis, t axis, S, r) over the full scan rectangle.

    S comes from the closed form matching the profile variant.  Where r < 0
    the chart is gone and the formula's denominator can even vanish, so those
    cells are reported as nan.
    """
    theta, t = scan_axes(p, grid)
    jet = eval_jet(p, theta[:, None], t[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        if p.variant is Variant.CLASSIC_R0:
            S = scalar_curvature_closed(jet, theta[:, None], R)
        else:
            S = scalar_curvature_radius_one(jet, theta[:, None], R)
    r = np.broadcast_to(np.asarray(jet.r), np.shape(S)).copy()
    return theta, t, np.where(r >= 0.0, S, np.nan), r


def _reduce_scan(p, R, grid, theta, t, S, admissible) -> ScanReport:
    n_adm = int(np.count_nonzero(admissible))
    if n_adm == 0:
        raise ValueError("no admissible grid points to scan")
    masked = np.where(admissible, S, np.inf)
    k = int(np.argmin(masked))
    i, j = np.unravel_index(k, masked.shape)
    min_s = float(masked[i, j])
    return ScanReport(
        variant=p.variant.value, R=float(R), T=p.t_half_width, theta0=p.theta0,
        eps1=p.eps1, r0=p.r0, big_m=p.big_m, grid=tuple(int(n) for n in grid),
        n_evaluated=n_adm, n_excluded=int(admissible.size - n_adm),
        min_scalar=min_s, argmin=(float(theta[i]), float(t[j])),
        verdict="POSITIVE" if min_s > 0.0 else "NEGATIVE")


def scan_scalar_curvature(p: HandleProfile, R: float,
                          grid=DEFAULT_SCAN_GRID) -> ScanReport:
    """Certify min S over the grid points with r >= 0 (offset variant)."""
    if p.variant is not Variant.CLASSIC_R0:
        raise ValueError("scan_scalar_curvature expects the offset variant; "
                         "use radius_one_scan for the radius-one family")
    theta, t, S, r = scalar_grid(p, R, grid)
    return _reduce_scan(p, R, grid, theta, t, S, r >= 0.0)


def find_min_R(p: HandleProfile, R_lo: float, R_hi: float,
               grid=DEFAULT_SCAN_GRID, rel_width: float = 1e-3) -> float:
    """Bisect the POSITIVE/NEGATIVE verdict boundary; returns the smallest
    grid-certified POSITIVE radius.

    Requires a POSITIVE verdict at R_hi; the certificate is grid-relative, so
    the bisection stops at a relative bracket width of ``rel_width``.
    """
    if not R_lo < R_hi:
        raise ValueError(f"degenerate bracket: R_lo={R_lo} must be < R_hi={R_hi}")
    if not scan_scalar_curvature(p, R_hi, grid).positive:
        raise BracketError(f"scan at R_hi={R_hi} is not POSITIVE; widen the bracket")
    lo, hi = float(R_lo), float(R_hi)
    if scan_scalar_curvature(p, lo, grid).positive:
        return lo
    while (hi - lo) > rel_width * hi:
        mid = 0.5 * (lo + hi)
        if scan_scalar_curvature(p, mid, grid).positive:
            hi = mid
        else:
            lo = mid
    return hi


def alpha_scaled_scan(p: HandleProfile, alpha: float, base_R: float,
                      base_T: float, grid=DEFAULT_SCAN_GRID) -> ScanReport:
    """Scan the profile rebuilt with T = alpha * base_T at R = alpha * base_R."""
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    amplitude = p.r0 if p.variant is Variant.CLASSIC_R0 else p.big_m
    scaled = make_profile(p.variant, amplitude, alpha * base_T, p.theta0,
                          p.eps1, p.step)
    return scan_scalar_curvature(scaled, alpha * base_R, grid)


def fiber_rescale_invariance(pt: ChartPoint, R: float, p: HandleProfile,
                             c: float) -> tuple:
    """Scalar curvature before and after scaling the fiber metric entry by c.

    Both values come from the generic pipeline; rescaling the fiber circle is
    a coordinate change, so they agree up to pipeline noise.
    """
    if not c > 0.0:
        raise ValueError(f"fiber rescale factor must be positive, got {c}")
    base = HandleMetric(p, R)
    _, s_original = ricci_and_scalar(base, pt.theta, pt.t)
    _, s_rescaled = ricci_and_scalar(FiberRescaledMetric(base, c), pt.theta, pt.t)
    return s_original, s_rescaled


# ---------------------------------------------------------------------------
# radius-one family


@dataclass(frozen=True)
class RadiusOneReport:
    scan: ScanReport
    leading_term_min: float
    floor_excluded: int

    def to_json_dict(self) -> dict:
        out = self.scan.to_json_dict()
        out["leading_term_min"] = self.leading_term_min
        out["floor_excluded"] = self.floor_excluded
        return out


def radius_one_scan(M: float, theta0: float, T: float, R: float,
                    grid=DEFAULT_SCAN_GRID, eps1: float | None = None,
                    step: SmoothStep | None = None) -> RadiusOneReport:
    """Scan the radius-one family at amplitude M and sphere radius R.

    The radius-one metric carries 1/r entries, so the verdict is taken over
    {r > 1e-6} with the excluded sliver counted; the dominant large-R term is
    polynomial and its minimum is reported over all of {r >= 0}.
    """
    if eps1 is None:
        eps1 = (HALF_PI - theta0) / 100.0
    if step is None:
        step = build_step()
    p = make_profile(Variant.RADIUS_ONE_M, M, T, theta0, eps1, step)
    theta, t, S, r = scalar_grid(p, R, grid)
    report = _reduce_scan(p, R, grid, theta, t, S, r > RADIUS_ONE_FLOOR)
    lead = leading_term_radius_one(p, theta[:, None], t[None, :])
    lead_min = float(np.min(np.where(r >= 0.0, lead, np.inf)))
    floor_excluded = int(np.count_nonzero((r >= 0.0) & (r <= RADIUS_ONE_FLOOR)))
    return RadiusOneReport(scan=report, leading_term_min=lead_min,
                           floor_excluded=floor_excluded)


def find_radius_one_params(theta0: float = 0.8, T: float = 1.0,
                           M_ladder=(2.0, 4.0, 8.0, 16.0),
                           R_ladder=(4.0, 8.0, 16.0, 32.0),
                           grid=DEFAULT_SCAN_GRID,
                           step: SmoothStep | None = None) -> tuple:
    """First (M, R) ladder pair with a POSITIVE radius-one verdict."""
    if step is None:
        step = build_step()
    for M in M_ladder:
        for R in R_ladder:
            report = radius_one_scan(M, theta0, T, R, grid, step=step)
            if report.scan.positive:
                return M, R, report
    raise BracketError("no POSITIVE pair on the given ladders")
