"""Fiber-radius profile r(theta, t) over the sphere-angle/time band.

r gives the squared radius of the fiber circle over the sphere point at
latitude theta and time t.  Two variants are supported: an offset form
r = r0 - P(t) Q(theta) and a radius-one form r = 1 - M P(t) Q(theta), where P
and Q are translated/scaled copies of one shared smoothed step function.  P
rises on [-T, T], Q rises on [theta0 + eps1, pi/2 - eps1].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .stepfn import DEFAULT_QUADRATURE_POINTS, SmoothStep, build_step, eval_step

HALF_PI = math.pi / 2.0


class Variant(enum.Enum):
    CLASSIC_R0 = "classic_r0"
    RADIUS_ONE_M = "radius_one_m"


@dataclass(frozen=True)
class HandleProfile:
    """Profile parameters plus the shared step shape.

    Instances are immutable; use :func:`make_profile` to get validation.
    ``r0`` is meaningful only for CLASSIC_R0 and ``big_m`` only for
    RADIUS_ONE_M; the unused one is carried as 0.
    """

    variant: Variant
    r0: float
    big_m: float
    t_half_width: float
    theta0: float
    eps1: float
    step: SmoothStep

    @property
    def plateau(self) -> float:
        """Value of r where P*Q vanishes."""
        return self.r0 if self.variant is Variant.CLASSIC_R0 else 1.0

    @property
    def amplitude(self) -> float:
        """Coefficient of P*Q in r."""
        return 1.0 if self.variant is Variant.CLASSIC_R0 else self.big_m

    @property
    def q_support(self) -> tuple:
        lo = self.theta0 + self.eps1
        return lo, HALF_PI - self.eps1

    def p_value(self, t, order: int = 0):
        """P and its derivatives: the step rescaled onto [-T, T]."""
        T = self.t_half_width
        u = (np.asarray(t, dtype=float) + T) / (2.0 * T)
        return eval_step(self.step, u, order) / (2.0 * T) ** order

    def q_value(self, theta, order: int = 0):
        """Q and its derivatives: the step rescaled onto the theta window."""
        lo, hi = self.q_support
        width = hi - lo
        v = (np.asarray(theta, dtype=float) - lo) / width
        return eval_step(self.step, v, order) / width**order


@dataclass(frozen=True)
class ProfileJet:
    """r and its partial derivatives through second order at one point.

    Fields may hold scalars or broadcast numpy arrays.  r is dimensionless in
    the squared-radius convention, so all entries are plain reals.
    """

    r: object
    r_theta: object
    r_t: object
    r_thetatheta: object
    r_thetat: object
    r_tt: object


def make_profile(variant: Variant, r0_or_m: float, T: float, theta0: float,
                 eps1: float, step: SmoothStep) -> HandleProfile:
    """Validated profile constructor; raises ValueError on any range violation."""
    if not isinstance(variant, Variant):
        raise ValueError(f"unknown variant {variant!r}")
    if not (T > 0.0):
        raise ValueError(f"T must be positive, got {T}")
    if not (0.0 < theta0 < HALF_PI):
        raise ValueError(f"theta0 must lie in (0, pi/2), got {theta0}")
    eps1_cap = (HALF_PI - theta0) / 50.0
    if not (0.0 < eps1 < eps1_cap):
        raise ValueError(
            f"eps1 must lie in (0, (pi/2 - theta0)/50) = (0, {eps1_cap:.6g}), got {eps1}")
    if variant is Variant.CLASSIC_R0:
        if not (0.0 < r0_or_m < 0.5):
            raise ValueError(f"r0 must lie in (0, 1/2), got {r0_or_m}")
        r0, big_m = float(r0_or_m), 0.0
    else:
        # M = 0 is allowed as the no-surgery baseline (r identically 1)
        if not (r0_or_m >= 0.0):
            raise ValueError(f"M must be nonnegative, got {r0_or_m}")
        r0, big_m = 0.0, float(r0_or_m)
    return HandleProfile(variant=variant, r0=r0, big_m=big_m, t_half_width=float(T),
                         theta0=float(theta0), eps1=float(eps1), step=step)


def eval_jet(p: HandleProfile, theta, t) -> ProfileJet:
    """Evaluate r and its partials; inputs broadcast like numpy arrays.

    Outside the step supports the derivative entries are exactly zero, and on
    the full plateau r equals p.plateau bit-identically.
    """
    a = p.amplitude
    P = p.p_value(t, 0)
    P1 = p.p_value(t, 1)
    P2 = p.p_value(t, 2)
    Q = p.q_value(theta, 0)
    Q1 = p.q_value(theta, 1)
    Q2 = p.q_value(theta, 2)
    return ProfileJet(
        r=p.plateau - a * P * Q,
        r_theta=-a * P * Q1,
        r_t=-a * P1 * Q,
        r_thetatheta=-a * P * Q2,
        r_thetat=-a * P1 * Q1,
        r_tt=-a * P2 * Q,
    )


@dataclass(frozen=True)
class ConditionVerdict:
    item: int
    passed: bool
    witness: tuple | None
    description: str


def check_boundary_conditions(p: HandleProfile, grid=(256, 256)) -> list:
    """Check the six profile boundary conditions on a rectangular grid.

    The grid covers [0, pi/2] x [-2T, 2T] and must be at least 100 x 100.
    Each verdict carries the first witnessing grid point on failure.
    """
    n_theta, n_t = grid
    if n_theta < 100 or n_t < 100:
        raise ValueError(f"grid must be at least 100x100, got {grid}")
    T = p.t_half_width
    theta = np.linspace(0.0, HALF_PI, n_theta)
    t = np.linspace(-2.0 * T, 2.0 * T, n_t)
    TH, TT = np.meshgrid(theta, t, indexing="ij")
    jet = eval_jet(p, TH, TT)

    verdicts = []

    def record(item, mask_bad, description):
        if np.any(mask_bad):
            i, j = np.argwhere(mask_bad)[0]
            witness = (float(TH[i, j]), float(TT[i, j]))
            verdicts.append(ConditionVerdict(item, False, witness, description))
        else:
            verdicts.append(ConditionVerdict(item, True, None, description))

    outer_t = (TT < -T) | (TT > T)
    record(1, outer_t & (jet.r_t != 0.0), "r constant in t outside [-T, T]")

    flat = (TH <= p.theta0) | (TT <= -T)
    bad2 = flat & ((jet.r != p.plateau) | (jet.r_theta != 0.0) | (jet.r_t != 0.0))
    record(2, bad2, "r fully constant for theta <= theta0 or t <= -T")

    near_pole = TH >= HALF_PI - p.eps1
    record(3, near_pole & (jet.r_theta != 0.0), "r constant in theta near the pole")

    t_late = t[t > T]
    pole_jet = eval_jet(p, HALF_PI, t_late)
    r_pole = np.asarray(pole_jet.r)
    if np.any(r_pole >= 0.0):
        k = int(np.flatnonzero(r_pole >= 0.0)[0])
        verdicts.append(ConditionVerdict(4, False, (HALF_PI, float(t_late[k])),
                                         "r(pi/2, t) < 0 for t > T"))
    else:
        verdicts.append(ConditionVerdict(4, True, None, "r(pi/2, t) < 0 for t > T"))

    # monotone up to interpolation roundoff
    slack = 1e-12
    bad_theta = np.zeros_like(TH, dtype=bool)
    bad_theta[1:, :] = np.diff(jet.r, axis=0) > slack
    bad_t = np.zeros_like(TH, dtype=bool)
    bad_t[:, 1:] = np.diff(jet.r, axis=1) > slack
    record(5, bad_theta | bad_t, "r non-increasing in theta and in t")

    stack = np.maximum(np.abs(jet.r), np.maximum(np.abs(jet.r_theta), np.abs(jet.r_t)))
    record(6, stack <= 0.0, "r, r_theta, r_t never vanish simultaneously")

    return verdicts


# ---------------------------------------------------------------------------
# plain-text key = value serialization

_PARAM_KEYS = ("variant", "r0", "M", "T", "theta0", "eps1", "quadrature_points")


def profile_to_params(p: HandleProfile, quadrature_points: int | None = None) -> dict:
    """Flat key/value mapping describing the profile."""
    if quadrature_points is None:
        quadrature_points = len(p.step.table_x) - 1
    return {
        "variant": p.variant.value,
        "r0": p.r0,
        "M": p.big_m,
        "T": p.t_half_width,
        "theta0": p.theta0,
        "eps1": p.eps1,
        "quadrature_points": int(quadrature_points),
    }


def save_params(params: dict, path) -> None:
    lines = [f"{k} = {params[k]}" for k in params]
    Path(path).write_text("\n".join(lines) + "\n")


def load_params(path) -> dict:
    """Read a flat 'key = value' file; '#' starts a comment."""
    params = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed parameter line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        params[key] = value
    return params


def profile_from_params(params: dict, step: SmoothStep | None = None) -> HandleProfile:
    """Build a validated profile from a parameter mapping (strings accepted)."""
    variant = Variant(str(params.get("variant", Variant.CLASSIC_R0.value)))
    T = float(params["T"])
    theta0 = float(params["theta0"])
    eps1 = float(params["eps1"])
    if step is None:
        qp = int(float(params.get("quadrature_points", DEFAULT_QUADRATURE_POINTS)))
        step = build_step(qp)
    if variant is Variant.CLASSIC_R0:
        r0_or_m = float(params["r0"])
    else:
        r0_or_m = float(params["M"])
    return make_profile(variant, r0_or_m, T, theta0, eps1, step)
