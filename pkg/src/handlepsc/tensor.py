"""Induced metric and curvature of the handle cobordism embedded in R^6.

The band is charted by (theta, phi, t, alpha) and embedded as

    (R cos(theta) cos(phi), R cos(theta) sin(phi), R sin(theta),
     sqrt(r) cos(alpha), sqrt(r) sin(alpha), t)

wherever the profile r(theta, t) is positive.  Everything curvature-related is
computed along two independent routes:

* closed forms: hand-transcribed expressions for the metric, its inverse, the
  four Christoffel matrices, the Riemann slice entering the Ricci contraction,
  the Ricci tensor and the scalar curvature;
* a generic pipeline: metric and its first partials assembled analytically
  from the profile jet, Christoffels from the standard formula, Riemann by
  central differencing of the Christoffel field (one Richardson level), then
  contraction.

The test suite diffs the two routes; that diff is the point of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import HALF_PI, HandleProfile, ProfileJet, eval_jet

COORD_NAMES = ("theta", "phi", "t", "alpha")
DEFAULT_FD_STEP = 1e-4
RANK_THRESHOLD = 1e-6


class ChartError(ValueError):
    """Point (or finite-difference stencil) leaves the r > 0 chart."""


@dataclass(frozen=True)
class ChartPoint:
    theta: float
    phi: float
    t: float
    alpha: float


@dataclass(frozen=True)
class MetricJet:
    """Metric matrix and its first coordinate partials at a point.

    ``dg[mu, a, b]`` is the mu-partial of g_ab; only the theta and t slices
    are nonzero because the chart fields depend on (theta, t) alone.
    """

    g: np.ndarray
    dg: np.ndarray


@dataclass(frozen=True)
class CurvatureBundle:
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float


def tan_weighted(r_theta, theta):
    """r_theta * tan(theta), defined as exactly 0 wherever r_theta vanishes.

    The profile is constant in theta near the pole, which is what makes the
    tangent-weighted terms extendable across theta = pi/2.
    """
    r_theta = np.asarray(r_theta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    safe = np.where(r_theta == 0.0, 0.0, theta)
    out = np.where(r_theta == 0.0, 0.0, r_theta * np.tan(safe))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# embedding


def embed_point(pt: ChartPoint, R: float, p: HandleProfile) -> np.ndarray:
    """Ambient R^6 position of a chart point; requires r(theta, t) > 0."""
    jet = eval_jet(p, pt.theta, pt.t)
    if not jet.r > 0.0:
        raise ChartError(f"r({pt.theta}, {pt.t}) = {jet.r} is not positive")
    root = math.sqrt(jet.r)
    return np.array([
        R * math.cos(pt.theta) * math.cos(pt.phi),
        R * math.cos(pt.theta) * math.sin(pt.phi),
        R * math.sin(pt.theta),
        root * math.cos(pt.alpha),
        root * math.sin(pt.alpha),
        pt.t,
    ])


def cut_out_residuals(v: np.ndarray, R: float, p: HandleProfile) -> tuple:
    """Residuals of the two defining equations at an ambient point.

    The first is the sphere equation, the second the fiber-radius equation
    with theta recovered from the sphere coordinates.
    """
    x, y, z, u, w, t = v
    h1 = x * x + y * y + z * z - R * R
    theta = math.atan2(z, math.hypot(x, y))
    h2 = u * u + w * w - eval_jet(p, theta, t).r
    return h1, h2


# ---------------------------------------------------------------------------
# closed-form metric and inverse (offset variant)


def metric_from_jet(jet: ProfileJet, theta, R: float) -> np.ndarray:
    """Closed-form induced metric from the profile jet (offset variant)."""
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    q = 1.0 / (4.0 * r)
    g = np.zeros((4, 4))
    g[0, 0] = R * R + q * rth * rth
    g[0, 2] = g[2, 0] = q * rt * rth
    g[1, 1] = R * R * math.cos(theta) ** 2
    g[2, 2] = 1.0 + q * rt * rt
    g[3, 3] = r
    return g


def metric_closed_form(pt: ChartPoint, R: float, p: HandleProfile) -> np.ndarray:
    jet = eval_jet(p, pt.theta, pt.t)
    if not jet.r > 0.0:
        raise ChartError(f"r({pt.theta}, {pt.t}) = {jet.r} is not positive")
    return metric_from_jet(jet, pt.theta, R)


def metric_inverse_closed_form(jet: ProfileJet, theta, R: float) -> np.ndarray:
    """Closed-form inverse metric (offset variant)."""
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    D = rt * rt * R * R + 4.0 * r * R * R + rth * rth
    inv = np.zeros((4, 4))
    inv[0, 0] = (rt * rt + 4.0 * r) / D
    inv[0, 2] = inv[2, 0] = -rt * rth / D
    inv[1, 1] = 1.0 / (R * R * math.cos(theta) ** 2)
    inv[2, 2] = (4.0 * r * R * R + rth * rth) / D
    inv[3, 3] = 1.0 / r
    return inv


def metric_inverse(g: np.ndarray) -> np.ndarray:
    """Numeric inverse; raises on a singular (chart-breakdown) metric."""
    return np.linalg.inv(g)


def induced_metric_oracle(pt: ChartPoint, R: float, p: HandleProfile,
                          fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """First-fundamental-form oracle: dot products of differenced tangents.

    Central differences of the embedding with one Richardson level.  This is
    the independent route the closed-form metric is tested against.
    """
    if not fd_step > 0.0:
        raise ValueError(f"fd_step must be positive, got {fd_step}")

    base = np.array([pt.theta, pt.phi, pt.t, pt.alpha])

    def embed(vec):
        q = ChartPoint(vec[0], vec[1], vec[2], vec[3])
        jet = eval_jet(p, q.theta, q.t)
        if not jet.r > 0.0:
            raise ChartError(
                f"finite-difference stencil leaves the chart at ({q.theta}, {q.t})")
        return embed_point(q, R, p)

    def tangents(h):
        rows = []
        for a in range(4):
            off = np.zeros(4)
            off[a] = h
            rows.append((embed(base + off) - embed(base - off)) / (2.0 * h))
        return np.array(rows)

    tan_h = tangents(fd_step)
    tan_h2 = tangents(fd_step / 2.0)
    tan = (4.0 * tan_h2 - tan_h) / 3.0
    return tan @ tan.T


# ---------------------------------------------------------------------------
# Christoffel symbols


def christoffel(jet: MetricJet) -> np.ndarray:
    """Generic Christoffel symbols Gamma[k, i, j] from a metric jet."""
    ginv = np.linalg.inv(jet.g)
    dg = jet.dg
    # Gamma^k_ij = 1/2 g^{km} (d_j g_im + d_i g_jm - d_m g_ij), with the
    # bracket assembled as a [j, i, m] tensor before contraction
    bracket = dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (2, 1, 0))
    return 0.5 * np.einsum("km,jim->kij", ginv, bracket)


def christoffel_closed_form(jet: ProfileJet, theta, R: float) -> np.ndarray:
    """Transcribed closed-form Christoffel matrices (offset variant)."""
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtht, rtt = jet.r_thetatheta, jet.r_thetat, jet.r_tt
    D = rt * rt * R * R + 4.0 * r * R * R + rth * rth
    cos_t, sin_t, tn = math.cos(theta), math.sin(theta), math.tan(theta)
    G = np.zeros((4, 4, 4))

    G[0, 0, 0] = -rth * (rth * rth - 2.0 * r * rthth) / (2.0 * r * D)
    G[0, 0, 2] = G[0, 2, 0] = rth * (2.0 * r * rtht - rt * rth) / (2.0 * r * D)
    G[0, 1, 1] = R * R * (rt * rt + 4.0 * r) * cos_t * sin_t / D
    G[0, 2, 2] = -(rt * rt - 2.0 * r * rtt) * rth / (2.0 * r * D)
    G[0, 3, 3] = -2.0 * r * rth / D

    G[1, 0, 1] = G[1, 1, 0] = -tn

    G[2, 0, 0] = -R * R * rt * (rth * rth - 2.0 * r * rthth) / (2.0 * r * D)
    G[2, 0, 2] = G[2, 2, 0] = R * R * rt * (2.0 * r * rtht - rt * rth) / (2.0 * r * D)
    G[2, 1, 1] = -R * R * rt * rth * cos_t * sin_t / D
    G[2, 2, 2] = -R * R * rt * (rt * rt - 2.0 * r * rtt) / (2.0 * r * D)
    G[2, 3, 3] = -2.0 * r * R * R * rt / D

    G[3, 0, 3] = G[3, 3, 0] = rth / (2.0 * r)
    G[3, 2, 3] = G[3, 3, 2] = rt / (2.0 * r)
    return G


# ---------------------------------------------------------------------------
# metric fields for the generic pipeline


def _offset_metric_jet(jet: ProfileJet, theta: float, R: float) -> MetricJet:
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtht, rtt = jet.r_thetatheta, jet.r_thetat, jet.r_tt
    g = metric_from_jet(jet, theta, R)
    dg = np.zeros((4, 4, 4))
    q2 = 4.0 * r * r
    # d/dtheta and d/dt of the 1/(4r)-weighted products
    dg[0, 0, 0] = (2.0 * r * rth * rthth - rth**3) / q2
    dg[2, 0, 0] = (2.0 * r * rth * rtht - rth * rth * rt) / q2
    dg[0, 0, 2] = dg[0, 2, 0] = (r * (rtht * rth + rt * rthth) - rt * rth * rth) / q2
    dg[2, 0, 2] = dg[2, 2, 0] = (r * (rtt * rth + rt * rtht) - rt * rt * rth) / q2
    dg[0, 2, 2] = (2.0 * r * rt * rtht - rt * rt * rth) / q2
    dg[2, 2, 2] = (2.0 * r * rt * rtt - rt**3) / q2
    dg[0, 1, 1] = -2.0 * R * R * math.cos(theta) * math.sin(theta)
    dg[0, 3, 3] = rth
    dg[2, 3, 3] = rt
    return MetricJet(g=g, dg=dg)


def _radius_one_metric_jet(jet: ProfileJet, theta: float, R: float) -> MetricJet:
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtht, rtt = jet.r_thetatheta, jet.r_thetat, jet.r_tt
    g = metric_radius_one(jet, theta, R)
    dg = np.zeros((4, 4, 4))
    q2 = 4.0 * r * r * R * R
    dg[0, 0, 0] = (2.0 * r * rth * rthth - rth**3) / q2
    dg[2, 0, 0] = (2.0 * r * rth * rtht - rth * rth * rt) / q2
    dg[0, 0, 2] = dg[0, 2, 0] = (r * (rtht * rth + rt * rthth) - rt * rth * rth) / q2
    dg[2, 0, 2] = dg[2, 2, 0] = (r * (rtt * rth + rt * rtht) - rt * rt * rth) / q2
    dg[0, 2, 2] = (2.0 * r * rt * rtht - rt * rt * rth) / q2
    dg[2, 2, 2] = (2.0 * r * rt * rtt - rt**3) / q2
    dg[0, 1, 1] = -2.0 * math.cos(theta) * math.sin(theta)
    dg[0, 3, 3] = rth
    dg[2, 3, 3] = rt
    return MetricJet(g=g, dg=dg)


class HandleMetric:
    """Metric field of the offset-variant chart, for the generic pipeline."""

    def __init__(self, profile: HandleProfile, R: float):
        self.profile = profile
        self.R = float(R)

    def jet(self, theta: float, t: float) -> MetricJet:
        pj = eval_jet(self.profile, theta, t)
        if not pj.r > 0.0:
            raise ChartError(f"r({theta}, {t}) = {pj.r} is not positive")
        return _offset_metric_jet(pj, theta, self.R)


class RadiusOneMetric:
    """Metric field of the radius-one variant chart."""

    def __init__(self, profile: HandleProfile, R: float):
        self.profile = profile
        self.R = float(R)

    def jet(self, theta: float, t: float) -> MetricJet:
        pj = eval_jet(self.profile, theta, t)
        if not pj.r > 0.0:
            raise ChartError(f"r({theta}, {t}) = {pj.r} is not positive")
        return _radius_one_metric_jet(pj, theta, self.R)


class FiberRescaledMetric:
    """Wraps a field, multiplying the fiber-circle entry g_alphaalpha by c."""

    def __init__(self, base, c: float):
        if not c > 0.0:
            raise ValueError(f"fiber rescale factor must be positive, got {c}")
        self.base = base
        self.c = float(c)

    def jet(self, theta: float, t: float) -> MetricJet:
        mj = self.base.jet(theta, t)
        g = mj.g.copy()
        dg = mj.dg.copy()
        g[3, 3] *= self.c
        dg[:, 3, 3] *= self.c
        return MetricJet(g=g, dg=dg)


# ---------------------------------------------------------------------------
# generic curvature pipeline


def christoffel_at(field, theta: float, t: float) -> np.ndarray:
    return christoffel(field.jet(theta, t))


def riemann_pipeline(field, theta: float, t: float,
                     fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """R^rho_{sigma mu nu} with Christoffel derivatives by central differences.

    Only theta- and t-derivatives are formed; the phi and alpha derivatives
    vanish because the metric field is a function of (theta, t) alone.  One
    Richardson level keeps the truncation error at O(h^4).
    """
    if not fd_step > 0.0:
        raise ValueError(f"fd_step must be positive, got {fd_step}")

    def diff(axis, h):
        if axis == 0:
            hi = christoffel_at(field, theta + h, t)
            lo = christoffel_at(field, theta - h, t)
        else:
            hi = christoffel_at(field, theta, t + h)
            lo = christoffel_at(field, theta, t - h)
        return (hi - lo) / (2.0 * h)

    gamma = christoffel_at(field, theta, t)
    d_gamma = np.zeros((4, 4, 4, 4))
    for mu, axis in ((0, 0), (2, 1)):
        coarse = diff(axis, fd_step)
        fine = diff(axis, fd_step / 2.0)
        d_gamma[mu] = (4.0 * fine - coarse) / 3.0

    # R^rho_smn = d_m Gamma^rho_ns - d_n Gamma^rho_ms + quadratic terms
    riem = (np.einsum("mrns->rsmn", d_gamma)
            - np.einsum("nrms->rsmn", d_gamma)
            + np.einsum("rml,lns->rsmn", gamma, gamma)
            - np.einsum("rnl,lms->rsmn", gamma, gamma))
    return riem


def ricci_from_riemann(riem: np.ndarray) -> np.ndarray:
    return np.einsum("kikj->ij", riem)


def ricci_and_scalar(field, theta: float, t: float,
                     fd_step: float = DEFAULT_FD_STEP) -> tuple:
    """Ricci tensor and scalar curvature through the generic pipeline."""
    riem = riemann_pipeline(field, theta, t, fd_step)
    ric = ricci_from_riemann(riem)
    ginv = np.linalg.inv(field.jet(theta, t).g)
    return ric, float(np.sum(ginv * ric))


def riemann(pt: ChartPoint, R: float, p: HandleProfile,
            fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Generic-pipeline Riemann tensor for the offset-variant chart."""
    return riemann_pipeline(HandleMetric(p, R), pt.theta, pt.t, fd_step)


def curvature_bundle(pt: ChartPoint, R: float, p: HandleProfile,
                     fd_step: float = DEFAULT_FD_STEP) -> CurvatureBundle:
    field = HandleMetric(p, R)
    gamma = christoffel_at(field, pt.theta, pt.t)
    riem = riemann_pipeline(field, pt.theta, pt.t, fd_step)
    ric = ricci_from_riemann(riem)
    ginv = np.linalg.inv(field.jet(pt.theta, pt.t).g)
    return CurvatureBundle(gamma=gamma, riemann=riem, ricci=ric,
                           scalar=float(np.sum(ginv * ric)))


# ---------------------------------------------------------------------------
# closed-form curvature (offset variant)


def riemann_closed_form(jet: ProfileJet, theta, R: float) -> np.ndarray:
    """Transcribed Riemann slice C[rho, sigma, nu] = R^rho_{sigma rho nu}.

    These are exactly the components entering the Ricci contraction; use
    :func:`riemann_slice` to extract the matching entries from the pipeline
    tensor.
    """
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtht, rtt = jet.r_thetatheta, jet.r_thetat, jet.r_tt
    R2 = R * R
    D = R2 * rt * rt + rth * rth + 4.0 * R2 * r
    cos_t, sin_t, tn = math.cos(theta), math.sin(theta), math.tan(theta)
    sin2 = math.sin(2.0 * theta)
    K = (rthth * rt * rt - 2.0 * rth * rtht * rt + 2.0 * r * rtht * rtht
         + rtt * (rth * rth - 2.0 * r * rthth))
    C = np.zeros((4, 4, 4))

    C[0, 1, 1] = R2 * cos_t / D**2 * (
        R2 * cos_t * rt**4
        + 4.0 * r * (2.0 * R2 * cos_t * rt * rt + rth * (cos_t * rth - sin_t * rthth))
        + sin_t * rth * rth * rtht * rt + 2.0 * sin_t * rth**3
        + rth * rt * rt * (cos_t * rth - sin_t * rthth)
        + 16.0 * R2 * cos_t * r * r)
    C[0, 0, 2] = -R2 * rt * rth * K / (2.0 * r * D**2)
    C[0, 2, 2] = -R2 * (rt * rt + 4.0 * r) * K / (2.0 * r * D**2)
    C[0, 3, 3] = 2.0 * R2 * r * (2.0 * rth * rth + rt * rtht * rth
                                 - (rt * rt + 4.0 * r) * rthth) / D**2

    C[1, 0, 0] = (tn * (rth**3 - 2.0 * r * rth * rthth) / (2.0 * r * D)
                  - tn * tn + 1.0 / cos_t**2)
    C[1, 2, 0] = tn * rth * (rt * rth - 2.0 * r * rtht) / (2.0 * r * D)
    C[1, 0, 2] = tn * rth * (rt * rth - 2.0 * r * rtht) / (2.0 * r * D)
    C[1, 2, 2] = tn * (rt * rt - 2.0 * r * rtt) * rth / (2.0 * r * D)
    C[1, 3, 3] = 2.0 * tn * r * rth / D

    C[2, 0, 0] = -R2 * K * (rth * rth + 4.0 * R2 * r) / (2.0 * r * D**2)
    C[2, 2, 0] = -R2 * rt * rth * K / (2.0 * r * D**2)
    C[2, 1, 1] = R2 * sin2 * rth * (2.0 * R2 * rt * rt
                                    - rtt * (rth * rth + 4.0 * R2 * r)
                                    + rth * rtht * rt) / (2.0 * D**2)
    C[2, 3, 3] = 2.0 * R2 * r * (2.0 * R2 * rt * rt - rtt * (rth * rth + 4.0 * R2 * r)
                                 + rth * rtht * rt) / D**2

    C[3, 0, 0] = R2 * (rth * rth - 2.0 * r * rthth) / (r * D)
    C[3, 2, 0] = R2 * (rt * rth - 2.0 * r * rtht) / (r * D)
    C[3, 1, 1] = R2 * sin2 * rth / D
    C[3, 0, 2] = R2 * (rt * rth - 2.0 * r * rtht) / (r * D)
    C[3, 2, 2] = R2 * (rt * rt - 2.0 * r * rtt) / (r * D)
    return C


def riemann_slice(riem: np.ndarray) -> np.ndarray:
    """Extract C[rho, sigma, nu] = riem[rho, sigma, rho, nu]."""
    return np.stack([riem[rho, :, rho, :] for rho in range(4)])


def ricci_closed_form(jet: ProfileJet, theta, R: float) -> np.ndarray:
    """Transcribed closed-form Ricci tensor (offset variant)."""
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtht, rtt = jet.r_thetatheta, jet.r_thetat, jet.r_tt
    R2 = R * R
    D = R2 * rt * rt + rth * rth + 4.0 * R2 * r
    cos_t, sin_t, tn = math.cos(theta), math.sin(theta), math.tan(theta)
    K = (rthth * rt * rt - 2.0 * rth * rtht * rt + 2.0 * r * rtht * rtht
         + rtt * (rth * rth - 2.0 * r * rthth))
    ric = np.zeros((4, 4))
    ric[0, 0] = (R2 * (rth * rth - 2.0 * r * rthth) / (r * D)
                 - R2 * K * (rth * rth + 4.0 * R2 * r) / (2.0 * r * D**2)
                 + tn * (rth**3 - 2.0 * r * rth * rthth) / (2.0 * r * D)
                 - tn * tn + 1.0 / cos_t**2)
    mixed = (2.0 * R2 * (rt * rth - 2.0 * r * rtht) * D
             - R2 * rt * rth * K
             + tn * rth * (rt * rth - 2.0 * r * rtht) * D) / (2.0 * r * D**2)
    ric[0, 2] = ric[2, 0] = mixed
    ric[1, 1] = R2 * cos_t / D**2 * (
        R2 * cos_t * rt**4
        + rth * rt * rt * (-sin_t * rthth + cos_t * rth + 4.0 * R2 * sin_t)
        + 4.0 * r * (2.0 * R2 * cos_t * rt * rt
                     + rth * (-R2 * sin_t * rtt - sin_t * rthth + cos_t * rth
                              + 2.0 * R2 * sin_t))
        + 2.0 * sin_t * rth * rth * rtht * rt
        - sin_t * (rtt - 4.0) * rth**3
        + 16.0 * R2 * cos_t * r * r)
    ric[2, 2] = (2.0 * R2 * (rt * rt - 2.0 * r * rtt) * D
                 - R2 * (rt * rt + 4.0 * r) * K
                 + tn * (rt * rt - 2.0 * r * rtt) * rth * D) / (2.0 * r * D**2)
    ric[3, 3] = 2.0 * r / D**2 * (
        2.0 * R2 * rt * rth * rtht
        + R2 * rt * rt * (-rthth + tn * rth + 2.0 * R2)
        - 4.0 * R2 * r * (R2 * rtt + rthth - tn * rth)
        + rth * rth * (-R2 * rtt + tn * rth + 2.0 * R2))
    return ric


def scalar_curvature_closed(jet: ProfileJet, theta, R: float):
    """Transcribed closed-form scalar curvature (offset variant).

    Polynomial in the jet apart from the squared-denominator prefactor, so it
    extends to r = 0; tangent-weighted terms are masked through
    :func:`tan_weighted` and the whole expression broadcasts over arrays.
    """
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtht, rtt = jet.r_thetatheta, jet.r_thetat, jet.r_tt
    R2 = R * R
    tn = tan_weighted(rth, theta)  # stands for rth * tan(theta)
    D = R2 * (4.0 * r + rt * rt) + rth * rth
    num = (16.0 * r * r * R2
           - tn * (4.0 * r * (R2 * (rtt - 2.0) + rthth)
                   + rt * (-4.0 * R2 * rt + rt * rthth - 2.0 * rth * rtht)
                   + (rtt - 4.0) * rth * rth)
           + 4.0 * r * (-2.0 * R2 * R2 * rtt
                        + R2 * (2.0 * rt * rt + (rtt - 2.0) * rthth - rtht * rtht)
                        + rth * rth)
           + 4.0 * R2 * R2 * rt * rt
           + R2 * (rt**4 - 4.0 * rt * rt * rthth + 8.0 * rt * rth * rtht
                   - 4.0 * (rtt - 1.0) * rth * rth)
           + rt * rt * rth * rth)
    return 2.0 * num / D**2


# ---------------------------------------------------------------------------
# radius-one variant closed forms


def metric_radius_one(jet: ProfileJet, theta, R: float) -> np.ndarray:
    """Closed-form metric of the radius-one variant."""
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    q = 1.0 / (4.0 * r * R * R)
    g = np.zeros((4, 4))
    g[0, 0] = 1.0 + q * rth * rth
    g[0, 2] = g[2, 0] = q * rt * rth
    g[1, 1] = math.cos(theta) ** 2
    g[2, 2] = 1.0 + q * rt * rt
    g[3, 3] = r
    return g


def embed_point_radius_one(pt: ChartPoint, R: float, p: HandleProfile) -> np.ndarray:
    """Ambient position for the radius-one variant chart."""
    jet = eval_jet(p, pt.theta, pt.t)
    if not jet.r > 0.0:
        raise ChartError(f"r({pt.theta}, {pt.t}) = {jet.r} is not positive")
    root = math.sqrt(jet.r) / R
    return np.array([
        math.cos(pt.theta) * math.cos(pt.phi),
        math.cos(pt.theta) * math.sin(pt.phi),
        math.sin(pt.theta),
        root * math.cos(R * pt.alpha),
        root * math.sin(R * pt.alpha),
        pt.t,
    ])


def scalar_curvature_radius_one(jet: ProfileJet, theta, R: float):
    """Transcribed closed-form scalar curvature of the radius-one variant."""
    r, rth, rt = jet.r, jet.r_theta, jet.r_t
    rthth, rtht, rtt = jet.r_thetatheta, jet.r_thetat, jet.r_tt
    R2 = R * R
    tn = tan_weighted(rth, theta)  # stands for rth * tan(theta)
    D = 4.0 * R2 * r + rt * rt + rth * rth
    num = (16.0 * R2 * R2 * r * r
           - 4.0 * R2 * r * (rtt * (2.0 * R2 + tn - rthth)
                             - 2.0 * R2 * tn + 2.0 * R2 * rthth
                             - 2.0 * rt * rt - rth * rth + rthth * tn + rtht * rtht)
           + rt * rt * (tn * (4.0 * R2 - rthth) + 4.0 * R2 * (R2 - rthth) + rth * rth)
           + 2.0 * rt * rth * rtht * (4.0 * R2 + tn)
           + rth * rth * (4.0 * (R2 * R2 + R2 * tn) - rtt * (4.0 * R2 + tn))
           + rt**4)
    return 2.0 * num / D**2


# ---------------------------------------------------------------------------
# rank check of the defining-equation Jacobian


def dh_matrix(x, y, z, u, w, r_theta, r_t, R) -> np.ndarray:
    """2x6 Jacobian of the defining equations at an ambient point."""
    rho = math.hypot(x, y)
    dh = np.zeros((2, 6))
    dh[0, :3] = 2.0 * x, 2.0 * y, 2.0 * z
    if r_theta != 0.0 and rho > 0.0:
        f = r_theta / (R * R)
        dh[1, 0] = f * x * z / rho
        dh[1, 1] = f * y * z / rho
        dh[1, 2] = -f * rho
    dh[1, 3] = 2.0 * u
    dh[1, 4] = 2.0 * w
    dh[1, 5] = -r_t
    return dh


def dh_rank_check(pt: ChartPoint, R: float, p: HandleProfile) -> float:
    """Smallest singular value of the defining-equation Jacobian at a point."""
    v = embed_point(pt, R, p)
    jet = eval_jet(p, pt.theta, pt.t)
    dh = dh_matrix(v[0], v[1], v[2], v[3], v[4], jet.r_theta, jet.r_t, R)
    return float(np.linalg.svd(dh, compute_uv=False)[-1])


# ---------------------------------------------------------------------------
# sampling and the two-route comparison driver


def sample_valid_points(p: HandleProfile, n: int, seed: int = 42,
                        r_min: float = 0.02, theta_min: float = 0.0,
                        flat_only: bool = False) -> list:
    """Seeded rejection sample of chart points with r comfortably positive.

    Points stay below pi/2 - eps1/2 in theta, away from the pole the chart
    excludes.  With ``flat_only`` the sample is restricted to the region where
    every profile derivative vanishes.
    """
    rng = np.random.default_rng(seed)
    T = p.t_half_width
    theta_max = HALF_PI - p.eps1 / 2.0
    points = []
    while len(points) < n:
        m = max(4 * (n - len(points)), 64)
        theta = rng.uniform(theta_min, theta_max, m)
        t = rng.uniform(-2.0 * T, 2.0 * T, m)
        phi = rng.uniform(0.0, 2.0 * math.pi, m)
        alpha = rng.uniform(0.0, 2.0 * math.pi, m)
        jet = eval_jet(p, theta, t)
        keep = np.asarray(jet.r) >= r_min
        if flat_only:
            flat = ((theta <= p.theta0) | (t <= -T)) & (theta < theta_max)
            keep &= flat
        for i in np.nonzero(keep)[0]:
            points.append(ChartPoint(float(theta[i]), float(phi[i]),
                                     float(t[i]), float(alpha[i])))
            if len(points) == n:
                break
    return points


_FAULT_SCALE = 1.0 + 1e-3

COMPONENT_GROUPS = ("metric", "inverse", "gamma", "riemann", "ricci", "scalar")


@dataclass(frozen=True)
class ComponentDiff:
    component: str
    max_rel_err: float
    location: tuple
    indices: tuple


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    rtol: float
    atol: float
    n_points: int
    worst: ComponentDiff
    diffs: tuple

    def worst_label(self) -> str:
        if not self.worst.indices:
            return self.worst.component
        idx = ",".join(COORD_NAMES[k] for k in self.worst.indices)
        return f"{self.worst.component}[{idx}]"


def _rel_err(a: np.ndarray, b: np.ndarray, floor: float) -> np.ndarray:
    # err <= rtol then means |a - b| <= rtol * max(|a|, |b|, atol/rtol),
    # i.e. plain relative agreement for O(1) entries and atol for zero slots
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return np.abs(a - b) / scale


def verify_closed_forms(p: HandleProfile, R: float, n_points: int = 100,
                        seed: int = 42, fd_step: float = DEFAULT_FD_STEP,
                        rtol: float = 1e-5, atol: float = 1e-8,
                        inject_fault: str | None = None) -> VerificationReport:
    """Diff every transcribed closed form against the generic pipeline.

    Returns the worst relative error per component group over a seeded sample
    of valid chart points.  ``inject_fault`` perturbs one closed-form group,
    for exercising the failure path.
    """
    if inject_fault is not None and inject_fault not in COMPONENT_GROUPS:
        raise ValueError(f"unknown component group {inject_fault!r}")

    def fault(name, arr):
        return arr * _FAULT_SCALE if inject_fault == name else arr

    field = HandleMetric(p, R)
    points = sample_valid_points(p, n_points, seed=seed)
    worst = {name: ComponentDiff(name, 0.0, (0.0, 0.0), ())
             for name in COMPONENT_GROUPS}
    floor = atol / rtol

    def update(name, closed, pipe, loc):
        err = _rel_err(np.asarray(closed, dtype=float),
                       np.asarray(pipe, dtype=float), floor)
        flat = int(np.argmax(err))
        val = float(err.flat[flat])
        if val > worst[name].max_rel_err:
            idx = np.unravel_index(flat, err.shape) if err.shape else ()
            worst[name] = ComponentDiff(name, val, loc, tuple(int(k) for k in idx))

    for pt in points:
        loc = (pt.theta, pt.t)
        jet = eval_jet(p, pt.theta, pt.t)

        g_closed = fault("metric", metric_closed_form(pt, R, p))
        g_oracle = induced_metric_oracle(pt, R, p, fd_step)
        update("metric", g_closed, g_oracle, loc)

        inv_closed = fault("inverse", metric_inverse_closed_form(jet, pt.theta, R))
        inv_numeric = metric_inverse(metric_from_jet(jet, pt.theta, R))
        update("inverse", inv_closed, inv_numeric, loc)

        gamma_closed = fault("gamma", christoffel_closed_form(jet, pt.theta, R))
        gamma_pipe = christoffel_at(field, pt.theta, pt.t)
        update("gamma", gamma_closed, gamma_pipe, loc)

        riem = riemann_pipeline(field, pt.theta, pt.t, fd_step)
        slice_closed = fault("riemann", riemann_closed_form(jet, pt.theta, R))
        update("riemann", slice_closed, riemann_slice(riem), loc)

        ric_pipe = ricci_from_riemann(riem)
        ric_closed = fault("ricci", ricci_closed_form(jet, pt.theta, R))
        update("ricci", ric_closed, ric_pipe, loc)

        ginv = np.linalg.inv(field.jet(pt.theta, pt.t).g)
        s_pipe = float(np.sum(ginv * ric_pipe))
        s_closed = fault("scalar", scalar_curvature_closed(jet, pt.theta, R))
        update("scalar", float(s_closed), s_pipe, loc)

    diffs = tuple(worst[name] for name in COMPONENT_GROUPS)
    top = max(diffs, key=lambda d: d.max_rel_err)
    return VerificationReport(passed=top.max_rel_err <= rtol, rtol=rtol, atol=atol,
                              n_points=len(points), worst=top, diffs=diffs)
