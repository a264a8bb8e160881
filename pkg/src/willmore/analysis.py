"""Concentration of curvature and the inequality verifiers.

The concentration function chi(rho) is the sup over centers of the |A|^2 mass
inside ambient balls of radius rho.  Ball membership is antialiased over one
mesh length (a node contributes fractionally when the ball boundary crosses
its cell), which makes chi continuous in rho and keeps the parabolic-scaling
identity exact: distances, |A|^2 and the area weights all rescale so that the
fractional weights are preserved verbatim.

The verifiers (monotonicity, mass density, Michael-Simon, multiplicative
Sobolev) evaluate both sides of their inequalities with discrete norms and
report the empirical constant; acceptance thresholds live in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ambient import AmbientManifold
from .errors import BadExponents, VacuousBound
from .surface import GeometryCache, integrate_scalar, surface_area


def _support_points(cache: GeometryCache, stride: int = 1):
    pts = []
    for ch in cache.charts:
        on = ch.grid.pou > 0.0
        pts.append(ch.x[::stride, ::stride][on[::stride, ::stride]])
    return np.concatenate(pts, axis=0)


def _ball_weights(cache: GeometryCache, ambient: AmbientManifold, center, rho):
    """Per-chart fractional membership of each node in the ball B_rho(center),
    feathered over one local mesh length."""
    out = []
    for ch in cache.charts:
        d = ambient.distance(ch.x, center)
        smooth = np.sqrt(ch.area_el)
        out.append(np.clip((rho - d) / smooth + 0.5, 0.0, 1.0))
    return tuple(out)


def ball_integral(cache: GeometryCache, ambient: AmbientManifold, center, rho,
                  fields) -> float:
    w = _ball_weights(cache, ambient, center, rho)
    return integrate_scalar(cache, tuple(f * m for f, m in zip(fields, w)))


@dataclass(frozen=True)
class ConcentrationProbe:
    """chi(rho) = sup over candidate centers of the |A|^2 mass in B_rho."""

    radius: float
    center_set: np.ndarray
    energies: np.ndarray
    chi: float
    argmax_center: np.ndarray


def concentration(cache: GeometryCache, ambient: AmbientManifold, rho: float,
                  center_set=None, stride: int = 1) -> ConcentrationProbe:
    if rho <= 0.0:
        raise ValueError("concentration radius must be positive")
    if center_set is None:
        center_set = _support_points(cache, stride)
    center_set = np.asarray(center_set, dtype=float)
    asq = tuple(ch.normsq_A for ch in cache.charts)
    energies = np.array([ball_integral(cache, ambient, p, rho, asq)
                         for p in center_set])
    top = int(np.argmax(energies))
    return ConcentrationProbe(rho, center_set, energies,
                              float(energies[top]), center_set[top])


def lifespan_bound(chi0: float, rho: float, sup_DR: float, area0: float,
                   W0: float, C: float = 1e-2, eps0sq: float = 1e-2) -> float:
    """Lower lifespan estimate C rho^4 log(C eps0^2 / denominator) with
    denominator chi0 + rho^4 |DR|^2 (area0 + rho^2 W0)."""
    if min(chi0, rho, sup_DR, area0, W0) < 0.0:
        raise ValueError("lifespan inputs must be non-negative")
    denom = chi0 + rho ** 4 * sup_DR ** 2 * (area0 + rho ** 2 * W0)
    if denom >= C * eps0sq:
        raise VacuousBound("initial concentration already at the smallness cap")
    return C * rho ** 4 * math.log(C * eps0sq / denom)


@dataclass(frozen=True)
class MonotonicityReport:
    lhs: float
    rhs_area: float
    rhs_energy: float
    empirical_C: float
    smallness_ok: bool


def monotonicity_check(cache: GeometryCache, ambient: AmbientManifold, center,
                       sigma: float, rho: float,
                       smallness: float = 0.1) -> MonotonicityReport:
    """Density ratio |Sigma_sigma|/sigma^2 against the larger-ball density plus
    its restricted energy; the paper wants a universal constant between them."""
    if not 0.0 < sigma <= rho:
        raise ValueError("need 0 < sigma <= rho")
    ones = tuple(np.ones(ch.grid.shape) for ch in cache.charts)
    hsq = tuple(ch.normsq_H for ch in cache.charts)
    lhs = ball_integral(cache, ambient, center, sigma, ones) / sigma ** 2
    rhs_area = ball_integral(cache, ambient, center, rho, ones) / rho ** 2
    rhs_energy = 0.5 * ball_integral(cache, ambient, center, rho, hsq)
    emp = lhs / max(rhs_area + rhs_energy, 1e-300)
    lam = math.sqrt(ambient.bounds.sup_R)
    return MonotonicityReport(lhs, rhs_area, rhs_energy, emp,
                              rho * lam <= smallness)


def mass_density_check(cache: GeometryCache, ambient: AmbientManifold, R_list,
                       area_sup: float, W0: float, c: float = 0.016,
                       centers=None, stride: int = 4) -> float:
    """Worst lhs/rhs for |Sigma_R|/R^2 <= c M_f (|R| + |DR|^{2/3} + inj^-2)
    + c W0 over the radii and sampled centers."""
    if centers is None:
        centers = _support_points(cache, stride)
    b = ambient.bounds
    inv_inj = 0.0 if math.isinf(b.inj_radius) else b.inj_radius ** -2
    curv = b.sup_R + b.sup_DR ** (2.0 / 3.0) + inv_inj
    rhs = c * area_sup * curv + c * W0
    ones = tuple(np.ones(ch.grid.shape) for ch in cache.charts)
    worst = 0.0
    for R in R_list:
        for p in centers:
            lhs = ball_integral(cache, ambient, p, R, ones) / R ** 2
            worst = max(worst, lhs / rhs)
    return worst


def _grad_norm(chart, u):
    du = chart.grid.gradient(u)
    sq = np.einsum("...ij,...i,...j->...", chart.gtil_inv, du, du)
    return np.sqrt(np.maximum(sq, 0.0))


def michael_simon_check(cache: GeometryCache, ambient: AmbientManifold, u,
                        lam: float = 0.0) -> tuple:
    """Sobolev inequality (int u^2)^{1/2} <= c(int |grad u| + int |A||u|
    + Lambda int |u|); returns (lhs, (t1, t2, t3), empirical_c)."""
    if isinstance(u, np.ndarray):
        u = (u,)
    lhs = math.sqrt(integrate_scalar(cache, tuple(f * f for f in u)))
    t1 = integrate_scalar(cache, tuple(_grad_norm(ch, f)
                                       for ch, f in zip(cache.charts, u)))
    t2 = integrate_scalar(cache, tuple(np.sqrt(ch.normsq_A) * np.abs(f)
                                       for ch, f in zip(cache.charts, u)))
    t3 = lam * integrate_scalar(cache, tuple(np.abs(f) for f in u))
    total = t1 + t2 + t3
    emp = 0.0 if lhs == 0.0 else lhs / max(total, 1e-300)
    return lhs, (t1, t2, t3), emp


def _lp_norm(cache, fields, p):
    if math.isinf(p):
        return max(float(np.abs(f[ch.grid.pou > 0.0]).max())
                   for ch, f in zip(cache.charts, fields))
    val = integrate_scalar(cache, tuple(np.abs(f) ** p for f in fields))
    return val ** (1.0 / p)


def multiplicative_sobolev_check(cache: GeometryCache, ambient: AmbientManifold,
                                 u, p: float, m: float,
                                 lam: float = 0.0) -> float:
    """sup |u| against ||u||_m^{1-alpha} (||grad u||_p + ||uA||_p
    + Lambda ||u||_p)^alpha with 1/alpha = (1/2 - 1/p) m + 1."""
    if not p > 2.0 or not m >= 1.0:
        raise BadExponents("need p > 2 and m >= 1")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    inv_alpha = (0.5 - inv_p) * m + 1.0 if not math.isinf(m) else math.inf
    if math.isinf(m):
        raise BadExponents("m = infinity collapses the interpolation exponent")
    alpha = 1.0 / inv_alpha
    if not 0.0 < alpha < 1.0:
        raise BadExponents("interpolation exponent left (0, 1)")
    if isinstance(u, np.ndarray):
        u = (u,)
    sup_u = _lp_norm(cache, u, math.inf)
    if sup_u == 0.0:
        return 0.0
    norm_m = _lp_norm(cache, u, m)
    grads = tuple(_grad_norm(ch, f) for ch, f in zip(cache.charts, u))
    ua = tuple(np.abs(f) * np.sqrt(ch.normsq_A)
               for ch, f in zip(cache.charts, u))
    bracket = (_lp_norm(cache, grads, p) + _lp_norm(cache, ua, p)
               + lam * _lp_norm(cache, u, p))
    rhs = norm_m ** (1.0 - alpha) * bracket ** alpha
    return sup_u / max(rhs, 1e-300)
