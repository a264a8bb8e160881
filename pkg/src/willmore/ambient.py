"""Ambient Riemannian manifolds in a single global chart.

A manifold is a bundle of vectorized evaluation maps on chart points
x in R^n: the metric g_ab(x), the Christoffel symbols Gamma^a_bc(x), and the
fully lowered curvature tensor R_abcd(x) under the convention

    R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z,
    R_abcd  = <R(e_a,e_b) e_c, e_d>,

so that a space form of constant sectional curvature c satisfies

    R_abcd = c * (g_bc g_ad - g_ac g_bd),
    sec(X,Y) = R(X,Y,Y,X) / (|X|^2 |Y|^2 - <X,Y>^2).

Built-in kinds:

* ``euclidean``   -- flat R^n.
* ``sphere``      -- the round sphere of curvature +kappa^2, realized on the
  stereographic chart with g = 4 / (1 + kappa^2 |x|^2)^2 * delta (one point
  removed; the chart covers everything the library needs).
* ``hyperbolic``  -- hyperbolic space of curvature -kappahat^2 on the Poincare
  ball chart g = 4 / (1 - kappahat^2 |x|^2)^2 * delta, |x| < 1/kappahat.
* ``custom``      -- a user metric function; Christoffels and curvature come
  from nested central differences with a documented O(h^2) accuracy, and the
  chart distance is the midpoint-metric approximation (flagged approximate).

All evaluators accept arrays of shape (..., n) and are pure; instances are
immutable and safe to share between workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import BadRadii, DegeneratePlane, OutOfChart


@dataclass(frozen=True)
class BoundedGeometry:
    """Sup bounds on curvature derivatives plus the injectivity radius.

    ``sup_DkR[k]`` is the bound on |D^k R| for k = 0..order, so
    ``sup_DkR[0] == sup_R`` and ``sup_DkR[1] == sup_DR``. ``inj_radius`` is
    ``math.inf`` for manifolds without conjugate or cut points (the Euclidean
    sentinel required by the type contract). ``sup_ric`` bounds the Frobenius
    norm of the Ricci tensor and feeds the Lambda constant of the Sobolev
    verifiers.
    """

    sup_R: float
    sup_DR: float
    sup_DkR: tuple
    inj_radius: float
    order: int
    sup_ric: float

    def __post_init__(self):
        vals = (self.sup_R, self.sup_DR, self.sup_ric) + tuple(self.sup_DkR)
        for v in vals:
            if not (v >= 0.0):
                raise ValueError("curvature bounds must be finite and non-negative")
        if not self.inj_radius > 0.0:
            raise ValueError("inj_radius must be positive")

    @staticmethod
    def space_form(dim: int, c: float) -> "BoundedGeometry":
        # |R|^2 = c^2 * 2 n (n-1) and DR = 0 for constant curvature c
        sup_r = abs(c) * math.sqrt(2.0 * dim * (dim - 1))
        sup_ric = abs(c) * (dim - 1) * math.sqrt(dim)
        inj = math.pi / math.sqrt(c) if c > 0 else math.inf
        return BoundedGeometry(sup_r, 0.0, (sup_r, 0.0, 0.0), inj, 2, sup_ric)

    def rescaled(self, lam: float) -> "BoundedGeometry":
        # g -> lam * g: |D^k R| -> |D^k R| * lam^{-(k+2)/2}, lengths -> sqrt(lam) * lengths
        dk = tuple(v * lam ** (-(k + 2) / 2.0) for k, v in enumerate(self.sup_DkR))
        return BoundedGeometry(
            self.sup_R / lam,
            self.sup_DR * lam ** -1.5,
            dk,
            self.inj_radius * math.sqrt(lam),
            self.order,
            self.sup_ric / lam,
        )


def _smoothstep(t):
    """C-infinity ramp: 0 for t <= 0, 1 for t >= 1, max slope exactly 2."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    a = np.zeros_like(t)
    b = np.zeros_like(t)
    pos = t > 0.0
    a[pos] = np.exp(-1.0 / t[pos])
    neg = t < 1.0
    b[neg] = np.exp(-1.0 / (1.0 - t[neg]))
    return a / (a + b)


def _conformal_scale(x, c):
    s = 1.0 + c * np.sum(x * x, axis=-1)
    if c < 0.0 and np.any(s <= 0.0):
        raise OutOfChart("point outside the Poincare ball")
    return s


def _conformal_metric(x, c):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    s = _conformal_scale(x, c)
    e2phi = 4.0 / (s * s)
    return e2phi[..., None, None] * np.eye(n)


def _conformal_christoffel(x, c):
    # Gamma^k_ij = d_ik dphi_j + d_jk dphi_i - d_ij dphi_k with phi = log 2 - log s
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    s = _conformal_scale(x, c)
    dphi = -2.0 * c * x / s[..., None]
    eye = np.eye(n)
    g1 = np.einsum("ik,...j->...kij", eye, dphi)
    g2 = np.einsum("jk,...i->...kij", eye, dphi)
    g3 = np.einsum("ij,...k->...kij", eye, dphi)
    return g1 + g2 - g3


def _space_form_riemann(x, c, metric_fn):
    g = metric_fn(x)
    return c * (np.einsum("...bc,...ad->...abcd", g, g)
                - np.einsum("...ac,...bd->...abcd", g, g))


def _fd_metric_derivative(metric_fn, x, h):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    scale = h * (1.0 + np.max(np.abs(x), axis=-1))
    rows = []
    for a in range(n):
        step = np.zeros(n)
        step[a] = 1.0
        dx = scale[..., None] * step
        rows.append((metric_fn(x + dx) - metric_fn(x - dx)) / (2.0 * scale[..., None, None]))
    return np.stack(rows, axis=-3)  # (..., a, i, j) = d_a g_ij


def _fd_christoffel(metric_fn, x, h):
    g = metric_fn(x)
    ginv = np.linalg.inv(g)
    dg = _fd_metric_derivative(metric_fn, x, h)
    # Gamma^a_bc = 1/2 g^{am} (d_b g_mc + d_c g_mb - d_m g_bc)
    return 0.5 * np.einsum("...am,...bmc->...abc", ginv, dg + np.swapaxes(dg, -3, -1)
                           - np.moveaxis(dg, -1, -3))


def _fd_riemann(metric_fn, christoffel_fn, x, h):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    scale = h * (1.0 + np.max(np.abs(x), axis=-1))
    dgam = []
    for a in range(n):
        step = np.zeros(n)
        step[a] = 1.0
        dx = scale[..., None] * step
        dgam.append((christoffel_fn(x + dx) - christoffel_fn(x - dx))
                    / (2.0 * scale[..., None, None, None]))
    dgam = np.stack(dgam, axis=-4)  # (..., a, d, b, c) = d_a Gamma^d_bc
    gam = christoffel_fn(x)
    # R^d_abc = d_a Gamma^d_bc - d_b Gamma^d_ac + Gamma^m_bc Gamma^d_am - Gamma^m_ac Gamma^d_bm
    up = (np.einsum("...adbc->...dabc", dgam) - np.einsum("...bdac->...dabc", dgam)
          + np.einsum("...mbc,...dam->...dabc", gam, gam)
          - np.einsum("...mac,...dbm->...dabc", gam, gam))
    g = metric_fn(x)
    return np.einsum("...de,...eabc->...abcd", g, up)


def _euclidean_metric(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return np.broadcast_to(np.eye(n), x.shape[:-1] + (n, n))


def _zeros_fn(extra_axes):
    def fn(x):
        x = np.asarray(x, dtype=float)
        n = x.shape[-1]
        return np.zeros(x.shape[:-1] + (n,) * extra_axes)

    return fn


@dataclass(frozen=True)
class AmbientManifold:
    """Immutable chart description of the ambient (M, g); see module docstring."""

    dim: int
    kind: str
    metric_fn: Callable = field(repr=False)
    christoffel_fn: Callable = field(repr=False)
    riemann_fn: Callable = field(repr=False)
    bounds: BoundedGeometry
    curvature_c: Optional[float] = None
    is_flat: bool = False
    distance_exact: bool = True
    _distance_impl: Callable = field(repr=False, default=None)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def euclidean(dim: int) -> "AmbientManifold":
        if dim < 3:
            raise ValueError("ambient dimension must be >= 3")
        bounds = BoundedGeometry(0.0, 0.0, (0.0, 0.0, 0.0), math.inf, 2, 0.0)

        def dist(p, q):
            p = np.asarray(p, dtype=float)
            q = np.asarray(q, dtype=float)
            return np.linalg.norm(q - p, axis=-1)

        return AmbientManifold(dim, "euclidean", _euclidean_metric, _zeros_fn(3),
                               _zeros_fn(4), bounds, 0.0, True, True, dist)

    @staticmethod
    def sphere_conformal(dim: int, kappa: float) -> "AmbientManifold":
        """Round S^n of sectional curvature +kappa^2 on the stereographic chart."""
        if dim < 3:
            raise ValueError("ambient dimension must be >= 3")
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        c = kappa * kappa

        def metric(x):
            return _conformal_metric(x, c)

        def christoffel(x):
            return _conformal_christoffel(x, c)

        def riemann(x):
            return _space_form_riemann(x, c, metric)

        def lift(u):
            # inverse stereographic projection onto the unit sphere in R^{n+1}
            u = kappa * np.asarray(u, dtype=float)
            s = 1.0 + np.sum(u * u, axis=-1)
            return np.concatenate([2.0 * u / s[..., None],
                                   (2.0 / s - 1.0)[..., None]], axis=-1)

        def dist(p, q):
            # chordal form: exact at p = q, symmetric, stable for small arcs
            chord = np.linalg.norm(lift(p) - lift(q), axis=-1)
            return 2.0 * np.arcsin(np.clip(0.5 * chord, 0.0, 1.0)) / kappa

        return AmbientManifold(dim, "sphere", metric, christoffel, riemann,
                               BoundedGeometry.space_form(dim, c), c, False, True, dist)

    @staticmethod
    def hyperbolic_conformal(dim: int, kappa_hat: float) -> "AmbientManifold":
        """Hyperbolic H^n of curvature -kappahat^2 on the Poincare ball chart."""
        if dim < 3:
            raise ValueError("ambient dimension must be >= 3")
        if kappa_hat <= 0:
            raise ValueError("kappa_hat must be positive")
        c = -kappa_hat * kappa_hat

        def metric(x):
            return _conformal_metric(x, c)

        def christoffel(x):
            return _conformal_christoffel(x, c)

        def riemann(x):
            return _space_form_riemann(x, c, metric)

        def dist(p, q):
            u = kappa_hat * np.asarray(p, dtype=float)
            v = kappa_hat * np.asarray(q, dtype=float)
            u2 = np.sum(u * u, axis=-1)
            v2 = np.sum(v * v, axis=-1)
            if np.any(u2 >= 1.0) or np.any(v2 >= 1.0):
                raise OutOfChart("point outside the Poincare ball")
            arg = 1.0 + 2.0 * np.sum((u - v) ** 2, axis=-1) / ((1.0 - u2) * (1.0 - v2))
            return np.arccosh(np.maximum(arg, 1.0)) / kappa_hat

        return AmbientManifold(dim, "hyperbolic", metric, christoffel, riemann,
                               BoundedGeometry.space_form(dim, c), c, False, True, dist)

    @staticmethod
    def custom(dim: int, metric_fn: Callable, h: float = 1e-4,
               bounds: Optional[BoundedGeometry] = None,
               sample_points: Optional[np.ndarray] = None) -> "AmbientManifold":
        """Wrap a user metric; derived tensors by nested central differences.

        The chart distance is |q - p| measured in the metric at the midpoint
        and is only a ball-family surrogate, not a geodesic distance
        (``distance_exact`` is False).
        """
        if dim < 3:
            raise ValueError("ambient dimension must be >= 3")

        def christoffel(x):
            return _fd_christoffel(metric_fn, x, h)

        def riemann(x):
            return _fd_riemann(metric_fn, christoffel, x, h)

        if bounds is None:
            if sample_points is None:
                grid = np.linspace(-1.0, 1.0, 4)
                sample_points = np.stack(np.meshgrid(*([grid] * dim), indexing="ij"),
                                         axis=-1).reshape(-1, dim)
            bounds = estimate_bounds(metric_fn, christoffel, riemann, sample_points, h)

        def dist(p, q):
            p = np.asarray(p, dtype=float)
            q = np.asarray(q, dtype=float)
            mid = 0.5 * (p + q)
            g = metric_fn(mid)
            d = q - p
            return np.sqrt(np.einsum("...a,...ab,...b->...", d, g, d))

        return AmbientManifold(dim, "custom", metric_fn, christoffel, riemann,
                               bounds, None, False, False, dist)

    def rescaled(self, lam: float) -> "AmbientManifold":
        """The manifold (M, lam * g); Christoffels are unchanged, distances scale
        by sqrt(lam). Used by the parabolic blow-up with lam = r_j^{-2}."""
        if lam <= 0:
            raise ValueError("lam must be positive")
        base_metric = self.metric_fn
        base_riemann = self.riemann_fn
        base_dist = self._distance_impl

        def metric(x):
            return lam * base_metric(x)

        def riemann(x):
            return lam * base_riemann(x)

        def dist(p, q):
            return math.sqrt(lam) * base_dist(p, q)

        c = None if self.curvature_c is None else self.curvature_c / lam
        return replace(self, kind=f"scaled({self.kind})", metric_fn=metric,
                       riemann_fn=riemann, bounds=self.bounds.rescaled(lam),
                       curvature_c=c, _distance_impl=dist)

    # -- evaluation --------------------------------------------------------

    def metric(self, x):
        return self.metric_fn(np.asarray(x, dtype=float))

    def christoffel(self, x):
        return self.christoffel_fn(np.asarray(x, dtype=float))

    def riemann(self, x):
        return self.riemann_fn(np.asarray(x, dtype=float))

    def distance(self, p, q):
        return self._distance_impl(p, q)

    def sectional_curvature(self, x, X, Y):
        """sec(X, Y) at x; raises DegeneratePlane for dependent vectors."""
        x = np.asarray(x, dtype=float)
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        g = self.metric(x)
        xx = np.einsum("...a,...ab,...b->...", X, g, X)
        yy = np.einsum("...a,...ab,...b->...", Y, g, Y)
        xy = np.einsum("...a,...ab,...b->...", X, g, Y)
        gram = xx * yy - xy * xy
        if np.any(gram <= 1e-10 * np.maximum(xx * yy, 1e-300)):
            raise DegeneratePlane("vectors do not span a 2-plane")
        R = self.riemann(x)
        num = np.einsum("...abcd,...a,...b,...c,...d->...", R, X, Y, Y, X)
        return num / gram

    def cutoff(self, center, delta, rho, x):
        """Smooth geodesic-distance cutoff: 1 on B_delta(center), 0 off B_rho(center).

        The profile slope is at most 2, so first differences are bounded by
        2/(rho - delta) independently of the center.
        """
        if not (0.0 < delta < rho):
            raise BadRadii("need 0 < delta < rho")
        if not rho < self.bounds.inj_radius:
            raise BadRadii("rho must stay below the injectivity radius")
        d = self.distance(center, x)
        return _smoothstep((rho - d) / (rho - delta))


def estimate_bounds(metric_fn, christoffel_fn, riemann_fn, points, h) -> BoundedGeometry:
    """Empirical curvature bounds by sampling; inj is unknowable from samples
    and reported as inf, so Custom users with compact geometry should pass
    explicit bounds."""
    points = np.asarray(points, dtype=float)
    n = points.shape[-1]
    g = metric_fn(points)
    ginv = np.linalg.inv(g)
    R = riemann_fn(points)
    norm_r_sq = np.einsum("...abcd,...efgh,...ae,...bf,...cg,...dh->...",
                          R, R, ginv, ginv, ginv, ginv)
    ric = np.einsum("...acbd,...cd->...ab", R, ginv)
    norm_ric_sq = np.einsum("...ab,...cd,...ac,...bd->...", ric, ric, ginv, ginv)
    # |DR| estimate: coordinate differences corrected to the covariant derivative
    gam = christoffel_fn(points)
    scale = h * (1.0 + np.max(np.abs(points), axis=-1))
    rows = []
    for a in range(n):
        step = np.zeros(n)
        step[a] = 1.0
        dx = scale[..., None] * step
        rows.append((riemann_fn(points + dx) - riemann_fn(points - dx))
                    / (2.0 * scale[..., None, None, None, None]))
    dR = np.stack(rows, axis=-5)  # (..., e, a, b, c, d) = d_e R_abcd
    dR = (dR
          - np.einsum("...mea,...mbcd->...eabcd", gam, R)
          - np.einsum("...meb,...amcd->...eabcd", gam, R)
          - np.einsum("...mec,...abmd->...eabcd", gam, R)
          - np.einsum("...med,...abcm->...eabcd", gam, R))
    dr_sq = np.einsum("...eabcd,...fghij,...ef,...ag,...bh,...ci,...dj->...",
                      dR, dR, ginv, ginv, ginv, ginv, ginv)
    sup_r = float(np.sqrt(np.maximum(norm_r_sq, 0.0)).max())
    sup_dr = float(np.sqrt(np.maximum(dr_sq, 0.0)).max())
    sup_ric = float(np.sqrt(np.maximum(norm_ric_sq, 0.0)).max())
    return BoundedGeometry(sup_r, sup_dr, (sup_r, sup_dr), math.inf, 1, sup_ric)


# -- spec-shaped module-level operations ------------------------------------

def sectional_curvature(m: AmbientManifold, x, plane):
    X, Y = plane
    return m.sectional_curvature(x, X, Y)


def geodesic_distance(m: AmbientManifold, p, q):
    return m.distance(p, q)


def cutoff(m: AmbientManifold, center, delta, rho, x):
    return m.cutoff(center, delta, rho, x)
