"""Charted closed surfaces and their fundamental-form stack.

A surface is discretized on structured parameter charts:

* ``Torus``  -- one doubly periodic grid, coordinates (u, v) in [0, 2pi)^2.
* ``Sphere`` -- two stereographic charts (north listed first) on square grids
  [-L, L]^2, glued by the transition w' = w / |w|^2 on the annulus
  1/r_pou <= |w| <= r_pou with a fixed smooth partition of unity.

From the immersion values f(node) in the ambient chart, ``compute_geometry``
builds the induced metric gtil_ij = g(f)(d_i f, d_j f), the Christoffels of
gtil by the chain rule (metric compatibility supplies the ambient metric
derivative, so no extra ambient differencing is needed), and the second
fundamental form by the coordinate Gauss formula

    A^a_ij = d2_ij f^a + Gamma^a_bc(f) d_i f^b d_j f^c - Gammatil^k_ij d_k f^a,

explicitly re-projected onto the normal bundle; the pre-projection tangential
leakage is recorded as a discretization health metric. The intrinsic curvature
K_til comes from Gammatil via the 2-D curvature formula, independently of the
Gauss equation, so the identity K_til - K(TSigma) = (|H|^2 - |A|^2)/2 stays a
genuine cross-check.

Torus charts use 2nd-order central differencing.  Sphere charts use uniformly
4th-order stencils (biased near the non-periodic edges): the two charts only
agree on the overlap annulus up to the discretization error of the *coarser*
route, and 2nd-order leaves the curvature fields visibly chart-dependent at
practical resolutions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ambient import AmbientManifold, _smoothstep
from .errors import DegenerateMetric, NonFiniteValue, NotNormal
from .fd import grid_gradient, grid_hessian, local_cubic_interp

TORUS = "torus"
SPHERE = "sphere"


# -- chart maps of the reference sphere ---------------------------------------

def stereo_north(w):
    """North stereographic chart onto the unit sphere in R^3."""
    w = np.asarray(w, dtype=float)
    s = 1.0 + np.sum(w * w, axis=-1)
    return np.concatenate([2.0 * w / s[..., None], (2.0 / s - 1.0)[..., None]], axis=-1)


def stereo_south(w):
    """South chart; stereo_south(transition(w)) == stereo_north(w) exactly."""
    p = stereo_north(w)
    p[..., -1] *= -1.0
    return p


def transition(w):
    w = np.asarray(w, dtype=float)
    return w / np.sum(w * w, axis=-1)[..., None]


# -- chart grids ---------------------------------------------------------------

@dataclass(frozen=True)
class ChartGrid:
    """One structured parameter grid with its partition-of-unity weights."""

    name: str
    u_axis: np.ndarray
    v_axis: np.ndarray
    spacing: tuple
    periodic: tuple
    pou: np.ndarray
    fd_order: int = 2

    @property
    def shape(self):
        return (self.u_axis.size, self.v_axis.size)

    def nodes(self):
        """Parameter values per node, shape (N_u, N_v, 2)."""
        return np.stack(np.meshgrid(self.u_axis, self.v_axis, indexing="ij"), axis=-1)

    def gradient(self, field):
        return grid_gradient(field, self.spacing, self.periodic, self.fd_order)

    def hessian(self, field):
        return grid_hessian(field, self.spacing, self.periodic, self.fd_order)


def pou_weight(w, r_pou):
    """Weight of the chart owning parameter points w; the transitioned chart
    sees radius 1/|w|, and the log-symmetric profile makes the two weights sum
    to one identically."""
    s = np.linalg.norm(np.asarray(w, dtype=float), axis=-1)
    t = np.full_like(s, 2.0)
    pos = s > 0.0
    t[pos] = (math.log(r_pou) - np.log(s[pos])) / (2.0 * math.log(r_pou))
    return _smoothstep(t)


@dataclass(frozen=True)
class ChartedSurface:
    """Chart layout, spacings and Euler characteristic of the closed surface."""

    topology: str
    charts: tuple
    euler_char: int
    r_pou: float = 0.0

    @staticmethod
    def torus(n_u: int, n_v: int) -> "ChartedSurface":
        if n_u < 16 or n_v < 16:
            raise ValueError("grid must be at least 16 x 16")
        hu = 2.0 * math.pi / n_u
        hv = 2.0 * math.pi / n_v
        grid = ChartGrid("torus", hu * np.arange(n_u), hv * np.arange(n_v),
                         (hu, hv), (True, True), np.ones((n_u, n_v)))
        return ChartedSurface(TORUS, (grid,), 0)

    @staticmethod
    def sphere(n: int, extent: float = 1.4, r_pou: float = 1.2) -> "ChartedSurface":
        if n < 16:
            raise ValueError("grid must be at least 16 x 16")
        if not 1.0 < r_pou < extent:
            raise ValueError("need 1 < r_pou < extent")
        h = 2.0 * extent / (n - 1)
        axis = -extent + h * np.arange(n)
        w = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1)
        pou = pou_weight(w, r_pou)
        # 4th-order stencils keep the two charts' curvature fields consistent
        # on the overlap annulus
        charts = tuple(ChartGrid(name, axis, axis, (h, h), (False, False), pou, 4)
                       for name in ("north", "south"))
        return ChartedSurface(SPHERE, charts, 2, r_pou)


@dataclass(frozen=True)
class ImmersionField:
    """Per-chart immersion values f(node) in the ambient chart R^n."""

    surface: ChartedSurface
    ambient: AmbientManifold
    values: tuple

    def __post_init__(self):
        for grid, x in zip(self.surface.charts, self.values):
            if x.shape != grid.shape + (self.ambient.dim,):
                raise ValueError("immersion values do not match the chart grid")
            if not np.all(np.isfinite(x)):
                raise NonFiniteValue("immersion contains non-finite values")

    @staticmethod
    def from_torus_function(surface: ChartedSurface, ambient: AmbientManifold,
                            fn: Callable) -> "ImmersionField":
        """fn(u, v) -> ambient points, broadcast over grid arrays."""
        uv = surface.charts[0].nodes()
        vals = np.asarray(fn(uv[..., 0], uv[..., 1]), dtype=float)
        return ImmersionField(surface, ambient, (vals,))

    @staticmethod
    def from_sphere_function(surface: ChartedSurface, ambient: AmbientManifold,
                             fn: Callable) -> "ImmersionField":
        """fn(p) maps reference unit-sphere points (..., 3) to ambient points.

        Both charts evaluate fn on the same reference points, so the chart
        transition consistency holds to machine precision by construction.
        """
        vals = []
        for grid, chart_map in zip(surface.charts, (stereo_north, stereo_south)):
            vals.append(np.asarray(fn(chart_map(grid.nodes())), dtype=float))
        return ImmersionField(surface, ambient, tuple(vals))

    def chart_consistency(self, fn=None) -> float:
        """Max disagreement of the two chart representations on the overlap
        annulus; zero for the torus.

        With ``fn`` (the map of sphere points used to build the immersion)
        the north nodal values are compared against ``fn`` evaluated through
        the south parametrization at the transitioned nodes, which isolates
        the atlas wiring and is exact up to roundoff.  Without ``fn`` the
        south values are pulled back by cubic interpolation, so the result
        carries an O(h^4) interpolation floor.
        """
        if self.surface.topology == TORUS:
            return 0.0
        north, south = self.surface.charts
        w = north.nodes()
        s = np.linalg.norm(w, axis=-1)
        band = (s >= 1.0 / self.surface.r_pou) & (s <= self.surface.r_pou)
        if fn is not None:
            vals = fn(stereo_south(transition(w[band])))
        else:
            vals = local_cubic_interp(south.u_axis, south.v_axis, self.values[1],
                                      transition(w[band]))
        return float(np.max(np.linalg.norm(vals - self.values[0][band], axis=-1)))

    def copy(self) -> "ImmersionField":
        return ImmersionField(self.surface, self.ambient,
                              tuple(x.copy() for x in self.values))


def torus_of_revolution(ambient: AmbientManifold, big_radius: float,
                        small_radius: float, n_u: int, n_v: int,
                        center=None) -> ImmersionField:
    if not 0.0 < small_radius < big_radius:
        raise ValueError("need 0 < small_radius < big_radius")
    surface = ChartedSurface.torus(n_u, n_v)
    shift = np.zeros(ambient.dim) if center is None else np.asarray(center, dtype=float)

    def fn(u, v):
        ring = big_radius + small_radius * np.cos(v)
        out = np.zeros(u.shape + (ambient.dim,))
        out[..., 0] = ring * np.cos(u)
        out[..., 1] = ring * np.sin(u)
        out[..., 2] = small_radius * np.sin(v)
        return out + shift

    return ImmersionField.from_torus_function(surface, ambient, fn)


def clifford_torus(ambient: AmbientManifold, n_u: int, n_v: int,
                   radius: float = 1.0) -> ImmersionField:
    """Product of two circles of equal radius in R^4 (flat induced metric,
    parallel second fundamental form)."""
    if ambient.dim < 4:
        raise ValueError("the product torus needs ambient dimension >= 4")
    surface = ChartedSurface.torus(n_u, n_v)

    def fn(u, v):
        out = np.zeros(u.shape + (ambient.dim,))
        out[..., 0] = radius * np.cos(u)
        out[..., 1] = radius * np.sin(u)
        out[..., 2] = radius * np.cos(v)
        out[..., 3] = radius * np.sin(v)
        return out

    return ImmersionField.from_torus_function(surface, ambient, fn)


def round_sphere(ambient: AmbientManifold, radius: float, n: int,
                 center=None) -> ImmersionField:
    """Chart sphere of the given coordinate radius; in the conformal space
    forms (center at the origin) this is a geodesic sphere."""
    if ambient.dim != 3:
        raise ValueError("sphere immersions are wired for 3-dimensional ambients")
    surface = ChartedSurface.sphere(n)
    shift = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    return ImmersionField.from_sphere_function(surface, ambient,
                                               lambda p: shift + radius * p)


# -- geometry -------------------------------------------------------------------

@dataclass(frozen=True)
class ChartGeometry:
    """Fundamental-form stack of one chart; all tensor fields are per node."""

    grid: ChartGrid
    x: np.ndarray            # (Nu, Nv, n) immersion values
    df: np.ndarray           # (Nu, Nv, 2, n)
    d2f: np.ndarray          # (Nu, Nv, 2, 2, n)
    g_amb: np.ndarray        # (Nu, Nv, n, n) ambient metric along f
    gam_amb: np.ndarray      # (Nu, Nv, n, n, n) ambient Christoffels along f
    riem: np.ndarray         # (Nu, Nv, n, n, n, n) lowered ambient curvature
    gtil: np.ndarray         # (Nu, Nv, 2, 2)
    gtil_inv: np.ndarray
    det_gtil: np.ndarray
    gamma_til: np.ndarray    # (Nu, Nv, 2, 2, 2), [k, i, j] = Gammatil^k_ij
    Pperp: np.ndarray        # (Nu, Nv, n, n) normal projector, mixed indices
    A: np.ndarray            # (Nu, Nv, 2, 2, n)
    H: np.ndarray            # (Nu, Nv, n)
    A0: np.ndarray
    normsq_A: np.ndarray
    normsq_A0: np.ndarray
    normsq_H: np.ndarray
    K_til: np.ndarray
    K_TSigma: np.ndarray
    area_el: np.ndarray      # sqrt(det gtil) * h_u * h_v
    frame: np.ndarray        # (Nu, Nv, 2, n) Gram-Schmidt gtil-orthonormal frame
    tangential_residual: float

    @property
    def weight(self):
        return self.grid.pou * self.area_el


@dataclass(frozen=True)
class GeometryCache:
    """Immutable geometry of a full immersion (one entry per chart)."""

    immersion: ImmersionField
    charts: tuple

    @property
    def surface(self):
        return self.immersion.surface

    @property
    def ambient(self):
        return self.immersion.ambient


def _norm_sq_22(T, gtil_inv, g_amb):
    """|T|^2 for a (0,2) surface tensor with normal values, axes (..., i, j, a)."""
    return np.einsum("...ija,...ik,...jl,...ab,...klb->...",
                     T, gtil_inv, gtil_inv, g_amb, T)


def _chart_geometry(ambient: AmbientManifold, grid: ChartGrid,
                    x: np.ndarray) -> ChartGeometry:
    df = grid.gradient(x)
    d2f = grid.hessian(x)

    g_amb = ambient.metric(x)
    gam_amb = ambient.christoffel(x)
    riem = ambient.riemann(x)

    gtil = np.einsum("...ia,...ab,...jb->...ij", df, g_amb, df)
    det = gtil[..., 0, 0] * gtil[..., 1, 1] - gtil[..., 0, 1] ** 2
    if not np.all(np.isfinite(det)):
        raise NonFiniteValue("induced metric is not finite")
    if np.any(det <= 1e-10 * np.mean(det)):
        raise DegenerateMetric("induced metric degenerates at a node")
    gtil_inv = np.empty_like(gtil)
    gtil_inv[..., 0, 0] = gtil[..., 1, 1]
    gtil_inv[..., 1, 1] = gtil[..., 0, 0]
    gtil_inv[..., 0, 1] = -gtil[..., 0, 1]
    gtil_inv[..., 1, 0] = -gtil[..., 1, 0]
    gtil_inv = gtil_inv / det[..., None, None]

    # tangential / normal projectors, mixed indices P^a_b
    P = np.einsum("...ij,...ia,...jb,...bc->...ac", gtil_inv, df, df, g_amb)
    Pperp = np.eye(ambient.dim) - P

    # d_c g_ab from metric compatibility
    dg_amb = (np.einsum("...mb,...mca->...cab", g_amb, gam_amb)
              + np.einsum("...am,...mcb->...cab", g_amb, gam_amb))
    # (..., k, i, j) = d_k gtil_ij by the chain rule
    dgtil = (np.einsum("...kia,...ab,...jb->...kij", d2f, g_amb, df)
             + np.einsum("...ia,...ab,...kjb->...kij", df, g_amb, d2f)
             + np.einsum("...ia,...jb,...cab,...kc->...kij", df, df, dg_amb, df))
    combo = (dgtil + np.swapaxes(dgtil, -3, -2)            # d_i g_jl + d_j g_il
             - np.moveaxis(dgtil, -3, -1))                 # - d_l g_ij
    gamma_til = 0.5 * np.einsum("...kl,...ijl->...kij", gtil_inv, combo)

    # coordinate Gauss formula, then explicit normal re-projection
    A_raw = (d2f
             + np.einsum("...abc,...ib,...jc->...ija", gam_amb, df, df)
             - np.einsum("...kij,...ka->...ija", gamma_til, df))
    A = np.einsum("...ab,...ijb->...ija", Pperp, A_raw)
    leak = _norm_sq_22(A_raw - A, gtil_inv, g_amb)
    tangential_residual = float(np.sqrt(np.max(np.maximum(leak, 0.0))))

    H = np.einsum("...ij,...ija->...a", gtil_inv, A)
    A0 = A - 0.5 * gtil[..., None] * H[..., None, None, :]

    normsq_A = _norm_sq_22(A, gtil_inv, g_amb)
    normsq_A0 = _norm_sq_22(A0, gtil_inv, g_amb)
    normsq_H = np.einsum("...a,...ab,...b->...", H, g_amb, H)

    # intrinsic curvature from Gammatil alone: K = gtil_1m R^m_122 / det with
    # R^m_abc = d_a Gam^m_bc - d_b Gam^m_ac + Gam^e_bc Gam^m_ae - Gam^e_ac Gam^m_be
    dgam = grid.gradient(gamma_til)  # (..., a, m, b, c)
    r_up = (dgam[..., 0, :, 1, 1] - dgam[..., 1, :, 0, 1]
            + np.einsum("...e,...me->...m", gamma_til[..., 1, 1], gamma_til[..., 0, :])
            - np.einsum("...e,...me->...m", gamma_til[..., 0, 1], gamma_til[..., 1, :]))
    K_til = np.einsum("...m,...m->...", gtil[..., 0, :], r_up) / det

    K_TSigma = np.einsum("...abcd,...a,...b,...c,...d->...",
                         riem, df[..., 0, :], df[..., 1, :],
                         df[..., 1, :], df[..., 0, :]) / det

    area_el = np.sqrt(det) * grid.spacing[0] * grid.spacing[1]

    # nodewise Gram-Schmidt tangent frame, orthonormal for g along f
    e1 = df[..., 0, :]
    e1 = e1 / np.sqrt(np.einsum("...a,...ab,...b->...", e1, g_amb, e1))[..., None]
    e2 = df[..., 1, :]
    e2 = e2 - np.einsum("...a,...ab,...b->...", e2, g_amb, e1)[..., None] * e1
    e2 = e2 / np.sqrt(np.einsum("...a,...ab,...b->...", e2, g_amb, e2))[..., None]
    frame = np.stack([e1, e2], axis=-2)

    return ChartGeometry(grid, x, df, d2f, g_amb, gam_amb, riem, gtil, gtil_inv,
                         det, gamma_til, Pperp, A, H, A0, normsq_A, normsq_A0,
                         normsq_H, K_til, K_TSigma, area_el, frame,
                         tangential_residual)


def compute_geometry(f: ImmersionField) -> GeometryCache:
    charts = tuple(_chart_geometry(f.ambient, grid, x)
                   for grid, x in zip(f.surface.charts, f.values))
    return GeometryCache(f, charts)


def integrate_scalar(cache: GeometryCache, fields) -> float:
    """Integral over the surface; ``fields`` is one array per chart (a bare
    array is promoted for single-chart surfaces)."""
    if isinstance(fields, np.ndarray):
        fields = (fields,)
    total = 0.0
    for chart, vals in zip(cache.charts, fields):
        on = chart.grid.pou > 0.0
        if not np.all(np.isfinite(vals[on])):
            raise NonFiniteValue("integrand is not finite on the chart support")
        # off-support values never contribute, even when non-finite
        total += float(np.sum(np.where(on, vals * chart.weight, 0.0)))
    return total


def surface_area(cache: GeometryCache) -> float:
    return integrate_scalar(cache, tuple(np.ones(c.grid.shape) for c in cache.charts))


# -- normal-bundle calculus -----------------------------------------------------

def _normal_gradient(chart: ChartGeometry, phi):
    """(nabla_i phi)^a = Pperp(d_i phi + Gamma(f)(d_i f, phi)), shape (..., i, a)."""
    dphi = chart.grid.gradient(phi)
    cov = dphi + np.einsum("...abc,...ib,...c->...ia", chart.gam_amb, chart.df, phi)
    return np.einsum("...ab,...ib->...ia", chart.Pperp, cov)


def _normal_second_derivative(chart: ChartGeometry, V):
    """nabla_i V_j - Gammatil^k_ij V_k for a normal-valued 1-form V."""
    dV = chart.grid.gradient(V)
    cov = dV + np.einsum("...abc,...ib,...jc->...ija", chart.gam_amb, chart.df, V)
    cov = np.einsum("...ab,...ijb->...ija", chart.Pperp, cov)
    return cov - np.einsum("...kij,...ka->...ija", chart.gamma_til, V)


def _check_normal(chart: ChartGeometry, phi, rtol):
    # fields normal to the continuous surface still leak O(h^2) into the
    # discrete tangent spaces, so the default tolerance is loose
    tang = phi - np.einsum("...ab,...b->...a", chart.Pperp, phi)
    scale = 1.0 + math.sqrt(max(float(np.max(
        np.einsum("...a,...ab,...b->...", phi, chart.g_amb, phi))), 0.0))
    leak = math.sqrt(max(float(np.max(
        np.einsum("...a,...ab,...b->...", tang, chart.g_amb, tang))), 0.0))
    if leak > rtol * scale:
        raise NotNormal("field has a tangential component beyond tolerance")


def chart_normal_laplacian(chart: ChartGeometry, phi, rtol=1e-3):
    _check_normal(chart, phi, rtol)
    V = _normal_gradient(chart, phi)
    W = _normal_second_derivative(chart, V)
    lap = np.einsum("...ij,...ija->...a", chart.gtil_inv, W)
    return np.einsum("...ab,...b->...a", chart.Pperp, lap)


def normal_laplacian(cache: GeometryCache, phi, rtol=1e-3) -> tuple:
    """Trace of the second normal covariant derivative, chartwise; the result
    is re-projected onto the normal bundle."""
    if isinstance(phi, np.ndarray):
        phi = (phi,)
    return tuple(chart_normal_laplacian(chart, p, rtol)
                 for chart, p in zip(cache.charts, phi))


def _chart_simons_field(chart: ChartGeometry):
    """Pointwise |Delta A - nabla^2 H - S(A)|, the cubic remainder S(A) being
    rebuilt from A through the Gauss and Ricci equations."""
    g = chart.g_amb
    ginv2 = chart.gtil_inv
    A = chart.A

    # full covariant derivative of A: (..., k, i, j, a)
    dA = chart.grid.gradient(A)
    covA = dA + np.einsum("...abc,...kb,...ijc->...kija", chart.gam_amb, chart.df, A)
    covA = np.einsum("...ab,...kijb->...kija", chart.Pperp, covA)
    covA = (covA
            - np.einsum("...mki,...mja->...kija", chart.gamma_til, A)
            - np.einsum("...mkj,...ima->...kija", chart.gamma_til, A))

    dDA = chart.grid.gradient(covA)
    cov2 = dDA + np.einsum("...abc,...lb,...kijc->...lkija",
                           chart.gam_amb, chart.df, covA)
    cov2 = np.einsum("...ab,...lkijb->...lkija", chart.Pperp, cov2)
    cov2 = (cov2
            - np.einsum("...mlk,...mija->...lkija", chart.gamma_til, covA)
            - np.einsum("...mli,...kmja->...lkija", chart.gamma_til, covA)
            - np.einsum("...mlj,...kima->...lkija", chart.gamma_til, covA))
    lap_A = np.einsum("...lk,...lkija->...ija", ginv2, cov2)

    hess_H = _normal_second_derivative(chart, _normal_gradient(chart, chart.H))

    # S(A) from commuting derivatives: the induced curvature enters through
    # the Gauss equation and the normal curvature through the Ricci equation
    ip = np.einsum("...ija,...ab,...klb->...ijkl", A, g, A)   # <A_ij, A_kl>
    riem_surf = np.einsum("...abcd,...ia,...jb,...kc,...ld->...ijkl",
                          chart.riem, chart.df, chart.df, chart.df, chart.df)
    r_ind = (riem_surf
             + np.einsum("...iljk->...ijkl", ip)
             - np.einsum("...ikjl->...ijkl", ip))
    r_up = np.einsum("...md,...kild->...mkil", ginv2, r_ind)

    term1 = -np.einsum("...kl,...mkil,...mja->...ija", ginv2, r_up, A)
    term2 = -np.einsum("...kl,...mkij,...lma->...ija", ginv2, r_up, A)
    term3 = (np.einsum("...kl,...mn,...kma,...inlj->...ija", ginv2, ginv2, A, ip)
             - np.einsum("...kl,...mn,...ima,...knlj->...ija", ginv2, ginv2, A, ip))
    s_term = term1 + term2 + term3

    resid = lap_A - hess_H - s_term
    return np.sqrt(np.maximum(_norm_sq_22(resid, ginv2, g), 0.0))


def simons_residual(cache: GeometryCache) -> float:
    """Area-averaged L^1 norm of the Simons-identity defect; a convergence
    diagnostic (the remainder is fixed only up to universal contractions)."""
    fields = tuple(_chart_simons_field(c) for c in cache.charts)
    return integrate_scalar(cache, fields) / surface_area(cache)


# -- mesh export ------------------------------------------------------------------

def write_obj(f: ImmersionField, path) -> None:
    """OBJ snapshot: vertices are chart-coordinate images, faces are grid
    quads split into triangles, nodes row-major per chart (north first)."""
    lines = []
    offsets = []
    count = 0
    for grid, x in zip(f.surface.charts, f.values):
        offsets.append(count)
        flat = x.reshape(-1, x.shape[-1])
        for p in flat:
            coords = " ".join(f"{v:.12g}" for v in p)
            lines.append(f"v {coords}")
        count += flat.shape[0]
    for grid, off in zip(f.surface.charts, offsets):
        nu, nv = grid.shape
        per_u = nu if grid.periodic[0] else nu - 1
        per_v = nv if grid.periodic[1] else nv - 1
        if f.surface.topology == SPHERE:
            keep = np.linalg.norm(grid.nodes(), axis=-1) <= f.surface.r_pou
        else:
            keep = np.ones((nu, nv), dtype=bool)
        for i in range(per_u):
            for j in range(per_v):
                i2 = (i + 1) % nu
                j2 = (j + 1) % nv
                if not (keep[i, j] and keep[i2, j] and keep[i2, j2] and keep[i, j2]):
                    continue
                a = off + i * nv + j + 1
                b = off + i2 * nv + j + 1
                c = off + i2 * nv + j2 + 1
                d = off + i * nv + j2 + 1
                lines.append(f"f {a} {b} {c}")
                lines.append(f"f {a} {c} {d}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
