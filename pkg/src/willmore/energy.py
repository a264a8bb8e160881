"""Willmore-type energies and the L2 gradient of the mean-curvature energy.

Three functionals are tracked together,

    W_H = 1/2 integral |H|^2,   W_A = 1/2 integral |A|^2,
    W_circ = integral |A_circ|^2,

because Gauss-Bonnet ties them: W_circ - W_H - 2 int K(TSigma) + 4 pi chi = 0
for closed surfaces, so the difference is a quadrature-error meter rather
than new information.  The gradient is

    W(f) = Delta H + Q(A_circ) H + Pperp R(H, e_i) e_i,

with Q(A_circ) phi = A_circ(e_i, e_j) <A_circ(e_i, e_j), phi> summed over a
gtil-orthonormal frame e_i (the double contraction is frame independent) and
e_i the ambient images of that frame in the curvature term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric, NonFiniteValue, StepTooLarge
from .surface import (GeometryCache, ImmersionField, chart_normal_laplacian,
                      compute_geometry, integrate_scalar)


@dataclass(frozen=True)
class EnergyReport:
    """Energy levels of one geometry snapshot plus their identity defects."""

    W_H: float
    W_A: float
    W_circ: float
    int_KTS: float
    gb_residual: float
    identity_residual: float


def energies(cache: GeometryCache) -> EnergyReport:
    w_h = 0.5 * integrate_scalar(cache, tuple(c.normsq_H for c in cache.charts))
    w_a = 0.5 * integrate_scalar(cache, tuple(c.normsq_A for c in cache.charts))
    w_circ = integrate_scalar(cache, tuple(c.normsq_A0 for c in cache.charts))
    int_kts = integrate_scalar(cache, tuple(c.K_TSigma for c in cache.charts))
    total_k = integrate_scalar(cache, tuple(c.K_til for c in cache.charts))
    chi = cache.surface.euler_char
    gb = abs(total_k - 2.0 * math.pi * chi)
    identity = abs(w_circ - w_h - 2.0 * int_kts + 4.0 * math.pi * chi)
    report = EnergyReport(w_h, w_a, w_circ, int_kts, gb, identity)
    if not all(math.isfinite(v) for v in
               (w_h, w_a, w_circ, int_kts, gb, identity)):
        raise NonFiniteValue("energy report contains non-finite entries")
    return report


def _frame_coefficients(chart):
    """Coordinate coefficients E of the Gram-Schmidt frame: the ambient frame
    equals einsum('...ik,...ka->...ia', E, df)."""
    g11 = chart.gtil[..., 0, 0]
    g12 = chart.gtil[..., 0, 1]
    det = chart.det_gtil
    E = np.zeros(chart.gtil.shape)
    E[..., 0, 0] = 1.0 / np.sqrt(g11)
    E[..., 1, 0] = -g12 / np.sqrt(g11 * det)
    E[..., 1, 1] = np.sqrt(g11 / det)
    return E


def _chart_gradient(chart):
    lap_H = chart_normal_laplacian(chart, chart.H)

    E = _frame_coefficients(chart)
    a0_frame = np.einsum("...ik,...jl,...kla->...ija", E, E, chart.A0)
    inner = np.einsum("...ija,...ab,...b->...ij", a0_frame, chart.g_amb, chart.H)
    q_term = np.einsum("...ij,...ija->...a", inner, a0_frame)

    low = np.einsum("...abcd,...a,...ib,...ic->...d",
                    chart.riem, chart.H, chart.frame, chart.frame)
    r_term = np.einsum("...de,...d->...e", np.linalg.inv(chart.g_amb), low)
    r_term = np.einsum("...ab,...b->...a", chart.Pperp, r_term)

    return lap_H + q_term + r_term


def gradient(cache: GeometryCache) -> tuple:
    """L2 gradient of W_H as a per-chart normal vector field."""
    return tuple(_chart_gradient(c) for c in cache.charts)


def _bounding_box_diameter(f: ImmersionField) -> float:
    lo = np.min([x.min(axis=(0, 1)) for x in f.values], axis=0)
    hi = np.max([x.max(axis=(0, 1)) for x in f.values], axis=0)
    return float(np.linalg.norm(hi - lo))


def displaced(f: ImmersionField, phi, eps: float) -> ImmersionField:
    """Nodewise ambient-chart displacement f + eps * phi."""
    if isinstance(phi, np.ndarray):
        phi = (phi,)
    vals = tuple(x + eps * p for x, p in zip(f.values, phi))
    return ImmersionField(f.surface, f.ambient, vals)


def gradient_pairing_check(f: ImmersionField, phi, eps: float = None) -> tuple:
    """Central-difference directional derivative of W_H along phi against the
    L2 pairing with the gradient; returns (directional, pairing, rel_err)."""
    if isinstance(phi, np.ndarray):
        phi = (phi,)
    if eps is None:
        eps = 1e-5 * _bounding_box_diameter(f)
    try:
        plus = energies(compute_geometry(displaced(f, phi, eps))).W_H
        minus = energies(compute_geometry(displaced(f, phi, -eps))).W_H
    except (DegenerateMetric, NonFiniteValue) as bad:
        raise StepTooLarge("displaced immersion left the valid chart") from bad
    directional = (plus - minus) / (2.0 * eps)

    cache = compute_geometry(f)
    grads = gradient(cache)
    fields = tuple(np.einsum("...a,...ab,...b->...", w, c.g_amb, p)
                   for w, c, p in zip(grads, cache.charts, phi))
    pairing = integrate_scalar(cache, fields)
    rel_err = abs(directional - pairing) / max(abs(pairing), 1e-12)
    return directional, pairing, rel_err
