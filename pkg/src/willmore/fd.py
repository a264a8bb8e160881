"""Finite-difference stencils on structured 2D grids.

Operators are central, of order 2 (default) or 4, per axis. Non-periodic
grids fall back to 2nd-order stencils on the slices where the wide stencil
does not fit (the two outermost slices one-sided, the next ones central);
consumers are expected to mask or resynchronize edge bands where the order
drop matters. Fields are arrays of shape (Nu, Nv, *components); the
derivative direction is stacked on a new axis right after the grid axes.
"""
from __future__ import annotations

import numpy as np


def diff1_periodic(field, axis, h):
    return (np.roll(field, -1, axis) - np.roll(field, 1, axis)) / (2.0 * h)


def diff2_periodic(field, axis, h):
    return (np.roll(field, -1, axis) - 2.0 * field + np.roll(field, 1, axis)) / (h * h)


def diff1_periodic4(field, axis, h):
    return (-np.roll(field, -2, axis) + 8.0 * np.roll(field, -1, axis)
            - 8.0 * np.roll(field, 1, axis) + np.roll(field, 2, axis)) / (12.0 * h)


def diff2_periodic4(field, axis, h):
    return (-np.roll(field, -2, axis) + 16.0 * np.roll(field, -1, axis)
            - 30.0 * field + 16.0 * np.roll(field, 1, axis)
            - np.roll(field, 2, axis)) / (12.0 * h * h)


def diff1_clamped(field, axis, h):
    out = np.empty_like(field)
    f = np.moveaxis(field, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    o[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    o[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return out


def diff2_clamped(field, axis, h):
    out = np.empty_like(field)
    f = np.moveaxis(field, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (h * h)
    o[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h)
    o[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / (h * h)
    return out


def diff1_clamped4(field, axis, h):
    # Biased edge stencils keep the whole field uniformly 4th order; a drop
    # to 2nd order at the edges would put an O(h^2) kink into derived fields
    # that later second differences amplify to O(1).
    out = np.empty_like(field)
    f = np.moveaxis(field, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[2:-2] = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * h)
    o[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    o[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    o[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    o[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    return out


def diff2_clamped4(field, axis, h):
    out = np.empty_like(field)
    f = np.moveaxis(field, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[2:-2] = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2]
               + 16.0 * f[1:-3] - f[:-4]) / (12.0 * h * h)
    o[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2]
            - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) / (12.0 * h * h)
    o[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2]
            + 14.0 * f[3] - 6.0 * f[4] + f[5]) / (12.0 * h * h)
    o[-2] = (10.0 * f[-1] - 15.0 * f[-2] - 4.0 * f[-3]
             + 14.0 * f[-4] - 6.0 * f[-5] + f[-6]) / (12.0 * h * h)
    o[-1] = (45.0 * f[-1] - 154.0 * f[-2] + 214.0 * f[-3]
             - 156.0 * f[-4] + 61.0 * f[-5] - 10.0 * f[-6]) / (12.0 * h * h)
    return out


def diff1(field, axis, h, periodic, order=2):
    if order == 2:
        return diff1_periodic(field, axis, h) if periodic else diff1_clamped(field, axis, h)
    if order == 4:
        return diff1_periodic4(field, axis, h) if periodic else diff1_clamped4(field, axis, h)
    raise ValueError("order must be 2 or 4")


def diff2(field, axis, h, periodic, order=2):
    if order == 2:
        return diff2_periodic(field, axis, h) if periodic else diff2_clamped(field, axis, h)
    if order == 4:
        return diff2_periodic4(field, axis, h) if periodic else diff2_clamped4(field, axis, h)
    raise ValueError("order must be 2 or 4")


def grid_gradient(field, spacing, periodic, order=2):
    """First derivatives: (Nu, Nv, *c) -> (Nu, Nv, 2, *c), axis 2 is d/du, d/dv."""
    du = diff1(field, 0, spacing[0], periodic[0], order)
    dv = diff1(field, 1, spacing[1], periodic[1], order)
    return np.stack([du, dv], axis=2)


def grid_hessian(field, spacing, periodic, order=2):
    """Second derivatives: (Nu, Nv, *c) -> (Nu, Nv, 2, 2, *c), symmetric in (2, 3)."""
    duu = diff2(field, 0, spacing[0], periodic[0], order)
    dvv = diff2(field, 1, spacing[1], periodic[1], order)
    duv = diff1(diff1(field, 0, spacing[0], periodic[0], order),
                1, spacing[1], periodic[1], order)
    row_u = np.stack([duu, duv], axis=2)
    row_v = np.stack([duv, dvv], axis=2)
    return np.stack([row_u, row_v], axis=2)


def _lagrange_weights(t):
    """Weights of cubic Lagrange interpolation at offset t in [0, 1] from the
    second node of a 4-point unit-spaced stencil."""
    w0 = -t * (t - 1.0) * (t - 2.0) / 6.0
    w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0
    w2 = -(t + 1.0) * t * (t - 2.0) / 2.0
    w3 = (t + 1.0) * t * (t - 1.0) / 6.0
    return w0, w1, w2, w3


def local_cubic_interp(u_axis, v_axis, field, queries):
    """Tensor-product cubic Lagrange interpolation on a uniform grid.

    Purely local (4x4 stencil per query), so edge-band noise cannot ring
    across the domain the way global splines do. Queries must lie at least
    one cell away from the grid boundary. ``field`` may have trailing
    component axes; ``queries`` has shape (..., 2).
    """
    u_axis = np.asarray(u_axis)
    v_axis = np.asarray(v_axis)
    q = np.asarray(queries, dtype=float)
    hu = u_axis[1] - u_axis[0]
    hv = v_axis[1] - v_axis[0]
    gu = (q[..., 0] - u_axis[0]) / hu
    gv = (q[..., 1] - v_axis[0]) / hv
    iu = np.clip(np.floor(gu).astype(int), 1, u_axis.size - 3)
    iv = np.clip(np.floor(gv).astype(int), 1, v_axis.size - 3)
    tu = gu - iu
    tv = gv - iv
    if np.any(tu < -1e-9) or np.any(tu > 2.0) or np.any(tv < -1e-9) or np.any(tv > 2.0):
        raise ValueError("query outside the interpolable region")
    wu = _lagrange_weights(tu)
    wv = _lagrange_weights(tv)
    comp_shape = field.shape[2:]
    extra = (1,) * len(comp_shape)
    out = np.zeros(q.shape[:-1] + comp_shape)
    for a in range(4):
        for b in range(4):
            w = (wu[a] * wv[b]).reshape(q.shape[:-1] + extra)
            out += w * field[iu + a - 1, iv + b - 1]
    return out


def _prolong_axis(field, axis, n_new):
    n = field.shape[axis]
    if n_new == n:
        return field.astype(complex)
    if n_new < n:
        raise ValueError("fourier prolongation only upsamples")
    spec = np.fft.fft(field, axis=axis)
    shape = list(spec.shape)
    shape[axis] = n_new
    out = np.zeros(shape, dtype=complex)

    def sl(i, arr_ndim):
        s = [slice(None)] * arr_ndim
        s[axis] = i
        return tuple(s)

    for k in range(n):
        signed = k if k < (n + 1) // 2 else k - n
        gk = spec[sl(k, spec.ndim)]
        if n % 2 == 0 and signed == -n // 2:
            # split the Nyquist bin symmetrically
            out[sl((-n // 2) % n_new, out.ndim)] += 0.5 * gk
            out[sl((n // 2) % n_new, out.ndim)] += 0.5 * gk
        else:
            out[sl(signed % n_new, out.ndim)] += gk
    return np.fft.ifft(out, axis=axis) * (n_new / n)


def fourier_prolong(field, shape_new):
    """Trigonometric interpolation of a doubly periodic grid field onto a finer grid.

    Exact for band-limited fields; spectrally accurate for smooth ones.
    """
    out = _prolong_axis(field, 0, shape_new[0])
    out = _prolong_axis(out, 1, shape_new[1])
    return np.ascontiguousarray(out.real)
