"""Independent reference computations for test expectations.

Everything here is deliberately dumb and route-independent: 1-D quadrature of
textbook integrands, dense sampling, classical closed forms derived on paper.
Nothing imports the package under test. Expected values produced by these
oracles are frozen into the test files next to a comment naming the oracle
function that generated them.
"""
import math

import numpy as np
from scipy.integrate import quad


def poincare_radial_distance(rho, kappa_hat=1.0):
    """Distance from the origin to (rho, 0, ..., 0) in the Poincare ball of
    curvature -kappa_hat^2, by quadrature of the radial line element
    ds = (2 / (1 - (kappa_hat s)^2)) ds."""
    assert kappa_hat * rho < 1.0, "point must lie inside the ball chart"
    val, err = quad(lambda s: 2.0 / (1.0 - (kappa_hat * s) ** 2), 0.0, rho)
    assert err < 1e-8
    return val


def sphere_chord_distance(p, q, kappa=1.0):
    """Great-circle distance on the curvature +kappa^2 sphere between two
    stereographic chart points, via the explicit chart lift
    Phi(u) = (2u, 1 - |u|^2) / (1 + |u|^2) to the unit sphere in R^{n+1}."""
    def lift(u):
        u = np.asarray(u, dtype=float) * kappa
        s = 1.0 + np.dot(u, u)
        return np.append(2.0 * u / s, (1.0 - np.dot(u, u)) / s)

    dot = float(np.clip(np.dot(lift(p), lift(q)), -1.0, 1.0))
    return math.acos(dot) / kappa


def conformal_segment_length(p, q, c, num=20001):
    """Length of the straight chart segment from p to q under the conformal
    metric g = 4 / (1 + c |x|^2)^2 delta, by composite trapezoid sampling.
    For p, q on a ray through the origin this is the geodesic distance."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    t = np.linspace(0.0, 1.0, num)
    x = p[None, :] + t[:, None] * (q - p)[None, :]
    speed = 2.0 / (1.0 + c * np.sum(x * x, axis=1)) * np.linalg.norm(q - p)
    return float(np.trapezoid(speed, t))


def torus_willmore_energy(R, r):
    """W_H = 1/2 int |H|^2 dmu for the torus of revolution with radii R > r
    in R^3, by 1-D quadrature in the tube angle. Closed form: the integrand
    reduces to (R + 2 r cos v)^2 / (r (R + r cos v)) * pi dv, giving
    2 pi^2 R^2 / (r sqrt(R^2 - r^2)) overall."""
    def integrand(v):
        w = R + r * math.cos(v)
        h = (R + 2.0 * r * math.cos(v)) / (r * w)  # mean curvature (full trace)
        return 0.5 * h * h * w * r * 2.0 * math.pi

    val, err = quad(integrand, 0.0, 2.0 * math.pi)
    assert err < 1e-7
    return val


def torus_area(R, r):
    return 4.0 * math.pi ** 2 * R * r


def torus_total_gauss_curvature(R, r):
    """int K dmu over the torus of revolution: K = cos v / (r (R + r cos v)),
    dmu = r (R + r cos v) dv du, so the integral is exactly zero."""
    val, err = quad(lambda v: math.cos(v) / r * 2.0 * math.pi * r, 0.0, 2.0 * math.pi)
    assert err < 1e-9
    return val


def cutoff_profile_max_slope(num=2_000_001):
    """Max |d/dt| of the ramp sigma(t) / (sigma(t) + sigma(1-t)),
    sigma(t) = exp(-1/t), by dense central differences."""
    t = np.linspace(1e-9, 1.0 - 1e-9, num)

    def ramp(t):
        a = np.exp(-1.0 / t)
        b = np.exp(-1.0 / (1.0 - t))
        return a / (a + b)

    v = ramp(t)
    return float(np.max(np.abs(np.diff(v))) / (t[1] - t[0]))


def space_form_riemann(g, c):
    """Lowered curvature tensor of a space form from its metric matrix."""
    g = np.asarray(g, dtype=float)
    return c * (np.einsum("bc,ad->abcd", g, g) - np.einsum("ac,bd->abcd", g, g))

def shrinking_sphere_chi(r, t):
    """chi(r, t) for the family f(t) = sqrt(1 - t) * S^2 in R^3: a Euclidean
    r-ball about a surface point cuts a cap of height r^2 / (2 rho), hence
    of area 2 pi rho h = pi r^2, carrying |A|^2 = 2 / rho^2; the total is
    capped at int |A|^2 = 8 pi (whole sphere)."""
    rho_sq = 1.0 - t
    return min(2.0 * math.pi * r * r / rho_sq, 8.0 * math.pi)


def shrinking_sphere_crossing(r, eps_sq):
    """First t with shrinking_sphere_chi(r, t) >= eps_sq, from the cap
    formula; None when the threshold exceeds the 8 pi saturation."""
    if eps_sq > 8.0 * math.pi:
        return None
    return 1.0 - 2.0 * math.pi * r * r / eps_sq


def shrinking_sphere_sup_A(t):
    """sup |A| of the radius-sqrt(1-t) sphere: both principal curvatures are
    1 / rho, so |A| = sqrt(2) / rho pointwise."""
    return math.sqrt(2.0) / math.sqrt(1.0 - t)
