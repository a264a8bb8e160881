import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from willmore.ambient import (AmbientManifold, BoundedGeometry, cutoff,
                              estimate_bounds, geodesic_distance,
                              sectional_curvature)
from willmore.errors import BadRadii, DegeneratePlane, OutOfChart

EUC = AmbientManifold.euclidean(3)
SPH = AmbientManifold.sphere_conformal(3, 1.0)
HYP = AmbientManifold.hyperbolic_conformal(3, 1.0)

point_boxes = st.lists(st.floats(-0.5, 0.5), min_size=3, max_size=3).map(np.array)
vectors = st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3).map(np.array)


class TestMetric:
    def test_euclidean_identity(self):
        x = np.array([[0.3, -1.0, 2.0], [0.0, 0.0, 0.0]])
        assert np.allclose(EUC.metric(x), np.eye(3))
        assert np.allclose(EUC.christoffel(x), 0.0)
        assert np.allclose(EUC.riemann(x), 0.0)

    def test_conformal_factor_at_origin(self):
        assert np.allclose(SPH.metric(np.zeros(3)), 4.0 * np.eye(3))
        assert np.allclose(HYP.metric(np.zeros(3)), 4.0 * np.eye(3))

    def test_sphere_factor_unit_radius(self):
        # s = 1 + |x|^2 = 2, so g = 4/s^2 delta = delta exactly
        assert np.allclose(SPH.metric(np.array([0.0, 1.0, 0.0])), np.eye(3))

    def test_hyperbolic_chart_boundary(self):
        with pytest.raises(OutOfChart):
            HYP.metric(np.array([1.0, 0.0, 0.0]))

    @given(point_boxes)
    def test_metric_symmetric_positive(self, x):
        for m in (EUC, SPH, HYP):
            g = m.metric(x)
            assert np.allclose(g, np.swapaxes(g, -1, -2))
            assert np.all(np.linalg.eigvalsh(g) > 0.0)


class TestDistance:
    def test_euclidean_345(self):
        assert geodesic_distance(EUC, np.zeros(3), np.array([3.0, 4.0, 0.0])) == 5.0

    def test_sphere_quarter_arc(self):
        # oracle: sphere_chord_distance([0,0,0],[1,0,0]) = 1.5707963267948966
        d = SPH.distance(np.zeros(3), np.array([1.0, 0.0, 0.0]))
        assert abs(d - 1.5707963267948966) < 1e-12

    def test_sphere_generic_pair(self):
        # oracle: sphere_chord_distance([.3,-.2,.5],[-.1,.4,.2], kappa=1.7)
        m = AmbientManifold.sphere_conformal(3, 1.7)
        d = m.distance(np.array([0.3, -0.2, 0.5]), np.array([-0.1, 0.4, 0.2]))
        assert abs(d - 0.950910588054837) < 1e-12

    def test_sphere_far_point_approaches_antipode(self):
        d = SPH.distance(np.zeros(3), np.array([1e6, 0.0, 0.0]))
        assert abs(d - math.pi) < 1e-5

    def test_hyperbolic_radial(self):
        # oracle: poincare_radial_distance(0.5) = 1.0986122886681096 (= log 3)
        d = HYP.distance(np.zeros(3), np.array([0.5, 0.0, 0.0]))
        assert abs(d - 1.0986122886681096) < 1e-9

    def test_hyperbolic_radial_kappa2(self):
        # oracle: poincare_radial_distance(0.4, kappa_hat=2) = 1.0986122886681104
        m = AmbientManifold.hyperbolic_conformal(3, 2.0)
        d = m.distance(np.zeros(3), np.array([0.0, 0.4, 0.0]))
        assert abs(d - 1.0986122886681104) < 1e-9

    def test_hyperbolic_segment_oracle(self):
        # oracle: conformal_segment_length([0,0,0],[.5,0,0], c=-1) = 1.0986122888532948
        d = HYP.distance(np.zeros(3), np.array([0.5, 0.0, 0.0]))
        assert abs(d - 1.0986122888532948) < 1e-8

    def test_hyperbolic_out_of_chart(self):
        with pytest.raises(OutOfChart):
            HYP.distance(np.zeros(3), np.array([1.2, 0.0, 0.0]))

    def test_custom_midpoint_surrogate(self):
        m = AmbientManifold.custom(3, lambda x: np.broadcast_to(
            np.eye(3), np.shape(x)[:-1] + (3, 3)))
        assert not m.distance_exact
        d = m.distance(np.zeros(3), np.array([3.0, 4.0, 0.0]))
        assert abs(d - 5.0) < 1e-12

    @given(point_boxes, point_boxes)
    def test_symmetry_and_identity(self, p, q):
        for m in (EUC, SPH, HYP):
            assert m.distance(p, p) < 1e-12
            assert abs(m.distance(p, q) - m.distance(q, p)) < 1e-12

    def test_batched_points(self):
        q = np.array([[0.1, 0.0, 0.0], [0.0, 0.2, 0.0], [0.0, 0.0, 0.3]])
        d = SPH.distance(np.zeros(3), q)
        assert d.shape == (3,)
        assert np.all(np.diff(d) > 0.0)


class TestSectionalCurvature:
    def test_space_form_values(self):
        x = np.array([0.2, -0.1, 0.3])
        X = np.array([1.0, 0.4, -0.2])
        Y = np.array([0.3, -1.0, 0.5])
        assert abs(sectional_curvature(EUC, x, (X, Y))) < 1e-14
        m = AmbientManifold.sphere_conformal(3, 1.3)
        assert abs(m.sectional_curvature(x, X, Y) - 1.69) < 1e-10
        m = AmbientManifold.hyperbolic_conformal(3, 0.7)
        assert abs(m.sectional_curvature(x, X, Y) + 0.49) < 1e-10

    def test_degenerate_plane(self):
        x = np.zeros(3)
        X = np.array([1.0, 2.0, 0.0])
        with pytest.raises(DegeneratePlane):
            SPH.sectional_curvature(x, X, 3.0 * X)

    @given(point_boxes, vectors, vectors)
    def test_basis_independence(self, x, X, Y):
        gram = (X @ X) * (Y @ Y) - (X @ Y) ** 2
        assume(gram > 1e-2)
        k1 = SPH.sectional_curvature(x, X, Y)
        k2 = SPH.sectional_curvature(x, 2.0 * X + 0.5 * Y, Y - 0.3 * X)
        assert abs(k1 - k2) < 1e-8


class TestRiemann:
    def test_space_form_tensor(self):
        x = np.array([0.3, 0.1, -0.2])
        for m, c in ((SPH, 1.0), (HYP, -1.0)):
            expected = oracles.space_form_riemann(m.metric(x), c)
            assert np.allclose(m.riemann(x), expected, atol=1e-12)

    @given(point_boxes)
    def test_tensor_symmetries(self, x):
        for m in (SPH, HYP):
            R = m.riemann(x)
            assert np.allclose(R, -np.swapaxes(R, 0, 1), atol=1e-12)
            assert np.allclose(R, -np.swapaxes(R, 2, 3), atol=1e-12)
            assert np.allclose(R, np.transpose(R, (2, 3, 0, 1)), atol=1e-12)
            bianchi = R + np.transpose(R, (1, 2, 0, 3)) + np.transpose(R, (2, 0, 1, 3))
            assert np.max(np.abs(bianchi)) < 1e-12

    def test_custom_fd_recovers_sphere_curvature(self):
        # independent route: nested finite differences of the raw conformal
        # metric must reproduce the analytic space-form tensor
        m = AmbientManifold.custom(3, lambda x: SPH.metric(x))
        x = np.array([0.25, -0.15, 0.1])
        assert np.allclose(m.christoffel(x), SPH.christoffel(x), atol=1e-7)
        assert np.allclose(m.riemann(x), SPH.riemann(x), atol=1e-6)

    def test_custom_fd_flat(self):
        m = AmbientManifold.custom(3, lambda x: np.broadcast_to(
            np.eye(3), np.shape(x)[:-1] + (3, 3)))
        x = np.array([[0.3, 0.4, -0.2], [0.0, 0.0, 0.0]])
        assert np.max(np.abs(m.riemann(x))) < 1e-8


class TestCutoff:
    def test_plateau_and_support(self):
        center = np.zeros(3)
        x_in = np.array([0.05, 0.0, 0.0])
        x_out = np.array([0.0, 0.9, 0.0])
        for m in (EUC, SPH, HYP):
            g = m.cutoff(center, 0.2, 0.5, np.stack([center, x_in, x_out]))
            assert g[0] == 1.0 and g[1] == 1.0 and g[2] == 0.0

    def test_slope_bound(self):
        # oracle: cutoff_profile_max_slope() = 2.000000000282753, so sampled
        # difference quotients stay below 4/(rho - delta) with a wide margin
        delta, rho = 0.2, 0.5
        t = np.linspace(0.0, 0.8, 4001)
        x = np.zeros((t.size, 3))
        x[:, 0] = t
        for m in (EUC, SPH, HYP):
            g = cutoff(m, np.zeros(3), delta, rho, x)
            slopes = np.abs(np.diff(g) / np.diff(m.distance(np.zeros(3), x)))
            assert np.max(slopes) <= 2.001 / (rho - delta)
            assert np.max(slopes) <= 4.0 / (rho - delta)

    def test_second_difference_scaling(self):
        # halving the transition width quadruples the curvature of the ramp
        t = np.linspace(0.0, 0.9, 8001)
        x = np.zeros((t.size, 3))
        x[:, 0] = t
        h = t[1] - t[0]

        def max_d2(delta, rho):
            g = EUC.cutoff(np.zeros(3), delta, rho, x)
            return np.max(np.abs(np.diff(g, 2))) / h ** 2

        a = max_d2(0.3, 0.7)
        b = max_d2(0.3, 0.5)
        assert abs(b / a - 4.0) < 0.2

    def test_bad_radii(self):
        with pytest.raises(BadRadii):
            EUC.cutoff(np.zeros(3), 0.5, 0.2, np.zeros(3))
        with pytest.raises(BadRadii):
            # rho beyond the sphere injectivity radius pi
            SPH.cutoff(np.zeros(3), 1.0, 3.5, np.zeros(3))

    def test_smoothstep_endpoints(self):
        from willmore.ambient import _smoothstep
        v = _smoothstep(np.array([-1.0, 0.0, 0.5, 1.0, 2.0]))
        assert np.allclose(v, [0.0, 0.0, 0.5, 1.0, 1.0])


class TestBoundsAndRescaling:
    def test_space_form_bounds(self):
        b = SPH.bounds
        assert abs(b.sup_R - math.sqrt(12.0)) < 1e-12
        assert abs(b.sup_ric - 2.0 * math.sqrt(3.0)) < 1e-12
        assert abs(b.inj_radius - math.pi) < 1e-12
        assert b.sup_DR == 0.0
        assert HYP.bounds.inj_radius == math.inf
        assert EUC.bounds.sup_R == 0.0

    def test_estimated_bounds_match_analytic(self):
        grid = np.linspace(-0.5, 0.5, 3)
        pts = np.stack(np.meshgrid(grid, grid, grid, indexing="ij"), axis=-1).reshape(-1, 3)
        b = estimate_bounds(SPH.metric_fn, SPH.christoffel_fn, SPH.riemann_fn, pts, 1e-4)
        assert abs(b.sup_R - math.sqrt(12.0)) < 1e-3
        assert b.sup_DR < 1e-3
        assert abs(b.sup_ric - 2.0 * math.sqrt(3.0)) < 1e-3

    def test_rescaled_manifold(self):
        lam = 4.0
        m = SPH.rescaled(lam)
        x = np.array([0.2, 0.1, -0.3])
        assert np.allclose(m.metric(x), lam * SPH.metric(x))
        assert np.allclose(m.christoffel(x), SPH.christoffel(x))
        p, q = np.zeros(3), np.array([0.3, 0.0, 0.1])
        assert abs(m.distance(p, q) - 2.0 * SPH.distance(p, q)) < 1e-12
        X = np.array([1.0, 0.0, 0.2])
        Y = np.array([0.1, 1.0, 0.0])
        assert abs(m.sectional_curvature(x, X, Y) - 0.25) < 1e-10
        assert abs(m.bounds.sup_R - SPH.bounds.sup_R / lam) < 1e-12
        assert abs(m.bounds.inj_radius - 2.0 * math.pi) < 1e-12

    def test_bounds_validation(self):
        with pytest.raises(ValueError):
            BoundedGeometry(-1.0, 0.0, (0.0,), 1.0, 0, 0.0)
        with pytest.raises(ValueError):
            BoundedGeometry(0.0, 0.0, (0.0,), 0.0, 0, 0.0)
