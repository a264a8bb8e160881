import math

import numpy as np
import pytest

import oracles
from willmore.ambient import AmbientManifold
from willmore.blowup import (BlowupSpec, FlowSample, chi_scaling_check,
                             detect_concentration, flow_samples, rescale,
                             shrinking_sphere_family, static_evidence,
                             type2_indicator)
from willmore.energy import energies
from willmore.errors import NoConcentration, WindowEmpty
from willmore.flow import FlowConfig
from willmore.surface import compute_geometry, round_sphere, torus_of_revolution

EUC = AmbientManifold.euclidean(3)
TIMES = tuple(1.0 - 0.8 ** k for k in range(14))


@pytest.fixture(scope="module")
def family():
    return shrinking_sphere_family(TIMES, 48)


@pytest.fixture(scope="module")
def family_specs(family):
    return detect_concentration(family, math.sqrt(2.1), [0.5, 0.35, 0.25])


def constant_family(times, n=48):
    return tuple(FlowSample(t, round_sphere(EUC, 1.0, n)) for t in times)


class TestDetection:
    def test_crossing_times_match_cap_oracle(self, family_specs):
        # expected event: first sample whose oracle chi clears the threshold
        for spec in family_specs:
            expected = next(t for t in TIMES
                            if oracles.shrinking_sphere_chi(spec.r_j, t) >= 2.1)
            assert spec.t_j == expected
            chi_true = oracles.shrinking_sphere_chi(spec.r_j, spec.t_j)
            assert abs(spec.chi - chi_true) / chi_true < 0.02

    def test_times_increase_as_radii_shrink(self, family_specs):
        t = [s.t_j for s in family_specs]
        assert t == sorted(t) and len(set(t)) == len(t)

    def test_center_lands_on_the_sphere(self, family_specs):
        for spec in family_specs:
            rho = math.sqrt(1.0 - spec.t_j)
            assert abs(np.linalg.norm(spec.p_j) - rho) < 1e-3

    def test_monotone_in_threshold(self, family):
        early = detect_concentration(family, math.sqrt(2.1), [0.5])[0]
        late = detect_concentration(family, math.sqrt(4.2), [0.5])[0]
        assert late.t_j >= early.t_j

    def test_bounded_chi_never_crosses(self):
        # chi <= int |A|^2 = 8 pi on any round sphere, threshold 9 pi
        fam = constant_family((0.0, 0.5))
        with pytest.raises(NoConcentration):
            detect_concentration(fam, math.sqrt(9.0 * math.pi), [0.5])

    def test_healthy_torus_flow(self):
        f0 = torus_of_revolution(EUC, 2.0, 1.0, 32, 32)
        _, samples = flow_samples(f0, FlowConfig(max_steps=3))
        with pytest.raises(NoConcentration):
            detect_concentration(samples, 2.0, [0.5])

    def test_parameter_validation(self, family):
        with pytest.raises(ValueError):
            detect_concentration(family, 0.0, [0.5])
        with pytest.raises(ValueError):
            detect_concentration(family, 1.0, [0.25, 0.5])
        with pytest.raises(ValueError):
            detect_concentration(family, 1.0, [])


class TestRescale:
    def spec_at(self, k):
        t_j = TIMES[k]
        return BlowupSpec(t_j, math.sqrt(1.0 - t_j), np.zeros(3), 0.0)

    def test_unit_radius_is_identity(self, family):
        spec = BlowupSpec(TIMES[8], 1.0, np.zeros(3), 0.0)
        out = rescale(family, spec, tau_min=-math.inf, tau_max=math.inf)
        assert len(out) == len(family)
        for rs, src in zip(out, family):
            assert rs.tau == src.t - spec.t_j
            assert all(np.array_equal(a, b)
                       for a, b in zip(rs.f.values, src.f.values))

    def test_willmore_energy_invariant(self, family):
        spec = self.spec_at(8)
        out = rescale(family, spec, tau_min=-math.inf, tau_max=0.0)
        for rs, src in zip(out, family):
            w_r = energies(compute_geometry(rs.f)).W_H
            w_s = energies(compute_geometry(src.f)).W_H
            assert abs(w_r - w_s) < 1e-10

    def test_rescaled_family_is_unit_sphere(self, family):
        spec = self.spec_at(8)
        out = rescale(family, spec, tau_min=-1e-9, tau_max=1e-9)
        assert len(out) == 1 and out[0].tau == 0.0
        unit = compute_geometry(round_sphere(EUC, 1.0, 48))
        scaled = compute_geometry(out[0].f)
        for cu, cr in zip(unit.charts, scaled.charts):
            on = cu.grid.pou > 0.0
            assert np.max(np.abs(cu.normsq_H - cr.normsq_H)[on]) < 1e-8

    def test_chi_scaling_identity(self, family):
        for k in (4, 8, 11):
            lhs, rhs = chi_scaling_check(family[k], self.spec_at(k), 1.0,
                                         stride=6)
            assert abs(lhs - rhs) < 1e-10 * max(1.0, rhs)

    def test_empty_window(self, family):
        with pytest.raises(WindowEmpty):
            rescale(family, self.spec_at(8), tau_min=1e9, tau_max=2e9)

    def test_time_map(self):
        spec = BlowupSpec(0.5, 0.3, np.zeros(3), 0.0)
        assert spec.time_of(0.0) == 0.5
        assert abs(spec.time_of(2.0) - (0.5 + 2.0 * 0.3 ** 4)) < 1e-15


class TestTypeII:
    def test_shrinking_family_matches_closed_form(self, family):
        ind = type2_indicator(family, 1.0)
        expect = np.array([(1.0 - t) ** 0.25 * oracles.shrinking_sphere_sup_A(t)
                           for t in TIMES])
        assert float(np.max(np.abs(ind - expect) / expect)) < 1e-3
        assert np.all(np.diff(ind) > 0.0)

    def test_stationary_sphere_is_not_type_two(self):
        fam = constant_family((0.0, 0.3, 0.6))
        ind = type2_indicator(fam, 2.0)
        assert np.all(np.diff(ind) < 0.0)
        assert np.all(ind <= 2.0 * 2.0 ** 0.25)

    def test_sample_time_selection(self, family):
        full = type2_indicator(family, 1.0)
        picked = type2_indicator(family, 1.0, times=[TIMES[2], TIMES[5]])
        assert picked[0] == full[2] and picked[1] == full[5]

    def test_estimate_must_exceed_samples(self, family):
        with pytest.raises(ValueError):
            type2_indicator(family, TIMES[-1])


class TestSampling:
    def test_flow_samples_align_with_history(self):
        f0 = torus_of_revolution(EUC, 2.0, 1.0, 32, 32)
        state, samples = flow_samples(f0, FlowConfig(max_steps=3))
        assert len(samples) == len(state.history) == 4
        assert [s.t for s in samples] == [r.t for r in state.history]

    def test_family_requires_times_before_one(self):
        with pytest.raises(ValueError):
            shrinking_sphere_family([0.5, 1.0], 32)

    def test_static_evidence_on_frozen_window(self, family):
        t_j = TIMES[8]
        spec = BlowupSpec(t_j, math.sqrt(1.0 - t_j), np.zeros(3), 0.0)
        report = static_evidence(rescale(family, spec, -3.0, 0.0))
        assert len(report.taus) == len(report.sup_A) == len(report.grad_sq)
        for tau, sup_a in zip(report.taus, report.sup_A):
            rho = math.sqrt(1.0 - spec.time_of(tau))
            assert abs(sup_a - math.sqrt(2.0) * spec.r_j / rho) < 0.01
        assert report.taus[-1] == 0.0
        assert abs(report.sup_A[-1] - math.sqrt(2.0)) < 0.01
        assert report.dissipated < 1e-3
