"""Split-step integrator tests: exactness anchors, conservation, order,
reversibility, orbital distance, growth-rate fits."""

import numpy as np
import pytest

from nlswaves.errors import BlowupDetected, DegenerateFit
from nlswaves.evolution import (
    Trajectory,
    _Stepper,
    embed_profile,
    evolve,
    growth_rate,
    orbital_distance,
    seed_generic,
    step_strang,
)
from nlswaves.fourier import FourierField
from nlswaves.waves import Nonlinearity, WaveParams, plane_wave_profile

DEF = Nonlinearity.DEFOCUSING


def run_steps(Q0, nsteps, dt, w, n=1):
    st = _Stepper(Q0.truncation, dt, w.p, w.k, w.params.sign, n)
    c = Q0.coeffs.copy()
    for _ in range(nsteps):
        c = st.step(c)
    return FourierField(c)


class TestStepStrang:
    def test_plane_wave_fixed_point(self):
        w = plane_wave_profile(WaveParams(0.0, 0.2))
        Q0 = embed_profile(w, 1, 16)
        Q1 = step_strang(Q0, 1e-3, w.p, w.k, w.params.sign)
        assert np.max(np.abs(Q1.coeffs - Q0.coeffs)) < 1e-12

    def test_solved_profile_near_fixed_point(self, profile_cache):
        w = profile_cache(0.1, 0.2)
        Q0 = embed_profile(w, 1, 32)
        Q = run_steps(Q0, 1000, 1e-3, w)
        assert np.max(np.abs(Q.coeffs - Q0.coeffs)) < 1e-7

    def test_linear_regime_matches_symbol(self):
        w = plane_wave_profile(WaveParams(0.0, 0.0))
        amp = 1e-8
        Q0 = FourierField.from_modes({3: amp}, 8)
        dt = 1e-3
        Q1 = step_strang(Q0, dt, w.p, w.k, w.params.sign)
        m = 3.0
        rate = -4.0 * w.p * w.k * m - 4.0 * w.k**2 * m**2 + (1.0 - w.p**2)
        expected = amp * np.exp(1j * dt * rate)
        assert Q1.coeff(3) == pytest.approx(expected, rel=1e-10)

    def test_time_reversibility(self, profile_cache):
        w = profile_cache(0.1, 0.2)
        Q0 = seed_generic(w, 1, 1e-2, 32)
        fwd = step_strang(Q0, 1e-3, w.p, w.k, w.params.sign)
        back = step_strang(fwd, -1e-3, w.p, w.k, w.params.sign)
        assert np.max(np.abs(back.coeffs - Q0.coeffs)) < 1e-10

    def test_strang_second_order(self, profile_cache):
        w = profile_cache(0.1, 0.1)
        Q0 = seed_generic(w, 1, 1e-2, 24)
        t_final = 0.5
        errors = []
        for dt in (2e-3, 1e-3):
            coarse = run_steps(Q0, int(t_final / dt), dt, w)
            fine = run_steps(Q0, int(t_final / (dt / 8)), dt / 8, w)
            errors.append(np.linalg.norm(coarse.coeffs - fine.coeffs))
        ratio = errors[0] / errors[1]
        assert 3.3 <= ratio <= 4.7


class TestEvolve:
    def test_conservation(self, profile_cache):
        w = profile_cache(0.1, 0.1)
        traj = evolve(seed_generic(w, 1, 1e-3, 32), 10.0, 1e-3, 1, w, sample_stride=1000)
        charge = np.array([c.charge for c in traj.conserved])
        mom = np.array([c.momentum for c in traj.conserved])
        en = np.array([c.energy for c in traj.conserved])
        assert np.max(np.abs(charge - charge[0])) < 1e-10
        assert np.max(np.abs(mom - mom[0])) < 1e-10
        assert np.max(np.abs(en - en[0])) < 1e-8

    def test_unperturbed_rho_stays_at_solver_noise(self, profile_cache):
        w = profile_cache(0.05, 0.05)
        traj = evolve(embed_profile(w, 1, 32), 2.0, 1e-3, 1, w, sample_stride=500)
        assert max(traj.rho) < 1e-6

    def test_blowup_guard(self, profile_cache):
        # the scheme conserves charge, so the guard can only trip on a
        # state that already exceeds it
        w = profile_cache(0.05, 0.05)
        Q0 = 3e7 * embed_profile(w, 1, 16)
        with pytest.raises(BlowupDetected):
            evolve(Q0, 1.0, 1e-3, 1, w)

    def test_sampling_layout(self, profile_cache):
        w = profile_cache(0.05, 0.05)
        traj = evolve(embed_profile(w, 1, 16), 0.5, 1e-3, 1, w, sample_stride=100)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == pytest.approx(0.5)
        assert np.all(np.diff(traj.times) > 0)
        assert len(traj.states) == len(traj.rho) == len(traj.conserved)


class TestOrbitalDistance:
    def test_identical_states(self):
        u = FourierField.from_modes({0: 0.2, -1: 0.1, 2: 0.03j}, 12)
        assert orbital_distance(u, u) < 1e-6

    def test_group_orbit_is_null(self):
        u = FourierField.from_modes({0: 0.2, -1: 0.1, 2: 0.03j}, 12)
        v = FourierField(u.shifted(1.234).coeffs * np.exp(1j * 0.777))
        assert orbital_distance(u, v) < 1e-5

    def test_real_offset_of_constants(self):
        b, delta = 0.2, 0.01
        u = FourierField.constant(b, 8)
        v = FourierField.constant(b + delta, 8)
        assert orbital_distance(u, v) == pytest.approx(np.sqrt(2 * np.pi) * delta, rel=1e-6)

    def test_multi_period_domain_shift(self):
        # on the 4-fold domain a shift by 3 pi (not a 2 pi multiple) must
        # still be matched by the shift search
        u = FourierField.from_modes({1: 0.1, 4: 0.2}, 12)
        v = FourierField(u.coeffs * np.exp(1j * np.array(u.modes) / 4 * 3 * np.pi))
        assert orbital_distance(u, v, domain_multiple=4) < 1e-5

    def test_truncation_mismatch_rejected(self):
        with pytest.raises(ValueError):
            orbital_distance(FourierField.zeros(4), FourierField.zeros(5))


class TestGrowthRate:
    def _traj(self, rho, times):
        return Trajectory(times=np.asarray(times), states=[], conserved=[],
                          rho=list(rho), domain_multiple=1, dt=1e-3)

    def test_pure_exponential(self):
        t = np.linspace(0.0, 60.0, 200)
        traj = self._traj(np.exp(0.1 * t), t)
        assert growth_rate(traj, (0.0, 60.0)) == pytest.approx(0.1, abs=1e-8)

    def test_flat_trajectory_is_degenerate(self):
        t = np.linspace(0.0, 50.0, 100)
        traj = self._traj(np.full_like(t, 1e-3), t)
        with pytest.raises(DegenerateFit):
            growth_rate(traj, (0.0, 50.0))

    def test_flat_slope_recoverable_without_guard(self):
        t = np.linspace(0.0, 50.0, 100)
        traj = self._traj(1e-3 * np.exp(1e-5 * t), t)
        slope = growth_rate(traj, (0.0, 50.0), min_decades=0.0)
        assert abs(slope) <= 1e-3

    def test_too_few_samples(self):
        traj = self._traj([1e-3, 2e-3], [0.0, 1.0])
        with pytest.raises(DegenerateFit):
            growth_rate(traj, (0.0, 1.0))
