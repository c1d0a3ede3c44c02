"""Bloch-fiber tests: closed-form anchors, symmetries, factorization, kernel."""

import numpy as np
import pytest
import scipy.optimize

from nlswaves.bloch import (
    BlochMatrix,
    assemble_bloch,
    assemble_hessian_fiber,
    block_rotation,
    classify,
    eigenvalues,
    gap_check,
    spectrum,
    unperturbed_omega,
)
from nlswaves.energy import stacked
from nlswaves.waves import Nonlinearity, WaveParams, to_Q

DEF = Nonlinearity.DEFOCUSING
FOC = Nonlinearity.FOCUSING


def match(left, right):
    cost = np.abs(np.asarray(left)[:, None] - np.asarray(right)[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols]))


class TestUnperturbedOmega:
    def test_quadruple_zero_at_origin(self):
        vals = [
            unperturbed_omega(1.0, 1.0, 0.0, 0, +1),
            unperturbed_omega(1.0, 1.0, 0.0, 0, -1),
            unperturbed_omega(1.0, 1.0, 0.0, 1, +1),
            unperturbed_omega(1.0, 1.0, 0.0, -1, -1),
        ]
        assert np.allclose(vals, 0.0)

    def test_half_point_simple_pair(self):
        assert unperturbed_omega(1.0, 1.0, 0.5, -1, -1) == pytest.approx(1.0)
        assert unperturbed_omega(1.0, 1.0, 0.5, 0, +1) == pytest.approx(-1.0)

    def test_direct_values(self):
        assert unperturbed_omega(1.0, 1.0, 0.3, 0, +1) == pytest.approx(-0.84)
        assert unperturbed_omega(1.0, 1.0, 0.3, 0, -1) == pytest.approx(-1.56)


class TestAssembly:
    def test_zero_wave_matches_closed_form(self, profile_cache):
        w = profile_cache(0.0, 0.0)
        vals = eigenvalues(assemble_bloch(w, 0.2, 24))
        closed = [
            1j * unperturbed_omega(1.0, 1.0, 0.2, n, br)
            for n in range(-24, 25)
            for br in (1, -1)
        ]
        resolved = vals[np.abs(vals) <= 10.0]
        closed = np.array([v for v in closed if abs(v) <= 10.0])
        assert match(resolved, closed) < 1e-12

    def test_gamma_zero_spectrum_conjugation_symmetric(self, profile_cache):
        w = profile_cache(0.06, 0.09)
        vals = eigenvalues(assemble_bloch(w, 0.0, 32))
        assert match(vals, np.conj(vals)) < 1e-8

    def test_truncation_refinement(self, profile_cache):
        w = profile_cache(0.05, 0.05)
        v32 = eigenvalues(assemble_bloch(w, 0.1, 32))
        v48 = eigenvalues(assemble_bloch(w, 0.1, 48))
        ball = lambda v: v[np.abs(v) <= 10.0]
        assert match(ball(v32), ball(v48)) < 1e-8

    def test_gamma_out_of_range(self, profile_cache):
        with pytest.raises(ValueError):
            assemble_bloch(profile_cache(0.05, 0.05), 0.7, 16)

    def test_eigenvalues_trivial_cases(self):
        m = BlochMatrix(gamma=0.0, truncation=1, matrix=np.zeros((6, 6), dtype=complex))
        assert np.allclose(eigenvalues(m), 0.0)
        m = BlochMatrix(gamma=0.0, truncation=1, matrix=np.diag([1j, -1j, 0, 0, 0, 0]))
        vals = eigenvalues(m)
        assert match(vals, [1j, -1j, 0, 0, 0, 0]) < 1e-15

    def test_eigenvalue_sorting_deterministic(self, profile_cache):
        w = profile_cache(0.05, 0.05)
        v1 = eigenvalues(assemble_bloch(w, 0.1, 24))
        v2 = eigenvalues(assemble_bloch(w, 0.1, 24))
        assert np.array_equal(v1, v2)


class TestHamiltonianStructure:
    @pytest.mark.parametrize("sign", [DEF, FOC])
    def test_jh_factorization(self, sign, profile_cache):
        w = profile_cache(0.05, 0.08, sign)
        a = assemble_bloch(w, 0.13, 24).matrix
        h = assemble_hessian_fiber(w, 0.13, 24)
        scale = np.max(np.abs(a))
        assert np.max(np.abs(a - block_rotation(24) @ h)) <= 1e-12 * scale
        assert np.max(np.abs(h - h.conj().T)) <= 1e-12 * scale

    def test_gamma_zero_kernel(self, profile_cache):
        w = profile_cache(0.05, 0.08)
        a0 = assemble_bloch(w, 0.0, 32).matrix
        _, Q = to_Q(w)
        for vec in (Q.derivative(), 1j * Q):
            v = stacked(vec, 32)
            assert np.linalg.norm(a0 @ v) / np.linalg.norm(v) < 1e-8


class TestSpectralSymmetries:
    def test_quadruple_symmetry(self, profile_cache):
        w = profile_cache(0.06, 0.09)
        vals = eigenvalues(assemble_bloch(w, 0.17, 32))
        assert match(vals, -np.conj(vals)) < 1e-8

    def test_gamma_conjugation(self, profile_cache):
        w = profile_cache(0.06, 0.09)
        plus = eigenvalues(assemble_bloch(w, 0.21, 32))
        minus = eigenvalues(assemble_bloch(w, -0.21, 32))
        assert match(plus, np.conj(minus)) < 1e-8

    @pytest.mark.parametrize("op", ["negate_a", "negate_both"])
    def test_sign_flip_symmetries(self, op, profile_cache):
        # The mode-shift conjugations behind these relations move the
        # truncation window, so only resolved eigenvalues can be compared.
        w = profile_cache(0.05, 0.08)
        params = w.params.transformed(op)
        wt = profile_cache(params.a, params.b, params.sign)
        ball = lambda v: v[np.abs(v) <= 10.0]
        vals = ball(eigenvalues(assemble_bloch(w, 0.12, 32)))
        vt = ball(eigenvalues(assemble_bloch(wt, 0.12, 32)))
        assert match(vt, vals) < 1e-8

    def test_swap_symmetry_pairs_opposite_fibers(self, profile_cache):
        # Swapping (a, b) composes a conjugation with multiplication by
        # e^{-iz}, which sends the fiber at gamma to the fiber at -gamma:
        # sigma(b, a, -gamma) = -conj(sigma(a, b, gamma)).  At fixed gamma
        # this is equivalent to sigma(b, a, gamma) = -sigma(a, b, gamma);
        # the same-gamma -conj form fails at O(ell * gamma) because a single
        # fiber multiset is not symmetric under a plain sign flip.
        w = profile_cache(0.05, 0.08)
        wt = profile_cache(0.08, 0.05)
        ball = lambda v: v[np.abs(v) <= 10.0]
        vals = ball(eigenvalues(assemble_bloch(w, 0.12, 32)))
        vt_m = ball(eigenvalues(assemble_bloch(wt, -0.12, 32)))
        vt_p = ball(eigenvalues(assemble_bloch(wt, 0.12, 32)))
        assert match(vt_m, -np.conj(vals)) < 1e-8
        assert match(vt_p, -vals) < 1e-8
        # the naive same-gamma -conj pairing is genuinely violated:
        assert match(vt_p, -np.conj(vals)) > 1e-4


class TestClassify:
    def test_zero_wave_stable_everywhere(self, profile_cache):
        w = profile_cache(0.0, 0.0)
        rep = classify(w, np.linspace(0.0, 0.5, 11), truncation=24)
        assert rep.verdict == "stable"
        assert np.max(rep.max_res) < 1e-12

    def test_defocusing_stable(self, profile_cache):
        w = profile_cache(0.05, 0.05)
        rep = classify(w, np.linspace(0.0, 0.5, 21), truncation=32)
        assert rep.verdict == "stable"
        assert np.max(rep.max_res) <= 1e-7

    def test_focusing_sideband_detected(self, profile_cache):
        w = profile_cache(0.05, 0.05, FOC)
        rep = classify(w, np.linspace(0.0, 0.5, 26), truncation=32)
        assert rep.verdict == "unstable"
        assert rep.band is not None
        assert rep.band.gamma_lo <= 0.04          # band starts at small gamma
        assert rep.band.gamma_hi <= 0.06
        assert rep.band.peak == pytest.approx(2.5e-3, rel=0.3)

    def test_refinement_resolves_band_edges(self, profile_cache):
        w = profile_cache(0.05, 0.05, FOC)
        coarse = classify(w, np.linspace(0.0, 0.1, 6), truncation=32, refine=False)
        fine = classify(w, np.linspace(0.0, 0.1, 6), truncation=32, refine=True)
        assert len(fine.gammas) > len(coarse.gammas)
        assert fine.verdict == "unstable"

    def test_grid_validation(self, profile_cache):
        with pytest.raises(ValueError):
            classify(profile_cache(0.0, 0.0), np.array([0.0, 0.6]), truncation=16)


class TestGapCheck:
    def test_small_gamma_balls(self, profile_cache):
        rep = gap_check(profile_cache(0.02, 0.03), 0.01, 32)
        assert rep.quartet_in_unit_ball
        assert rep.others_outside_radius4

    def test_generic_gamma_gaps(self, profile_cache):
        rep = gap_check(profile_cache(0.02, 0.03), 0.25, 32)
        assert rep.min_pairwise_gap > 0.3

    def test_half_regime(self, profile_cache):
        rep = gap_check(profile_cache(0.02, 0.03), 0.5, 32)
        assert rep.half_regime_balls
