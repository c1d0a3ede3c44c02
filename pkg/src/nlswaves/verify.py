"""Per-command invariant suites behind the --verify flag.

Each suite re-derives a handful of structural identities (symmetries,
factorizations, kernels, conservation, convergence orders) for the
requested parameters and reports one pass/fail line per check.  These are
smoke-level guards, tighter than the acceptance thresholds where cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import bloch, energy, evolution, reduced, waves
from .fourier import FourierField
from .waves import Nonlinearity, WaveParams


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name: str, value: float, bound: float) -> CheckResult:
    return CheckResult(name=name, passed=bool(value <= bound), detail=f"{value:.3e} <= {bound:.0e}")


def _match(left: np.ndarray, right: np.ndarray) -> float:
    cost = np.abs(left[:, None] - right[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols]))


def verify_profile(params: WaveParams, modes: int = 64) -> list[CheckResult]:
    w = waves.solve_profile(params, modes)
    out = [_check("residual", w.residual, 1e-12)]
    pin = max(
        abs(w.P.coeff(-1) - params.a),
        abs(w.P.coeff(1) - params.b),
        abs(np.imag(w.P.coeff(-1))),
        abs(np.imag(w.P.coeff(1))),
    )
    out.append(_check("pinning", pin, 1e-15))
    even = float(np.max(np.abs([w.P.coeff(n) for n in range(-modes, modes + 1, 2)])))
    out.append(_check("even_modes_zero", even, 1e-15))
    w_neg = waves.solve_profile(params.transformed("negate_both"), modes)
    out.append(_check("k_ell_even_in_ab", abs(w_neg.k - w.k) + abs(w_neg.ell - w.ell), 1e-12))
    w_swap = waves.solve_profile(params.transformed("swap_ab"), modes)
    out.append(_check("swap_symmetry", abs(w_swap.k - w.k) + abs(w_swap.ell + w.ell), 1e-10))
    _, Q = waves.to_Q(w)
    out.append(_check("q_parity", float(np.max(np.abs(Q.coeffs.imag))), 1e-10))
    if params.a != 0.0 or params.b != 0.0:
        defects = []
        for t in (1.0, 0.5):
            scaled = WaveParams(t * params.a, t * params.b, params.sign)
            ws = waves.solve_profile(scaled, modes)
            we = waves.expansion_profile(scaled, modes)
            defects.append(abs(ws.k - we.k) + abs(ws.ell - we.ell) + 1e-300)
        exponent = np.log2(defects[0] / defects[1])
        out.append(
            CheckResult(
                "expansion_scaling",
                bool(exponent >= 3.5 or defects[0] < 1e-12),
                f"fitted exponent {exponent:.2f} >= 3.5",
            )
        )
    return out


def verify_spectrum(params: WaveParams, gamma: float = 0.1, modes: int = 48) -> list[CheckResult]:
    w = waves.solve_profile(params, 2 * ((modes + 1) // 2))
    out = []
    mat = bloch.assemble_bloch(w, gamma, modes)
    vals = bloch.eigenvalues(mat)
    out.append(_check("quad_symmetry", _match(vals, -np.conj(vals)), 1e-8))
    if 0.0 < gamma < 0.5:
        vals_m = bloch.eigenvalues(bloch.assemble_bloch(w, -gamma, modes))
        out.append(_check("conj_pair_gamma", _match(vals, np.conj(vals_m)), 1e-8))
    H = bloch.assemble_hessian_fiber(w, gamma, modes)
    J = bloch.block_rotation(modes)
    out.append(_check("jh_factorization", float(np.max(np.abs(mat.matrix - J @ H))), 1e-12))
    out.append(_check("h_hermitian", float(np.max(np.abs(H - H.conj().T))), 1e-12))
    _, Q = waves.to_Q(w)
    a0 = bloch.assemble_bloch(w, 0.0, modes).matrix
    for name, vec in (("kernel_dzQ", Q.derivative()), ("kernel_iQ", 1j * Q)):
        v = energy.stacked(vec, modes)
        nrm = np.linalg.norm(v)
        out.append(_check(name, float(np.linalg.norm(a0 @ v)) / nrm if nrm else 0.0, 1e-8))
    return out


def verify_sweep(params: WaveParams, gamma: float = 0.1, modes: int = 48) -> list[CheckResult]:
    w = waves.solve_profile(params, 2 * ((modes + 1) // 2))
    out = []
    ball = lambda v: v[np.abs(v) <= 10.0]
    vals = ball(bloch.eigenvalues(bloch.assemble_bloch(w, gamma, modes)))
    for op in ("negate_a", "negate_both"):
        wt = waves.solve_profile(params.transformed(op), w.P.truncation)
        vt = ball(bloch.eigenvalues(bloch.assemble_bloch(wt, gamma, modes)))
        out.append(_check(f"multiset_{op}", _match(vt, vals), 1e-8))
    # swap pairs the fiber at gamma with the fiber at -gamma
    wt = waves.solve_profile(params.transformed("swap_ab"), w.P.truncation)
    vt = ball(bloch.eigenvalues(bloch.assemble_bloch(wt, -gamma, modes)))
    out.append(_check("multiset_swap_ab", _match(vt, -np.conj(vals)), 1e-8))
    coarse = bloch.eigenvalues(bloch.assemble_bloch(w, gamma, modes))
    fine = bloch.eigenvalues(bloch.assemble_bloch(w, gamma, modes + 16))
    out.append(_check("truncation_robustness", _match(ball(coarse), ball(fine)), 1e-8))
    return out


def verify_reduced(params: WaveParams, gamma: float = 0.02, modes: int = 48) -> list[CheckResult]:
    out = []
    g = max(gamma, 1e-3)
    zero = waves.solve_profile(WaveParams(0.0, 0.0, params.sign), 2 * ((modes + 1) // 2))
    quartet = reduced.quartet_extract(bloch.spectrum(zero, g, modes))
    roots = np.roots([1.0, 0.0, -32.0 * (g * g + 1.0), 0.0, 256.0 * (1.0 - g * g) ** 2])
    out.append(_check("flat_state_anchor", _match(quartet, 1j * g * roots), 1e-9))
    c = reduced.quartic_coeffs(params, g)
    cs = reduced.quartic_coeffs(params.transformed("swap_ab"), g)
    parity = abs(c.c3 + cs.c3) + abs(c.c2 - cs.c2) + abs(c.c0 - cs.c0) + abs(c.c1 + cs.c1)
    out.append(_check("swap_parity_of_coeffs", parity, 1e-14))
    w = waves.solve_profile(params, 2 * ((modes + 1) // 2))
    rep = reduced.quartet_report(w, g, modes)
    out.append(_check("quartet_conj_symmetry", _match(rep.full_quartet, -np.conj(rep.full_quartet)), 1e-9))
    s = params.a**2 + params.b**2
    bound = 60.0 * g * (s + g * g) + 1e-9
    out.append(_check("asymptotic_vs_full", rep.max_mismatch, bound))
    return out


def verify_hessian(params: WaveParams, modes: int = 48) -> list[CheckResult]:
    w = waves.solve_profile(params, 2 * ((modes + 1) // 2))
    out = []
    H = energy.assemble_hessian(w, modes)
    out.append(_check("h_hermitian", float(np.max(np.abs(H - H.conj().T))), 1e-12))
    A = bloch.assemble_bloch(w, 0.0, modes).matrix
    out.append(_check("a_equals_jh", float(np.max(np.abs(A - bloch.block_rotation(modes) @ H))), 1e-12))
    _, Q = waves.to_Q(w)
    for name, vec in (("kernel_dzQ", Q.derivative()), ("kernel_iQ", 1j * Q)):
        v = energy.stacked(vec, modes)
        nrm = np.linalg.norm(v)
        out.append(_check(name, float(np.linalg.norm(H @ v)) / nrm if nrm else 0.0, 1e-8))
    if params.a != 0.0 and params.b != 0.0:
        small, det_b2 = energy.h_small_eigs(w, modes)
        out.append(_check("double_kernel", float(np.sort(np.abs(small))[1]), 1e-7))
        out.append(CheckResult("detB2_negative", bool(det_b2 < 0.0), f"det = {det_b2:.3e} < 0"))
    cmin = energy.coercivity_min(w, modes)
    out.append(CheckResult("coercivity", bool(cmin >= 5.9), f"min quotient {cmin:.3f} >= 5.9"))
    return out


def verify_evolve(params: WaveParams, dt: float = 1e-3, modes: int = 32) -> list[CheckResult]:
    w = waves.solve_profile(params, 64)
    out = []
    Q0 = evolution.embed_profile(w, 1, modes)
    c = Q0.coeffs
    stepper = evolution._Stepper(modes, dt, w.p, w.k, w.params.sign, 1)
    for _ in range(200):
        c = stepper.step(c)
    out.append(_check("profile_fixed_point", float(np.max(np.abs(c - Q0.coeffs))), 1e-8))
    back = evolution.step_strang(
        evolution.step_strang(Q0, dt, w.p, w.k, w.params.sign), -dt, w.p, w.k, w.params.sign
    )
    out.append(_check("time_reversibility", float(np.max(np.abs(back.coeffs - Q0.coeffs))), 1e-10))
    seed = evolution.seed_generic(w, 1, 1e-3, modes)
    traj = evolution.evolve(seed, 2.0, dt, 1, w, sample_stride=200)
    charges = np.array([t.charge for t in traj.conserved])
    out.append(_check("charge_conservation", float(np.max(np.abs(charges - charges[0]))), 1e-10))
    # floor set by the 1e-6 refinement tolerance of the (phi, xi) search
    out.append(_check("orbit_distance_zero", evolution.orbital_distance(Q0, Q0, 1), 1e-6))
    errs = []
    for step in (dt, dt / 2.0):
        coarse = seed.coeffs.copy()
        st = evolution._Stepper(modes, step, w.p, w.k, w.params.sign, 1)
        for _ in range(int(round(0.2 / step))):
            coarse = st.step(coarse)
        fine = seed.coeffs.copy()
        st = evolution._Stepper(modes, step / 8.0, w.p, w.k, w.params.sign, 1)
        for _ in range(int(round(0.2 / (step / 8.0)))):
            fine = st.step(fine)
        errs.append(np.linalg.norm(coarse - fine))
    ratio = errs[0] / errs[1]
    out.append(CheckResult("strang_second_order", bool(3.0 <= ratio <= 5.0), f"error ratio {ratio:.2f} in [3, 5]"))
    return out


SUITES = {
    "profile": verify_profile,
    "spectrum": verify_spectrum,
    "sweep": verify_sweep,
    "reduced": verify_reduced,
    "hessian": verify_hessian,
    "evolve": verify_evolve,
}


def run_suite(command: str, params: WaveParams, **kwargs) -> list[CheckResult]:
    if command not in SUITES:
        raise ValueError(f"no verification suite for command {command!r}")
    return SUITES[command](params, **kwargs)
