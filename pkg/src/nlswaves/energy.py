"""Conserved functionals, the energy Hessian, and its small-eigenvalue data.

The co-moving equation conserves the charge N, the momentum M and a
sign-aware energy; the wave profile is a critical point of the combination
E - (1 - p^2) N - 4 p k M, whose second variation H is assembled here (it
is the gamma = 0 fiber of the Hessian family).  The module computes:

* the four eigenvalues of H continuing the quadruple zero of the flat
  state, and the product of the nonzero pair (negative when a*b != 0);
* the minimal Rayleigh quotient of H on the subspace orthogonal to the
  kernel/near-kernel directions;
* the 2x2 Hessian of the reduced action d(omega, c) through the
  dilation/Galilean chart, by finite differences over neighbouring waves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bloch import assemble_hessian_fiber
from .errors import ClusterAmbiguity
from .fourier import DEFAULT_TRUNCATION, FourierField, TWO_PI
from .waves import (
    NEWTON_TOL,
    Nonlinearity,
    WaveParams,
    WaveProfile,
    solve_profile,
    to_Q,
)

KERNEL_TOL = 1e-7
FD_STEP = 1e-3


@dataclass(frozen=True)
class ConservedTriple:
    """Charge, momentum and energy of a 2pi*n-periodic state."""

    charge: float
    momentum: float
    energy: float


@dataclass(frozen=True)
class HessianReport:
    small_eigs: tuple[float, float, float, float]
    det_b2: float
    coercivity_min: float
    coercivity_min_h1: float
    d_hessian: np.ndarray
    fd_check: float


def conserved(
    Q: FourierField,
    k: float,
    sign: Nonlinearity,
    domain_multiple: int = 1,
) -> ConservedTriple:
    """Quadrature-free conserved quantities on the 2pi*n domain.

    Coefficients of Q are indexed by integer m with physical frequency
    m / n; the quartic term of the energy is an exact convolution.
    """
    n = domain_multiple
    m_eff = Q.modes / n
    absq = np.abs(Q.coeffs) ** 2
    charge = np.pi * n * float(np.sum(absq))
    momentum = -np.pi * n * float(np.sum(m_eff * absq))
    quart = Q.multiply_full(Q.conj_function())
    quartic_integral = TWO_PI * n * float(np.sum(np.abs(quart.coeffs) ** 2))
    energy = 2.0 * k * k * TWO_PI * n * float(np.sum(m_eff**2 * absq))
    energy -= float(sign) * 0.25 * quartic_integral
    return ConservedTriple(charge=charge, momentum=momentum, energy=energy)


def stationary_residual_q(Q: FourierField, p: float, k: float, sign: Nonlinearity) -> float:
    """Residual of the co-moving stationary equation in the Q variable."""
    m = Q.modes
    lin = (-4.0 * p * k * m - 4.0 * k * k * m**2 + 1.0 - p * p) * Q.coeffs
    cubic = Q.cubic_abs2()
    return float(np.linalg.norm(lin + float(sign) * cubic.coeffs))


def assemble_hessian(w: WaveProfile, truncation: int = DEFAULT_TRUNCATION) -> np.ndarray:
    """Second variation of the modified energy on stacked (Re, Im) modes."""
    return assemble_hessian_fiber(w, 0.0, truncation)


def stacked(f: FourierField, truncation: int) -> np.ndarray:
    """Stacked (Re-part, Im-part) coefficient vector of a complex function."""
    fp = f.padded(truncation)
    return np.concatenate([fp.real_part().coeffs, fp.imag_part().coeffs])


def h_small_eigs(
    w: WaveProfile,
    truncation: int = DEFAULT_TRUNCATION,
) -> tuple[np.ndarray, float]:
    """Four Hessian eigenvalues nearest zero and the nonzero-pair product.

    When a*b != 0 two of them vanish (phase and translation) and the other
    two have a negative product.  Raises ClusterAmbiguity when the fifth
    eigenvalue fails to separate from the cluster by at least 1.
    """
    vals = np.sort(scipy.linalg.eigvalsh(assemble_hessian(w, truncation)))
    order = np.argsort(np.abs(vals))
    if np.abs(vals[order[4]]) - np.abs(vals[order[3]]) < 1.0:
        raise ClusterAmbiguity(
            f"5th eigenvalue {vals[order[4]]:.4f} too close to the 4-cluster"
        )
    small = np.sort(vals[order[:4]])
    pair = vals[order[:4]][np.argsort(np.abs(vals[order[:4]]))[2:]]
    return small, float(pair[0] * pair[1])


def _constraint_vectors(w: WaveProfile, truncation: int) -> list[np.ndarray]:
    """Stacked representatives of xi, i*xi, eta, i*eta.

    xi = (i/a) dQ/dz and eta = (1/b)(Q - i dQ/dz) span, with their i-rotations,
    the normal-plus-orbit directions; the limits e^{-iz} and 1 take over when
    a or b vanishes.
    """
    _, Q = to_Q(w)
    dQ = Q.derivative()
    a, b = w.params.a, w.params.b
    if a != 0.0:
        xi = (1j / a) * dQ
    else:
        xi = FourierField.from_modes({-1: 1.0}, Q.truncation)
    if b != 0.0:
        eta = (1.0 / b) * (Q - 1j * dQ)
    else:
        eta = FourierField.constant(1.0, Q.truncation)
    return [stacked(v, truncation) for v in (xi, 1j * xi, eta, 1j * eta)]


def coercivity_min(
    w: WaveProfile,
    truncation: int = DEFAULT_TRUNCATION,
    norm: str = "l2",
) -> float:
    """Minimal Rayleigh quotient of H on the constrained subspace.

    The subspace is the orthogonal complement (in the L2 pairing) of
    {xi, i xi, eta, i eta}.  With norm="l2" the quotient denominator is the
    L2 norm, which is the scale on which the constrained spectrum stays
    near 8 at small amplitude; norm="h1" weights the denominator with
    (1 + n^2), reported as a diagnostic.
    """
    H = assemble_hessian(w, truncation)
    W = np.stack(_constraint_vectors(w, truncation), axis=1)
    V = scipy.linalg.null_space(W.conj().T)
    Hp = V.conj().T @ H @ V
    Hp = 0.5 * (Hp + Hp.conj().T)
    if norm == "l2":
        vals = scipy.linalg.eigvalsh(Hp)
    elif norm == "h1":
        n = np.arange(-truncation, truncation + 1)
        weights = np.concatenate([1.0 + n**2, 1.0 + n**2])
        Bp = V.conj().T @ (weights[:, None] * V)
        Bp = 0.5 * (Bp + Bp.conj().T)
        vals = scipy.linalg.eigvalsh(Hp, Bp)
    else:
        raise ValueError("norm must be 'l2' or 'h1'")
    return float(vals[0])


def _chart_observables(center: WaveProfile, neighbour: WaveProfile) -> tuple[float, float, float, float]:
    """(omega, c, N, M) of the rescaled neighbour wave in the chart of the center.

    A dilation by lambda = k_center / k_neighbour composed with a Galilean
    boost maps the neighbour onto a travelling-rotating solution around the
    center; N and M scale by lambda^2.
    """
    lam = center.k / neighbour.k
    lam2 = lam * lam
    omega = lam2 * (1.0 - neighbour.p**2) - (1.0 - center.p**2)
    c = 4.0 * lam2 * neighbour.k * neighbour.p - 4.0 * center.k * center.p
    _, Qn = to_Q(neighbour)
    cons = conserved(Qn, neighbour.k, neighbour.params.sign)
    return omega, c, lam2 * cons.charge, lam2 * cons.momentum


def _chart_derivatives(w: WaveProfile, h: float, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference Jacobians M = d(omega,c)/d(a,b), K = d(N,M)/d(a,b)."""
    modes = w.P.truncation
    rows_m, rows_k = [], []
    for da, db in ((1.0, 0.0), (0.0, 1.0)):
        plus = solve_profile(
            WaveParams(w.params.a + h * da, w.params.b + h * db, w.params.sign), modes, tol
        )
        minus = solve_profile(
            WaveParams(w.params.a - h * da, w.params.b - h * db, w.params.sign), modes, tol
        )
        op, cp, np_, mp = _chart_observables(w, plus)
        om, cm, nm, mm = _chart_observables(w, minus)
        rows_m.append([(op - om) / (2 * h), (cp - cm) / (2 * h)])
        rows_k.append([(np_ - nm) / (2 * h), (mp - mm) / (2 * h)])
    return np.array(rows_m), np.array(rows_k)


def d_hessian(w: WaveProfile, h: float = FD_STEP, tol: float = NEWTON_TOL) -> tuple[np.ndarray, float]:
    """Hessian of the reduced action d(omega, c) at the wave: -M^{-1} K.

    Returns the matrix at step h together with the entrywise deviation from
    the h/2 recomputation (Richardson-style consistency check).
    """
    if w.params.a == 0.0 or w.params.b == 0.0:
        raise ValueError("d_hessian requires a*b != 0")
    mats = []
    for step in (h, h / 2.0):
        m_mat, k_mat = _chart_derivatives(w, step, tol)
        mats.append(-np.linalg.solve(m_mat, k_mat))
    return mats[0], float(np.max(np.abs(mats[0] - mats[1])))


def generalized_kernel_residuals(
    w: WaveProfile,
    h: float = FD_STEP,
    truncation: int = DEFAULT_TRUNCATION,
    tol: float = NEWTON_TOL,
) -> tuple[float, float]:
    """Relative residuals of H(dQ/domega) = Q and H(dQ/dc) = i dQ/dz.

    The derivatives are finite-differenced through the chart, so the
    residuals carry both the O(h^2) differencing error and the dropped
    amplitude corrections.
    """
    modes = w.P.truncation
    dQ_ab = []
    for da, db in ((1.0, 0.0), (0.0, 1.0)):
        plus = solve_profile(
            WaveParams(w.params.a + h * da, w.params.b + h * db, w.params.sign), modes, tol
        )
        minus = solve_profile(
            WaveParams(w.params.a - h * da, w.params.b - h * db, w.params.sign), modes, tol
        )
        _, Qp = to_Q(plus)
        _, Qm = to_Q(minus)
        lam_p = (w.k / plus.k) ** 1.0
        lam_m = (w.k / minus.k) ** 1.0
        dQ_ab.append((lam_p * Qp.coeffs - lam_m * Qm.coeffs) / (2 * h))
    m_mat, _ = _chart_derivatives(w, h, tol)
    # columns of [dQ/domega, dQ/dc] = [dQ/da, dQ/db] @ inv(chart Jacobian)
    inv_chart = np.linalg.inv(m_mat.T)
    dq = np.stack(dQ_ab, axis=1) @ inv_chart
    _, Q = to_Q(w)
    M = Q.truncation
    H = assemble_hessian(w, truncation)
    d_omega = FourierField(dq[:, 0])
    d_c = FourierField(dq[:, 1])
    lhs_omega = H @ stacked(d_omega, truncation)
    lhs_c = H @ stacked(d_c, truncation)
    rhs_omega = stacked(Q, truncation)
    rhs_c = stacked(1j * Q.derivative(), truncation)
    r1 = np.linalg.norm(lhs_omega - rhs_omega) / np.linalg.norm(rhs_omega)
    r2 = np.linalg.norm(lhs_c - rhs_c) / np.linalg.norm(rhs_c)
    return float(r1), float(r2)


def hessian_report(
    w: WaveProfile,
    truncation: int = DEFAULT_TRUNCATION,
    fd_step: float = FD_STEP,
) -> HessianReport:
    small, det_b2 = h_small_eigs(w, truncation)
    dmat, fd_check = d_hessian(w, fd_step)
    return HessianReport(
        small_eigs=tuple(float(v) for v in small),
        det_b2=det_b2,
        coercivity_min=coercivity_min(w, truncation, "l2"),
        coercivity_min_h1=coercivity_min(w, truncation, "h1"),
        d_hessian=dmat,
        fd_check=fd_check,
    )
