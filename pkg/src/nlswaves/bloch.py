"""Bloch fibers of the linearization about a wave profile.

For the co-moving perturbation equation, the whole-line spectrum is the
union over the Floquet parameter gamma in (-1/2, 1/2] of the spectra of
the fiber operators obtained by shifting d/dz -> d/dz + i*gamma.  Each
fiber acts on pairs (real part, imaginary part) of 2pi-periodic functions
and is assembled here in the Fourier basis as a dense matrix of size
2*(2N+1).  The same block structure with the symmetric sign layout gives
the energy Hessian; the fiber operator factors as J @ H with J the block
rotation, which the tests verify entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigensolverError
from .fourier import DEFAULT_TRUNCATION, FourierField, convolution_matrix
from .waves import Nonlinearity, WaveParams, WaveProfile, to_Q

RESOLVED_RADIUS = 10.0
STABILITY_TOL = 1e-7
GAMMA_STEPS = 101
REFINE_DGAMMA = 1e-4


@dataclass(frozen=True)
class BlochMatrix:
    """Dense fiber matrix at one Floquet parameter."""

    gamma: float
    truncation: int
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BlochSpectrum:
    """Eigenvalues of one fiber, sorted by (Im, Re)."""

    gamma: float
    eigenvalues: np.ndarray
    max_re: float


@dataclass(frozen=True)
class UnstableBand:
    gamma_lo: float
    gamma_hi: float
    peak: float


@dataclass(frozen=True)
class StabilityReport:
    params: WaveParams
    gammas: np.ndarray
    max_res: np.ndarray
    verdict: str
    band: UnstableBand | None
    stability_tol: float
    resolved_radius: float


@dataclass(frozen=True)
class GapCheckReport:
    """Ball memberships and gaps of the constant-coefficient eigenvalues."""

    gamma: float
    quartet_in_unit_ball: bool
    others_outside_radius4: bool
    min_pairwise_gap: float
    half_regime_balls: bool


def _check_gamma(gamma: float) -> None:
    if not (-0.5 < gamma <= 0.5):
        raise ValueError(f"Floquet parameter {gamma} outside (-1/2, 1/2]")


def _potential_fields(w: WaveProfile, truncation: int):
    """Fields 2RI, R^2 + 3I^2, 3R^2 + I^2 built from Q = R + iI."""
    _, Q = to_Q(w)
    R = Q.real_part()
    I = Q.imag_part()
    r2 = R.multiply_full(R)
    i2 = I.multiply_full(I)
    ri = R.multiply_full(I)
    pad = max(r2.truncation, 2 * truncation)
    return (
        (2.0 * ri).padded(pad).truncated(2 * truncation),
        (r2 + 3.0 * i2).padded(pad).truncated(2 * truncation),
        (3.0 * r2 + i2).padded(pad).truncated(2 * truncation),
    )


def assemble_bloch(w: WaveProfile, gamma: float, truncation: int = DEFAULT_TRUNCATION) -> BlochMatrix:
    """Fiber matrix at gamma, acting on stacked (Re, Im) coefficients."""
    _check_gamma(gamma)
    p, k = w.p, w.k
    n = np.arange(-truncation, truncation + 1)
    d1 = np.diag(1j * (n + gamma))                 # d/dz + i*gamma
    d2 = np.diag(-((n + gamma) ** 2.0))            # (d/dz + i*gamma)^2
    eye = np.eye(2 * truncation + 1)
    v_ri, v_a, v_b = _potential_fields(w, truncation)
    # Focusing flips the sign of every potential term.
    ps = -float(w.params.sign)
    t_ri = ps * convolution_matrix(v_ri, truncation)
    t_a = ps * convolution_matrix(v_a, truncation)   # R^2 + 3 I^2
    t_b = ps * convolution_matrix(v_b, truncation)   # 3 R^2 + I^2
    a11 = -4.0 * p * k * d1 + t_ri
    a12 = -4.0 * k * k * d2 + (p * p - 1.0) * eye + t_a
    a21 = 4.0 * k * k * d2 - (p * p - 1.0) * eye - t_b
    a22 = -4.0 * p * k * d1 - t_ri
    return BlochMatrix(gamma=gamma, truncation=truncation, matrix=np.block([[a11, a12], [a21, a22]]))


def assemble_hessian_fiber(w: WaveProfile, gamma: float, truncation: int = DEFAULT_TRUNCATION) -> np.ndarray:
    """Hermitian fiber of the energy Hessian; the fiber matrix is J @ H."""
    _check_gamma(gamma)
    p, k = w.p, w.k
    n = np.arange(-truncation, truncation + 1)
    d1 = np.diag(1j * (n + gamma))
    d2 = np.diag(-((n + gamma) ** 2.0))
    eye = np.eye(2 * truncation + 1)
    v_ri, v_a, v_b = _potential_fields(w, truncation)
    ps = -float(w.params.sign)
    t_ri = ps * convolution_matrix(v_ri, truncation)
    t_a = ps * convolution_matrix(v_a, truncation)
    t_b = ps * convolution_matrix(v_b, truncation)
    h11 = -4.0 * k * k * d2 + (p * p - 1.0) * eye + t_b
    h12 = 4.0 * p * k * d1 + t_ri
    h21 = -4.0 * p * k * d1 + t_ri
    h22 = -4.0 * k * k * d2 + (p * p - 1.0) * eye + t_a
    return np.block([[h11, h12], [h21, h22]])


def block_rotation(truncation: int) -> np.ndarray:
    """The symplectic block J = [[0, 1], [-1, 0]] on stacked coefficients."""
    eye = np.eye(2 * truncation + 1)
    zero = np.zeros_like(eye)
    return np.block([[zero, eye], [-eye, zero]])


def unperturbed_omega(p: float, k: float, gamma: float, n: int, branch: int) -> float:
    """Constant-coefficient eigenfrequency: the fiber eigenvalue is i*omega."""
    if branch not in (-1, 1):
        raise ValueError("branch must be +1 or -1")
    x = n + gamma
    return -4.0 * p * k * x + branch * (4.0 * k * k * x * x + p * p - 1.0)


def eigenvalues(m: BlochMatrix) -> np.ndarray:
    """Full eigenvalue set, sorted by (Im, Re) for determinism."""
    try:
        vals = scipy.linalg.eigvals(m.matrix)
    except Exception as exc:  # LinAlgError or convergence failure
        raise EigensolverError(f"dense eigensolve failed at gamma={m.gamma}") from exc
    if not np.all(np.isfinite(vals)):
        raise EigensolverError(f"non-finite eigenvalues at gamma={m.gamma}")
    order = np.lexsort((vals.real, vals.imag))
    return vals[order]


def spectrum(
    w: WaveProfile,
    gamma: float,
    truncation: int = DEFAULT_TRUNCATION,
    resolved_radius: float = RESOLVED_RADIUS,
) -> BlochSpectrum:
    vals = eigenvalues(assemble_bloch(w, gamma, truncation))
    resolved = vals[np.abs(vals) <= resolved_radius]
    max_re = float(np.max(np.abs(resolved.real))) if resolved.size else 0.0
    return BlochSpectrum(gamma=gamma, eigenvalues=vals, max_re=max_re)


def classify(
    w: WaveProfile,
    gamma_grid: np.ndarray | None = None,
    truncation: int = DEFAULT_TRUNCATION,
    stability_tol: float = STABILITY_TOL,
    resolved_radius: float = RESOLVED_RADIUS,
    refine: bool = True,
    refine_dgamma: float = REFINE_DGAMMA,
) -> StabilityReport:
    """Sweep the Floquet interval [0, 1/2] and classify the wave.

    Negative gamma is covered by the conjugation symmetry of the fibers.
    Grid points whose growth exceeds stability_tol / 10 trigger bisection
    against their quiet neighbours down to refine_dgamma, so narrow
    side-bands are resolved before the verdict is made.
    """
    if gamma_grid is None:
        gamma_grid = np.linspace(0.0, 0.5, GAMMA_STEPS)
    gammas = [float(g) for g in np.sort(np.asarray(gamma_grid, dtype=float))]
    if gammas[0] < 0.0 or gammas[-1] > 0.5:
        raise ValueError("classify expects a grid inside [0, 1/2]")

    def growth(g: float) -> float:
        return spectrum(w, g, truncation, resolved_radius).max_re

    values = {g: growth(g) for g in gammas}
    if refine:
        flag = stability_tol / 10.0
        while True:
            pts = sorted(values)
            inserts = [
                0.5 * (lo + hi)
                for lo, hi in zip(pts, pts[1:])
                if (values[lo] > flag) != (values[hi] > flag) and hi - lo > refine_dgamma
            ]
            if not inserts:
                break
            for g in inserts:
                values[g] = growth(g)

    pts = np.array(sorted(values))
    res = np.array([values[g] for g in pts])
    hot = res > stability_tol
    band = None
    if np.any(hot):
        peak_idx = int(np.argmax(res))
        lo = peak_idx
        while lo > 0 and hot[lo - 1]:
            lo -= 1
        hi = peak_idx
        while hi < len(pts) - 1 and hot[hi + 1]:
            hi += 1
        band = UnstableBand(gamma_lo=float(pts[lo]), gamma_hi=float(pts[hi]), peak=float(res[peak_idx]))
    return StabilityReport(
        params=w.params,
        gammas=pts,
        max_res=res,
        verdict="unstable" if band is not None else "stable",
        band=band,
        stability_tol=stability_tol,
        resolved_radius=resolved_radius,
    )


def gap_check(w: WaveProfile, gamma: float, truncation: int = DEFAULT_TRUNCATION) -> GapCheckReport:
    """Evaluate the ball/gap structure of the unperturbed eigenvalues.

    Used as a property-test oracle for the perturbation splitting: near
    gamma = 0 the four members (+-, 0), (+, 1), (-, -1) sit in B(0; 1) and
    everything else stays outside B(0; 4); near gamma = 1/2 the two simple
    eigenvalues approach +-i.
    """
    _check_gamma(abs(gamma))
    p, k = w.p, w.k
    n = np.arange(-truncation, truncation + 1)
    omega_plus = -4.0 * p * k * (n + gamma) + (4.0 * k * k * (n + gamma) ** 2 + p * p - 1.0)
    omega_minus = -4.0 * p * k * (n + gamma) - (4.0 * k * k * (n + gamma) ** 2 + p * p - 1.0)

    def om(branch: int, mode: int) -> float:
        arr = omega_plus if branch > 0 else omega_minus
        return float(arr[mode + truncation])

    quartet = [om(1, 0), om(-1, 0), om(1, 1), om(-1, -1)]
    quartet_ok = all(abs(v) < 1.0 for v in quartet)
    others = [
        (br, mode)
        for br in (1, -1)
        for mode in range(-truncation, truncation + 1)
        if (br, mode) not in ((1, 0), (-1, 0), (1, 1), (-1, -1))
    ]
    others_ok = all(abs(om(br, mode)) > 4.0 for br, mode in others)
    allvals = np.concatenate([omega_plus, omega_minus])
    diffs = np.abs(allvals[:, None] - allvals[None, :])
    np.fill_diagonal(diffs, np.inf)
    half_ok = abs(om(1, 0) + 1.0) < 0.5 and abs(om(-1, -1) - 1.0) < 0.5
    return GapCheckReport(
        gamma=gamma,
        quartet_in_unit_ball=quartet_ok,
        others_outside_radius4=others_ok,
        min_pairwise_gap=float(np.min(diffs)),
        half_regime_balls=half_ok,
    )
