"""The four-eigenvalue cluster near the origin of a Bloch fiber.

At small amplitude and small gamma, four eigenvalues of the fiber matrix
stay inside B(0; 2) while the rest of the spectrum keeps away from B(0; 3).
Their leading-order model is a 4x4 block matrix whose characteristic
polynomial, after the substitution lambda = i*gamma*X, is the real quartic

    P(X) = X^4 + c3 X^3 - c2 X^2 - c1 X + c0.

Real roots X mean a purely imaginary (spectrally stable) quartet; a complex
pair signals the side-band instability of the focusing equation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .bloch import BlochSpectrum, spectrum
from .errors import NoGrowthFound, WrongClusterSize
from .fourier import DEFAULT_TRUNCATION
from .waves import Nonlinearity, WaveParams, WaveProfile

CLUSTER_RADIUS = 2.0
ROOT_IM_TOL = 1e-6
SMALL_GAMMA_MAX = 0.1


@dataclass(frozen=True)
class QuarticCoeffs:
    """Real coefficients of the reduced quartic at one (a, b, gamma)."""

    c3: float
    c2: float
    c1: float
    c0: float
    gamma: float
    params: WaveParams

    def as_poly(self) -> np.ndarray:
        """numpy.roots coefficient vector of X^4 + c3 X^3 - c2 X^2 - c1 X + c0."""
        return np.array([1.0, self.c3, -self.c2, -self.c1, self.c0])


@dataclass(frozen=True)
class QuartetReport:
    """Near-origin quartet from the full fiber vs the asymptotic model."""

    gamma: float
    full_quartet: np.ndarray
    asymptotic_quartet: np.ndarray
    max_mismatch: float
    realness_verdict: str


def reduced_matrix_asymptotic(params: WaveParams, gamma: float) -> np.ndarray:
    """Leading-order 4x4 model of the near-origin cluster.

    The O(a^2 + b^2) corrections to the derivative blocks are dropped; only
    the amplitude block M2 carries the wave, with its sign set by the
    nonlinearity.
    """
    a, b = params.a, params.b
    d2 = np.diag([1.0, -1.0])
    eye = np.eye(2)
    m2 = -float(params.sign) * np.array([[-2.0 * a * a, -4.0 * a * b], [-4.0 * a * b, -2.0 * b * b]])
    g2 = 4.0 * gamma * gamma
    top = np.hstack([4j * gamma * d2, m2 - g2 * eye])
    bot = np.hstack([g2 * eye, 4j * gamma * d2])
    return np.vstack([top, bot])


def quartic_coeffs(params: WaveParams, gamma: float) -> QuarticCoeffs:
    """Coefficient expansions of the reduced quartic.

    The gamma-only part is kept exact (it is known in closed form at
    a = b = 0, including the gamma^4 term of c0); the amplitude corrections
    are the leading-order ones, with O(a^4 + b^4) remainders dropped.
    c1 vanishes to this order.
    """
    a, b = params.a, params.b
    s = a * a + b * b
    g2 = gamma * gamma
    if params.sign is Nonlinearity.DEFOCUSING:
        c3 = 4.0 * (b * b - a * a)
        c2 = 32.0 * (1.0 + g2) - 88.0 * s
        c0 = 256.0 * (1.0 - 2.0 * g2 + g2 * g2) - 1664.0 * s
    else:
        c3 = -4.0 * (b * b - a * a)
        c2 = 32.0 * (1.0 + g2) + 88.0 * s
        c0 = 256.0 * (1.0 - 2.0 * g2 + g2 * g2) + 1664.0 * s
    return QuarticCoeffs(c3=c3, c2=c2, c1=0.0, c0=c0, gamma=gamma, params=params)


def quartic_roots(coeffs: QuarticCoeffs, root_im_tol: float = ROOT_IM_TOL) -> tuple[np.ndarray, str]:
    """Roots via the companion-matrix eigensolve, plus a realness verdict."""
    roots = np.roots(coeffs.as_poly())
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    verdict = "all_real_X" if np.max(np.abs(roots.imag)) <= root_im_tol else "complex_X"
    return roots, verdict


def quartet_extract(spec: BlochSpectrum, radius: float = CLUSTER_RADIUS) -> np.ndarray:
    """The four fiber eigenvalues inside B(0; radius).

    A count other than four signals that (a, b, gamma) left the small
    regime; the error reports the counts at the probe radii 1.5/2.0/2.5 to
    help diagnose which way.
    """
    vals = spec.eigenvalues
    inside = vals[np.abs(vals) <= radius]
    if inside.size != 4:
        counts = {r: int(np.sum(np.abs(vals) <= r)) for r in (1.5, radius, 2.5)}
        raise WrongClusterSize(int(inside.size), counts)
    order = np.lexsort((inside.real, inside.imag))
    return inside[order]


def _match_sets(left: np.ndarray, right: np.ndarray) -> float:
    """Max pairwise distance under the optimal bipartite matching."""
    cost = np.abs(left[:, None] - right[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols]))


def quartet_report(
    w: WaveProfile,
    gamma: float,
    truncation: int = DEFAULT_TRUNCATION,
    radius: float = CLUSTER_RADIUS,
    root_im_tol: float = ROOT_IM_TOL,
) -> QuartetReport:
    """Cross-validate the full-operator quartet against i*gamma*X."""
    full = quartet_extract(spectrum(w, gamma, truncation), radius)
    roots, verdict = quartic_roots(quartic_coeffs(w.params, gamma), root_im_tol)
    asym = 1j * gamma * roots
    return QuartetReport(
        gamma=gamma,
        full_quartet=full,
        asymptotic_quartet=asym,
        max_mismatch=_match_sets(full, asym),
        realness_verdict=verdict,
    )


def sideband_growth(
    w: WaveProfile,
    gamma_max: float = SMALL_GAMMA_MAX,
    truncation: int = DEFAULT_TRUNCATION,
    stability_tol: float = 1e-7,
    coarse_points: int = 24,
    gamma_tol: float = 1e-5,
) -> tuple[float, float]:
    """Locate the fastest-growing Floquet parameter of the near-origin quartet.

    Coarse scan over (0, gamma_max] followed by golden-section refinement.
    Raises NoGrowthFound when nothing exceeds stability_tol (defocusing
    input, or zero amplitude).
    """

    def growth(g: float) -> float:
        try:
            quartet = quartet_extract(spectrum(w, g, truncation))
        except WrongClusterSize:
            return 0.0
        return float(np.max(quartet.real))

    grid = np.linspace(gamma_max / coarse_points, gamma_max, coarse_points)
    vals = np.array([growth(g) for g in grid])
    best = int(np.argmax(vals))
    if vals[best] <= stability_tol:
        raise NoGrowthFound(
            f"no quartet growth above {stability_tol:g} on (0, {gamma_max:g}]"
        )
    lo = grid[best - 1] if best > 0 else grid[0] / 2.0
    hi = grid[best + 1] if best < len(grid) - 1 else gamma_max
    # Golden-section maximisation of growth on [lo, hi].
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = growth(x1), growth(x2)
    while hi - lo > gamma_tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = growth(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = growth(x1)
    gamma_star = 0.5 * (lo + hi)
    return float(gamma_star), growth(gamma_star)
