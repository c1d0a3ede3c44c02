"""Strang split-step integration of the co-moving equation and orbital
diagnostics.

States live on the domain [0, 2*pi*n] for an integer multiple n >= 1 and
are stored as FourierField coefficient vectors in the stretched variable
zeta = z / n, so integer mode m carries the physical frequency m / n.  The
nonlinear half-steps are exact (they only rotate the phase pointwise) and
the linear step is an exact isometry per mode, which is what keeps the
charge conserved to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bloch import assemble_bloch
from .energy import ConservedTriple, conserved
from .errors import BlowupDetected, DegenerateFit
from .fourier import FourierField
from .waves import Nonlinearity, WaveProfile, to_Q

OVERFLOW_GUARD = 1e6
DEFAULT_DT = 1e-3
SAMPLE_STRIDE = 100


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution with conserved quantities and orbital distance."""

    times: np.ndarray
    states: list[FourierField]
    conserved: list[ConservedTriple]
    rho: list[float]
    domain_multiple: int
    dt: float


def _fft_size(truncation: int) -> int:
    size = 1
    while size < 2 * (2 * truncation + 1):
        size *= 2
    return size


class _Stepper:
    """Precomputed grids and symbols for repeated Strang steps."""

    def __init__(self, truncation: int, dt: float, p: float, k: float,
                 sign: Nonlinearity, n: int, nfft: int | None = None):
        self.truncation = truncation
        self.dt = dt
        self.sign = float(sign)
        self.n = n
        self.nfft = nfft or _fft_size(truncation)
        if self.nfft < 2 * truncation + 1:
            raise ValueError("fft grid smaller than the coefficient vector")
        m = np.arange(-truncation, truncation + 1)
        m_eff = m / n
        rate = -4.0 * p * k * m_eff - 4.0 * k * k * m_eff**2 + (1.0 - p * p)
        self.linear_phase = np.exp(1j * dt * rate)
        self.slots = np.mod(m, self.nfft)

    def to_grid(self, coeffs: np.ndarray) -> np.ndarray:
        spec = np.zeros(self.nfft, dtype=complex)
        spec[self.slots] = coeffs
        return np.fft.ifft(spec) * self.nfft

    def to_coeffs(self, grid: np.ndarray) -> np.ndarray:
        spec = np.fft.fft(grid) / self.nfft
        return spec[self.slots]

    def nonlinear_half(self, coeffs: np.ndarray) -> np.ndarray:
        q = self.to_grid(coeffs)
        q *= np.exp(self.sign * 0.5j * self.dt * np.abs(q) ** 2)
        return self.to_coeffs(q)

    def step(self, coeffs: np.ndarray) -> np.ndarray:
        half = self.nonlinear_half(coeffs)
        lin = half * self.linear_phase
        return self.nonlinear_half(lin)


def step_strang(
    Q: FourierField,
    dt: float,
    p: float,
    k: float,
    sign: Nonlinearity,
    domain_multiple: int = 1,
) -> FourierField:
    """One Strang step: half nonlinear flow, full linear flow, half nonlinear."""
    stepper = _Stepper(Q.truncation, dt, p, k, sign, domain_multiple)
    return FourierField(stepper.step(Q.coeffs))


def embed_profile(w: WaveProfile, domain_multiple: int, truncation: int) -> FourierField:
    """Wave profile as a state on the n-fold domain (modes at multiples of n)."""
    _, Q = to_Q(w)
    coeffs = np.zeros(2 * truncation + 1, dtype=complex)
    for m0 in Q.modes:
        m = domain_multiple * int(m0)
        if abs(m) <= truncation:
            coeffs[m + truncation] = Q.coeff(int(m0))
    return FourierField(coeffs)


def evolve(
    Q0: FourierField,
    tmax: float,
    dt: float,
    domain_multiple: int,
    reference: WaveProfile,
    sample_stride: int = SAMPLE_STRIDE,
    overflow_guard: float = OVERFLOW_GUARD,
) -> Trajectory:
    """Integrate the co-moving equation, sampling conserved quantities and
    the orbital distance to the reference wave every sample_stride steps."""
    n = domain_multiple
    p, k, sign = reference.p, reference.k, reference.params.sign
    stepper = _Stepper(Q0.truncation, dt, p, k, sign, n)
    ref = embed_profile(reference, n, Q0.truncation)
    steps = int(round(tmax / dt))
    coeffs = Q0.coeffs.copy()
    if np.max(np.abs(coeffs)) > overflow_guard:
        raise BlowupDetected(0.0)

    times, states, cons, rhos = [], [], [], []

    def record(t: float, c: np.ndarray) -> None:
        state = FourierField(c.copy())
        times.append(t)
        states.append(state)
        cons.append(conserved(state, k, sign, n))
        rhos.append(orbital_distance(state, ref, n))

    record(0.0, coeffs)
    for step in range(1, steps + 1):
        coeffs = stepper.step(coeffs)
        if np.max(np.abs(coeffs)) > overflow_guard:
            raise BlowupDetected(step * dt)
        if step % sample_stride == 0 or step == steps:
            record(step * dt, coeffs)
    return Trajectory(
        times=np.array(times),
        states=states,
        conserved=cons,
        rho=rhos,
        domain_multiple=n,
        dt=dt,
    )


def _h1_weights(truncation: int, n: int) -> np.ndarray:
    m_eff = np.arange(-truncation, truncation + 1) / n
    return 2.0 * np.pi * n * (1.0 + m_eff**2)


def orbital_distance(
    u: FourierField,
    v: FourierField,
    domain_multiple: int = 1,
    coarse: int = 64,
    tol: float = 1e-6,
) -> float:
    """Distance to the group orbit of v: inf over phase and shift of
    ||u - e^{-i phi} v(. + xi)||_{H1} on the 2pi*n domain.

    Coarse grid over (phi, xi) with lexicographic tie-breaking, then
    coordinate descent with golden-section line searches until both
    coordinates move by less than tol.
    """
    if u.truncation != v.truncation:
        raise ValueError("states must share a truncation")
    n = domain_multiple
    w = _h1_weights(u.truncation, n)
    m_eff = u.modes / n
    norm_u = float(np.sum(w * np.abs(u.coeffs) ** 2))
    norm_v = float(np.sum(w * np.abs(v.coeffs) ** 2))
    corr = w * u.coeffs * np.conj(v.coeffs)

    def value(phi: float, xi: float) -> float:
        c = np.sum(corr * np.exp(-1j * m_eff * xi))
        return norm_u + norm_v - 2.0 * float(np.real(np.exp(1j * phi) * c))

    phis = np.linspace(0.0, 2.0 * np.pi, coarse, endpoint=False)
    xis = np.linspace(0.0, 2.0 * np.pi * n, coarse, endpoint=False)
    c_of_xi = np.exp(-1j * np.outer(xis, m_eff)) @ corr
    grid = norm_u + norm_v - 2.0 * np.real(np.outer(np.exp(1j * phis), c_of_xi))
    # argmin takes the first minimum in row-major order, i.e. ties resolve
    # to the lexicographically smallest (phi, xi).
    flat = int(np.argmin(grid))
    phi = float(phis[flat // coarse])
    xi = float(xis[flat % coarse])

    # Coordinate descent: the phi line-search has the closed-form minimiser
    # phi = -arg C(xi), so only xi needs a golden-section search.
    def corr_at(x: float) -> complex:
        return complex(np.sum(corr * np.exp(-1j * m_eff * x)))

    def reduced_value(x: float) -> float:
        return norm_u + norm_v - 2.0 * abs(corr_at(x))

    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    lo, hi = xi - 2.0 * np.pi * n / coarse, xi + 2.0 * np.pi * n / coarse
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = reduced_value(x1), reduced_value(x2)
    while hi - lo > tol:
        if f1 > f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = reduced_value(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = reduced_value(x1)
    xi = 0.5 * (lo + hi)
    c = corr_at(xi)
    phi = float(-np.angle(c)) if c != 0.0 else phi
    return float(np.sqrt(max(value(phi, xi), 0.0)))


def seed_generic(
    w: WaveProfile,
    domain_multiple: int,
    eps: float,
    truncation: int,
) -> FourierField:
    """Reference state plus a fixed low-mode perturbation of H1 size eps."""
    base = embed_profile(w, domain_multiple, truncation)
    bump = FourierField.from_modes({1: 0.6, -2: 0.3 + 0.2j, 3: 0.15j}, truncation)
    bump = (eps / np.sqrt(bump.norm_h1_sq())) * bump
    return base + bump


def seed_unstable_eigenvector(
    w: WaveProfile,
    domain_multiple: int,
    sideband_index: int,
    eps: float,
    truncation: int,
    bloch_truncation: int = 48,
) -> tuple[FourierField, float]:
    """Reference state plus the most unstable Bloch eigenvector at
    gamma = j / n, scaled to H1 size eps; returns the predicted growth rate.

    A fiber eigenvector (v1, v2) at gamma generates the real perturbation
    Re[e^{lambda t} e^{i gamma z} (v1, v2)], whose complex form populates the
    n-fold modes congruent to +-j mod n.
    """
    n = domain_multiple
    gamma = sideband_index / n
    mat = assemble_bloch(w, gamma, bloch_truncation)
    vals, vecs = scipy.linalg.eig(mat.matrix)
    idx = int(np.argmax(vals.real))
    rate = float(vals[idx].real)
    size = 2 * bloch_truncation + 1
    v1 = vecs[:size, idx]
    v2 = vecs[size:, idx]
    f = v1 + 1j * v2                      # e^{+i gamma z} part
    g = np.conj(v1[::-1]) + 1j * np.conj(v2[::-1])  # e^{-i gamma z} part
    coeffs = np.zeros(2 * truncation + 1, dtype=complex)
    for i, m0 in enumerate(range(-bloch_truncation, bloch_truncation + 1)):
        for m, amp in ((n * m0 + sideband_index, 0.5 * f[i]), (n * m0 - sideband_index, 0.5 * g[i])):
            if abs(m) <= truncation:
                coeffs[m + truncation] += amp
    bump = FourierField(coeffs)
    scale = np.sqrt(float(np.sum(_h1_weights(truncation, n) * np.abs(bump.coeffs) ** 2)))
    bump = (eps / scale) * bump
    return embed_profile(w, n, truncation) + bump, rate


def growth_rate(
    traj: Trajectory,
    window: tuple[float, float],
    min_decades: float = 1.0,
) -> float:
    """Least-squares slope of log rho(t) on the window.

    Raises DegenerateFit when the samples span fewer than min_decades
    decades (with the default guard, a flat trajectory is not fittable).
    """
    t = traj.times
    rho = np.array(traj.rho)
    mask = (t >= window[0]) & (t <= window[1]) & (rho > 0.0)
    if np.sum(mask) < 3:
        raise DegenerateFit("fewer than 3 positive samples in the window")
    span = np.log10(np.max(rho[mask]) / np.min(rho[mask]))
    if span < min_decades:
        raise DegenerateFit(
            f"rho spans {span:.2f} decades on the window, need {min_decades:g}"
        )
    slope, _ = np.polyfit(t[mask], np.log(rho[mask]), 1)
    return float(slope)
