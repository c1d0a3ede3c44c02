"""Construction of the two-parameter family of small traveling-wave profiles.

A profile W(x) = e^{i ell x} P(k x) solves the stationary equation

    W'' + W - sign * (-1) * |W|^2 W = 0      (sign = -1 defocusing, +1 focusing)

with P a 2pi-periodic function supported on odd modes only, normalised so
that P_{-1} = a and P_{+1} = b are real.  The pinning fixes the translation
and phase freedom; k and ell join the odd coefficients as unknowns of the
Galerkin system.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import NonConvergence, SingularJacobian
from .fourier import DEFAULT_TRUNCATION, FourierField

AMPLITUDE_CAP = 0.25
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 25


class Nonlinearity(enum.IntEnum):
    DEFOCUSING = -1
    FOCUSING = 1

    @classmethod
    def parse(cls, value) -> "Nonlinearity":
        if isinstance(value, Nonlinearity):
            return value
        if isinstance(value, str):
            name = value.strip().lower()
            if name in ("defocusing", "-1"):
                return cls.DEFOCUSING
            if name in ("focusing", "+1", "1"):
                return cls.FOCUSING
            raise ValueError(f"unknown nonlinearity {value!r}")
        return cls(int(value))

    def label(self) -> str:
        return "defocusing" if self is Nonlinearity.DEFOCUSING else "focusing"


class AmplitudeWarning(UserWarning):
    """Parameters outside the small-amplitude regime the expansions cover."""


@dataclass(frozen=True)
class WaveParams:
    """Coordinates (a, b) of a small wave plus the nonlinearity sign."""

    a: float
    b: float
    sign: Nonlinearity = Nonlinearity.DEFOCUSING

    def __post_init__(self):
        object.__setattr__(self, "sign", Nonlinearity.parse(self.sign))
        if float(np.hypot(self.a, self.b)) > AMPLITUDE_CAP:
            warnings.warn(
                f"|(a, b)| = {np.hypot(self.a, self.b):.3f} exceeds the small-amplitude "
                f"cap {AMPLITUDE_CAP}; results leave the validated regime",
                AmplitudeWarning,
                stacklevel=2,
            )

    def transformed(self, op: str) -> "WaveParams":
        if op == "negate_a":
            return replace(self, a=-self.a)
        if op == "negate_both":
            return replace(self, a=-self.a, b=-self.b)
        if op == "swap_ab":
            return replace(self, a=self.b, b=self.a)
        raise ValueError(f"unknown symmetry op {op!r}")


@dataclass(frozen=True)
class WaveProfile:
    """A solved profile: parameters, wavenumbers, odd-mode coefficients."""

    params: WaveParams
    k: float
    ell: float
    P: FourierField
    residual: float

    @property
    def p(self) -> float:
        return self.ell + self.k


@dataclass(frozen=True)
class InvariantsReport:
    """Pointwise first integrals of the profile ODE and their grid deviation."""

    J: float
    E: float
    J_deviation: float
    E_deviation: float


def _odd_modes(truncation: int) -> np.ndarray:
    n = np.arange(-truncation, truncation + 1)
    return n[n % 2 != 0]


def expansion_profile(params: WaveParams, modes: int = DEFAULT_TRUNCATION) -> WaveProfile:
    """Leading-order profile; the cubic coefficient correction is only known
    for the defocusing sign, so the focusing seed carries the two primary
    modes alone."""
    a, b = params.a, params.b
    s2 = a * a + b * b
    if params.sign is Nonlinearity.DEFOCUSING:
        ell = 0.25 * (b * b - a * a)
        k = 1.0 - 0.75 * s2
        entries = {-1: a, 1: b, -3: -(a * a * b) / 8.0, 3: -(a * b * b) / 8.0}
    else:
        ell = 0.25 * (a * a - b * b)
        k = 1.0 + 0.75 * s2
        entries = {-1: a, 1: b}
    P = FourierField.from_modes({n: v for n, v in entries.items() if v != 0.0} or {1: 0.0}, modes)
    residual = stationary_residual_norm(P, k, ell, params.sign)
    return WaveProfile(params=params, k=k, ell=ell, P=P, residual=residual)


def plane_wave_profile(params: WaveParams, modes: int = DEFAULT_TRUNCATION) -> WaveProfile:
    """Exact single-mode branch for a = 0 or b = 0 (and the zero solution)."""
    a, b = params.a, params.b
    if a != 0.0 and b != 0.0:
        raise ValueError("plane-wave branch requires a = 0 or b = 0")
    # sigma = +1 turns W'' + W + sigma |W|^2 W = 0 into the focusing equation.
    sigma = float(params.sign)
    if a == 0.0 and b == 0.0:
        k, ell = 1.0, 0.0
        P = FourierField.zeros(modes)
    elif a == 0.0:
        k = float(np.sqrt(1.0 + sigma * 1.5 * b * b))
        ell = float(np.sqrt(1.0 + sigma * b * b)) - k
        P = FourierField.from_modes({1: b}, modes)
    else:
        k = float(np.sqrt(1.0 + sigma * 1.5 * a * a))
        ell = k - float(np.sqrt(1.0 + sigma * a * a))
        P = FourierField.from_modes({-1: a}, modes)
    residual = stationary_residual_norm(P, k, ell, params.sign)
    return WaveProfile(params=params, k=k, ell=ell, P=P, residual=residual)


def stationary_residual(P: FourierField, k: float, ell: float, sign: Nonlinearity) -> np.ndarray:
    """Galerkin residual F_n = (1 - (ell + n k)^2) P_n + sign (|P|^2 P)_n
    over the odd modes of the truncation."""
    odd = _odd_modes(P.truncation)
    cubic = P.cubic_abs2()
    lin = 1.0 - (ell + odd * k) ** 2
    pos = odd + P.truncation
    return lin * P.coeffs[pos] + float(sign) * cubic.coeffs[pos]


def stationary_residual_norm(P: FourierField, k: float, ell: float, sign: Nonlinearity) -> float:
    return float(np.linalg.norm(stationary_residual(P, k, ell, sign)))


def _newton_jacobian(coeffs_odd, k, ell, sign, odd, P):
    """Jacobian of the residual in stacked-real unknowns plus (k, ell)."""
    # Linearization of the cubic: d(|P|^2 P)[d] = 2(P conj*P) * d + (P P) * conj-reversal(d).
    g1 = 2.0 * np.convolve(P.coeffs, np.conj(P.coeffs[::-1]))  # modes -2N..2N
    g2 = np.convolve(P.coeffs, P.coeffs)
    two_n = P.truncation * 2
    lin = np.zeros((odd.size, odd.size), dtype=complex)
    anti = np.zeros((odd.size, odd.size), dtype=complex)
    diff = odd[:, None] - odd[None, :]
    summ = odd[:, None] + odd[None, :]
    lin[:] = g1[diff + two_n]
    anti[:] = g2[summ + two_n]
    lin *= float(sign)
    anti *= float(sign)
    lin[np.arange(odd.size), np.arange(odd.size)] += 1.0 - (ell + odd * k) ** 2

    m = odd.size
    jac = np.zeros((2 * m, 2 * m + 2))
    re_l, im_l = lin.real, lin.imag
    re_a, im_a = anti.real, anti.imag
    jac[:m, :m] = re_l + re_a
    jac[:m, m : 2 * m] = -im_l + im_a
    jac[m:, :m] = im_l + im_a
    jac[m:, m : 2 * m] = re_l - re_a
    dk = -2.0 * (ell + odd * k) * odd * coeffs_odd
    dl = -2.0 * (ell + odd * k) * coeffs_odd
    jac[:m, 2 * m] = dk.real
    jac[m:, 2 * m] = dk.imag
    jac[:m, 2 * m + 1] = dl.real
    jac[m:, 2 * m + 1] = dl.imag
    return jac


def refine_newton(
    seed: WaveProfile,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> WaveProfile:
    """Solve the pinned Galerkin system to the requested residual.

    Unknowns are the odd coefficients away from n = +-1 together with
    (k, ell); the four pinned real degrees of freedom stay at
    P_{-1} = a, P_{+1} = b exactly.  The system is solved by Gauss-Newton
    on the (consistent) overdetermined residual.
    """
    params = seed.params
    if params.a == 0.0 or params.b == 0.0:
        return plane_wave_profile(params, seed.P.truncation)

    N = seed.P.truncation
    odd = _odd_modes(N)
    m = odd.size
    pin_pos = [int(np.where(odd == -1)[0][0]), int(np.where(odd == 1)[0][0])]
    free = np.array([i for i in range(m) if i not in pin_pos])
    # Stacked-real column layout: [Re c_odd | Im c_odd | k | ell].
    free_cols = np.concatenate([free, m + free, [2 * m, 2 * m + 1]])

    c = seed.P.coeffs[odd + N].astype(complex)
    c[pin_pos[0]] = params.a
    c[pin_pos[1]] = params.b
    k, ell = seed.k, seed.ell

    def build_field(c_odd):
        full = np.zeros(2 * N + 1, dtype=complex)
        full[odd + N] = c_odd
        return FourierField(full)

    P = build_field(c)
    F = stationary_residual(P, k, ell, params.sign)
    res = float(np.linalg.norm(F))
    for iteration in range(1, max_iter + 1):
        if res <= tol:
            break
        jac = _newton_jacobian(c, k, ell, params.sign, odd, P)[:, free_cols]
        rhs = -np.concatenate([F.real, F.imag])
        sol, _, rank, _ = np.linalg.lstsq(jac, rhs, rcond=None)
        if rank < jac.shape[1]:
            raise SingularJacobian(f"rank {rank} < {jac.shape[1]} at iteration {iteration}")
        nf = free.size
        c = c.copy()
        c[free] += sol[:nf] + 1j * sol[nf : 2 * nf]
        k += sol[2 * nf]
        ell += sol[2 * nf + 1]
        P = build_field(c)
        F = stationary_residual(P, k, ell, params.sign)
        res = float(np.linalg.norm(F))
    if res > tol:
        raise NonConvergence(max_iter, res)
    return WaveProfile(params=params, k=float(k), ell=float(ell), P=P, residual=res)


def solve_profile(
    params: WaveParams,
    modes: int = DEFAULT_TRUNCATION,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> WaveProfile:
    """Expansion seed followed by Newton refinement."""
    return refine_newton(expansion_profile(params, modes), tol=tol, max_iter=max_iter)


def invariants(w: WaveProfile, grid_points: int = 64) -> InvariantsReport:
    """First integrals J = Im(conj(W) W_x) and E of the profile ODE.

    Both are x-independent for exact solutions; the report carries their
    maximal deviation over one period of P as a conservation diagnostic.
    """
    x = np.linspace(0.0, 2.0 * np.pi / w.k, grid_points, endpoint=False)
    y = w.k * x
    P = w.P.evaluate(y)
    Pp = w.P.derivative().evaluate(y)
    phase = np.exp(1j * w.ell * x)
    W = phase * P
    Wx = phase * (1j * w.ell * P + w.k * Pp)
    absW2 = np.abs(W) ** 2
    J = np.imag(np.conj(W) * Wx)
    E = 0.5 * np.abs(Wx) ** 2 + 0.5 * absW2 + float(w.params.sign) * 0.25 * absW2**2
    return InvariantsReport(
        J=float(J[0]),
        E=float(E[0]),
        J_deviation=float(np.max(np.abs(J - J[0]))),
        E_deviation=float(np.max(np.abs(E - E[0]))),
    )


def to_Q(w: WaveProfile) -> tuple[float, FourierField]:
    """Half-angle substitution Q(z) = e^{-iz/2} P(z/2): Q_m = P_{2m+1}."""
    Np = w.P.truncation
    M = (Np + 1) // 2
    coeffs = np.zeros(2 * M + 1, dtype=complex)
    for m in range(-M, M + 1):
        n = 2 * m + 1
        if abs(n) <= Np:
            coeffs[m + M] = w.P.coeff(n)
    return w.p, FourierField(coeffs)


def period_and_phase(w: WaveProfile) -> tuple[float, float]:
    """Minimal period of |W| and the renormalised phase increment over it."""
    if w.k <= 0.0:
        raise ValueError("wavenumber k must be positive")
    T = np.pi / w.k
    return float(T), float(w.ell * T)


def symmetry_transform(
    w: WaveProfile,
    op: str,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> WaveProfile:
    """Re-solve at the sign-transformed parameters (test hook for the
    translation/phase/conjugation relations between Q fields)."""
    params = w.params.transformed(op)
    return solve_profile(params, w.P.truncation, tol=tol, max_iter=max_iter)


def profile_to_dict(w: WaveProfile) -> dict:
    """JSON-ready description; even modes are identically zero and omitted."""
    odd = _odd_modes(w.P.truncation)
    coeffs = [
        [int(n), float(np.real(w.P.coeff(n))), float(np.imag(w.P.coeff(n)))] for n in odd
    ]
    return {
        "a": w.params.a,
        "b": w.params.b,
        "sign": w.params.sign.label(),
        "k": w.k,
        "ell": w.ell,
        "p": w.p,
        "residual": w.residual,
        "coeffs": coeffs,
    }


def profile_from_dict(data: dict, modes: int = DEFAULT_TRUNCATION) -> WaveProfile:
    params = WaveParams(a=data["a"], b=data["b"], sign=Nonlinearity.parse(data["sign"]))
    entries = {int(n): re + 1j * im for n, re, im in data["coeffs"]}
    P = FourierField.from_modes(entries, modes)
    return WaveProfile(params=params, k=data["k"], ell=data["ell"], P=P, residual=data["residual"])
