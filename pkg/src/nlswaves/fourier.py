"""Coefficient-space arithmetic for 2pi-periodic complex functions.

A field is a dense vector of Fourier coefficients over the modes -N..N;
modes outside the truncation are identically zero.  Products are computed
as exact convolutions and then truncated back: discarded modes are simply
dropped, never folded back, so the only truncation effect is the loss of
the exact coefficients beyond |n| = N.

All operations are pure and return new fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TruncationMismatch

DEFAULT_TRUNCATION = 64

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FourierField:
    """2pi-periodic complex function stored as coefficients of e^{inz}.

    ``coeffs[j]`` holds the coefficient of mode ``n = j - truncation``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size % 2 == 0 or arr.size < 3:
            raise ValueError("coefficient vector must have odd length 2N+1 with N >= 1")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, truncation: int = DEFAULT_TRUNCATION) -> "FourierField":
        return cls(np.zeros(2 * truncation + 1, dtype=complex))

    @classmethod
    def constant(cls, value: complex, truncation: int = DEFAULT_TRUNCATION) -> "FourierField":
        c = np.zeros(2 * truncation + 1, dtype=complex)
        c[truncation] = value
        return cls(c)

    @classmethod
    def from_modes(cls, entries: dict[int, complex], truncation: int = DEFAULT_TRUNCATION) -> "FourierField":
        c = np.zeros(2 * truncation + 1, dtype=complex)
        for n, v in entries.items():
            if abs(n) > truncation:
                raise ValueError(f"mode {n} outside truncation {truncation}")
            c[n + truncation] = v
        return cls(c)

    # -- basic accessors ------------------------------------------------

    @property
    def truncation(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def modes(self) -> np.ndarray:
        n = self.truncation
        return np.arange(-n, n + 1)

    def coeff(self, n: int) -> complex:
        if abs(n) > self.truncation:
            return 0.0 + 0.0j
        return complex(self.coeffs[n + self.truncation])

    def _require_same_truncation(self, other: "FourierField") -> None:
        if self.truncation != other.truncation:
            raise TruncationMismatch(
                f"truncations differ: {self.truncation} vs {other.truncation}"
            )

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "FourierField") -> "FourierField":
        self._require_same_truncation(other)
        return FourierField(self.coeffs + other.coeffs)

    def __sub__(self, other: "FourierField") -> "FourierField":
        self._require_same_truncation(other)
        return FourierField(self.coeffs - other.coeffs)

    def __mul__(self, scalar: complex) -> "FourierField":
        return FourierField(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "FourierField":
        return FourierField(-self.coeffs)

    def multiply(self, other: "FourierField") -> "FourierField":
        """Pointwise product, as an exact convolution truncated back to N."""
        self._require_same_truncation(other)
        full = np.convolve(self.coeffs, other.coeffs)
        n = self.truncation
        return FourierField(full[n : 3 * n + 1])

    def multiply_full(self, other: "FourierField") -> "FourierField":
        """Pointwise product kept at the exact truncation Nu + Nv."""
        return FourierField(np.convolve(self.coeffs, other.coeffs))

    def cubic_abs2(self) -> "FourierField":
        """|u|^2 u, exact through 3N then truncated back to N."""
        u2 = np.convolve(self.coeffs, self.coeffs)
        full = np.convolve(u2, np.conj(self.coeffs[::-1]))
        n = self.truncation
        return FourierField(full[2 * n : 4 * n + 1])

    def derivative(self, order: int = 1) -> "FourierField":
        return FourierField(self.coeffs * (1j * self.modes) ** order)

    def conj_function(self) -> "FourierField":
        """Coefficients of z -> conj(u(z))."""
        return FourierField(np.conj(self.coeffs[::-1]))

    def real_part(self) -> "FourierField":
        return FourierField(0.5 * (self.coeffs + np.conj(self.coeffs[::-1])))

    def imag_part(self) -> "FourierField":
        return FourierField((self.coeffs - np.conj(self.coeffs[::-1])) / 2j)

    def shifted(self, xi: float) -> "FourierField":
        """Coefficients of z -> u(z + xi)."""
        return FourierField(self.coeffs * np.exp(1j * self.modes * xi))

    def padded(self, truncation: int) -> "FourierField":
        if truncation < self.truncation:
            raise ValueError("padded() cannot shrink a field; use truncated()")
        extra = truncation - self.truncation
        return FourierField(np.pad(self.coeffs, (extra, extra)))

    def truncated(self, truncation: int) -> "FourierField":
        if truncation >= self.truncation:
            return self.padded(truncation)
        drop = self.truncation - truncation
        return FourierField(self.coeffs[drop:-drop])

    # -- pairings, norms, evaluation --------------------------------------

    def inner_real(self, other: "FourierField") -> float:
        """Re of the L2 pairing over one period: 2*pi*Re sum u_n conj(v_n)."""
        self._require_same_truncation(other)
        return TWO_PI * float(np.real(np.sum(self.coeffs * np.conj(other.coeffs))))

    def norm_l2_sq(self) -> float:
        return TWO_PI * float(np.sum(np.abs(self.coeffs) ** 2))

    def norm_h1_sq(self) -> float:
        n = self.modes
        return TWO_PI * float(np.sum((1.0 + n**2) * np.abs(self.coeffs) ** 2))

    def evaluate(self, z):
        """Value(s) of the function at z (scalar or array)."""
        zarr = np.asarray(z, dtype=float)
        phases = np.exp(1j * np.multiply.outer(zarr, self.modes))
        out = phases @ self.coeffs
        if zarr.ndim == 0:
            return complex(out)
        return out

    def conjugate_symmetry_defect(self) -> float:
        """Max |c_{-n} - conj(c_n)|; zero iff the function is real-valued."""
        return float(np.max(np.abs(self.coeffs[::-1] - np.conj(self.coeffs))))


def convolution_matrix(g: FourierField, truncation: int) -> np.ndarray:
    """Matrix of multiplication by g on fields of the given truncation.

    Entry (i, j) is the coefficient of g at mode n_i - n_j, so g must carry
    modes up to 2*truncation for the matrix to be exact.
    """
    padded = g.padded(max(g.truncation, 2 * truncation))
    n = np.arange(-truncation, truncation + 1)
    idx = (n[:, None] - n[None, :]) + padded.truncation
    return padded.coeffs[idx]
