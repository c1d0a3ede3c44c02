"""Coefficient-engine oracles: hand-expanded products, Parseval, norms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlswaves.errors import TruncationMismatch
from nlswaves.fourier import FourierField, convolution_matrix


def small_field(seed, truncation=8, scale=1.0):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=2 * truncation + 1) + 1j * rng.normal(size=2 * truncation + 1)
    return FourierField(scale * c)


class TestMultiply:
    def test_mode_cancellation(self):
        u = FourierField.from_modes({1: 1.0}, 4)
        v = FourierField.from_modes({-1: 1.0}, 4)
        w = u.multiply(v)
        assert w.coeff(0) == pytest.approx(1.0)
        assert np.allclose(np.delete(w.coeffs, w.truncation), 0.0)

    def test_identity(self):
        u = FourierField.constant(1.0, 6)
        v = small_field(0, 6)
        assert np.allclose(u.multiply(v).coeffs, v.coeffs)

    def test_cubic_coefficient_by_hand(self):
        # u = a e^{-iy} + b e^{iy}: the e^{-3iy} coefficient of |u|^2 u is a^2 b.
        a, b = 0.3, 0.7
        u = FourierField.from_modes({-1: a, 1: b}, 8)
        cubic = u.cubic_abs2()
        assert cubic.coeff(-3) == pytest.approx(a * a * b)
        assert cubic.coeff(3) == pytest.approx(a * b * b)
        assert cubic.coeff(-1) == pytest.approx(a**3 + 2 * a * b * b)
        assert cubic.coeff(1) == pytest.approx(b**3 + 2 * a * a * b)

    def test_mismatched_truncations_raise(self):
        with pytest.raises(TruncationMismatch):
            FourierField.zeros(4).multiply(FourierField.zeros(5))

    @given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_commutative(self, s1, s2):
        u, v = small_field(s1), small_field(s2)
        assert np.allclose(u.multiply(v).coeffs, v.multiply(u).coeffs, atol=1e-12)

    @given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_bilinear(self, s1, s2, s3):
        u, v, w = small_field(s1), small_field(s2), small_field(s3)
        lhs = u.multiply(v + w).coeffs
        rhs = u.multiply(v).coeffs + u.multiply(w).coeffs
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_matches_convolution_matrix(self):
        u, v = small_field(3), small_field(4)
        mat = convolution_matrix(u.padded(16), 8)
        assert np.allclose(mat @ v.coeffs, u.multiply(v).coeffs, atol=1e-13)


class TestDerivative:
    def test_first(self):
        u = FourierField.from_modes({1: 1.0}, 4)
        assert u.derivative().coeff(1) == pytest.approx(1j)

    def test_second(self):
        u = FourierField.from_modes({2: 1.0}, 4)
        assert u.derivative(2).coeff(2) == pytest.approx(-4.0)

    def test_constant(self):
        u = FourierField.constant(3.0, 4)
        assert np.allclose(u.derivative().coeffs, 0.0)


class TestInnerAndNorms:
    def test_single_mode(self):
        u = FourierField.from_modes({1: 1.0}, 4)
        assert u.inner_real(u) == pytest.approx(2 * np.pi)

    def test_orthogonal_phase(self):
        u = FourierField.from_modes({1: 1.0}, 4)
        v = FourierField.from_modes({1: 1j}, 4)
        assert u.inner_real(v) == pytest.approx(0.0)

    def test_cross_mode(self):
        u = FourierField.from_modes({0: 1.0, 1: 1.0}, 4)
        v = FourierField.constant(1.0, 4)
        assert u.inner_real(v) == pytest.approx(2 * np.pi)

    def test_h1_values(self):
        assert FourierField.constant(1.0, 4).norm_h1_sq() == pytest.approx(2 * np.pi)
        assert FourierField.from_modes({1: 1.0}, 4).norm_h1_sq() == pytest.approx(4 * np.pi)
        assert FourierField.zeros(4).norm_h1_sq() == 0.0

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_l2_below_h1(self, seed):
        u = small_field(seed)
        assert u.inner_real(u) >= 0.0
        assert u.norm_h1_sq() >= u.inner_real(u) - 1e-12

    @given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_parseval_vs_trapezoid(self, s1, s2):
        u, v = small_field(s1), small_field(s2)
        npts = 4 * u.truncation + 1
        z = np.linspace(0.0, 2 * np.pi, npts, endpoint=False)
        quad = np.sum(np.real(u.evaluate(z) * np.conj(v.evaluate(z)))) * (2 * np.pi / npts)
        exact = u.inner_real(v)
        assert quad == pytest.approx(exact, rel=1e-12, abs=1e-12)


class TestEvaluate:
    def test_mode_one(self):
        u = FourierField.from_modes({1: 1.0}, 4)
        assert u.evaluate(0.0) == pytest.approx(1.0)
        assert u.evaluate(np.pi) == pytest.approx(-1.0)

    def test_cosine(self):
        u = FourierField.from_modes({1: 1.0, -1: 1.0}, 4)
        assert u.evaluate(np.pi / 3) == pytest.approx(1.0)


class TestStructure:
    def test_real_part_symmetry(self):
        u = small_field(7)
        r = u.real_part()
        assert r.conjugate_symmetry_defect() < 1e-14
        z = np.linspace(0, 2 * np.pi, 17)
        assert np.allclose(r.evaluate(z).imag, 0.0, atol=1e-12)
        assert np.allclose(r.evaluate(z).real, u.evaluate(z).real, atol=1e-12)

    def test_shift_is_translation(self):
        u = small_field(9)
        xi = 0.61
        z = np.linspace(0, 2 * np.pi, 11)
        assert np.allclose(u.shifted(xi).evaluate(z), u.evaluate(z + xi), atol=1e-12)

    def test_pad_truncate_roundtrip(self):
        u = small_field(11, truncation=5)
        assert np.allclose(u.padded(9).truncated(5).coeffs, u.coeffs)
