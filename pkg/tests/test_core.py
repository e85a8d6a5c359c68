import numpy as np
import pytest

from heun_racah import (anticommutator, commutator, dense_spectrum,
                        residual_norm)
from heun_racah.errors import DimensionError, OracleError

from conftest import X0, Y0, Z0


def random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestCommutator:
    def test_reference_pair(self):
        # hand evaluation: X0 Y0 - Y0 X0
        np.testing.assert_allclose(commutator(X0, Y0), Z0, atol=1e-12)

    def test_self_commutator_is_zero(self):
        rng = np.random.default_rng(0)
        M = random_matrix(rng, 5)
        np.testing.assert_array_equal(commutator(M, M), np.zeros((5, 5)))

    def test_identity_commutes(self):
        rng = np.random.default_rng(1)
        M = random_matrix(rng, 4)
        np.testing.assert_allclose(commutator(M, np.eye(4)), 0, atol=1e-14)

    def test_antisymmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a, b = random_matrix(rng, 6), random_matrix(rng, 6)
            assert residual_norm(commutator(a, b), -commutator(b, a)) <= 1e-13

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            commutator(np.eye(2), np.eye(3))


class TestAnticommutator:
    def test_identity_gives_twice(self):
        rng = np.random.default_rng(3)
        M = random_matrix(rng, 3)
        np.testing.assert_allclose(anticommutator(M, np.eye(3)), 2 * M, atol=1e-14)

    def test_reference_pair(self):
        expected = np.array([[52.125, -22.5], [-40.0, 97.125]])
        np.testing.assert_allclose(anticommutator(X0, Y0), expected, atol=1e-12)

    def test_zero_matrix(self):
        rng = np.random.default_rng(4)
        M = random_matrix(rng, 3)
        np.testing.assert_array_equal(anticommutator(M, np.zeros((3, 3))), np.zeros((3, 3)))

    def test_difference_is_twice_ba(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a, b = random_matrix(rng, 5), random_matrix(rng, 5)
            assert residual_norm(anticommutator(a, b) - commutator(a, b), 2 * b @ a) <= 1e-13


class TestResidualNorm:
    def test_equal_inputs(self):
        assert residual_norm(X0, X0) == 0.0

    def test_identity_vs_zero(self):
        # ||I - 0||_F = sqrt(2), floored denominator sqrt(2) -> exactly 1
        assert residual_norm(np.eye(2), np.zeros((2, 2))) == pytest.approx(1.0)

    def test_zero_vs_zero(self):
        assert residual_norm(np.zeros((3, 3)), np.zeros((3, 3))) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            residual_norm(np.eye(2), np.eye(4))


class TestDenseSpectrum:
    def test_diagonal(self):
        out = dense_spectrum(Y0)
        np.testing.assert_allclose(out.eigenvalues, [3.75, 8.75], atol=1e-13)

    def test_rotationlike(self):
        # characteristic polynomial lambda^2 + 144 = 0; compare as a set
        # since the +-1e-15 real-part noise makes the tie-break arbitrary
        out = dense_spectrum(Z0)
        got = sorted(out.eigenvalues, key=lambda v: v.imag)
        np.testing.assert_allclose(got, [-12j, 12j], atol=1e-10)

    def test_one_by_one(self):
        out = dense_spectrum([[2.5 - 1j]])
        np.testing.assert_allclose(out.eigenvalues, [2.5 - 1j])

    def test_sorting_is_lexicographic(self):
        rng = np.random.default_rng(6)
        vals = dense_spectrum(random_matrix(rng, 8)).eigenvalues
        key = [(v.real, v.imag) for v in vals]
        assert key == sorted(key)

    def test_vector_residual_contract(self):
        rng = np.random.default_rng(7)
        M = random_matrix(rng, 9)
        out = dense_spectrum(M, want_vectors=True)
        assert out.eigenvectors is not None
        np.testing.assert_allclose(np.linalg.norm(out.eigenvectors, axis=0), 1.0)
        assert out.residuals.max() <= 1e-10 * np.linalg.norm(M)

    def test_trace_consistency(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            M = random_matrix(rng, 7)
            vals = dense_spectrum(M).eigenvalues
            assert abs(vals.sum() - np.trace(M)) <= 1e-11 * max(1.0, abs(np.trace(M)))

    def test_nonfinite_is_surfaced(self):
        M = np.eye(3, dtype=complex)
        M[0, 0] = np.nan
        with pytest.raises(OracleError):
            dense_spectrum(M)

    def test_dimension_cap(self):
        with pytest.raises(DimensionError):
            dense_spectrum(np.eye(65))
