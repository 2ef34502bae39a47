import numpy as np
import pytest

from conftest import padded, poly_from_zeros, random_zeros
from mindelay import (
    BoundaryDegenerateError,
    ConvergenceError,
    GridSamples,
    MatrixPoly,
    NotAProjectionError,
    NotComparableError,
    Poly,
    SingularOnCircleError,
    analytic_defect,
    blaschke_potapov_factor,
    evaluate_on_grid,
    factorization_residual,
    generate_matrix_pair,
    h2_norm_sq,
    inner_quotient,
    inner_quotient_matrix,
    minimum_phase_equivalent,
    multiply,
    outer_certificate,
    para_hermitian_product,
    spectral_factor_outer,
    unitarity_defect_matrix,
    verify_energy_delay,
)
from mindelay.matrix import random_projection, random_unitary


def gaussian_mpoly(rng, d, deg):
    return MatrixPoly(rng.standard_normal((deg + 1, d, d)) + 1j * rng.standard_normal((deg + 1, d, d)))


class TestParaHermitianProduct:
    def test_identity(self):
        S = para_hermitian_product(MatrixPoly.identity(2), 16)
        np.testing.assert_allclose(S.values, np.broadcast_to(np.eye(2), (16, 2, 2)))

    def test_diagonal(self):
        S = para_hermitian_product(MatrixPoly.diag([Poly([1, 0.5]), Poly([2])]), 32)
        t = S.theta
        np.testing.assert_allclose(S.values[:, 0, 0], np.abs(1 + 0.5 * np.exp(1j * t)) ** 2, rtol=1e-14)
        np.testing.assert_allclose(S.values[:, 1, 1], 4)
        np.testing.assert_allclose(S.values[:, 0, 1], 0, atol=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_trace_mean_is_norm(self, seed):
        A = gaussian_mpoly(np.random.default_rng(seed), 3, 4)
        S = para_hermitian_product(A, 64)
        tr = np.mean(np.trace(S.values, axis1=1, axis2=2).real)
        assert tr == pytest.approx(h2_norm_sq(A), rel=1e-10)

    def test_scalar_input(self):
        S = para_hermitian_product(Poly([1, 2]), 16)
        np.testing.assert_allclose(S.values[:, 0, 0], np.abs(evaluate_on_grid(Poly([1, 2]), 16).values) ** 2)


class TestSpectralFactorOuter:
    def test_identity(self):
        F = spectral_factor_outer(para_hermitian_product(MatrixPoly.identity(2), 64), 0)
        np.testing.assert_allclose(F.coeffs, [np.eye(2)], atol=1e-14)

    def test_diagonal_reduces_to_scalar(self):
        S = para_hermitian_product(MatrixPoly.diag([Poly([1, 0.5]), Poly([2])]), 256)
        F = spectral_factor_outer(S, 1)
        expected = MatrixPoly.diag([minimum_phase_equivalent(Poly([1, 0.5])), Poly([2])])
        np.testing.assert_allclose(F.coeffs, expected.coeffs, atol=1e-10)

    def test_reflects_non_outer_diagonal(self):
        S = para_hermitian_product(MatrixPoly.diag([Poly([1, 2]), Poly([0, 1])]), 256)
        F = spectral_factor_outer(S, 1)
        expected = MatrixPoly.diag([Poly([2, 1]), Poly([1])])
        np.testing.assert_allclose(padded(F.coeffs, 2), expected.coeffs, atol=1e-10)

    @pytest.mark.parametrize("seed", range(6))
    def test_random_degree_two(self, seed):
        rng = np.random.default_rng(seed)
        while True:
            A = gaussian_mpoly(rng, 2, 2)
            S = para_hermitian_product(A)
            e = np.linalg.eigvalsh(S.values)
            if e.max() < 1e4 * e.min():
                break
        F = spectral_factor_outer(S, 2)
        assert factorization_residual(F, S) <= 1e-6
        lhs, rhs = outer_certificate(F, S)
        assert lhs == pytest.approx(rhs, rel=1e-5)
        F0 = F.coeffs[0]
        np.testing.assert_array_equal(np.triu(F0, 1), 0)
        assert np.all(np.diag(F0).real > 0) and np.all(np.diag(F0).imag == 0)

    def test_boundary_degenerate(self):
        S = para_hermitian_product(MatrixPoly.diag([Poly([1, 1]), Poly([1])]), 64)
        with pytest.raises(BoundaryDegenerateError):
            spectral_factor_outer(S, 1)

    def test_non_convergence_reports_residual(self):
        S = para_hermitian_product(MatrixPoly.diag([Poly([1, 0.995]), Poly([1])]), 4096)
        with pytest.raises(ConvergenceError) as info:
            spectral_factor_outer(S, 1, max_blocks=32)
        assert info.value.residual > 1e-6

    def test_scalar_consistency(self):
        p = poly_from_zeros(random_zeros(np.random.default_rng(4), 5, gap=0.1))
        F = spectral_factor_outer(para_hermitian_product(p), p.degree)
        np.testing.assert_allclose(F.coeffs[:, 0, 0], minimum_phase_equivalent(p).coeffs, atol=1e-8)


class TestBlaschkePotapov:
    def test_zero_projection(self):
        U = blaschke_potapov_factor(np.zeros((2, 2)))
        assert U == MatrixPoly.identity(2)

    def test_coordinate_projection(self):
        U = blaschke_potapov_factor(np.diag([0.0, 1.0]))
        assert U == MatrixPoly.diag([Poly([1]), Poly([0, 1])])

    def test_rank_one_off_origin(self):
        v = np.array([1, 1]) / np.sqrt(2)
        U = blaschke_potapov_factor(np.outer(v, v), 0.5, 256)
        assert isinstance(U, GridSamples)
        assert unitarity_defect_matrix(U) <= 1e-12
        assert analytic_defect(U) <= 1e-20

    def test_not_projection(self):
        with pytest.raises(NotAProjectionError):
            blaschke_potapov_factor(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_anti_analytic_samples_flagged(self):
        v = np.array([1, 1j]) / np.sqrt(2)
        U = blaschke_potapov_factor(np.outer(v, v.conj()), 0.5, 256)
        conj = GridSamples(U.values.conj())
        assert analytic_defect(conj) > 1e-3


@pytest.fixture(scope="module")
def outer():
    F, _ = generate_matrix_pair(11, 2, 3, 0)
    return F


class TestInnerQuotientMatrix:
    def test_identity_quotient(self, outer):
        cert = inner_quotient_matrix(outer, outer)
        assert cert.max_unitarity_defect <= 1e-12 and cert.analytic_defect <= 1e-12
        np.testing.assert_allclose(cert.samples.values, np.broadcast_to(np.eye(2), cert.samples.values.shape), atol=1e-12)

    def test_constant_unitary(self, outer):
        Q = random_unitary(2, np.random.default_rng(0))
        cert = inner_quotient_matrix(outer, outer * Q)
        assert cert.max_unitarity_defect <= 1e-10 and cert.analytic_defect <= 1e-10
        np.testing.assert_allclose(cert.samples.values, np.broadcast_to(Q, cert.samples.values.shape), atol=1e-10)

    def test_three_factor_product(self, outer):
        rng = np.random.default_rng(1)
        U = MatrixPoly.identity(2)
        for _ in range(3):
            U = multiply(U, blaschke_potapov_factor(random_projection(2, rng, rank=1)))
        cert = inner_quotient_matrix(outer, multiply(outer, U))
        assert cert.passes()

    def test_gain_mismatch(self, outer):
        with pytest.raises(NotComparableError):
            inner_quotient_matrix(outer, outer * 2.0)

    def test_singular_outer(self):
        F = MatrixPoly.diag([Poly([1, 1]), Poly([1])])
        with pytest.raises(SingularOnCircleError):
            inner_quotient_matrix(F, F, 64)

    def test_scalar_consistency(self):
        f, g = Poly([2, 1]), Poly([1, 2])
        cert = inner_quotient_matrix(f, g, 256)
        np.testing.assert_allclose(cert.samples.values[:, 0, 0], inner_quotient(g, f, 256).values, atol=1e-12)


class TestGenerateMatrixPair:
    @pytest.mark.parametrize("seed", range(6))
    def test_generated_pair_satisfies_ordering(self, seed):
        F, G = generate_matrix_pair(seed, 2 + seed % 2, seed % 5, 1 + seed % 4)
        assert verify_energy_delay(F, G).passed
        assert h2_norm_sq(F) == pytest.approx(h2_norm_sq(G), rel=1e-8)
        assert inner_quotient_matrix(F, G).passes()

    def test_scalar_case_is_delay(self):
        F, G = generate_matrix_pair(3, 1, 2, 2)
        f, g = F.coeffs[:, 0, 0], G.coeffs[:, 0, 0]
        assert len(g) == len(f) + 2
        c = g[2:] / f
        np.testing.assert_allclose(c, c[0], atol=1e-12)
        assert abs(abs(c[0]) - 1) < 1e-12

    @pytest.mark.parametrize("args", [(0, 0, 2, 1), (0, 5, 2, 1), (0, 2, 9, 1), (0, 2, 2, 5)])
    def test_bounds(self, args):
        with pytest.raises(ValueError):
            generate_matrix_pair(*args)


class TestUnitaryNormInvariance:
    @pytest.mark.parametrize("seed", range(5))
    def test_right_multiplication(self, seed):
        rng = np.random.default_rng(seed)
        X = gaussian_mpoly(rng, 3, 4)
        M = 512
        U = blaschke_potapov_factor(random_projection(3, rng), 0.6 * np.exp(1j * seed), M)
        U = GridSamples(U.values @ random_unitary(3, rng))
        xv = evaluate_on_grid(X, M).values
        a = np.mean(np.sum(np.abs(xv) ** 2, axis=(1, 2)))
        b = np.mean(np.sum(np.abs(xv @ U.values) ** 2, axis=(1, 2)))
        assert b == pytest.approx(a, rel=1e-10)
