import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from conftest import padded, poly_from_zeros, random_zeros
from mindelay import (
    BlaschkeProduct,
    DegenerateGridWarning,
    InvalidBlaschkeError,
    LogIntegralDivergenceError,
    NotEqualGainError,
    NotMinimumPhaseError,
    PaleyWienerError,
    Poly,
    ZeroPolynomialError,
    blaschke_eval,
    evaluate_on_grid,
    factorize,
    inner_quotient,
    is_minimum_phase,
    minimum_phase_equivalent,
    multiply,
    optimality_gap,
    outer_from_magnitude,
    paley_wiener_integral,
    roots,
    unitarity_defect,
)


def log_mean_quad(coeffs):
    """Independent quadrature of (1/2pi) * integral of log|p(e^{it})|."""
    p = np.polynomial.Polynomial(coeffs)
    val, _ = integrate.quad(lambda t: np.log(abs(p(np.exp(1j * t)))), 0, 2 * np.pi, limit=200)
    return val / (2 * np.pi)


class TestBlaschke:
    def test_empty_product(self):
        np.testing.assert_allclose(blaschke_eval(BlaschkeProduct(), 8).values, 1)

    def test_value_at_origin(self):
        assert BlaschkeProduct((0.5,))(0) == pytest.approx(0.5)

    def test_unimodular_on_grid(self):
        v = blaschke_eval(BlaschkeProduct((0.5, -0.3j)), 256).values
        assert np.max(np.abs(np.abs(v) - 1)) <= 1e-12

    def test_zero_at_origin_is_delay(self):
        v = blaschke_eval(BlaschkeProduct((0,)), 8)
        np.testing.assert_allclose(v.values, np.exp(1j * v.theta))

    @pytest.mark.parametrize("z", [1.0, 1j, 1.5])
    def test_rejects_zeros_off_disk(self, z):
        with pytest.raises(InvalidBlaschkeError):
            BlaschkeProduct((0.2, z))

    def test_constant_is_unimodular(self):
        b = BlaschkeProduct((), angle=1.234)
        assert abs(b.constant) == 1.0


class TestMinimumPhaseEquivalent:
    def test_reflects_interior_zero(self):
        q = minimum_phase_equivalent(Poly([1, 2]))
        np.testing.assert_allclose(q.coeffs, [2, 1], atol=1e-14)
        grid = lambda p: np.abs(evaluate_on_grid(p, 64).values)
        np.testing.assert_allclose(grid(q), grid(Poly([1, 2])), rtol=1e-14)

    def test_fixed_point(self):
        np.testing.assert_allclose(minimum_phase_equivalent(Poly([2, 1])).coeffs, [2, 1], atol=1e-14)

    def test_origin_zero_removed(self):
        q = minimum_phase_equivalent(Poly([0, 2, 1]))
        np.testing.assert_allclose(q.coeffs, [2, 1], atol=1e-14)

    def test_unit_circle_zero_kept(self):
        q = minimum_phase_equivalent(Poly([1, 1]))
        np.testing.assert_allclose(q.coeffs, [1, 1], atol=1e-14)
        assert is_minimum_phase(q)

    def test_normalized_positive_at_origin(self):
        q = minimum_phase_equivalent(Poly([1j, 3]))
        assert q.coeffs[0].imag == 0 and q.coeffs[0].real > 0

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomialError):
            minimum_phase_equivalent(Poly([0]))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), deg=st.integers(1, 16))
    def test_gain_preserved_and_no_interior_zeros(self, seed, deg):
        rng = np.random.default_rng(seed)
        p = Poly(rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
        q = minimum_phase_equivalent(p)
        pv = np.abs(evaluate_on_grid(p, 1024).values)
        qv = np.abs(evaluate_on_grid(q, 1024).values)
        np.testing.assert_allclose(qv, pv, rtol=0, atol=1e-8 * pv.max())
        assert all(abs(z) >= 1 - 1e-9 for z in roots(q))
        assert q.coeffs[0].real > 0 and q.coeffs[0].imag == 0

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), deg=st.integers(1, 16))
    def test_idempotent(self, seed, deg):
        rng = np.random.default_rng(seed)
        q = minimum_phase_equivalent(poly_from_zeros(random_zeros(rng, deg)))
        q2 = minimum_phase_equivalent(q)
        np.testing.assert_allclose(q2.coeffs, q.coeffs, atol=1e-9)


class TestFactorize:
    def test_canonical(self):
        fac = factorize(Poly([1, 2]))
        assert fac.blaschke.zeros == (-0.5,)
        np.testing.assert_allclose(fac.outer.coeffs, [2, 1], atol=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_reconstruction(self, seed):
        rng = np.random.default_rng(seed)
        p = Poly.from_roots(random_zeros(rng, 8), 1 + 2j)
        fac = factorize(p)
        M = 256
        rec = fac.reconstruct(M).values
        ref = evaluate_on_grid(p, M).values
        assert np.max(np.abs(rec - ref)) <= 1e-8 * np.max(np.abs(ref))
        assert unitarity_defect(blaschke_eval(fac.blaschke, M)) <= 1e-10


class TestOuterFromMagnitude:
    def test_constant(self):
        q = outer_from_magnitude(np.full(64, 4.0))
        np.testing.assert_allclose(padded(q.coeffs, 3), [2, 0, 0], atol=1e-14)

    @pytest.mark.parametrize("source,expected", [([1, 0.5], [1, 0.5]), ([1, 2], [2, 1])])
    def test_first_order(self, source, expected):
        # oracle: root reflection of the source polynomial
        np.testing.assert_allclose(minimum_phase_equivalent(Poly(source)).coeffs, expected, atol=1e-14)
        w = np.abs(evaluate_on_grid(Poly(source), 4096).values) ** 2
        q = outer_from_magnitude(w, 4096, 64)
        assert q.degree <= 64
        np.testing.assert_allclose(padded(q.coeffs, 65), padded(expected, 65), atol=1e-6)

    def test_default_degree(self):
        w = np.abs(evaluate_on_grid(Poly([1, 0, 0, 0.3]), 1024).values) ** 2
        assert outer_from_magnitude(w).degree == 64

    def test_gain_matches(self):
        p = poly_from_zeros(random_zeros(np.random.default_rng(1), 6), normalize=True)
        w = np.abs(evaluate_on_grid(p, 4096).values) ** 2
        q = outer_from_magnitude(w, K=64)
        wq = np.abs(evaluate_on_grid(q, 4096).values) ** 2
        np.testing.assert_allclose(wq, w, rtol=1e-5)

    @pytest.mark.parametrize("bad", [0.0, -1.0, np.nan])
    def test_nonpositive_sample(self, bad):
        w = np.ones(16)
        w[3] = bad
        with pytest.raises(PaleyWienerError):
            outer_from_magnitude(w)

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), deg=st.integers(1, 16))
    def test_agrees_with_root_reflection(self, seed, deg):
        p = poly_from_zeros(random_zeros(np.random.default_rng(seed), deg))
        w = np.abs(evaluate_on_grid(p, 8192).values) ** 2
        a = outer_from_magnitude(w, 8192).coeffs
        b = minimum_phase_equivalent(p).coeffs
        n = max(len(a), len(b))
        assert np.max(np.abs(padded(a, n) - padded(b, n))) <= 1e-5


class TestInnerQuotient:
    def test_identity(self):
        u = inner_quotient(Poly([2, 1]), Poly([2, 1]), 64)
        np.testing.assert_allclose(u.values, 1)

    def test_pure_delay(self):
        u = inner_quotient(Poly([0, 2, 1]), Poly([2, 1]), 64)
        np.testing.assert_allclose(u.values, np.exp(1j * u.theta), atol=1e-14)

    def test_blaschke_quotient(self):
        u = inner_quotient(Poly([1, 2]), Poly([2, 1]), 128)
        assert unitarity_defect(u) <= 1e-8
        b = blaschke_eval(BlaschkeProduct((-0.5,)), 128).values
        c = u.values / b
        np.testing.assert_allclose(c, c[0], atol=1e-12)
        assert abs(abs(c[0]) - 1) <= 1e-12

    def test_gain_mismatch(self):
        with pytest.raises(NotEqualGainError):
            inner_quotient(Poly([3, 1]), Poly([2, 1]))

    def test_denominator_not_minimum_phase(self):
        with pytest.raises(NotMinimumPhaseError):
            inner_quotient(Poly([2, 1]), Poly([1, 2]))

    @pytest.mark.parametrize("seed", range(10))
    def test_unitarity_for_equal_gain_pairs(self, seed):
        from mindelay import generate_equal_gain_pair

        f, g = generate_equal_gain_pair(seed, 1 + 3 * seed)
        assert unitarity_defect(inner_quotient(g, f)) <= 1e-8


class TestOptimalityGap:
    def test_outer(self):
        assert log_mean_quad([2, 1]) == pytest.approx(np.log(2), abs=1e-10)
        gap = optimality_gap(Poly([2, 1]))
        assert gap.lhs == 2 and gap.rhs == pytest.approx(2, rel=1e-12) and gap.is_outer

    def test_interior_zero(self):
        assert log_mean_quad([1, 2]) == pytest.approx(np.log(2), abs=1e-10)
        gap = optimality_gap(Poly([1, 2]))
        assert gap.lhs == 1 and gap.rhs == pytest.approx(2, rel=1e-12)
        assert gap.ratio == pytest.approx(0.5, rel=1e-12) and not gap.is_outer

    def test_origin_zero(self):
        gap = optimality_gap(Poly([0, 1]))
        assert gap.lhs == 0 and gap.rhs == pytest.approx(1) and not gap.is_outer

    def test_vanishing_sample(self):
        with pytest.raises(LogIntegralDivergenceError):
            optimality_gap(Poly([1, 1]), 64)

    @pytest.mark.parametrize("seed", range(10))
    def test_ratio_is_product_of_interior_moduli(self, seed):
        rng = np.random.default_rng(seed)
        zs = random_zeros(rng, 6, rmax=2.0)
        zs[0] = 0.9 * np.exp(2j * np.pi * rng.random())
        gap = optimality_gap(Poly.from_roots(zs))
        expected = np.prod(np.abs(zs[np.abs(zs) < 1]))
        assert gap.ratio == pytest.approx(expected, rel=1e-6)
        assert gap.ratio <= 0.9

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), deg=st.integers(1, 12))
    def test_equality_for_minimum_phase_outputs(self, seed, deg):
        q = minimum_phase_equivalent(poly_from_zeros(random_zeros(np.random.default_rng(seed), deg)))
        gap = optimality_gap(q)
        assert gap.lhs == pytest.approx(gap.rhs, rel=1e-6) and gap.is_outer

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_product_of_outers_is_outer(self, seed):
        rng = np.random.default_rng(seed)
        a = minimum_phase_equivalent(poly_from_zeros(random_zeros(rng, 5)))
        b = minimum_phase_equivalent(poly_from_zeros(random_zeros(rng, 7)))
        gap = optimality_gap(multiply(a, b))
        assert gap.lhs == pytest.approx(gap.rhs, rel=2e-6)


class TestPaleyWiener:
    def test_constant(self):
        assert paley_wiener_integral(Poly([1])) == 0

    @pytest.mark.parametrize("coeffs", [[2, 1], [1, 2]])
    def test_equal_gain_pair(self, coeffs):
        assert paley_wiener_integral(Poly(coeffs)) == pytest.approx(np.log(2), abs=1e-8)

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomialError):
            paley_wiener_integral(Poly([0]))

    def test_vanishing_node_reported_and_finite(self):
        with pytest.warns(DegenerateGridWarning, match="2048"):
            val = paley_wiener_integral(Poly([1, 1]))
        # circle zeros contribute nothing to the log-integral
        assert np.isfinite(val) and abs(val) < 1e-3

    def test_no_warning_for_regular_input(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            paley_wiener_integral(Poly([3, 1, 0.2]))
