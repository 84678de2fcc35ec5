"""The derivative-expansion step and its r-fold composition."""

import math

import numpy as np
import numpy.polynomial.legendre as npleg
import pytest

from legdiff.basis import eval_phi_table
from legdiff.coeffs import CoeffField
from legdiff.derivative import (
    DerivativeExpansion,
    differentiate_axis,
    mueller_step,
    phi_derivative_coeffs,
    phi_rr_closed_form,
    single_step_entry,
)


class TestSingleStepEntry:
    def test_entry_1_to_0(self):
        assert single_step_entry(1, 0) == pytest.approx(math.sqrt(3), rel=1e-15)

    def test_zero_when_parity_even(self):
        for k in range(51):
            for l in range(51):
                if (k + l) % 2 == 0 or l >= k:
                    assert single_step_entry(k, l) == 0.0

    def test_value_formula(self):
        for k, l in [(5, 2), (9, 0), (12, 7)]:
            assert single_step_entry(k, l) == pytest.approx(
                2 * math.sqrt(k + 0.5) * math.sqrt(l + 0.5), rel=1e-15
            )


class TestMuellerStep:
    def test_unit_degree_1(self):
        out = mueller_step(np.array([0.0, 1.0]))
        np.testing.assert_allclose(out, [math.sqrt(3)], rtol=1e-15)

    def test_unit_degree_2(self):
        out = mueller_step(np.array([0.0, 0.0, 1.0]))
        np.testing.assert_allclose(out, [0.0, math.sqrt(15)], rtol=1e-15, atol=0)

    def test_unit_degree_3(self):
        out = mueller_step(np.array([0.0, 0.0, 0.0, 1.0]))
        np.testing.assert_allclose(
            out, [math.sqrt(7), 0.0, math.sqrt(35)], rtol=1e-15, atol=0
        )

    def test_constant_with_content_rejected(self):
        with pytest.raises(ValueError):
            mueller_step(np.array([3.0]))
        with pytest.raises(ValueError):
            mueller_step(np.zeros(0))

    def test_zero_constant_gives_empty(self):
        assert mueller_step(np.array([0.0])).shape == (0,)

    def test_rejects_matrix_input(self):
        with pytest.raises(ValueError):
            mueller_step(np.zeros((2, 2)))

    def test_matches_dense_single_step_matrix(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal(40)
        dense = np.array(
            [[single_step_entry(k, l) for k in range(40)] for l in range(39)]
        )
        np.testing.assert_allclose(mueller_step(a), dense @ a, rtol=1e-13, atol=1e-13)


class TestDifferentiateAxis:
    def test_phi2_twice_along_t(self):
        field = CoeffField.from_entries({(2, 0): 1.0})
        out = differentiate_axis(field, "t", 2)
        items = out.items_sorted()
        assert len(items) == 1
        assert items[0][0] == (0, 0)
        assert items[0][1] == pytest.approx(3 * math.sqrt(5), rel=1e-14)

    def test_zero_field_stays_zero(self):
        field = CoeffField.from_entries({(5, 4): 0.0, (2, 2): 0.0})
        out = differentiate_axis(field, "t", 2)
        assert all(v == 0.0 for _, v in out.items_sorted())

    def test_unit_rr_entry_both_axes(self):
        field = CoeffField.from_entries({(2, 2): 1.0})
        out = differentiate_axis(differentiate_axis(field, "t", 2), "tau", 2)
        assert out.value(0, 0) == pytest.approx(45.0, rel=1e-13)

    def test_linearity(self):
        rng = np.random.default_rng(7)
        a = CoeffField.from_dense(rng.standard_normal((8, 6)))
        b = CoeffField.from_dense(rng.standard_normal((8, 6)))
        alpha, beta = 0.3, -1.7
        combo = CoeffField.from_dense(alpha * a.to_dense() + beta * b.to_dense())
        lhs = differentiate_axis(combo, "tau", 2).to_dense()
        rhs = alpha * differentiate_axis(a, "tau", 2).to_dense() + beta * differentiate_axis(
            b, "tau", 2
        ).to_dense()
        np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12)

    def test_degrees_shrink_by_r(self):
        field = CoeffField.from_dense(np.ones((9, 7)))
        out = differentiate_axis(field, "t", 3)
        assert (out.k_max, out.j_max) == (5, 6)
        out2 = differentiate_axis(field, "tau", 3)
        assert (out2.k_max, out2.j_max) == (8, 3)

    def test_rejects_bad_axis_and_order(self):
        field = CoeffField.from_entries({(2, 2): 1.0})
        with pytest.raises(ValueError):
            differentiate_axis(field, "x", 1)
        with pytest.raises(ValueError):
            differentiate_axis(field, "t", 0)

    def test_constant_axis_collapses_to_empty(self):
        field = CoeffField.from_entries({(0, 3): 2.0})
        out = differentiate_axis(field, "t", 1)
        assert len(out) == 0


class TestOracleEquivalence:
    def test_expansion_matches_symbolic_derivative(self):
        # Oracle: differentiate sqrt(k+1/2) P_k symbolically in the classical
        # Legendre basis and evaluate; compare on 33 Chebyshev-spaced points.
        pts = np.cos(np.pi * (np.arange(33) + 0.5) / 33)
        for k in range(21):
            for r in range(4):
                c = np.zeros(k + 1)
                c[k] = math.sqrt(k + 0.5)
                oracle = npleg.legval(pts, npleg.legder(c, r) if r else c)
                coeffs = phi_derivative_coeffs(k, r)
                if coeffs.size:
                    mine = coeffs @ eval_phi_table(coeffs.size - 1, pts)
                else:
                    mine = np.zeros_like(pts)
                scale = max(np.max(np.abs(oracle)), 1e-300)
                assert np.max(np.abs(mine - oracle)) / scale < 1e-8, (k, r)

    def test_closed_form_phi_r_r(self):
        expected = {1: math.sqrt(3), 2: 3 * math.sqrt(5), 3: 39.686269665968860}
        for r in (1, 2, 3):
            coeffs = phi_derivative_coeffs(r, r)
            assert coeffs.shape == (1,)
            assert abs(coeffs[0] - phi_rr_closed_form(r)) <= 1e-12 * max(1.0, coeffs[0])
            assert phi_rr_closed_form(r) == pytest.approx(expected[r], rel=1e-14)

    def test_derivative_order_above_degree_is_empty(self):
        assert phi_derivative_coeffs(0, 1).shape == (0,)
        assert phi_derivative_coeffs(3, 5).shape == (0,)


class TestDerivativeExpansion:
    def test_matrix_strictly_lower_triangular_with_parity(self):
        exp = DerivativeExpansion(r=1, max_degree=12)
        mat = exp.matrix()
        assert mat.shape == (12, 13)
        for l in range(12):
            for k in range(13):
                if k <= l or (k + l) % 2 == 0:
                    assert mat[l, k] == 0.0
                else:
                    assert mat[l, k] == pytest.approx(single_step_entry(k, l))

    def test_apply_equals_matrix_product(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal(15)
        exp = DerivativeExpansion(r=3, max_degree=14)
        np.testing.assert_allclose(exp.apply(a), exp.matrix() @ a, rtol=1e-13, atol=1e-13)

    def test_shape_validation(self):
        exp = DerivativeExpansion(r=1, max_degree=4)
        with pytest.raises(ValueError):
            exp.apply(np.ones(4))
        with pytest.raises(ValueError):
            DerivativeExpansion(r=0, max_degree=4)
