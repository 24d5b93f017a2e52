"""Tests for the curvature-dependent special functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardylab.curvature_fn import (
    c_c, cot_mittag_leffler, cot_series_error_bound, cot_tail_bound, ct_c,
    d_c, d_c_lower_bound, hemisphere_constant, injectivity_radius,
    r_ij_correction, s_c, sinc_excess,
)
from hardylab.errors import DomainError


class TestSc:
    def test_flat_is_identity(self):
        assert s_c(0.0, 2.5) == 2.5

    def test_sphere_quarter(self):
        assert s_c(1.0, math.pi / 2) == pytest.approx(1.0, abs=1e-15)

    def test_hyperbolic_is_sinh(self):
        assert s_c(-1.0, 1.0) == pytest.approx(1.1752011936438014, rel=1e-14)

    def test_array_in_array_out(self):
        out = s_c(-1.0, np.array([0.0, 1.0, 2.0]))
        assert isinstance(out, np.ndarray)
        assert out.shape == (3,)
        assert out[0] == 0.0

    def test_scalar_returns_float(self):
        assert isinstance(s_c(1.0, 0.3), float)

    def test_strict_domain(self):
        with pytest.raises(DomainError, match='pi/sqrt'):
            s_c(1.0, math.pi)

    def test_saturating_mode(self):
        assert s_c(1.0, math.pi, strict=False) == pytest.approx(0.0, abs=1e-15)

    def test_negative_radius(self):
        with pytest.raises(DomainError, match='nonnegative'):
            s_c(0.0, -1.0)

    def test_small_argument_ratio(self):
        """s_c(r)/r -> 1 at r = 1e-6 for every sign of c."""
        for c in (-4.0, -1.0, 0.0, 1.0, 4.0):
            assert s_c(c, 1e-6) / 1e-6 == pytest.approx(1.0, rel=1e-8)

    def test_continuous_in_curvature(self):
        assert s_c(1e-12, 1.0) == pytest.approx(s_c(0.0, 1.0), rel=1e-11)
        assert s_c(-1e-12, 1.0) == pytest.approx(s_c(0.0, 1.0), rel=1e-11)

    @given(
        c=st.floats(min_value=-4.0, max_value=4.0),
        r=st.floats(min_value=0.0, max_value=1.0),
        lam=st.floats(min_value=0.25, max_value=4.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_scaling_law(self, c, r, lam):
        """s_c(r) = s_(c/lam^2)(lam r)/lam."""
        assert s_c(c, r) == pytest.approx(s_c(c / lam ** 2, lam * r) / lam, rel=1e-12, abs=1e-300)


class TestCtc:
    def test_flat(self):
        assert ct_c(0.0, 4.0) == 0.25

    def test_sphere_equator(self):
        assert ct_c(1.0, math.pi / 2) == pytest.approx(0.0, abs=1e-15)

    def test_hyperbolic_is_coth(self):
        assert ct_c(-1.0, 2.0) == pytest.approx(1.0373147207275481, rel=1e-14)

    def test_pole_is_rejected(self):
        with pytest.raises(DomainError, match='positive'):
            ct_c(-1.0, 0.0)

    def test_small_argument(self):
        for c in (-1.0, 0.0, 1.0):
            assert 1e-6 * ct_c(c, 1e-6) == pytest.approx(1.0, rel=1e-8)

    def test_derivative_identity(self):
        """s_c' = s_c ct_c, checked by central differences."""
        r = np.linspace(0.2, 2.5, 50)
        h = 1e-6
        for c in (-1.0, 0.5):
            fd = (s_c(c, r + h) - s_c(c, r - h)) / (2 * h)
            assert np.allclose(fd, s_c(c, r) * ct_c(c, r), atol=1e-6)
            assert np.allclose(c_c(c, r), s_c(c, r) * ct_c(c, r), rtol=1e-12)


class TestDc:
    def test_flat_is_zero(self):
        assert d_c(0.0, 7.0) == 0.0

    def test_hyperbolic_value(self):
        assert d_c(-1.0, 1.0) == pytest.approx(1.0 / math.tanh(1.0) - 1.0, rel=1e-13)

    def test_spherical_value_is_negative(self):
        assert d_c(1.0, 1.0) == pytest.approx(1.0 / math.tan(1.0) - 1.0, rel=1e-13)
        assert d_c(1.0, 1.0) < 0

    def test_zero_at_origin(self):
        assert d_c(-1.0, 0.0) == 0.0

    def test_series_branch_matches_closed_form(self):
        r = math.sqrt(0.9e-3)
        closed = r / math.tanh(r) - 1.0
        assert d_c(-1.0, r) == pytest.approx(closed, rel=1e-9)

    @pytest.mark.parametrize('c', [-0.25, -1.0, -4.0])
    def test_lower_bound_on_grid(self, c):
        r = np.linspace(1e-4, 20.0, 20001)
        assert np.all(d_c(c, r) >= d_c_lower_bound(c, r))

    def test_lower_bound_needs_negative_curvature(self):
        with pytest.raises(DomainError):
            d_c_lower_bound(0.0, 1.0)


class TestSincExcess:
    def test_zero_at_origin(self):
        assert sinc_excess(-1.0, 0.0) == 0.0

    def test_matches_ratio(self):
        r = np.array([0.01, 0.5, 2.0])
        assert np.allclose(sinc_excess(-1.0, r), np.sinh(r) / r - 1.0, rtol=1e-10)


class TestRijCorrection:
    def test_flat_is_zero(self):
        assert r_ij_correction(0.0, 1.0, 2.0) == 0.0

    def test_equal_distances_vanish(self):
        assert r_ij_correction(-1.0, 1.0, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_nonnegative_on_grid(self):
        d = np.linspace(0.01, 10.0, 120)
        a, b = np.meshgrid(d, d)
        assert np.all(r_ij_correction(-1.0, a, b) >= 0.0)

    def test_symmetric_exactly(self):
        d = np.linspace(0.05, 3.0, 40)
        a, b = np.meshgrid(d, d)
        assert np.array_equal(r_ij_correction(-1.0, a, b), r_ij_correction(-1.0, b, a))

    def test_matches_printed_formula(self):
        c, a, b = -1.0, 0.7, 2.3
        printed = (
            1 / a ** 2 + 1 / b ** 2
            - 2.0 / (c * a * b) * (1.0 / (s_c(c, a) * s_c(c, b)) - ct_c(c, a) * ct_c(c, b))
        )
        assert r_ij_correction(c, a, b) == pytest.approx(printed, rel=1e-9)

    def test_grows_near_the_pole(self):
        assert r_ij_correction(-1.0, 1e-3, 1.0) > r_ij_correction(-1.0, 1e-2, 1.0)

    def test_rejects_zero_distance(self):
        with pytest.raises(DomainError):
            r_ij_correction(-1.0, 0.0, 1.0)


class TestMittagLeffler:
    def test_one_term(self):
        assert cot_mittag_leffler(0.1, 1) == pytest.approx(
            1 / 0.1 + 0.2 / (0.01 - math.pi ** 2), rel=1e-14
        )

    def test_converges_at_half_pi(self):
        assert abs(cot_mittag_leffler(math.pi / 2, 10 ** 6)) < 1e-6

    def test_converges_at_one(self):
        assert cot_mittag_leffler(1.0, 10 ** 6) == pytest.approx(1 / math.tan(1.0), abs=1e-6)

    @pytest.mark.parametrize('terms', [1000, 10000])
    def test_error_bound_on_grid(self, terms):
        t = np.linspace(0.1, 3.0, 30)
        err = np.abs(cot_mittag_leffler(t, terms) - 1 / np.tan(t))
        assert np.all(err <= cot_series_error_bound(t, terms))

    def test_first_order_convergence(self):
        t = 1.0
        e3 = abs(cot_mittag_leffler(t, 1000) - 1 / math.tan(t))
        e4 = abs(cot_mittag_leffler(t, 10000) - 1 / math.tan(t))
        assert e3 / e4 == pytest.approx(10.0, rel=0.01)

    def test_domain(self):
        with pytest.raises(DomainError, match='open interval'):
            cot_mittag_leffler(math.pi, 5)
        with pytest.raises(DomainError, match='positive integer'):
            cot_mittag_leffler(1.0, 0)


class TestHemisphereConstant:
    def test_n3_beta0(self):
        assert hemisphere_constant(3, 0.0) == pytest.approx(25 / (3 * math.pi ** 2), rel=1e-14)

    def test_n4_beta0(self):
        assert hemisphere_constant(4, 0.0) == pytest.approx(25 / math.pi ** 2, rel=1e-14)

    def test_increasing_and_unbounded(self):
        betas = np.linspace(0.0, math.pi / 2 - 1e-6, 50)
        values = [hemisphere_constant(3, b) for b in betas]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[-1] > 1e4

    def test_rejects_beta_at_equator(self):
        with pytest.raises(DomainError, match='beta'):
            hemisphere_constant(3, math.pi / 2)

    def test_matches_tail_bound(self):
        for n in (3, 4, 5):
            for beta in (0.0, 0.3, 1.2):
                assert 2 * (n - 1) * (n - 2) * cot_tail_bound(beta) == pytest.approx(
                    hemisphere_constant(n, beta), rel=1e-13
                )

    def test_tail_bound_dominates_series(self):
        beta = 0.6
        d = np.linspace(0.01, math.pi / 2 + beta - 1e-3, 40)
        k2 = (math.pi * np.arange(1, 200001)) ** 2
        sums = [np.sum(1.0 / (k2 - x * x)) for x in d]
        assert max(sums) <= cot_tail_bound(beta)


def test_injectivity_radius():
    assert injectivity_radius(4.0) == pytest.approx(math.pi / 2)
    assert injectivity_radius(0.0) == math.inf
    assert injectivity_radius(-1.0) == math.inf
