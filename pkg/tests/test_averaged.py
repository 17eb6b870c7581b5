"""Closed-form averaged law: erf pieces, boost factor, ODE residual."""

import math

import numpy as np
import pytest
from scipy import integrate

from slabatten import (
    AveragedLaw,
    CorrelationKernel,
    DegenerateStep,
    ExponentConvention,
    MediumSpec,
    NegativeDepth,
    UnsupportedKernel,
    UnsupportedOrder,
    averaged_intensity,
    averaged_intensity_bl,
    beer,
    beer_lambert,
    boost_factor,
    cumulant_series_exponent,
    inner_w,
    ode_residual,
    outer_y,
    theta,
)

SQRT_PI = math.sqrt(math.pi)

# Frozen oracle values (adaptive quadrature / nested trapezoid, rechecked
# by the in-test oracles below).
W_1_1 = 0.746824132812427
Y_1_1 = 0.430763853398148
PAPER_HALF_EXAMPLE = 4.222509105331  # I0=10, sigma=1, C=1, zeta=1, alpha=0.8, z=1
EXACT_EXAMPLE = 4.846583187098


def _kernel(amplitude=1.0, zeta=1.0):
    return CorrelationKernel(amplitude, zeta, 2.0)


def _law(alpha=0.8, sigma_a=1.0, sigma_s=0.0, i0=10.0, amplitude=1.0, zeta=1.0,
         convention=ExponentConvention.EXACT):
    return AveragedLaw(
        MediumSpec(sigma_a=sigma_a, sigma_s=sigma_s, alpha=alpha, i0=i0),
        _kernel(amplitude, zeta),
        convention,
    )


def _ordered_trapezoid(zeta, z, n=4001):
    """Nested composite-trapezoid oracle for the ordered double integral."""
    z1 = np.linspace(0.0, z, n)
    inner = np.empty(n)
    for i, x in enumerate(z1):
        z2 = np.linspace(0.0, x, n)
        inner[i] = np.trapezoid(np.exp(-(((x - z2) / zeta) ** 2)), z2)
    return float(np.trapezoid(inner, z1))


class TestInnerW:
    def test_zero_at_origin(self):
        assert inner_w(1.0, 0.0) == 0.0

    def test_saturates_far_from_the_boundary(self):
        zeta = 0.7
        assert inner_w(zeta, 100.0 * zeta) == pytest.approx(
            0.5 * SQRT_PI * zeta, abs=1e-12
        )

    def test_against_adaptive_quadrature(self):
        oracle, err = integrate.quad(lambda u: math.exp(-((1.0 - u) ** 2)), 0.0, 1.0)
        assert err < 1e-10
        assert inner_w(1.0, 1.0) == pytest.approx(oracle, abs=1e-6)
        assert inner_w(1.0, 1.0) == pytest.approx(W_1_1, rel=1e-12)

    def test_negative_argument_rejected(self):
        with pytest.raises(NegativeDepth):
            inner_w(1.0, -0.1)


class TestOuterY:
    def test_zero_at_origin(self):
        assert outer_y(1.0, 0.0) == 0.0

    def test_against_nested_trapezoid(self):
        assert outer_y(1.0, 1.0) == pytest.approx(_ordered_trapezoid(1.0, 1.0), abs=1e-6)
        assert outer_y(1.0, 1.0) == pytest.approx(Y_1_1, rel=1e-12)

    def test_large_depth_asymptote(self):
        zeta, z = 1.0, 50.0
        asymptote = 0.5 * zeta * (SQRT_PI * z - zeta)
        assert outer_y(zeta, z) == pytest.approx(asymptote, rel=1e-9)

    def test_nondecreasing(self):
        z = np.linspace(0.0, 8.0, 300)
        vals = outer_y(0.6, z)
        assert np.all(np.diff(vals) >= 0)


class TestTheta:
    def test_zero_at_origin(self):
        assert theta(_kernel(), 0.0) == 0.0

    def test_unit_value(self):
        assert theta(_kernel(), 1.0) == pytest.approx(W_1_1, rel=1e-12)

    def test_saturation_limit(self):
        k = _kernel(amplitude=2.0, zeta=0.5)
        assert theta(k, 100.0) == pytest.approx(2.0 * 0.5 * SQRT_PI * 0.5, rel=1e-12)

    def test_nondecreasing(self):
        vals = theta(_kernel(), np.linspace(0.0, 10.0, 400))
        assert np.all(np.diff(vals) >= 0)

    def test_requires_squared_exponential(self):
        with pytest.raises(UnsupportedKernel):
            theta(CorrelationKernel(1.0, 1.0, 1.0), 1.0)


class TestAveragedIntensity:
    def test_no_fluctuations_recovers_beer_exactly(self):
        z = np.linspace(0.0, 5.0, 64)
        for convention in ExponentConvention:
            law = _law(alpha=0.0, convention=convention)
            assert np.array_equal(averaged_intensity(law, z), beer(law.medium, z))

    def test_boundary_value_is_incident_intensity(self):
        for convention in ExponentConvention:
            assert averaged_intensity(_law(convention=convention), 0.0) == 10.0

    def test_paper_half_example(self):
        law = _law(convention=ExponentConvention.PAPER_HALF)
        assert averaged_intensity(law, 1.0) == pytest.approx(
            PAPER_HALF_EXAMPLE, rel=1e-11
        )

    def test_exact_example(self):
        law = _law(convention=ExponentConvention.EXACT)
        assert averaged_intensity(law, 1.0) == pytest.approx(EXACT_EXAMPLE, rel=1e-11)

    def test_composition_from_frozen_pieces(self):
        # the boost exponent is gain * alpha^2 * sigma^2 * C * Y(z)
        expected_half = 10.0 * math.exp(-1.0) * math.exp(0.5 * 0.64 * Y_1_1)
        expected_exact = 10.0 * math.exp(-1.0) * math.exp(0.64 * Y_1_1)
        assert PAPER_HALF_EXAMPLE == pytest.approx(expected_half, rel=1e-11)
        assert EXACT_EXAMPLE == pytest.approx(expected_exact, rel=1e-11)

    def test_convention_ordering(self):
        z = np.linspace(0.01, 8.0, 100)
        exact = averaged_intensity(_law(convention=ExponentConvention.EXACT), z)
        half = averaged_intensity(_law(convention=ExponentConvention.PAPER_HALF), z)
        base = beer(MediumSpec(sigma_a=1.0, alpha=0.8, i0=10.0), z)
        assert np.all(exact > half)
        assert np.all(half > base)

    def test_boost_factor_bounds(self):
        law = _law()
        z = np.linspace(0.0, 10.0, 200)
        boost = boost_factor(law, z)
        assert boost[0] == 1.0
        assert np.all(boost >= 1.0)
        assert np.all(np.diff(boost) >= 0)

    def test_white_noise_limit_recovers_beer(self):
        # boost exponent vanishes pointwise as the correlation length
        # shrinks
        gaps = []
        for zeta in (1e-2, 1e-3, 1e-4):
            law = _law(zeta=zeta)
            ratio = averaged_intensity(law, 3.0) / beer(law.medium, 3.0)
            gaps.append(ratio - 1.0)
        assert all(g > 0 for g in gaps)
        assert gaps[2] < gaps[1] < gaps[0]
        assert gaps[2] < 1e-3

    def test_requires_squared_exponential(self):
        with pytest.raises(UnsupportedKernel):
            AveragedLaw(MediumSpec(sigma_a=1.0), CorrelationKernel(1.0, 1.0, 1.0))

    def test_negative_depth_rejected(self):
        with pytest.raises(NegativeDepth):
            averaged_intensity(_law(), -0.5)


class TestAveragedIntensityBL:
    def test_reduces_without_scattering(self):
        law = _law(sigma_s=0.0)
        z = np.linspace(0.0, 5.0, 32)
        assert np.array_equal(averaged_intensity_bl(law, z), averaged_intensity(law, z))

    def test_only_total_coefficient_matters(self):
        split = _law(sigma_a=0.6, sigma_s=0.4)
        merged = _law(sigma_a=1.0, sigma_s=0.0)
        z = np.linspace(0.0, 5.0, 32)
        np.testing.assert_allclose(
            averaged_intensity_bl(split, z), averaged_intensity_bl(merged, z),
            rtol=1e-14,
        )

    def test_no_fluctuations_recovers_beer_lambert(self):
        law = _law(alpha=0.0, sigma_a=0.6, sigma_s=0.4)
        z = np.linspace(0.0, 5.0, 32)
        assert np.array_equal(averaged_intensity_bl(law, z), beer_lambert(law.medium, z))


class TestOdeResidual:
    def test_pure_beer_decay(self):
        law = _law(alpha=0.0)
        assert ode_residual(law, 2.0, 1e-4) < 1e-7

    @pytest.mark.parametrize("convention", list(ExponentConvention))
    def test_closed_form_satisfies_its_ode(self, convention):
        law = _law(alpha=0.5, convention=convention)
        assert ode_residual(law, 2.0, 1e-4) <= 1e-6

    def test_second_order_in_step(self):
        law = _law(alpha=0.5, convention=ExponentConvention.PAPER_HALF)
        coarse = ode_residual(law, 2.0, 4e-3)
        fine = ode_residual(law, 2.0, 2e-3)
        assert coarse / fine == pytest.approx(4.0, rel=0.2)

    def test_degenerate_step_rejected(self):
        with pytest.raises(DegenerateStep):
            ode_residual(_law(), 1.0, 1e-13)

    def test_step_larger_than_depth_rejected(self):
        with pytest.raises(ValueError):
            ode_residual(_law(), 1e-5, 1e-4)


class TestCumulantSeriesExponent:
    def test_first_order_vanishes(self):
        assert cumulant_series_exponent(_kernel(), 0.8, 1.0, 3.0, max_order=1) == 0.0

    def test_second_order_against_trapezoid_oracle(self):
        got = cumulant_series_exponent(_kernel(), 1.0, 1.0, 1.0, max_order=2)
        assert got == pytest.approx(_ordered_trapezoid(1.0, 1.0), abs=1e-6)

    def test_second_order_matches_closed_form_at_4096_points(self):
        got = cumulant_series_exponent(
            _kernel(), 1.0, 1.0, 1.0, max_order=2, quad_points=4096
        )
        assert got == pytest.approx(Y_1_1, rel=1e-8)

    def test_convention_scales_the_quadrature(self):
        exact = cumulant_series_exponent(_kernel(), 0.8, 1.0, 1.0, max_order=2)
        half = cumulant_series_exponent(
            _kernel(), 0.8, 1.0, 1.0, max_order=2,
            convention=ExponentConvention.PAPER_HALF,
        )
        assert half == pytest.approx(0.5 * exact, rel=1e-14)

    @pytest.mark.parametrize("order", [0, 3, 5])
    def test_unsupported_orders(self, order):
        with pytest.raises(UnsupportedOrder):
            cumulant_series_exponent(_kernel(), 0.8, 1.0, 1.0, max_order=order)


class TestAsymptotics:
    def test_effective_attenuation_slope_far_from_the_boundary(self):
        # for z >> zeta the log-derivative settles at
        # -sigma + gain*alpha^2*sigma^2*C*(sqrt(pi)/2)*zeta
        zeta, h = 1.0, 1e-5
        for convention in ExponentConvention:
            law = _law(alpha=0.5, zeta=zeta, convention=convention)
            z = 50.0 * zeta
            slope = (
                math.log(averaged_intensity(law, z + h))
                - math.log(averaged_intensity(law, z - h))
            ) / (2.0 * h)
            expected = -1.0 + convention.gain * 0.25 * 0.5 * SQRT_PI * zeta
            assert slope == pytest.approx(expected, rel=1e-6)
