"""Tests for the grid-based fractional operators."""

import math

import numpy as np
import pytest

from fracq_errors import DomainError, ParamError
from fractional_derivatives import (
    FracOrder,
    SampledFunction,
    caputo_derivative,
    composition_identity_residual,
    first_derivative,
    riesz_derivative,
    rl_derivative,
    rl_integral,
    time_grid,
)
from mittag_leffler import ml, time_argument
from special_functions import i_pow


def _periodic_grid(count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(count) / count


def test_sampled_function_validation():
    with pytest.raises(ParamError):
        SampledFunction(np.array([0.0, 1.0, 2.0]), np.zeros(3))
    with pytest.raises(ParamError):
        SampledFunction(np.array([0.0, 1.0, 2.0, 4.0]), np.zeros(4))
    with pytest.raises(ParamError):
        SampledFunction(np.array([0.0, 2.0, 1.0, 3.0]), np.zeros(4))
    with pytest.raises(ParamError):
        SampledFunction(time_grid(1.0, 5), np.zeros(4))


def test_orders_are_checked():
    f = SampledFunction.sample(lambda t: t, time_grid(1.0, 9))
    with pytest.raises(DomainError):
        caputo_derivative(f, 1.2)
    with pytest.raises(DomainError):
        rl_integral(f, 0.5)
    with pytest.raises(DomainError):
        riesz_derivative(f.with_values(f.values), FracOrder(2.5))


def test_time_operators_need_grid_from_origin():
    shifted = SampledFunction.sample(lambda t: t, np.linspace(1.0, 2.0, 9))
    with pytest.raises(DomainError):
        caputo_derivative(shifted, 0.5)


def test_integral_of_one_is_t():
    grid = time_grid(2.0, 21)
    result = rl_integral(SampledFunction(grid, np.ones(21)), -1.0)
    np.testing.assert_allclose(result.values.real, grid, atol=1e-13)


def test_half_integral_of_t():
    grid = time_grid(1.0, 33)
    result = rl_integral(SampledFunction.sample(lambda t: t, grid), -0.5)
    np.testing.assert_allclose(result.values.real, grid**1.5 / math.gamma(2.5), atol=1e-13)


def test_integral_of_zero():
    result = rl_integral(SampledFunction(time_grid(1.0, 8), np.zeros(8)), -0.7)
    assert not np.any(result.values)


@pytest.mark.parametrize("q", [0.2, 0.5, 0.9])
def test_caputo_of_constant_is_zero(q):
    result = caputo_derivative(SampledFunction(time_grid(1.0, 17), np.full(17, 2.5)), q)
    assert not np.any(result.values)


def test_caputo_of_t_is_exact():
    grid = time_grid(1.0, 41)
    result = caputo_derivative(SampledFunction.sample(lambda t: t, grid), 0.5)
    np.testing.assert_allclose(result.values.real, grid**0.5 / math.gamma(1.5), atol=1e-13)


def test_caputo_of_time_factor_is_eigenfunction():
    alpha, lam = 0.5, -1.0
    grid = time_grid(1.0, 4001)
    factor = SampledFunction.sample(lambda ts: [ml(alpha, time_argument(alpha, lam, t)) for t in ts], grid)
    derivative = caputo_derivative(factor, alpha).values
    expected = i_pow(alpha) * lam * factor.values
    window = grid >= 0.5
    relative = np.abs(derivative[window] - expected[window]) / np.abs(expected[window])
    assert relative.max() < 5e-3


def test_rl_derivative_of_one():
    grid = time_grid(1.0, 11)
    result = rl_derivative(SampledFunction(grid, np.ones(11)), 0.5)
    np.testing.assert_allclose(result.values[1:].real, grid[1:] ** -0.5 / math.gamma(0.5), rtol=1e-13)
    assert result.values[0].real == math.inf


def test_rl_equals_caputo_when_function_starts_at_zero():
    f = SampledFunction.sample(lambda t: t**2 + np.sin(t), time_grid(1.0, 33))
    np.testing.assert_array_equal(rl_derivative(f, 0.3).values, caputo_derivative(f, 0.3).values)


def test_rl_derivative_of_t_near_first_order():
    grid = time_grid(1.0, 65)
    result = rl_derivative(SampledFunction.sample(lambda t: t, grid), 0.999)
    np.testing.assert_allclose(result.values[1:].real, 1.0, atol=1e-2)


def test_riesz_second_order_is_second_derivative():
    grid = _periodic_grid(32)
    result = riesz_derivative(SampledFunction.sample(np.sin, grid, periodic=True), 2.0)
    np.testing.assert_allclose(result.values, -np.sin(grid), atol=1e-12)


def test_riesz_on_single_mode():
    grid = _periodic_grid(32)
    wave = SampledFunction.sample(lambda x: np.exp(3j * x), grid, periodic=True)
    result = riesz_derivative(wave, 0.5)
    np.testing.assert_allclose(result.values, -(3.0**0.5) * np.exp(3j * grid), atol=1e-12)


def test_riesz_of_constant_is_zero():
    result = riesz_derivative(SampledFunction(_periodic_grid(16), np.full(16, 4.0), periodic=True), 0.8)
    np.testing.assert_allclose(result.values, 0.0, atol=1e-13)


def test_riesz_contract():
    with pytest.raises(DomainError):
        riesz_derivative(SampledFunction.sample(np.sin, time_grid(1.0, 16)), 1.0)
    with pytest.raises(DomainError):
        riesz_derivative(SampledFunction.sample(np.sin, _periodic_grid(15), periodic=True), 1.0)


def test_first_derivative_of_quadratic_is_exact_inside():
    grid = time_grid(1.0, 11)
    result = first_derivative(SampledFunction.sample(lambda t: t**2, grid))
    np.testing.assert_allclose(result.values[1:-1].real, 2.0 * grid[1:-1], atol=1e-13)


def test_composition_residual_of_constant_vanishes():
    assert composition_identity_residual(SampledFunction(time_grid(1.0, 33), np.ones(33)), 0.6) == 0.0


@pytest.mark.parametrize("alpha", [0.6, 0.75])
def test_composition_residual_decreases_with_refinement(alpha):
    residuals = [
        composition_identity_residual(SampledFunction.sample(lambda t: t**2, time_grid(1.0, count + 1)), alpha)
        for count in (64, 128, 256)
    ]
    orders = [math.log2(coarse / fine) for coarse, fine in zip(residuals, residuals[1:])]
    assert min(orders) > 1.0 - alpha + 0.2


def test_composition_residual_contract():
    with pytest.raises(DomainError):
        composition_identity_residual(SampledFunction(time_grid(1.0, 8), np.ones(8)), 1.0)


@pytest.mark.parametrize(
    "operator, q",
    [(caputo_derivative, 0.4), (rl_derivative, 0.7), (rl_integral, -0.6)],
)
def test_time_operators_are_linear(operator, q):
    rng = np.random.default_rng(11)
    grid = time_grid(1.0, 65)
    f = SampledFunction.sample(lambda t: np.polyval(rng.normal(size=4), t), grid)
    g = SampledFunction.sample(lambda t: np.polyval(rng.normal(size=4), t), grid)
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    combined = operator(f.with_values(a * f.values + b * g.values), q).values
    expected = a * operator(f, q).values + b * operator(g, q).values
    np.testing.assert_allclose(combined[1:], expected[1:], rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("q", [0.3, 1.0, 1.7])
def test_riesz_is_linear_and_self_adjoint(q):
    rng = np.random.default_rng(5)
    grid = _periodic_grid(64)
    f = SampledFunction(grid, rng.normal(size=64) + 1j * rng.normal(size=64), periodic=True)
    g = SampledFunction(grid, rng.normal(size=64) + 1j * rng.normal(size=64), periodic=True)
    rf, rg = riesz_derivative(f, q).values, riesz_derivative(g, q).values
    combined = riesz_derivative(f.with_values(2.0 * f.values - 3j * g.values), q).values
    np.testing.assert_allclose(combined, 2.0 * rf - 3j * rg, atol=1e-10)
    assert np.vdot(g.values, rf) == pytest.approx(np.vdot(rg, f.values), rel=1e-10)


def test_caputo_near_first_order_recovers_derivative():
    grid = time_grid(1.0, 1001)
    result = caputo_derivative(SampledFunction.sample(np.sin, grid), 1.0 - 1e-6)
    np.testing.assert_allclose(result.values[1:].real, np.cos(grid[1:]), atol=2e-3)
