"""Tests for the extended-precision, Laplace inversion and cut-integral references."""

import cmath
import math

import mpmath
import numpy as np
import pytest
from scipy import special

from fracq_errors import BranchWarning, ContourError, ConvergenceError, DomainError, ParamError, PoleOnPathError
from mittag_leffler import ml, time_argument
from oracles import (
    BromwichConfig,
    FAlphaQuery,
    FSign,
    _check_contour,
    _talbot_nodes,
    bromwich_invert,
    f_alpha_quadrature,
    f_alpha_series,
    ml_highprec,
    ml_highprec_text,
    t_via_pole_plus_integral,
    time_factor_real_imag_highprec,
)
from special_functions import BranchConvention, LambdaRootRule

F_ALPHAS = [0.3, 0.5, 0.7, 0.9]
F_LAMBDAS = [-1.0, -2.0]
F_TIMES = [0.5, 1.0, 2.0]


def test_highprec_values():
    assert ml_highprec(0.5, 1.0, 0.0, digits=50) == 1.0
    assert ml_highprec(1.0, 1.0, 1.0, digits=50) == pytest.approx(math.e, rel=1e-15)
    assert ml_highprec(0.5, 1.0, -1.0, digits=50) == pytest.approx(float(special.erfcx(1.0)), rel=1e-14)


def test_highprec_digits_agree_when_doubled():
    z = 2.0 * cmath.exp(0.7j)
    coarse = ml_highprec_text(0.6, 1.0, z, 100)
    fine = ml_highprec_text(0.6, 1.0, z, 200)
    ctx = mpmath.MPContext()
    ctx.dps = 210
    for a, b in zip(coarse, fine):
        assert abs(ctx.mpf(a) - ctx.mpf(b)) < ctx.mpf("1e-90")


def test_highprec_domain():
    with pytest.raises(DomainError):
        ml_highprec(0.5, 1.0, 1.0, digits=10)
    with pytest.raises(DomainError):
        ml_highprec(0.5, 1.0, 31.0)
    with pytest.raises(ConvergenceError):
        ml_highprec(0.1, 1.0, 5.0, digits=50)


def test_real_imag_highprec():
    quarter = time_factor_real_imag_highprec(1.0, -1.0, 0.5 * math.pi)
    assert quarter.e_r == pytest.approx(0.0, abs=1e-14)
    assert quarter.e_i == pytest.approx(-1.0, abs=1e-14)
    with pytest.raises(DomainError):
        time_factor_real_imag_highprec(0.5, -1.0, -1.0)


def test_bromwich_exponential_order():
    assert abs(bromwich_invert(BromwichConfig(), 1.0, -1.0, 1.0) - cmath.exp(-1.0j)) < 1e-8


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9])
@pytest.mark.parametrize("t", np.logspace(-2, 1, 20).tolist())
def test_bromwich_against_extended_precision(alpha, t):
    expected = ml_highprec(alpha, 1.0, time_argument(alpha, -1.0, t), digits=50)
    assert abs(bromwich_invert(BromwichConfig(), alpha, -1.0, t) - expected) < 1e-8


def test_bromwich_small_time():
    expected = ml(0.5, time_argument(0.5, -1.0, 0.01))
    assert abs(bromwich_invert(BromwichConfig(), 0.5, -1.0, 0.01) - expected) < 1e-8
    assert abs(bromwich_invert(BromwichConfig(), 0.5, -1.0, 1e-6) - 1.0) < 1e-2


def test_bromwich_config_contract():
    with pytest.raises(ParamError):
        BromwichConfig(nodes=4)
    with pytest.raises(ParamError):
        BromwichConfig(gamma_abscissa=-1.0)
    with pytest.raises(ParamError):
        BromwichConfig(gamma_abscissa=0.5).abscissa(0.5, -1.0)
    assert BromwichConfig().abscissa(0.5, -4.0) == pytest.approx(17.0)
    assert BromwichConfig().radius(0.5, -1.0, 1.0) == pytest.approx(19.2)
    assert BromwichConfig().degree(0.5, -1.0, 10.0) == 50
    assert BromwichConfig().radius(0.5, -1.0, 10.0) == pytest.approx(20.0)
    with pytest.raises(DomainError):
        bromwich_invert(BromwichConfig(), 0.5, -1.0, 0.0)


def test_contour_rejects_nearby_and_outside_poles():
    r, t, nodes = 19.2, 1.0, 48
    on_node = _talbot_nodes(r, t, nodes)[3]
    with pytest.raises(ContourError):
        _check_contour([on_node], r, t, nodes)
    with pytest.raises(ContourError):
        _check_contour([complex(100.0, 0.0)], r, t, nodes)
    _check_contour([complex(0.5, 0.5)], r, t, nodes)


@pytest.mark.parametrize("alpha", F_ALPHAS)
@pytest.mark.parametrize("lam", F_LAMBDAS)
@pytest.mark.parametrize("t", F_TIMES)
def test_cut_integral_quadrature_matches_series(alpha, lam, t):
    query = FAlphaQuery(alpha, lam, t)
    assert abs(f_alpha_quadrature(query) - f_alpha_series(query)) < 1e-6


@pytest.mark.parametrize("alpha", [0.3, 0.7])
def test_pole_plus_integral_reproduces_time_factor(alpha):
    direct = ml(alpha, time_argument(alpha, -1.0, 1.0))
    assert abs(t_via_pole_plus_integral(alpha, -1.0, 1.0) - direct) < 1e-6


def test_cut_integral_vanishes_for_exponential_order():
    assert f_alpha_quadrature(FAlphaQuery(1.0, -1.0, 1.0)) == 0j
    assert t_via_pole_plus_integral(1.0, -1.0, 2.0) == pytest.approx(cmath.exp(-2.0j))


def test_pole_on_path():
    with pytest.raises(PoleOnPathError):
        f_alpha_quadrature(FAlphaQuery(2.0 / 3.0, -1.0, 1.0))


def test_excluded_order_warns():
    with pytest.warns(BranchWarning):
        f_alpha_quadrature(FAlphaQuery(0.4, -1.0, 1.0))


def test_printed_rule_limit_at_origin():
    value = f_alpha_series(FAlphaQuery(0.5, -1.0, 1e-12), rule=LambdaRootRule.PRINTED)
    assert value == pytest.approx(1.0 / 0.5 - 1.0, abs=1e-5)


def test_sign_variant():
    query = FAlphaQuery(0.7, -1.0, 1.0)
    difference = f_alpha_series(query) - f_alpha_series(query, sign=FSign.PLUS)
    assert difference == pytest.approx(2.0 * BranchConvention(0.7).pole_term(-1.0, 1.0))


@pytest.mark.parametrize("args", [(0.0, -1.0, 1.0), (0.5, 1.0, 1.0), (0.5, -1.0, 0.0)])
def test_query_validation(args):
    with pytest.raises(ParamError):
        FAlphaQuery(*args)
