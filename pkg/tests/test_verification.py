"""Tests for the acceptance-check registry and report."""

import math

import pytest

import verification
from fracq_errors import NumericalError
from verification import CHECKS, Bound, Check, CheckResult, print_report, run_checks

FAST_CHECKS = ["euler_limit", "convention_invariance", "caputo_constant", "l1_order", "riesz_spectral", "classical_potential"]


def test_registry_names_and_bounds():
    assert len(CHECKS) == 17
    assert CHECKS["l1_order"].bound is Bound.LOWER
    assert CHECKS["composition_order"].bound is Bound.LOWER
    assert CHECKS["bromwich"].tolerance == 1e-8


def test_fast_checks_pass():
    results = run_checks(FAST_CHECKS)
    assert [result.name for result in results] == FAST_CHECKS
    failed = [(result.name, result.measured, result.detail) for result in results if not result.passed]
    assert not failed


def test_global_tolerance_only_tightens_upper_checks():
    results = {result.name: result for result in run_checks(["classical_potential", "l1_order"], tol=1e-30)}
    assert results["classical_potential"].tolerance == 1e-30
    assert not results["classical_potential"].passed
    assert results["l1_order"].tolerance == CHECKS["l1_order"].tolerance
    assert results["l1_order"].passed


def test_per_check_tolerance_applies_after_global():
    (result,) = run_checks(["euler_limit"], tol=1e-30, tolerances={"euler_limit": 1e-6})
    assert result.tolerance == 1e-6
    assert result.passed


def test_unknown_check_raises():
    with pytest.raises(KeyError):
        run_checks(["euler_limit", "nope"])


def test_report(capsys):
    passing = CheckResult("a", "first", 1e-14, 1e-12, Bound.UPPER, True, "detail")
    failing = CheckResult("b", "second", 1.0, 1.4, Bound.LOWER, False, "detail")
    assert print_report([passing])
    assert not print_report([passing, failing])
    out = capsys.readouterr().out
    assert "PASS: a" in out
    assert "FAIL: b" in out
    assert "1/2 checks passed" in out


def _divide_by_zero():
    return 1.0 / 0.0, "unreachable"


def _overflowing_sum():
    raise NumericalError("sum overflows")


@pytest.mark.parametrize("run", [_divide_by_zero, _overflowing_sum])
def test_raising_check_is_recorded_as_failure(monkeypatch, run):
    checks = dict(CHECKS)
    checks["raising"] = Check("always raises", 1.0, Bound.UPPER, run)
    monkeypatch.setattr(verification, "CHECKS", checks)
    raising, euler = run_checks(["raising", "euler_limit"])
    assert not raising.passed
    assert math.isnan(raising.measured)
    assert raising.detail.split(":")[0] in {"ZeroDivisionError", "NumericalError"}
    assert euler.passed


def test_probability_scan_covers_ten_thousand_points():
    assert len(verification.STANDARD_ALPHAS) * 3 * verification.PROBABILITY_SCAN_POINTS >= 10_000
