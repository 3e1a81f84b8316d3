import logging
import math

import pytest
from pydantic import ValidationError

from numerics.quadrature import (
    QuadratureSpec,
    integrate,
    integrate_detailed,
    integrate_peaked,
    log_integrate_peaked,
)
from utils.exceptions import ConvergenceError, DomainError


def test_polynomial_on_interval():
    spec = QuadratureSpec(lower=0.0, upper=1.0)
    assert integrate(lambda x: x * x, spec) == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_lower_endpoint_singularity():
    spec = QuadratureSpec(lower=0.0, upper=1.0, lower_exponent=-0.5)
    assert integrate(lambda x: x ** -0.5 if x > 0 else 0.0, spec) == pytest.approx(2.0, rel=1e-10)


def test_upper_endpoint_singularity():
    spec = QuadratureSpec(lower=0.0, upper=1.0, upper_exponent=-0.5)
    assert integrate(lambda x: (1.0 - x) ** -0.5 if x < 1 else 0.0, spec) == pytest.approx(2.0, rel=1e-10)


def test_both_endpoints_on_semicircle():
    spec = QuadratureSpec(lower=-1.0, upper=1.0, lower_exponent=0.5, upper_exponent=0.5)
    value = integrate(lambda x: math.sqrt(max(0.0, 1.0 - x * x)), spec)
    assert value == pytest.approx(math.pi / 2.0, rel=1e-10)


def test_half_line_with_breakpoints():
    spec = QuadratureSpec(lower=0.0, upper=math.inf, breakpoints=(1.0, 5.0))
    result = integrate_detailed(lambda x: math.exp(-x), spec)
    assert result.value == pytest.approx(1.0, rel=1e-12)
    assert result.error_bound >= 0.0
    assert result.evaluations > 0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"lower": 1.0, "upper": 1.0},
        {"lower": 2.0, "upper": 1.0},
        {"lower": 0.0, "upper": 1.0, "lower_exponent": -1.0},
        {"lower": 0.0, "upper": 1.0, "upper_exponent": -1.5},
        {"lower": 0.0, "upper": 1.0, "relative_tolerance": 0.0},
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValidationError):
        QuadratureSpec(**kwargs)


def test_convergence_error_carries_estimate():
    spec = QuadratureSpec(
        lower=0.0, upper=100.0, max_subdivisions=1, relative_tolerance=1e-13, acceptance_factor=1.0
    )
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: math.sin(x * x), spec)
    assert math.isfinite(info.value.estimate)
    assert info.value.error_bound > 0


def test_peaked_gaussian():
    result = integrate_peaked(lambda v: -0.5 * v * v)
    assert result.value == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-10)


def test_log_integrate_far_from_unity():
    width = 0.1

    def log_f(u):
        return -1000.0 - (u - 3.0) ** 2 / (2.0 * width ** 2)

    expected = -1000.0 + math.log(math.sqrt(2.0 * math.pi) * width)
    assert log_integrate_peaked(log_f, 3.0, width) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("width", [0.0, -1.0, math.inf])
def test_log_integrate_rejects_bad_width(width):
    with pytest.raises(DomainError):
        log_integrate_peaked(lambda u: -u * u, 0.0, width)


def test_log_integrate_narrows_overestimated_width():
    expected = 0.5 * math.log(2.0 * math.pi)
    assert log_integrate_peaked(lambda u: -0.5 * u * u, 0.0, 1e12) == pytest.approx(expected, rel=1e-10)


def test_log_integrate_flat_plateau():
    # log f ≈ 0 на [0, 60] с экспоненциальными стенками по краям
    def log_f(u):
        if -u > 700.0 or u - 60.0 > 700.0:
            return -math.inf
        return -math.exp(-u) - math.exp(u - 60.0)

    value = log_integrate_peaked(log_f, 30.0, 1e9)
    assert math.isfinite(value)
    assert math.exp(value) == pytest.approx(60.0, rel=0.05)


def test_halving_tolerance_stays_within_error_bound():
    def runge(x):
        return 1.0 / (1.0 + 25.0 * x * x)

    coarse = integrate_detailed(runge, QuadratureSpec(lower=-1.0, upper=1.0, relative_tolerance=1e-8))
    fine = integrate_detailed(runge, QuadratureSpec(lower=-1.0, upper=1.0, relative_tolerance=5e-9))
    assert abs(coarse.value - fine.value) <= coarse.error_bound + fine.error_bound
    assert fine.value == pytest.approx(0.4 * math.atan(5.0), rel=1e-10)


def test_loose_acceptance_is_logged(caplog):
    spec = QuadratureSpec(
        lower=0.0, upper=100.0, max_subdivisions=1, relative_tolerance=1e-13, acceptance_factor=1e300
    )
    with caplog.at_level(logging.WARNING):
        integrate(lambda x: math.sin(x * x), spec)
    assert any(record.levelno == logging.WARNING for record in caplog.records)


def test_tight_result_is_not_logged(caplog):
    with caplog.at_level(logging.WARNING):
        integrate(lambda x: x * x, QuadratureSpec(lower=0.0, upper=1.0))
    assert not [record for record in caplog.records if record.levelno >= logging.WARNING]
