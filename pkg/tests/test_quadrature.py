import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sharpembed.errors import DegenerateOvalError, DomainError, NonConvergenceError
from sharpembed.phase_plane import alpha_star
from sharpembed.quadrature import (adaptive_gauss, dual_alpha, dual_exponent, duality_residual,
                                   elliptic_oracle_q4, period_integral, period_integral_deriv,
                                   period_limit, rolle_estimate)

# 30-digit tanh-sinh reference values, computed independently with mpmath
REFERENCE = [
    (3.0, 0.3, 3.3626431783188178534),
    (3.0, 0.2, 3.7355305229423329984),
    (2.5, 0.2, 6.5194844343868317079),
    (3.5, 0.1, 3.2177096898449060479),
    (6.0, 0.1, 1.6576705720509506017),
    (4.0, 0.2, 2.3153376520745666989),
]


def test_adaptive_gauss_on_known_integrals():
    r = adaptive_gauss(np.exp, 0.0, 1.0, tol=1e-14)
    assert r.value == pytest.approx(math.e - 1, rel=1e-15)
    r = adaptive_gauss(lambda x: 1 / (1e-4 + x * x), -1.0, 1.0, tol=1e-12)
    assert r.value == pytest.approx(2 * math.atan(100) * 100, rel=1e-13)
    assert r.evaluations > 45
    assert r.abs_error_estimate <= 1e-12 * max(1.0, abs(r.value)) * 1e4


def test_adaptive_gauss_budget():
    with pytest.raises(NonConvergenceError):
        adaptive_gauss(lambda x: np.abs(np.sin(1e4 * x)), 0.0, 1.0, tol=1e-15, budget=2000)


@pytest.mark.parametrize("q, alpha, expected", REFERENCE)
def test_period_integral_reference(q, alpha, expected):
    r = period_integral(q, alpha, tol=1e-13)
    assert r.value == pytest.approx(expected, rel=1e-12)
    assert r.abs_error_estimate <= 1e-12


@pytest.mark.parametrize("alpha", [0.001, 0.02, 0.05, 0.1, 0.2, 0.24, 0.2499])
def test_elliptic_oracle(alpha):
    assert period_integral(4, alpha, 1e-13).value == pytest.approx(elliptic_oracle_q4(alpha), rel=1e-12)


def test_elliptic_oracle_frozen():
    assert elliptic_oracle_q4(0.2) == pytest.approx(2.3153376520745666989, rel=1e-14)
    assert elliptic_oracle_q4(0.02) == pytest.approx(3.368472686509792, rel=1e-14)
    assert elliptic_oracle_q4(0.05) == pytest.approx(2.9346848000640744, rel=1e-14)
    for bad in (0.0, 0.25, -1.0):
        with pytest.raises(DomainError):
            elliptic_oracle_q4(bad)


@pytest.mark.parametrize("q", [2.5, 3.0, 4.0, 5.0])
def test_limit_at_degeneracy(q):
    a = alpha_star(q) * (1 - 1e-6)
    assert period_integral(q, a).value == pytest.approx(period_limit(q), rel=1e-5)
    assert rolle_estimate(q, a) == pytest.approx(period_limit(q), rel=1e-3)


def test_period_limit_values():
    assert period_limit(4) == pytest.approx(math.pi / math.sqrt(2))
    with pytest.raises(DomainError):
        period_limit(2)


def test_errors():
    with pytest.raises(DegenerateOvalError):
        period_integral(3, alpha_star(3))
    with pytest.raises(DomainError):
        period_integral(3, -0.1)
    with pytest.raises(DomainError):
        period_integral(1.5, 0.1)


@pytest.mark.parametrize("q", [2.2, 2.5, 3.0, 3.5, 4.0])
def test_monotone_decreasing_in_alpha(q):
    alphas = np.linspace(0.01, 0.999, 60) * alpha_star(q)
    values = [period_integral(q, a).value for a in alphas]
    assert np.all(np.diff(values) < 0)
    assert all(v > period_limit(q) for v in values)


@pytest.mark.parametrize("q, frac", [(2.2, 0.01), (2.5, 0.3), (3.0, 0.5), (3.5, 0.9),
                                     (4.0, 0.7), (6.0, 0.2)])
def test_derivative_against_central_difference(q, frac):
    a = frac * alpha_star(q)
    h = 1e-5 * a
    fd = (period_integral(q, a + h, 1e-13).value - period_integral(q, a - h, 1e-13).value) / (2 * h)
    d = period_integral_deriv(q, a)
    assert d.value < 0
    assert d.value == pytest.approx(fd, rel=1e-6)


def test_derivative_q4_against_oracle_difference():
    a, h = 0.1, 1e-6
    fd = (elliptic_oracle_q4(a + h) - elliptic_oracle_q4(a - h)) / (2 * h)
    assert period_integral_deriv(4, a).value == pytest.approx(fd, rel=1e-7)


def test_dual_exponent_is_involution():
    for q in (2.5, 3.0, 4.0, 7.0):
        assert dual_exponent(dual_exponent(q)) == pytest.approx(q)
    assert dual_exponent(4) == 4


@settings(max_examples=25, deadline=None)
@given(st.floats(2.3, 7.0), st.floats(0.02, 0.98))
def test_duality(q, frac):
    a = frac * alpha_star(q)
    # the dual parameter lands at the same fraction-power of the dual alpha*
    assert dual_alpha(q, a) < alpha_star(dual_exponent(q))
    value = period_integral(q, a).value
    assert duality_residual(q, a) <= 1e-9 * max(1.0, value)


@settings(max_examples=40, deadline=None)
@given(st.floats(2.2, 8.0), st.floats(0.01, 0.999))
def test_integral_exceeds_limit(q, frac):
    assert period_integral(q, frac * alpha_star(q)).value > period_limit(q)
