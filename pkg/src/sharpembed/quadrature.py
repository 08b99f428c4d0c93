"""Period integral I_q(alpha) over the oval, its alpha-derivative and limit.

Both integrands carry inverse-square-root (or square-root) behaviour at the
oval endpoints.  The substitution t = x0 + (x1 - x0) sin^2(theta) turns them
into functions analytic on [0, pi/2], which adaptive Gauss-Legendre then
integrates to near machine precision in a handful of panels.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NonConvergenceError
from .phase_plane import Oval, oval_roots

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 10**6
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int


@lru_cache(maxsize=None)
def _gauss(n):
    return np.polynomial.legendre.leggauss(n)


def adaptive_gauss(func, a, b, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET, order=15):
    """Integrate a smooth vectorised ``func`` over [a, b].

    Each panel is integrated with ``order`` and ``2*order`` Gauss-Legendre
    points; the difference is the panel's error estimate.  The panel with the
    largest estimate is bisected until the summed estimate drops below
    ``tol`` (or below rounding level relative to the value).  If 500
    consecutive bisections fail to halve the best estimate, the integrand is
    taken to be noise-limited and the run stops early.
    """
    xs1, ws1 = _gauss(order)
    xs2, ws2 = _gauss(2 * order)
    evals = 0

    def panel(lo, hi):
        nonlocal evals
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        coarse = half * np.dot(ws1, func(mid + half * xs1))
        fine = half * np.dot(ws2, func(mid + half * xs2))
        evals += 3 * order
        if not (np.isfinite(fine) and np.isfinite(coarse)):
            raise NonConvergenceError("non-finite integrand value")
        return (-abs(fine - coarse), lo, hi, fine)

    heap = [panel(a, b)]
    eps = np.finfo(float).eps
    best, stalled = math.inf, 0
    while True:
        total = math.fsum(p[3] for p in heap)
        err = -math.fsum(p[0] for p in heap)
        if err <= max(tol, 50 * eps * math.fsum(abs(p[3]) for p in heap)):
            return QuadResult(float(total), float(err), evals)
        if evals > budget:
            raise NonConvergenceError(
                f"quadrature budget of {budget} evaluations exhausted "
                f"(current error estimate {err:.3e})")
        if err < 0.5 * best:
            best, stalled = err, 0
        else:
            stalled += 1
            if stalled > 500:
                raise NonConvergenceError(
                    f"quadrature error estimate stalled at {err:.3e} above tol={tol:.1e}; "
                    "the integrand is noise-limited")
        _, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        heapq.heappush(heap, panel(lo, mid))
        heapq.heappush(heap, panel(mid, hi))


def _split_theta(oval: Oval, theta):
    """Offsets from the nearer root and the matching f(t)/offset factor."""
    theta = np.asarray(theta, dtype=float)
    L = oval.width
    s, c = np.sin(theta), np.cos(theta)
    left = theta <= 0.25 * math.pi
    d = L * s * s
    e = L * c * c
    t = np.where(left, oval.x0 + d, oval.x1 - e)
    factor = np.where(left, oval.f_left(np.where(left, d, 0.0)),
                      oval.f_right(np.where(left, 0.0, e)))
    return t, s, c, left, factor


def period_integrand(oval: Oval):
    """dt/sqrt(f) rewritten in theta; analytic and positive on [0, pi/2]."""
    sqrtL = math.sqrt(oval.width)

    def integrand(theta):
        _, s, c, left, factor = _split_theta(oval, theta)
        return 2.0 * sqrtL * np.where(left, c, s) / np.sqrt(factor)

    return integrand


def derivative_integrand(oval: Oval):
    """-4q(q-1) sqrt(f) f' t^(q-3) / psi^2 dt, rewritten in theta."""
    q, L = oval.q, oval.width

    def integrand(theta):
        t, s, c, left, factor = _split_theta(oval, theta)
        f = np.where(left, L * s * s, L * c * c) * factor
        fp = oval.f(t, 1)
        psi = fp * fp - 2.0 * f * oval.f(t, 2)
        sqrt_f = math.sqrt(L) * np.where(left, s, c) * np.sqrt(factor)
        jac = 2.0 * L * s * c
        return -4.0 * q * (q - 1.0) * sqrt_f * fp * t ** (q - 3.0) / psi**2 * jac

    return integrand


def _two_halves(func, tol, budget):
    quarter = 0.25 * math.pi
    a = adaptive_gauss(func, 0.0, quarter, 0.5 * tol, budget)
    b = adaptive_gauss(func, quarter, HALF_PI, 0.5 * tol, budget - a.evaluations)
    return QuadResult(a.value + b.value, a.abs_error_estimate + b.abs_error_estimate,
                      a.evaluations + b.evaluations)


def period_integral(q, alpha, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET):
    """I_q(alpha): half-period of the motion along the oval."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    oval = oval_roots(q, alpha)
    return _two_halves(period_integrand(oval), tol, budget)


def period_integral_deriv(q, alpha, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET):
    """dI_q/dalpha from the integral representation (no differencing)."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    oval = oval_roots(q, alpha)
    return _two_halves(derivative_integrand(oval), tol, budget)


def period_limit(q):
    """Limit of I_q(alpha) as alpha -> alpha*(q): pi / sqrt(q - 2)."""
    if not q > 2:
        raise DomainError(f"q must exceed 2, got {q}")
    return math.pi / math.sqrt(q - 2.0)


def rolle_estimate(q, alpha):
    """pi sqrt(-2 / f''(t)) at the oval midpoint.

    Only a diagnostic for the near-degenerate regime; the exact intermediate
    point is not computable.
    """
    oval = oval_roots(q, alpha)
    fpp = oval.f(0.5 * (oval.x0 + oval.x1), 2)
    return math.pi * math.sqrt(-2.0 / fpp)


def _agm(a, b):
    for _ in range(64):
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        if abs(a - b) <= 1e-16 * a:
            break
    return 0.5 * (a + b)


def elliptic_oracle_q4(alpha):
    """Closed-form I_4(alpha) via the complete elliptic integral K.

    For q = 4 the denominator factors as alpha (x1^2 - t^2)(t^2 - x0^2), so
    I_4 = K(k) / (sqrt(alpha) x1) with k^2 = 1 - x0^2/x1^2, and
    K(k) = pi / (2 AGM(1, x0/x1)).
    """
    if not 0 < alpha < 0.25:
        raise DomainError(f"alpha must lie in (0, 1/4), got {alpha}")
    root = math.sqrt(1.0 - 4.0 * alpha)
    s1 = (1.0 + root) / (2.0 * alpha)
    s0 = 2.0 / (1.0 + root)
    x1 = math.sqrt(s1)
    K = math.pi / (2.0 * _agm(1.0, math.sqrt(s0 / s1)))
    return K / (math.sqrt(alpha) * x1)


def dual_exponent(q):
    return 2.0 * q / (q - 2.0)


def dual_alpha(q, alpha):
    return alpha ** (2.0 / (q - 2.0))


def duality_residual(q, alpha, tol=DEFAULT_TOL):
    """|I_q(alpha) - 2/(q-2) I_{2q/(q-2)}(alpha^{2/(q-2)})|."""
    lhs = period_integral(q, alpha, tol).value
    rhs = period_integral(dual_exponent(q), dual_alpha(q, alpha), tol).value
    return abs(lhs - 2.0 / (q - 2.0) * rhs)
