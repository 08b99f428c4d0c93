"""Closed-form phase-plane quantities for the oval t'^2 = t^2 - 1 - alpha t^q.

Everything here is an explicit formula in (q, alpha, t) plus one scalar root
solve for the oval endpoints.  Functions accept numpy arrays for ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateOvalError, DomainError, SingularityError

DEGENERACY_RTOL = 1e-12


def _check_q(q):
    if not q > 2:
        raise DomainError(f"exponent q must exceed 2, got {q}")


def alpha_star(q: float) -> float:
    """Parameter value at which the oval shrinks to the point x*."""
    _check_q(q)
    return 2.0 / (q - 2.0) * ((q - 2.0) / q) ** (q / 2.0)


def x_star(q: float) -> float:
    _check_q(q)
    return math.sqrt(q / (q - 2.0))


def x_hat(q: float, alpha: float) -> float:
    """Unique positive zero of f'."""
    return (2.0 / (q * alpha)) ** (1.0 / (q - 2.0))


def f_eval(q, alpha, t, order=0):
    """f(t) = t^2 - 1 - alpha t^q and its first three derivatives."""
    t = np.asarray(t, dtype=float)
    if order == 0:
        out = t * t - 1.0 - alpha * t**q
    elif order == 1:
        out = 2.0 * t - alpha * q * t ** (q - 1.0)
    elif order == 2:
        out = 2.0 - alpha * q * (q - 1.0) * t ** (q - 2.0)
    elif order == 3:
        out = -alpha * q * (q - 1.0) * (q - 2.0) * t ** (q - 3.0)
    else:
        raise DomainError(f"derivative order must be 0..3, got {order}")
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class Oval:
    q: float
    alpha: float
    x0: float
    xhat: float
    x1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    def f(self, t, order=0):
        return f_eval(self.q, self.alpha, t, order)

    def f_left(self, d):
        """f(x0 + d) / d, free of cancellation for small d >= 0."""
        d = np.asarray(d, dtype=float)
        q, a, x0 = self.q, self.alpha, self.x0
        safe = np.where(d > 0, d, 1.0)
        ratio = np.expm1(q * np.log1p(safe / x0)) / safe
        out = np.where(d > 0, 2.0 * x0 + d - a * x0**q * ratio,
                       f_eval(q, a, x0, 1))
        return out[()] if out.ndim == 0 else out

    def f_right(self, e):
        """f(x1 - e) / e, free of cancellation for small e >= 0."""
        e = np.asarray(e, dtype=float)
        q, a, x1 = self.q, self.alpha, self.x1
        safe = np.where(e > 0, e, 1.0)
        ratio = np.expm1(q * np.log1p(-safe / x1)) / safe
        out = np.where(e > 0, -2.0 * x1 + e - a * x1**q * ratio,
                       -f_eval(q, a, x1, 1))
        return out[()] if out.ndim == 0 else out

    def f_accurate(self, t):
        """f on [x0, x1] evaluated from the nearer root."""
        t = np.asarray(t, dtype=float)
        mid = 0.5 * (self.x0 + self.x1)
        d = np.clip(t - self.x0, 0.0, None)
        e = np.clip(self.x1 - t, 0.0, None)
        out = np.where(t <= mid, d * self.f_left(d), e * self.f_right(e))
        return out[()] if out.ndim == 0 else out


def oval_roots(q: float, alpha: float) -> Oval:
    """Roots x0 < x1 of f together with the critical point x̂ between them."""
    _check_q(q)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    astar = alpha_star(q)
    if alpha >= astar * (1.0 - DEGENERACY_RTOL):
        raise DegenerateOvalError(
            f"alpha={alpha} is at or beyond alpha*(q)={astar}; the oval "
            f"degenerates to x*={x_star(q)}",
            witness=x_star(q),
        )
    xh = x_hat(q, alpha)
    f = lambda t: t * t - 1.0 - alpha * t**q
    rtol = 4.0 * np.finfo(float).eps
    x0 = brentq(f, 1.0, xh, xtol=1e-300, rtol=rtol, maxiter=500)
    hi = max(2.0 * xh, 2.0 * x_star(q))
    while f(hi) >= 0:
        hi *= 2.0
    x1 = brentq(f, xh, hi, xtol=1e-300, rtol=rtol, maxiter=500)
    return Oval(q=q, alpha=alpha, x0=x0, xhat=xh, x1=x1)


def _check_inside(oval: Oval, t):
    t = np.asarray(t, dtype=float)
    slack = 1e-12 * oval.x1
    if np.any(t < oval.x0 - slack) or np.any(t > oval.x1 + slack):
        raise DomainError("t must lie in [x0, x1]")
    return t


def psi_eval(oval: Oval, t):
    """psi = f'^2 - 2 f f''; positive on the closed oval interval."""
    t = _check_inside(oval, t)
    f = oval.f_accurate(t)
    return oval.f(t, 1) ** 2 - 2.0 * f * oval.f(t, 2)


def psi_prime(oval: Oval, t):
    t = _check_inside(oval, t)
    return -2.0 * oval.f_accurate(t) * oval.f(t, 3)


def g_family_eval(oval: Oval, t, which="g"):
    """g = psi^2 / t^(q-3), g1 = 2 psi' t - (q-3) psi, g2 = 2 f' t + (q-1) f."""
    t = _check_inside(oval, t)
    q = oval.q
    if which == "g":
        return psi_eval(oval, t) ** 2 / t ** (q - 3.0)
    if which == "g1":
        return 2.0 * psi_prime(oval, t) * t - (q - 3.0) * psi_eval(oval, t)
    if which == "g2":
        return 2.0 * oval.f(t, 1) * t + (q - 1.0) * oval.f_accurate(t)
    if which == "dg":
        return psi_eval(oval, t) / t ** (q - 2.0) * g_family_eval(oval, t, "g1")
    raise DomainError(f"unknown member {which!r}")


def beta_gamma_eval(q, t, family="beta", order=0):
    """g(x_k) (family beta) and g(x̂) (family gamma) with their alpha-derivatives.

    ``order`` j gives d^j/dalpha^j of g along the moving root (beta) or the
    moving critical point (gamma), written as functions of that point.
    """
    t = np.asarray(t, dtype=float)
    u = (q - 2.0) * t * t - q
    a4 = 5.0 * (q - 7.0) * (q - 2.0) ** 2
    if family == "beta":
        if order == 0:
            out = u**4 / t ** (q + 1.0)
        elif order == 1:
            out = u**2 / t * ((q - 2.0) * (q - 7.0) * t * t - q * (q + 1.0))
        elif order == 2:
            out = -t ** (q - 1.0) * (a4 * t**4 - 4.0 * q * (q - 1.0) * (q - 2.0) * t * t
                                     - q * q * (q + 1.0))
        elif order == 3:
            if np.any(np.abs(u) <= 1e-12 * q):
                raise SingularityError("beta_3 is singular at t = x*")
            out = t ** (2.0 * q - 1.0) / u * (
                (q + 3.0) * a4 * t**4
                - 4.0 * q * (q - 1.0) * (q - 2.0) * (q + 1.0) * t * t
                - q * q * (q - 1.0) * (q + 1.0))
        else:
            raise DomainError(f"order must be 0..3, got {order}")
    elif family == "gamma":
        if order == 0:
            out = (4.0 * (q - 2.0) / q) ** 2 * u**2 / t ** (q - 3.0)
        elif order == 1:
            out = 8.0 * (q - 2.0) * t / q * u * ((q - 2.0) * (q - 7.0) * t * t - q * (q - 3.0))
        elif order == 2:
            out = -4.0 * t ** (q - 1.0) * (a4 * t**4 - 6.0 * q * (q - 2.0) * (q - 5.0) * t * t
                                           + q * q * (q - 3.0))
        elif order == 3:
            out = 2.0 * q * t ** (2.0 * q - 3.0) / (q - 2.0) * (
                (q + 3.0) * a4 * t**4
                - 6.0 * q * (q - 2.0) * (q - 5.0) * (q + 1.0) * t * t
                + q * q * (q - 1.0) * (q - 3.0))
        else:
            raise DomainError(f"order must be 0..3, got {order}")
    else:
        raise DomainError(f"unknown family {family!r}")
    return out[()] if out.ndim == 0 else out


def tau_eval(z, q):
    """Ratio x̂ / x1 expressed through z = x1 sqrt((q-2)/q)."""
    z = np.asarray(z, dtype=float)
    out = (2.0 * z * z / (z * z * q - (q - 2.0))) ** (1.0 / (q - 2.0))
    return out[()] if out.ndim == 0 else out


def P_eval(z, q):
    z2 = np.asarray(z, dtype=float) ** 2
    return (-5.0 * (2 * q - 1) * (7 - q) * (q + 3) * z2**3
            - 2.0 * (q + 2) * (11 * q * q - 68 * q + 1) * z2**2
            + (14 * q**3 - 55 * q * q - 54 * q - 1) * z2
            - 2.0 * q * (q - 1) * (q - 3))


def P_dz(z, q):
    z = np.asarray(z, dtype=float)
    return (-30.0 * (2 * q - 1) * (7 - q) * (q + 3) * z**5
            - 8.0 * (q + 2) * (11 * q * q - 68 * q + 1) * z**3
            + 2.0 * (14 * q**3 - 55 * q * q - 54 * q - 1) * z)


def P_denominator(z, q):
    z2 = np.asarray(z, dtype=float) ** 2
    return z2 * (5.0 * z2**2 * (q * q - 4 * q - 21) - (4.0 * z2 + 1.0) * (q * q - 1))


def Q_eval(z, q, tau):
    z2 = np.asarray(z, dtype=float) ** 2
    return (-(7 - q) * (q - 8 * tau**5) * z2**3
            + (q * (13 - 3 * q) - 16 * tau**3 * (5 - q)) * z2**2
            + (q * (3 * q - 5) - 8 * tau * (q - 3)) * z2
            - q * (q + 1))


def Q_dq(z, q, tau):
    """Partial derivative of Q in q (Q is quadratic in q)."""
    z2 = np.asarray(z, dtype=float) ** 2
    return ((2 * q - 7 - 8 * tau**5) * z2**3
            + (13 - 6 * q + 16 * tau**3) * z2**2
            + (6 * q - 5 - 8 * tau) * z2
            - (2 * q + 1))


def Q_dq_bound(z, tau):
    """Closed form of dQ/dq at q = 4."""
    z2 = np.asarray(z, dtype=float) ** 2
    return -8.0 * tau * z2 * (tau * tau * z2 - 1.0) ** 2 - (9.0 - z2) * (z2 - 1.0) ** 2


def Q_denominator(z, q):
    z = np.asarray(z, dtype=float)
    return q * (z - 1.0) ** 2 * (z + 1.0) ** 2 * (z * z * (7.0 - q) + (q + 1.0))
