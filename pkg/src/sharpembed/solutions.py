"""Positive periodic solutions of -y'' + y = y^{q-1}.

A nonconstant solution with n oscillations per period 2T moves along the oval
y'^2 = y^2 - (2/q) y^q - c1, and in the rescaled variable t = y / sqrt(c1)
its half-oscillation time is I_q(alpha).  Solving I_q(alpha) = T/n picks the
oval; the profile is rebuilt by inverting x(theta) = int_0^theta G, where G is
the desingularised period integrand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C

from .embedding import DEFAULT_GRID, FourierFunction, hr_norm_sq, lq_norm
from .errors import ConsistencyError, DegenerateOvalError, DomainError, NonConvergenceError
from .phase_plane import Oval, alpha_star, oval_roots
from .quadrature import DEFAULT_TOL, HALF_PI, period_integral, period_integrand


def mode_threshold(n, T):
    """Exponent above which an n-fold oscillating solution exists: (n pi/T)^2 + 2."""
    return (n * math.pi / T) ** 2 + 2.0


def band_index(q, T):
    """The k >= 1 with ((k-1)pi/T)^2 + 2 < q <= (k pi/T)^2 + 2."""
    if not q > 2:
        raise DomainError(f"q must exceed 2, got {q}")
    k = max(1, math.ceil(T * math.sqrt(q - 2.0) / math.pi))
    while k > 1 and q <= mode_threshold(k - 1, T):
        k -= 1
    while q > mode_threshold(k, T):
        k += 1
    return k


def solvable_modes(q, T):
    """Oscillation counts n for which I_q(alpha) = T/n has a solution."""
    if not q > 2:
        raise DomainError(f"q must exceed 2, got {q}")
    out = []
    n = 1
    while q > mode_threshold(n, T):
        out.append(n)
        n += 1
    return out


def count_periodic_solutions(q, T):
    """Number of non-equivalent positive 2T-periodic solutions, the constant included."""
    return 1 + len(solvable_modes(q, T))


def solve_alpha_for_period(q, T, n=1, tol=DEFAULT_TOL):
    """Unique alpha in (0, alpha*) with I_q(alpha) = T/n, or None when T/n <= pi/sqrt(q-2)."""
    if not (q > 2 and T > 0 and n >= 1):
        raise DomainError(f"need q > 2, T > 0, n >= 1; got q={q}, T={T}, n={n}")
    if q <= mode_threshold(n, T):
        return None
    target = T / n
    astar = alpha_star(q)

    def resid(a):
        return period_integral(q, a, 0.1 * tol).value - target

    for eps_hi in (1e-9, 1e-10, 1e-11, 2e-12):
        hi = astar * (1.0 - eps_hi)
        if resid(hi) < 0:
            break
    else:
        raise NonConvergenceError(
            f"T/n={target} is too close to the limit period to bracket alpha")
    lo = 0.5 * astar
    for _ in range(2000):
        if resid(lo) > 0:
            break
        hi, lo = lo, 0.5 * lo
    else:
        raise NonConvergenceError("could not bracket alpha from below")

    for _ in range(400):
        mid = 0.5 * (lo + hi)
        r = resid(mid)
        if abs(r) <= tol and hi - lo <= tol:
            return mid
        if r > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.0 * np.finfo(float).eps * hi:
            if abs(r) <= tol:
                return mid
            raise NonConvergenceError("alpha bracket collapsed before the residual met tol")
    raise NonConvergenceError("bisection on alpha did not converge")


class PhaseClock:
    """Elapsed time x(theta) along the half oscillation and its inverse.

    Piecewise Chebyshev representation of the analytic integrand G on
    [0, pi/2], with panels bisected until the interpolant's tail is negligible.
    """

    def __init__(self, oval: Oval, deg=32, rtol=1e-15, max_panels=4096):
        self.oval = oval
        self.G = period_integrand(oval)
        panels = []
        stack = [(0.0, HALF_PI)]
        while stack:
            lo, hi = stack.pop()
            series = C.Chebyshev.interpolate(self.G, deg, domain=[lo, hi])
            scale = max(np.abs(series.coef).max(), 1e-300)
            if np.abs(series.coef[-4:]).max() <= rtol * scale * 10 or len(panels) + len(stack) > max_panels:
                panels.append((lo, hi, series.integ(lbnd=lo)))
            else:
                stack.extend([(0.5 * (lo + hi), hi), (lo, 0.5 * (lo + hi))])
        panels.sort(key=lambda p: p[0])
        self.edges = np.array([p[0] for p in panels] + [HALF_PI])
        self.antiderivs = [p[2] for p in panels]
        offsets = [0.0]
        for (lo, hi, F) in panels:
            offsets.append(offsets[-1] + F(hi))
        self.offsets = np.array(offsets)

    @property
    def half_period(self):
        return float(self.offsets[-1])

    def x_of_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, theta, side="right") - 1, 0, len(self.antiderivs) - 1)
        out = np.empty_like(theta)
        for i in np.unique(idx):
            m = idx == i
            out[m] = self.offsets[i] + self.antiderivs[i](theta[m])
        return out

    def theta_of_x(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, self.half_period)
        table = np.linspace(0.0, HALF_PI, 4097)
        theta = np.interp(x, self.x_of_theta(table), table)
        for _ in range(50):
            step = (self.x_of_theta(theta) - x) / self.G(theta)
            theta = np.clip(theta - step, 0.0, HALF_PI)
            if np.max(np.abs(step)) < 1e-15:
                break
        return theta

    def t_of_theta(self, theta):
        o = self.oval
        s, c = np.sin(theta), np.cos(theta)
        return np.where(theta <= 0.25 * math.pi, o.x0 + o.width * s * s, o.x1 - o.width * c * c)


@dataclass(frozen=True)
class PeriodicProfile:
    q: float
    alpha: float
    mu: float
    c1: float
    n: int
    T: float
    x: np.ndarray
    y: np.ndarray
    period_residual: float

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.y.tolist()))

    @property
    def y_min_expected(self):
        return math.sqrt(self.c1) * oval_roots(self.q, self.alpha).x0

    @property
    def y_max_expected(self):
        return math.sqrt(self.c1) * oval_roots(self.q, self.alpha).x1


def first_integral_constant(q, alpha):
    """c1 with alpha = (2/q) c1^{(q-2)/2}."""
    return (q * alpha / 2.0) ** (2.0 / (q - 2.0))


def reconstruct_profile(q, alpha, n, T, grid_size=DEFAULT_GRID, period_rtol=1e-6):
    """Sample the n-fold solution on x_j = -T + 2Tj/N, minimum anchored at x = -T."""
    if grid_size < 16:
        raise DomainError("grid_size must be at least 16")
    oval = oval_roots(q, alpha)
    clock = PhaseClock(oval)
    half = T / n
    period_residual = abs(clock.half_period / half - 1.0)
    if period_residual > period_rtol:
        raise ConsistencyError(
            f"oscillation period {2 * clock.half_period} differs from 2T/n={2 * half} "
            f"(relative {period_residual:.2e})")
    x = -T + 2.0 * T * np.arange(grid_size) / grid_size
    u = np.mod(x + T, 2.0 * half)
    s = np.where(u <= half, u, 2.0 * half - u)
    c1 = first_integral_constant(q, alpha)
    y = math.sqrt(c1) * clock.t_of_theta(clock.theta_of_x(s))
    return PeriodicProfile(q=q, alpha=alpha, mu=2.0 / q, c1=c1, n=n, T=T, x=x, y=y,
                           period_residual=period_residual)


def nonconstant_solutions(q, T, tol=DEFAULT_TOL, grid_size=DEFAULT_GRID):
    out = []
    for n in solvable_modes(q, T):
        alpha = solve_alpha_for_period(q, T, n, tol)
        if alpha is None:
            continue
        try:
            out.append(reconstruct_profile(q, alpha, n, T, grid_size))
        except DegenerateOvalError:
            continue
    return out


def spectral_derivative(y, T):
    N = y.size
    k = np.fft.fftfreq(N, 1.0 / N)
    if N % 2 == 0:
        k[N // 2] = 0.0
    return np.fft.ifft(1j * math.pi * k / T * np.fft.fft(y)).real


def first_integral_residual(profile: PeriodicProfile):
    """max |y'^2 - y^2 + mu y^q + c1| relative to max y^2, with y' taken spectrally."""
    y = profile.y
    yp = spectral_derivative(y, profile.T)
    r = yp**2 - y**2 + profile.mu * y**profile.q + profile.c1
    return float(np.max(np.abs(r)) / np.max(y**2))


def virial_residual(profile: PeriodicProfile):
    """Relative gap in int (y'^2 + y^2) = int y^q."""
    y = profile.y
    yp = spectral_derivative(y, profile.T)
    lhs = math.fsum(yp**2 + y**2)
    rhs = math.fsum(y**profile.q)
    return abs(lhs - rhs) / rhs


def symmetry_residual(profile: PeriodicProfile):
    """max |y(-T + s) - y(-T - s)| over grid offsets s (evenness about the minimum)."""
    y = profile.y
    return float(np.max(np.abs(y - np.roll(y[::-1], 1))))


def rayleigh_quotient(y, q, T):
    """||y||_{H^1} / ||y||_{L_q} from uniform samples on [-T, T)."""
    samples = y.y if isinstance(y, PeriodicProfile) else np.asarray(y, dtype=float)
    h1 = hr_norm_sq(FourierFunction.from_samples(samples, T), 1.0)
    return math.sqrt(h1) / lq_norm(samples, q, T)
