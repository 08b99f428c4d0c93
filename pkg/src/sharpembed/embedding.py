"""Periodic Sobolev norms, the functional J and the sharp embedding constant.

Fourier coefficients are taken against the orthonormal exponentials
exp(i pi k x / T) / sqrt(2T) on (-T, T), so that the constant function c has
||c||^2_{H^r} = 2T c^2 and J vanishes on constants.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

DEFAULT_GRID = 4096


@dataclass(frozen=True)
class EmbeddingParams:
    q: float
    r: float
    T: float

    def __post_init__(self):
        if not (self.q > 0 and self.r > 0 and self.T > 0):
            raise DomainError(f"q, r, T must be positive, got {self}")

    @property
    def threshold(self) -> float:
        return bifurcation_threshold(self.r, self.T)


def bifurcation_threshold(r, T):
    """Exponent (pi/T)^{2r} + 2 at which the constant stops being a local minimum."""
    return (math.pi / T) ** (2.0 * r) + 2.0


@dataclass
class FourierFunction:
    """Real 2T-periodic trigonometric polynomial stored by its coefficients."""

    coefficients: dict[int, complex]
    T: float

    @classmethod
    def constant(cls, c, T):
        return cls({0: complex(c * math.sqrt(2.0 * T))}, T)

    @classmethod
    def cosine(cls, k, T, amplitude=1.0):
        if k == 0:
            return cls.constant(amplitude, T)
        a = complex(0.5 * amplitude * math.sqrt(2.0 * T))
        return cls({k: a, -k: a}, T)

    @classmethod
    def from_samples(cls, y, T):
        """Coefficients of the trigonometric interpolant of samples at x_j = -T + 2Tj/N."""
        y = np.asarray(y, dtype=float)
        N = y.size
        spec = np.fft.fft(y) * math.sqrt(2.0 * T) / N
        k = np.fft.fftfreq(N, 1.0 / N).astype(int)
        spec = spec * np.where(k % 2 == 0, 1.0, -1.0)
        coeffs = {int(kk): complex(c) for kk, c in zip(k, spec)}
        if N % 2 == 0:
            nyq = N // 2
            half = 0.5 * coeffs.pop(-nyq)
            coeffs[nyq] = half
            coeffs[-nyq] = half
        return cls(coeffs, T)

    def __add__(self, other):
        if not math.isclose(self.T, other.T):
            raise DomainError("cannot add functions with different periods")
        out = dict(self.coefficients)
        for k, c in other.coefficients.items():
            out[k] = out.get(k, 0.0) + c
        return FourierFunction(out, self.T)

    def scaled(self, factor):
        return FourierFunction({k: factor * c for k, c in self.coefficients.items()}, self.T)

    def mean_zero(self):
        return FourierFunction({k: c for k, c in self.coefficients.items() if k != 0}, self.T)

    def grid(self, N=DEFAULT_GRID):
        return -self.T + 2.0 * self.T * np.arange(N) / N

    def samples(self, N=DEFAULT_GRID):
        """Values on the uniform grid x_j = -T + 2Tj/N (requires |k| <= N/2)."""
        kmax = max((abs(k) for k in self.coefficients), default=0)
        if 2 * kmax > N:
            raise DomainError(f"grid of {N} points cannot resolve mode {kmax}")
        spec = np.zeros(N, dtype=complex)
        for k, c in self.coefficients.items():
            spec[k % N] += c * (-1.0) ** (k % 2)
        return np.fft.ifft(spec).real * N / math.sqrt(2.0 * self.T)


def hr_norm_sq(y: FourierFunction, r):
    """sum_k |y_k|^2 ((pi k / T)^{2r} + 1)."""
    T = y.T
    return math.fsum(abs(c) ** 2 * ((math.pi * abs(k) / T) ** (2.0 * r) + 1.0)
                     for k, c in y.coefficients.items())


def l2_norm_sq(y: FourierFunction):
    return math.fsum(abs(c) ** 2 for c in y.coefficients.values())


def lq_norm(samples, q, T):
    """(int_{-T}^{T} |y|^q dx)^{1/q} by the periodic trapezoid rule."""
    if q < 1:
        raise DomainError(f"L_q norm needs q >= 1, got {q}")
    y = np.asarray(samples, dtype=float)
    if y.size < 16:
        raise DomainError("need at least 16 samples")
    h = 2.0 * T / y.size
    return (h * math.fsum(np.abs(y) ** q)) ** (1.0 / q)


def functional_J(y: FourierFunction, q, r, grid=DEFAULT_GRID):
    """||y||^2_{H^r} - (2T)^{1-2/q} ||y||^2_{L_q}."""
    T = y.T
    lq = lq_norm(y.samples(grid), q, T)
    return hr_norm_sq(y, r) - (2.0 * T) ** (1.0 - 2.0 / q) * lq**2


def second_variation_form(h: FourierFunction, q, r):
    """Half the second derivative of J at the constant 1 in direction h."""
    h1 = h.mean_zero()
    return hr_norm_sq(h1, r) - (q - 1.0) * l2_norm_sq(h1)


def smallest_eigenvalue(q, r, T):
    """Lowest eigenvalue of (-d^2/dx^2)^r - (q-2) on mean-zero 2T-periodic functions."""
    return (math.pi / T) ** (2.0 * r) - (q - 2.0)


def steklov_reduce(r, T):
    """Half-period T1 with (pi/T1)^2 = (pi/T)^{2r}, reducing order r to order 1."""
    if r < 1:
        raise DomainError(f"reduction needs r >= 1, got {r}")
    return T * (T / math.pi) ** (r - 1.0)


def destabilization_check(q, r, T, eps=0.01, grid=DEFAULT_GRID):
    """J(1 + eps cos(pi x / T)); eps is halved while |J| is below 1e-12."""
    for _ in range(20):
        y = FourierFunction.constant(1.0, T) + FourierFunction.cosine(1, T, eps)
        value = functional_J(y, q, r, grid)
        if abs(value) > 1e-12:
            return value, eps
        eps *= 0.5
    return value, eps


class Status(str, enum.Enum):
    EXACT = "exact_constant_minimizer"
    UPPER_BOUND = "constant_not_minimizer_upper_bound"
    Q_LE_2 = "below_threshold_q_le_2"


@dataclass(frozen=True)
class SharpConstantResult:
    value: float
    status: Status
    candidates: dict = field(default_factory=dict)


def constant_quotient(q, T):
    """||1||_{H^r} / ||1||_{L_q} = (2T)^{1/2 - 1/q}."""
    return (2.0 * T) ** (0.5 - 1.0 / q)


def sharp_constant(params: EmbeddingParams, tol=1e-10, grid=DEFAULT_GRID):
    q, r, T = params.q, params.r, params.T
    const = constant_quotient(q, T)
    if q <= 2:
        return SharpConstantResult(const, Status.Q_LE_2)
    if r < 1:
        raise DomainError("sharp constant is only determined for r >= 1 when q > 2")
    if q <= params.threshold:
        return SharpConstantResult(const, Status.EXACT)
    candidates = {}
    if r == 1:
        from .solutions import nonconstant_solutions, rayleigh_quotient

        for profile in nonconstant_solutions(q, T, tol=tol, grid_size=grid):
            candidates[profile.n] = rayleigh_quotient(profile, q, T)
    value = min([const, *candidates.values()])
    return SharpConstantResult(value, Status.UPPER_BOUND, candidates)
