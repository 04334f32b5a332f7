"""Closed-form eigenfunctions, ODE residuals and growth estimates.

An *evaluable* here is any callable ``f(z, order=0)`` returning the
``order``-th derivative at ``z`` (orders 0, 1, 2).  Derivatives are always
analytic; finite differences only appear in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize

from .model import DomainError, ModelParams, as_uplus
from .spectrum import Branch, SpectralPoint, m_value, quantization_residual

Evaluable = Callable[..., complex]


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) by the three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    z = np.asarray(z, dtype=complex)
    h_prev = np.ones_like(z)
    if n == 0:
        return h_prev if h_prev.ndim else complex(h_prev)
    h = 2.0 * z
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return h if h.ndim else complex(h)


def hermite_coefficients(n: int) -> np.ndarray:
    """Monomial coefficients of H_n, lowest degree first (exact integers)."""
    prev, cur = [1], [0, 2]
    if n == 0:
        return np.array(prev, dtype=float)
    for k in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return np.array(cur, dtype=float)


def beta_coeffs(x: float) -> tuple[float, float]:
    """Roots beta_pm = (x +- sqrt(x^2 - 1)) / 2 of 4 beta^2 - 4 x beta + 1 = 0."""
    x = float(x)
    if x * x < 1.0:
        raise DomainError(f"beta_pm is complex for |x| < 1 (x={x})")
    root = math.sqrt(abs(x - 1.0)) * math.sqrt(abs(x + 1.0))
    # the larger-magnitude root directly, the other from the product 1/4
    if x > 0:
        plus = 0.5 * (x + root)
        return plus, 0.25 / plus
    minus = 0.5 * (x - root)
    return 0.25 / minus, minus


@dataclass(frozen=True)
class GaussianPolynomial:
    """c * exp(-beta z^2) * p(z) with p given by monomial coefficients."""

    beta: complex
    coeffs: tuple
    c: complex = 1.0

    def __call__(self, z, order: int = 0):
        z = np.asarray(z, dtype=complex)
        poly = np.asarray(self.coeffs, dtype=complex)
        # exp(-beta z^2) p(z) -> exp(-beta z^2) (p' - 2 beta z p)
        for _ in range(order):
            poly = P.polysub(P.polyder(poly), P.polymulx(2.0 * self.beta * poly))
        out = self.c * np.exp(-self.beta * z * z) * P.polyval(z, poly)
        return out if out.ndim else complex(out)

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return (math.log(abs(self.c)) - np.real(self.beta * z * z)
                    + np.log(np.abs(P.polyval(z, np.asarray(self.coeffs, dtype=complex)))))


@dataclass(frozen=True)
class EigenFunction:
    """psi_1(z) = c exp(-beta z^2) H_n(scale z) together with psi_2.

    ``x`` and ``psi2_factor = omega / (g (x - 1))`` are carried along so that
    the second component can be produced.  ``swap`` marks eigenfunctions of a
    U = -2 omega problem, whose physical components are (psi_2, psi_1).
    """

    beta: complex
    n: int
    scale: complex
    c: complex
    swap: bool
    x: float
    psi2_factor: float

    def psi1(self, z, order: int = 0):
        z = np.asarray(z, dtype=complex)
        a, b, n = self.scale, self.beta, self.n
        t = a * z
        h0 = hermite(n, t)
        gauss = self.c * np.exp(-b * z * z)
        if order == 0:
            return gauss * h0
        h1 = 2 * n * a * hermite(n - 1, t) if n >= 1 else 0.0
        if order == 1:
            return gauss * (h1 - 2 * b * z * h0)
        if order == 2:
            h2 = 4 * n * (n - 1) * a * a * hermite(n - 2, t) if n >= 2 else 0.0
            return gauss * (h2 - 4 * b * z * h1 + (4 * b * b * z * z - 2 * b) * h0)
        raise ValueError("only derivatives up to order 2 are available")

    def psi2(self, z, order: int = 0):
        z = np.asarray(z, dtype=complex)
        k = self.psi2_factor
        if order == 0:
            return k * (z * self.psi1(z) + self.psi1(z, 1))
        if order == 1:
            return k * (self.psi1(z) + z * self.psi1(z, 1) + self.psi1(z, 2))
        raise ValueError("only the first derivative of psi_2 is available")

    def components(self, z):
        """Physical spinor (psi_1, psi_2), undoing the U = -2 omega reduction."""
        first, second = self.psi1(z), self.psi2(z)
        return (second, first) if self.swap else (first, second)

    def log_abs(self, z):
        """log |psi_1(z)| without forming the exponential."""
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return (math.log(abs(self.c)) - np.real(self.beta * z * z)
                    + np.log(np.abs(hermite(self.n, self.scale * z))))

    __call__ = psi1


def _leading_taylor(n: int, scale: complex) -> complex:
    """First non-vanishing Taylor coefficient at 0 of H_n(scale z)."""
    coeffs = hermite_coefficients(n)
    k = n % 2
    return coeffs[k] * scale**k


def build_eigenfunction(params: ModelParams, point: SpectralPoint,
                        tol: float = 1e-8) -> EigenFunction:
    """Closed-form eigenfunction for a root of the quantization condition.

    The constant c makes psi_1 real on the real axis with its first
    non-zero Taylor coefficient equal to 1.
    """
    p, swap = as_uplus(params)
    x = point.x
    if x * x <= 1.0:
        raise DomainError("x = +-1 has no quantized eigenfunction; see degenerate_solution")
    resid = quantization_residual(p, x, point.n, point.branch)
    if abs(resid) > tol:
        raise ValueError(f"point is not a root of the quantization condition (residual {resid:.3g})")
    beta_plus, beta_minus = beta_coeffs(x)
    quarter = (abs(x - 1.0) * abs(x + 1.0)) ** 0.25
    if point.branch is Branch.UPPER:
        beta, scale = beta_minus, 1j * quarter
    else:
        beta, scale = beta_plus, complex(quarter)
    c = 1.0 / _leading_taylor(point.n, scale)
    return EigenFunction(complex(beta), point.n, complex(scale), complex(c), swap,
                         float(x), p.omega / (p.g * (x - 1.0)))


def psi2_from_psi1(params: ModelParams, x: float, psi1: Evaluable, z):
    """psi_2 = omega / (g (x - 1)) (z psi_1 + psi_1')."""
    p, _ = as_uplus(params)
    if x == 1.0:
        raise ZeroDivisionError("psi_2 cannot be recovered from psi_1 at x = 1")
    z = np.asarray(z, dtype=complex)
    return p.omega / (p.g * (x - 1.0)) * (z * psi1(z) + psi1(z, order=1))


def degenerate_solution(params: ModelParams, c: complex = 1.0
                        ) -> tuple[GaussianPolynomial, GaussianPolynomial]:
    """The explicit x = 1 (E = -omega0/2) pair, which is not normalizable.

    Both components share the constant ``c``; with unequal constants the
    pair no longer solves the system.
    """
    p, _ = as_uplus(params)
    psi1 = GaussianPolynomial(0.5, (1.0,), c)
    psi2 = GaussianPolynomial(0.5, (0.0, -3.0 * p.omega0, 0.0, 2.0 * p.omega), c / (3.0 * p.g))
    return psi1, psi2


def _scale(*values):
    return np.maximum.reduce([np.ones(np.shape(values[0]))] + [np.abs(v) for v in values])


def ode_residual_system(params: ModelParams, energy: float, psi1: Evaluable, psi2: Evaluable, z):
    """Defects of the first-order U = +2 omega system, scaled by max(1, |psi_1|, |psi_2|)."""
    p, _ = as_uplus(params)
    z = np.asarray(z, dtype=complex)
    f1, f2 = psi1(z), psi2(z)
    d1, d2 = psi1(z, order=1), psi2(z, order=1)
    shift = 2.0 * energy + p.omega0
    r1 = d1 + z * f1 - shift / (2.0 * p.g) * f2
    r2 = (d2 - (4.0 * p.omega * z * z + 2.0 * energy - p.omega0) / (2.0 * p.g) * f1
          + z * (p.g**2 + p.omega * shift) / p.g**2 * f2)
    s = _scale(f1, f2)
    return r1 / s, r2 / s


def ode_residual_second_order(params: ModelParams, x: float, w: Evaluable, z):
    """Defect of w'' + 2 x z w' + (z^2 + x - m sqrt(x^2 - 1)) w = 0.

    Scaled by the largest of 1 and the three term magnitudes, so the bound is
    relative to the cancellation that actually takes place.
    """
    if x * x <= 1.0:
        raise DomainError("the second-order form needs x^2 > 1")
    z = np.asarray(z, dtype=complex)
    m = m_value(params, x)
    root = math.sqrt(abs(x - 1.0)) * math.sqrt(abs(x + 1.0))
    f, d1, d2 = w(z), w(z, order=1), w(z, order=2)
    terms = (d2, 2.0 * x * z * d1, (z * z + x - m * root) * f)
    return sum(terms) / _scale(*terms)


def max_modulus(f, r: float, k_samples: int = 256) -> float:
    """M(r) = max |f| on the circle |z| = r (sampled, then golden-section refined)."""
    return math.exp(log_max_modulus(f, r, k_samples))


def log_max_modulus(f, r: float, k_samples: int = 256) -> float:
    """log M(r); uses ``f.log_abs`` when available so large radii do not overflow."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if k_samples < 64:
        raise ValueError("at least 64 angular samples are required")
    log_abs = getattr(f, "log_abs", None)
    if log_abs is None:
        def log_abs(z):
            with np.errstate(divide="ignore"):
                return np.log(np.abs(f(z)))

    def neg(phi):
        return -float(log_abs(r * np.exp(1j * phi)))

    phis = 2.0 * np.pi * np.arange(k_samples) / k_samples
    values = np.asarray(log_abs(r * np.exp(1j * phis)), dtype=float)
    i = int(np.argmax(values))
    best = values[i]
    step = 2.0 * np.pi / k_samples
    left, right = values[i - 1], values[(i + 1) % k_samples]
    if best > left and best > right:
        res = optimize.minimize_scalar(neg, bracket=(phis[i] - step, phis[i], phis[i] + step),
                                       method="golden", tol=1e-10)
        best = max(best, -res.fun)
    return float(best)


@dataclass(frozen=True)
class GrowthEstimate:
    order_hat: float
    type_hat: float
    r_grid: tuple


def growth_order_type(f, r_grid: Sequence[float], k_samples: int = 256) -> GrowthEstimate:
    """Estimate growth order and type of an entire function from M(r).

    The order is the least-squares slope of log log M against log r over
    the top decade of radii; the type uses the order rounded to the nearest
    half-integer.
    """
    r = np.asarray(r_grid, dtype=float)
    if r.size < 4 or np.any(np.diff(r) <= 0) or r[0] <= 0:
        raise ValueError("need at least 4 increasing positive radii")
    log_m = np.array([log_max_modulus(f, ri, k_samples) for ri in r])
    if not np.all(np.isfinite(log_m)):
        raise OverflowError("log M(r) left the floating point range; use smaller radii")
    top = r >= r[-1] / 10.0
    usable = top & (log_m > 0)
    if usable.sum() >= 2:
        slope = np.polyfit(np.log(r[usable]), np.log(log_m[usable]), 1)[0]
        order_hat = max(float(slope), 0.0)
    else:
        order_hat = 0.0
    rounded = round(2.0 * order_hat) / 2.0
    type_hat = max(float(log_m[-1] / r[-1] ** rounded), 0.0) if rounded > 0 else 0.0
    return GrowthEstimate(order_hat, type_hat, tuple(float(v) for v in r))


def default_radii(beta: complex, count: int = 12, log_peak: float = 1e5) -> np.ndarray:
    """Radii whose top decade reaches |beta| r^2 = log_peak."""
    b = max(abs(complex(beta).real), 1e-300)
    r_max = math.sqrt(log_peak / b)
    return np.geomspace(r_max / 100.0, r_max, count)
