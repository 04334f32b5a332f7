"""Saddle points, characteristic exponents, Stokes lines and the Whittaker map.

The asymptotic factors of solutions at infinity are exp(alpha_i z^2) with
alpha_{1,2} = (-x +- sqrt(x^2 - 1)) / 2.  Stokes multipliers are represented
only by whether they vanish; their values are never computed.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import DomainError, ModelParams
from .spectrum import m_value

HALF_INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class SaddlePair:
    alpha1: complex
    alpha2: complex

    @property
    def thetas(self) -> tuple[float, float]:
        """Arguments theta_j of alpha_j = |alpha_j| e^{i theta_j}."""
        return cmath.phase(self.alpha1), cmath.phase(self.alpha2)


def saddle_points(x: float) -> SaddlePair:
    x = float(x)
    if x * x >= 1.0:
        root = math.sqrt(abs(x - 1.0)) * math.sqrt(abs(x + 1.0))
        # larger-magnitude root directly, the other through 4 alpha1 alpha2 = 1
        if x >= 0:
            a2 = 0.5 * (-x - root)
            return SaddlePair(complex(0.25 / a2), complex(a2))
        a1 = 0.5 * (-x + root)
        return SaddlePair(complex(a1), complex(0.25 / a1))
    root = math.sqrt(1.0 - x * x)
    return SaddlePair(complex(-0.5 * x, 0.5 * root), complex(-0.5 * x, -0.5 * root))


def normalizable_saddle_exists(x: float) -> bool:
    """True iff one saddle has |alpha| < 1/2, i.e. x^2 > 1."""
    pair = saddle_points(x)
    return min(abs(pair.alpha1), abs(pair.alpha2)) < 0.5 and x * x > 1.0


def continuum_directions(x: float) -> list[float]:
    """Rays phi = -theta_j / 2 + k pi (k = 0, 1) along which the measure fails to tame
    exp(alpha_j z^2) when |x| < 1."""
    if abs(x) >= 1.0:
        raise DomainError("the conjugate saddle pair exists only for |x| < 1")
    out = []
    for theta in saddle_points(x).thetas:
        for k in (0, 1):
            out.append(math.remainder(-0.5 * theta + k * math.pi, 2.0 * math.pi))
    return sorted(out)


def _is_natural(value) -> bool:
    if isinstance(value, Fraction):
        return value.denominator == 1 and value >= 0
    return abs(value - round(value)) <= HALF_INTEGER_TOL and round(value) >= 0


@dataclass(frozen=True)
class ExponentTable:
    at_alpha1: tuple
    at_alpha2: tuple
    at_infinity: tuple

    def natural_entries(self) -> dict[str, list[bool]]:
        """Which exponents are non-negative integers (polynomial truncation)."""
        return {
            "alpha1": [_is_natural(b) for b in self.at_alpha1],
            "alpha2": [_is_natural(b) for b in self.at_alpha2],
            "infinity": [_is_natural(b) for b in self.at_infinity],
        }

    def pair_sums(self) -> tuple:
        return tuple(a + b for a, b in zip(self.at_alpha1, self.at_alpha2))


def characteristic_exponents(rho) -> ExponentTable:
    """Exponents of the two decoupled Laplace-plane equations.

    Passing a Fraction keeps the arithmetic exact.
    """
    q1, q3 = Fraction(1, 4), Fraction(3, 4)
    if not isinstance(rho, Fraction):
        q1, q3 = float(q1), float(q3)
    return ExponentTable(
        at_alpha1=(rho - q3, rho - q1),
        at_alpha2=(-rho - q3, -rho - q1),
        at_infinity=(Fraction(3, 2), Fraction(1, 2)),
    )


def stokes_line_angles(difference: complex = 1.0) -> list[float]:
    """Directions phi in (-pi/2, pi/2] with Re(z^2 (alpha1 - alpha2)) = 0.

    For real alpha1 - alpha2, the case of the degenerate couplings, these
    are +-pi/4.
    """
    theta = cmath.phase(complex(difference))
    out = []
    for base in (0.5 * math.pi, -0.5 * math.pi):
        phi = 0.5 * (base - theta)
        # lines through the origin: reduce modulo pi
        phi = math.remainder(phi, math.pi)
        if phi <= -0.5 * math.pi:
            phi += math.pi
        out.append(phi)
    return sorted(out)


@dataclass(frozen=True)
class WhittakerParams:
    kappa: float
    mu: float = 0.25


def whittaker_params(params: ModelParams, x: float) -> WhittakerParams:
    """kappa = -m/4, mu = 1/4 for the Whittaker form of the second-order equation."""
    return WhittakerParams(-0.25 * m_value(params, x), 0.25)


def is_half_natural(value: float, tol: float = HALF_INTEGER_TOL) -> bool:
    """value in {0, 1/2, 1, 3/2, ...} within ``tol`` on 2 * value."""
    twice = 2.0 * value
    return round(twice) >= 0 and abs(twice - round(twice)) <= tol


def multiplier_vanishes(wp: WhittakerParams, tol: float = HALF_INTEGER_TOL) -> tuple[bool, bool]:
    """(alpha vanishes, beta vanishes) for the Stokes matrices of the Whittaker equation."""
    k, mu = wp.kappa, wp.mu
    alpha = is_half_natural(k + mu, tol) or is_half_natural(k - mu, tol)
    beta = is_half_natural(-k - mu, tol) or is_half_natural(-k + mu, tol)
    return alpha, beta


def quantization_predicate(params: ModelParams, x: float, tol: float = HALF_INTEGER_TOL) -> bool:
    """sgn(x) m(x) = 2n + 1, with n within ``tol`` of a non-negative integer."""
    if x * x <= 1.0:
        raise DomainError("quantization is defined only for x^2 > 1")
    n = 0.5 * (math.copysign(1.0, x) * m_value(params, x) - 1.0)
    return round(n) >= 0 and abs(n - round(n)) <= tol


def multiplier_predicate(params: ModelParams, x: float, tol: float = HALF_INTEGER_TOL) -> bool:
    """Eigenvalue test through vanishing Stokes multipliers.

    On x > 1 the multiplier beta must vanish with m > 0, on x < -1 the
    multiplier alpha with m < 0.  At m = +-1 both multipliers vanish, so the
    sign of m decides which branch the coincidence belongs to.
    """
    if x * x <= 1.0:
        raise DomainError("the Whittaker map needs x^2 > 1")
    wp = whittaker_params(params, x)
    alpha, beta = multiplier_vanishes(wp, tol)
    m = -4.0 * wp.kappa
    if x > 1.0:
        return beta and m > 0
    return alpha and m < 0


def equivalence_check(params: ModelParams, x: float, tol: float = HALF_INTEGER_TOL) -> bool:
    """Whether the multiplier and quantization predicates agree at x."""
    return multiplier_predicate(params, x, tol) == quantization_predicate(params, x, tol)


def equivalence_grid(params: ModelParams, xs) -> np.ndarray:
    return np.array([equivalence_check(params, float(x)) for x in xs])


def exponent_predicate(params: ModelParams, x: float, tol: float = HALF_INTEGER_TOL) -> bool:
    """Eigenvalue test through a natural characteristic exponent.

    For x > 1 the exponent at alpha_2 must be a non-negative integer, for
    x < -1 the one at alpha_1.
    """
    if x * x <= 1.0:
        raise DomainError("exponents are tied to quantization only for x^2 > 1")
    rho = -0.25 * m_value(params, x)
    table = characteristic_exponents(rho)
    entries = table.at_alpha2 if x > 1.0 else table.at_alpha1
    return any(abs(b - round(b)) <= tol and round(b) >= 0 for b in entries)
