"""Bargmann-Fock norms from Taylor coefficients.

Monomials are orthogonal with <z^j, z^k> = k! delta_jk, so for
f = sum a_k z^k the squared norm is sum k! |a_k|^2.  Series are stored by
their Fock amplitudes b_k = a_k sqrt(k!), which stay representable where
a_k itself would underflow; everything factorial-like goes through lgamma.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .eigenfunction import EigenFunction, GaussianPolynomial, hermite_coefficients

DELTA = 0.05
K_MAX = 4000
#: terms below this are treated as underflowed; ratios of denormals are noise
TINY_TERM = 1e-280
#: a geometric tail bound this small relative to the sum certifies convergence
TAIL_CERTIFICATE = 1e-16


class IndecisiveError(RuntimeError):
    """The tail test could not separate a finite norm from a divergent one."""


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Truncated Taylor series stored as Fock amplitudes a_k sqrt(k!)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("need a non-empty 1-d coefficient array")
        if not np.all(np.isfinite(amps)):
            raise ValueError("non-finite Taylor coefficient")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_coeffs(cls, coeffs) -> "TaylorSeries":
        a = np.asarray(coeffs, dtype=complex)
        k = np.arange(a.size)
        return cls(a * np.exp(0.5 * gammaln(k + 1)))

    @property
    def truncation(self) -> int:
        return self.amplitudes.size - 1

    @property
    def coeffs(self) -> np.ndarray:
        k = np.arange(self.amplitudes.size)
        return self.amplitudes * np.exp(-0.5 * gammaln(k + 1))

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def terms(self) -> np.ndarray:
        """k! |a_k|^2."""
        return np.abs(self.amplitudes) ** 2

    def __mul__(self, c) -> "TaylorSeries":
        return TaylorSeries(self.amplitudes * c)

    __rmul__ = __mul__

    def __add__(self, other: "TaylorSeries") -> "TaylorSeries":
        size = min(self.amplitudes.size, other.amplitudes.size)
        return TaylorSeries(self.amplitudes[:size] + other.amplitudes[:size])

    def times_z(self) -> "TaylorSeries":
        """Series of z f(z) (the creation operator)."""
        k = np.arange(1, self.amplitudes.size)
        return TaylorSeries(np.concatenate([[0.0], self.amplitudes[:-1] * np.sqrt(k)]))

    def derivative(self) -> "TaylorSeries":
        """Series of f'(z) (the annihilation operator); one order shorter."""
        if self.amplitudes.size == 1:
            return TaylorSeries(np.zeros(1))
        k = np.arange(1, self.amplitudes.size)
        return TaylorSeries(self.amplitudes[1:] * np.sqrt(k))


def _gaussian_amplitudes(beta: complex, size: int) -> np.ndarray:
    out = np.zeros(size, dtype=complex)
    if beta == 0:
        out[0] = 1.0
        return out
    k = np.arange((size + 1) // 2)
    log_mag = k * np.log(-complex(beta)) + 0.5 * gammaln(2 * k + 1) - gammaln(k + 1)
    out[0::2] = np.exp(log_mag)
    return out


def taylor_of_gauss_hermite(beta: complex, n: int, scale: complex, c: complex, K: int) -> TaylorSeries:
    """First K+1 Taylor coefficients of c exp(-beta z^2) H_n(scale z)."""
    if K < n:
        raise ValueError("truncation K must be at least the Hermite degree")
    size = K + 1
    gauss = _gaussian_amplitudes(beta, size)
    herm = hermite_coefficients(n) * complex(scale) ** np.arange(n + 1)
    k = np.arange(size)
    amps = np.zeros(size, dtype=complex)
    for j, h in enumerate(herm):
        if h == 0:
            continue
        kk = k[j:]
        # sqrt(k!/(k-j)!) converts the shifted Gaussian amplitude
        amps[j:] += h * gauss[: size - j] * np.exp(0.5 * (gammaln(kk + 1) - gammaln(kk - j + 1)))
    return TaylorSeries(c * amps)


def gaussian_polynomial_series(gp: GaussianPolynomial, K: int) -> TaylorSeries:
    """Taylor series of c exp(-beta z^2) p(z), truncated at K."""
    gauss = TaylorSeries(_gaussian_amplitudes(gp.beta, K + 1))
    total = TaylorSeries(np.zeros(K + 1))
    power = gauss
    for a in gp.coeffs:
        if a != 0:
            total = total + a * power
        power = power.times_z()
    return gp.c * total


def eigenfunction_series(ef: EigenFunction, K: int) -> tuple[TaylorSeries, TaylorSeries]:
    """Series of (psi_1, psi_2) in the reduced frame, truncated at K."""
    s1 = taylor_of_gauss_hermite(ef.beta, ef.n, ef.scale, ef.c, K + 1)
    s2 = ef.psi2_factor * (s1.times_z() + s1.derivative())
    return TaylorSeries(s1.amplitudes[: K + 1]), s2


@dataclass(frozen=True)
class Finite:
    value: float
    tail_bound: float = 0.0


@dataclass(frozen=True)
class Diverging:
    evidence: float
    reason: str = ""


NormResult = Finite | Diverging


def _tail_ratios(terms: np.ndarray, start: int, stop: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Ratios t_{k+2}/t_k for start <= k < stop - 2 where both terms are usable."""
    stop = terms.size if stop is None else stop
    a, b = terms[start:stop - 2], terms[start + 2:stop]
    keep = (a > TINY_TERM) & (b > TINY_TERM)
    return np.arange(start, stop - 2)[keep], b[keep] / a[keep]


def limiting_ratio(k: np.ndarray, ratios: np.ndarray) -> float:
    """Extrapolate r_k = R (1 + A/k + ...) to k -> infinity."""
    if ratios.size < 3:
        return float(ratios[-1])
    return float(np.polyfit(1.0 / k, ratios, 1)[1])


def decay_exponent(terms: np.ndarray, start: int | None = None, stop: int | None = None) -> float:
    """p in terms ~ k^(-p), fitted over [start, stop) (default: the upper half)."""
    start = terms.size // 2 if start is None else start
    stop = terms.size if stop is None else stop
    k = np.arange(terms.size)
    keep = (k >= start) & (k < stop) & (terms > 0) & (k > 0)
    if keep.sum() < 4:
        return np.inf
    return float(-np.polyfit(np.log(k[keep]), np.log(terms[keep]), 1)[0])


def _window_limit(terms: np.ndarray, start: int, stop: int) -> float:
    k, ratios = _tail_ratios(terms, start, stop)
    return limiting_ratio(k, ratios) if ratios.size else np.nan


def bargmann_norm_sq(series: TaylorSeries, delta: float = DELTA) -> NormResult:
    """Classify ||f||^2 = sum k! |a_k|^2 as finite or divergent.

    The ratio t_{k+2}/t_k over the upper half of the series, extrapolated
    in 1/k, decides: a limit below 1 - delta means a finite norm, and a
    geometric tail bound is added to the partial sum; a limit above
    1 + delta means growing terms.  A limit inside the band still counts as
    finite when the ratios stay below 1 and the geometric tail bound is
    below ``TAIL_CERTIFICATE`` of the sum.  Otherwise a power-law fit
    t_k ~ k^-p with p <= 1 identifies harmonic-type divergence such as the
    sqrt(K) growth of exp(-z^2/2); anything else raises IndecisiveError.

    Polynomial factors of high degree make the terms rise for a long
    stretch before the Gaussian decay takes over, so every verdict except
    the tail certificate must also be reproduced on the preceding quarter
    [K/4, K/2) of the series.  A pre-asymptotic hump fails that check and
    is reported as indecisive rather than divergent.
    """
    t = series.terms()
    partial = float(np.sum(t))
    start = t.size // 2
    if not np.any(t[start:] > 0):
        return Finite(partial, 0.0)
    k, ratios = _tail_ratios(t, start)
    if ratios.size == 0:
        # the tail has underflowed; what is left is below TINY_TERM per term
        if np.all(t[start:] <= TINY_TERM) and partial > 0:
            return Finite(partial, float(np.sum(t[start:])))
        return Finite(partial, 0.0)
    limit = limiting_ratio(k, ratios)
    earlier = _window_limit(t, start // 2, start + 2)
    last = k[-1] + 2
    if limit < 1.0:
        worst = max(float(ratios[-1]), limit)
        if worst < 1.0:
            bound = float(t[last - 1] + t[last]) * worst / (1.0 - worst)
            if bound <= TAIL_CERTIFICATE * partial:
                return Finite(partial + bound, bound)
            if limit <= 1.0 - delta and not earlier > 1.0 + delta:
                return Finite(partial + bound, bound)
        if limit <= 1.0 - delta:
            raise IndecisiveError(f"ratios have not settled below 1 at K={series.truncation}")
    if limit > 1.0 + delta:
        if earlier > 1.0 + delta and abs(limit - earlier) <= delta * limit:
            return Diverging(limit, "terms grow geometrically")
        raise IndecisiveError(
            f"ratio estimates {earlier:.4f} and {limit:.4f} over successive windows disagree "
            f"at K={series.truncation}"
        )
    p = decay_exponent(t)
    p_earlier = decay_exponent(t, start // 2, start)
    if p <= 1.0 and abs(p - p_earlier) <= 0.25:
        return Diverging(p, "power-law tail k^-p with p <= 1")
    raise IndecisiveError(
        f"limiting ratio {limit:.6f} is within {delta} of 1 and terms decay like k^-{p:.3f}; "
        f"K={series.truncation} is not decisive"
    )


def norm_sq_adaptive(make_series: Callable[[int], TaylorSeries], K0: int = 256,
                     K_max: int = K_MAX, delta: float = DELTA,
                     rel_tol: float | None = 1e-13) -> NormResult:
    """Double the truncation until the tail test decides, up to K_max.

    With ``rel_tol`` set, a finite result is also refined until its tail
    bound drops below ``rel_tol`` times the value.  A divergent verdict is
    accepted only once it repeats at the next truncation, since a long
    pre-asymptotic rise can pass for geometric growth at small K.
    """
    K = K0
    pending = False
    while True:
        try:
            result = bargmann_norm_sq(make_series(K), delta)
        except IndecisiveError:
            pending = False
            if K >= K_max:
                raise
        else:
            if isinstance(result, Diverging):
                if pending or K >= K_max:
                    return result
                pending = True
            else:
                pending = False
                if rel_tol is None or result.tail_bound <= rel_tol * result.value or K >= K_max:
                    return result
        K = min(2 * K, K_max)


def sqrt_growth_slopes(series: TaylorSeries, windows: int = 4) -> np.ndarray:
    """Slopes of the partial sums against sqrt(k) over successive windows.

    Positive, settling slopes are the signature of terms decaying like
    k^(-1/2), i.e. a borderline divergent norm.
    """
    t = series.terms()
    partial = np.cumsum(t)
    k = np.arange(t.size)
    edges = np.linspace(t.size // 4, t.size - 1, windows + 1).astype(int)
    slopes = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = slice(lo, hi + 1)
        slopes.append(np.polyfit(np.sqrt(k[sel]), partial[sel], 1)[0])
    return np.array(slopes)


def inner_product(f: TaylorSeries, g: TaylorSeries, delta: float = DELTA, rel_tol: float = 1e-12) -> complex:
    """<f, g> = sum k! conj(a_k) b_k for two finite-norm series."""
    nf, ng = bargmann_norm_sq(f, delta), bargmann_norm_sq(g, delta)
    if isinstance(nf, Diverging) or isinstance(ng, Diverging):
        raise ValueError("inner product needs two finite-norm series")
    size = min(f.amplitudes.size, g.amplitudes.size)
    value = complex(np.vdot(f.amplitudes[:size], g.amplitudes[:size]))
    # Cauchy-Schwarz on the omitted tails
    tail_f = float(np.sum(f.terms()[size:])) + nf.tail_bound
    tail_g = float(np.sum(g.terms()[size:])) + ng.tail_bound
    tail = np.sqrt(tail_f * nf.value) + np.sqrt(tail_g * ng.value) + np.sqrt(tail_f * tail_g)
    if tail > rel_tol * max(abs(value), np.sqrt(nf.value * ng.value)):
        raise IndecisiveError(f"series too short: tail bound {tail:.3g} on the inner product")
    return value
