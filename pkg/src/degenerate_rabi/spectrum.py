"""Discrete spectrum at U = +-2 omega.

For x^2 > 1 the quantization function

    m(x) = (x - 1) (omega (omega - omega0) + g^2 (x - 1)) / (omega^2 sqrt(x^2 - 1))

selects the normalizable states through sgn(x) m(x) = 2n + 1.  Roots are
bracketed on a geometric grid that hugs the branch endpoint x = +-1 and then
refined by bisection.
"""
from __future__ import annotations

import csv
import enum
import io
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

from .model import DomainError, ModelParams, as_uplus, e_to_x, x_to_e

log = logging.getLogger(__name__)

TAU_ROOT = 1e-12
TAU_MATCH = 1e-6
EPS = np.finfo(float).eps

#: geometric bracketing grid: |x| - 1 = SCAN_START * 2**(k / SCAN_PER_OCTAVE)
SCAN_START = 1e-6
SCAN_STOP = 1e6
SCAN_PER_OCTAVE = 8


class Branch(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.UPPER else -1

    @classmethod
    def of(cls, x: float) -> "Branch":
        if x > 1:
            return cls.UPPER
        if x < -1:
            return cls.LOWER
        raise DomainError(f"x={x} lies in the closed continuum interval [-1, 1]")


@dataclass(frozen=True)
class SpectralPoint:
    n: int
    branch: Branch
    x: float
    energy: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("quantum number must be non-negative")
        if self.branch.sign * self.x <= 1:
            raise DomainError(f"x={self.x} is not on the {self.branch.value} branch")


class SpectralKind(enum.Enum):
    POINT = "PointSpectrumCandidate"
    CONTINUUM = "Continuum"
    NON_NORMALIZABLE = "NonNormalizable"
    BOUNDARY = "DegenerateBoundary"


@dataclass(frozen=True)
class SpectralClass:
    kind: SpectralKind
    x: float
    n: int | None = None
    branch: Branch | None = None


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(x * x <= 1.0):
        raise DomainError("m(x) and rho(x) are defined only for x^2 > 1")
    return x


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def m_value(params: ModelParams, x):
    """Quantization function m(x); accepts scalars or arrays with x^2 > 1."""
    p, _ = as_uplus(params)
    x = _check_domain(x)
    xm1 = x - 1.0
    # sqrt(x^2-1) as sqrt(x-1)sqrt(x+1) keeps accuracy next to x = +-1
    root = np.sqrt(np.abs(xm1)) * np.sqrt(np.abs(x + 1.0))
    m = xm1 * (p.omega * (p.omega - p.omega0) + p.g**2 * xm1) / (p.omega**2 * root)
    return _scalar_or_array(m)


def rho_value(params: ModelParams, x):
    """Exponent shift rho = -m/4 of the Laplace-transformed system."""
    p, _ = as_uplus(params)
    x = _check_domain(x)
    xm1 = x - 1.0
    root = np.sqrt(np.abs(xm1)) * np.sqrt(np.abs(x + 1.0))
    rho = -xm1 * (p.omega * (p.omega - p.omega0) + p.g**2 * xm1) / (4.0 * p.omega**2 * root)
    return _scalar_or_array(rho)


def quantization_residual(params: ModelParams, x, n: int, branch: Branch):
    """sgn(x) m(x) - (2n + 1) on the given branch."""
    x = np.asarray(x, dtype=float)
    if np.any(branch.sign * x <= 1.0):
        raise DomainError(f"x outside the open {branch.value} branch")
    return _scalar_or_array(branch.sign * np.asarray(m_value(params, x)) - (2 * n + 1))


def scan_grid(branch: Branch, start: float = SCAN_START, stop: float = SCAN_STOP,
              per_octave: int = SCAN_PER_OCTAVE) -> np.ndarray:
    """Bracketing grid on a branch, ordered away from the endpoint."""
    octaves = np.log2(stop / start)
    k = np.arange(int(np.ceil(octaves * per_octave)) + 1)
    offsets = np.minimum(start * 2.0 ** (k / per_octave), stop)
    return branch.sign * (1.0 + offsets)


def _neighbours(x: float, k: int) -> list[float]:
    out = [x]
    lo = hi = x
    for _ in range(k):
        lo, hi = np.nextafter(lo, -np.inf), np.nextafter(hi, np.inf)
        out += [lo, hi]
    return out


def solve_level(params: ModelParams, n: int, branch: Branch,
                tol: float = TAU_ROOT) -> list[SpectralPoint]:
    """All roots of the quantization condition for quantum number ``n``.

    The list is sorted by x and may be empty.  More than one root is
    possible in principle and is reported, not collapsed.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    p, _ = as_uplus(params)
    grid = np.sort(scan_grid(branch))
    values = quantization_residual(p, grid, n, branch)

    def f(x):
        return quantization_residual(p, x, n, branch)

    roots = [float(x) for x in grid[values == 0.0]]
    for i in np.flatnonzero(values[:-1] * values[1:] < 0):
        a, b = grid[i], grid[i + 1]
        # tolerance scaled by the distance to the branch endpoint, where m is stiff
        xtol = tol * (min(abs(a), abs(b)) - 1.0)
        root = optimize.bisect(f, a, b, xtol=max(xtol, 1e-300), rtol=4 * EPS, maxiter=2000)
        roots.append(float(min(_neighbours(root, 4), key=lambda c: abs(f(c)))))
    points = [SpectralPoint(n, branch, x, float(x_to_e(p, x))) for x in sorted(roots)]
    if len(points) > 1:
        log.warning("n=%d on the %s branch has %d roots", n, branch.value, len(points))
    return points


@dataclass
class SweepTable:
    """Roots of the quantization condition over a grid of couplings."""

    rows: list[tuple[float, SpectralPoint]] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def select(self, branch: Branch | None = None, n: int | None = None):
        return [(g, pt) for g, pt in self.rows
                if (branch is None or pt.branch is branch) and (n is None or pt.n == n)]

    def counts(self) -> dict[str, int]:
        out = {b.value: 0 for b in Branch}
        for _, pt in self.rows:
            out[pt.branch.value] += 1
        return out

    def to_csv(self, fh=None) -> str | None:
        """Write ``g,branch,n,x,E`` rows; returns the text when ``fh`` is None."""
        sink = io.StringIO() if fh is None else fh
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(["g", "branch", "n", "x", "E"])
        for g, pt in self.rows:
            writer.writerow([fmt(g), pt.branch.value, pt.n, fmt(pt.x), fmt(pt.energy)])
        return sink.getvalue() if fh is None else None


def fmt(value: float) -> str:
    """Round-trip exact decimal form of a double."""
    return format(float(value), ".17g")


def spectrum_sweep(params_base: ModelParams, g_grid: Sequence[float], n_max: int,
                   branches: Iterable[Branch] = (Branch.UPPER, Branch.LOWER),
                   tol: float = TAU_ROOT) -> SweepTable:
    if len(g_grid) == 0:
        raise ValueError("empty coupling grid")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    branches = tuple(branches)
    table = SweepTable()
    for g in g_grid:
        p = ModelParams(params_base.omega, params_base.omega0, float(g), params_base.u)
        for branch in branches:
            for n in range(n_max + 1):
                for pt in solve_level(p, n, branch, tol=tol):
                    table.rows.append((float(g), pt))
    return table


def classify_energy(params: ModelParams, energy: float,
                    tau_root: float = TAU_ROOT, tau_match: float = TAU_MATCH) -> SpectralClass:
    x = float(e_to_x(params, energy))
    if abs(abs(x) - 1.0) <= tau_root:
        return SpectralClass(SpectralKind.BOUNDARY, x)
    if abs(x) < 1.0:
        return SpectralClass(SpectralKind.CONTINUUM, x)
    branch = Branch.of(x)
    value = branch.sign * m_value(params, x)
    n = int(round((value - 1.0) / 2.0))
    if n >= 0 and abs(value - (2 * n + 1)) <= tau_match:
        return SpectralClass(SpectralKind.POINT, x, n, branch)
    return SpectralClass(SpectralKind.NON_NORMALIZABLE, x)
