"""Brute-force check: truncated Fock-space matrix and a Jacobi eigensolver.

Basis |n, s> with n = 0..N bosons and s = +1, -1 the sigma_z eigenvalue,
interleaved as index 2n for s = +1 and 2n + 1 for s = -1.  In this order
the matrix is banded with half-bandwidth 3.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numba
import numpy as np

from .model import ModelParams, continuum_window
from .spectrum import Branch, SpectralPoint

MAX_SWEEPS = 100
JACOBI_TOL = 1e-12


class JacobiConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FockMatrix:
    N: int
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def basis_index(n: int, s: int) -> int:
    return 2 * n + (0 if s > 0 else 1)


def build_hamiltonian(params: ModelParams, N: int) -> FockMatrix:
    """H = (omega + U/2 sigma_z) a^+a + omega0/2 sigma_z + g sigma_x (a^+ + a), truncated at N."""
    if N < 0:
        raise ValueError("cutoff must be non-negative")
    dim = 2 * (N + 1)
    h = np.zeros((dim, dim))
    for n in range(N + 1):
        for s in (1, -1):
            i = basis_index(n, s)
            h[i, i] = (params.omega + s * params.u / 2) * n + s * params.omega0 / 2
            if n < N:
                j = basis_index(n + 1, -s)
                h[i, j] = h[j, i] = params.g * np.sqrt(n + 1)
    return FockMatrix(N, h)


def parity_operator(N: int) -> np.ndarray:
    """Diagonal of P = s (-1)^n, which commutes with H."""
    n = np.repeat(np.arange(N + 1), 2)
    s = np.tile([1, -1], N + 1)
    return s * (-1.0) ** n


def parity_blocks(matrix: FockMatrix) -> tuple[np.ndarray, np.ndarray]:
    """The two parity sectors of H, obtained by a basis permutation."""
    p = parity_operator(matrix.N)
    even, odd = np.flatnonzero(p > 0), np.flatnonzero(p < 0)
    a = matrix.entries
    return a[np.ix_(even, even)], a[np.ix_(odd, odd)]


@numba.njit(cache=True)
def _jacobi_sweeps(a, tol, max_sweeps):
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += a[i, j] * a[i, j]
    target = tol * np.sqrt(total)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if np.sqrt(2.0 * off) <= target:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


def eigenvalues_sym(matrix, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.

    Converged when the off-diagonal Frobenius norm is at most ``tol`` times
    the Frobenius norm of the input.
    """
    a = np.array(matrix.entries if isinstance(matrix, FockMatrix) else matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    if a.shape[0] == 0:
        return np.zeros(0)
    sweeps = _jacobi_sweeps(a, tol, max_sweeps)
    if sweeps < 0:
        raise JacobiConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(a))


@functools.lru_cache(maxsize=32)
def truncated_spectrum(params: ModelParams, N: int) -> np.ndarray:
    """Cached Jacobi spectrum of the N-boson truncation (read-only array)."""
    ev = eigenvalues_sym(build_hamiltonian(params, N))
    ev.setflags(write=False)
    return ev


def reliable_ceiling(params: ModelParams, N: int) -> float:
    """Energy below which truncated levels are trusted, omega N / 4."""
    return params.omega * N / 4.0


@dataclass(frozen=True)
class LevelShifts:
    energies: np.ndarray
    shifts: np.ndarray
    tol: float

    @property
    def stabilized(self) -> np.ndarray:
        return self.shifts < self.tol


def level_shifts(params: ModelParams, N1: int, N2: int, window: tuple[float, float],
                 tol: float = 1e-8) -> LevelShifts:
    """Distance of each N2 level in ``window`` to the nearest N1 level."""
    if N2 < N1 + 20:
        raise ValueError("N2 must exceed N1 by at least 20")
    lo, hi = window
    e1 = truncated_spectrum(params, N1)
    e2 = truncated_spectrum(params, N2)
    inside = e2[(e2 > lo) & (e2 < hi)]
    if inside.size == 0:
        return LevelShifts(inside, np.zeros(0), tol)
    pos = np.clip(np.searchsorted(e1, inside), 1, e1.size - 1)
    shifts = np.minimum(np.abs(inside - e1[pos - 1]), np.abs(inside - e1[pos]))
    return LevelShifts(inside, shifts, tol)


def converged_levels(params: ModelParams, N1: int, N2: int, window: tuple[float, float],
                     tol: float = 1e-8) -> np.ndarray:
    """Levels of the N2 truncation in ``window`` that moved by less than ``tol`` from N1."""
    shifts = level_shifts(params, N1, N2, window, tol)
    return shifts.energies[shifts.stabilized]


def continuum_interior(params: ModelParams, margin: float = 1e-9) -> tuple[float, float]:
    """Open energy window strictly inside -1 < x < 1."""
    lo, hi = continuum_window(params)
    return lo + margin, hi - margin


@dataclass(frozen=True)
class LevelMatch:
    n: int
    branch: Branch
    E_analytic: float
    E_numeric: float | None
    delta: float | None
    stabilized: bool


@dataclass
class MatchReport:
    levels: list[LevelMatch] = field(default_factory=list)
    unmatched_numeric: list[float] = field(default_factory=list)

    @property
    def all_matched(self) -> bool:
        return all(lv.delta is not None for lv in self.levels)

    @property
    def max_delta(self) -> float:
        deltas = [lv.delta for lv in self.levels if lv.delta is not None]
        return max(deltas) if deltas else 0.0

    def to_dict(self) -> dict:
        return {
            "levels": [
                {"n": lv.n, "branch": lv.branch.value, "E_analytic": lv.E_analytic,
                 "E_numeric": lv.E_numeric, "delta": lv.delta, "stabilized": lv.stabilized}
                for lv in self.levels
            ],
            "unmatched_numeric": list(self.unmatched_numeric),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def match_spectra(analytic: Sequence[SpectralPoint], numeric: Sequence[float], tol: float,
                  stabilized: Sequence[bool] | None = None) -> MatchReport:
    """Greedy nearest-neighbour matching of analytic levels to numeric ones.

    Each numeric level is used at most once; ``delta`` is reported only when
    the matched numeric level is flagged as stabilized.
    """
    numeric = np.asarray(numeric, dtype=float)
    stable = np.ones(numeric.size, bool) if stabilized is None else np.asarray(stabilized, bool)
    used = np.zeros(numeric.size, bool)
    report = MatchReport()
    for pt in sorted(analytic, key=lambda p: p.energy):
        free = np.flatnonzero(~used)
        best = None
        if free.size:
            dist = np.abs(numeric[free] - pt.energy)
            j = int(np.argmin(dist))
            if dist[j] <= tol:
                best = int(free[j])
        if best is None:
            report.levels.append(LevelMatch(pt.n, pt.branch, pt.energy, None, None, False))
            continue
        used[best] = True
        ok = bool(stable[best])
        delta = float(abs(numeric[best] - pt.energy)) if ok else None
        report.levels.append(LevelMatch(pt.n, pt.branch, pt.energy, float(numeric[best]), delta, ok))
    report.unmatched_numeric = [float(e) for e in numeric[~used]]
    return report
