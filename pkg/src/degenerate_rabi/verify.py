"""Self-checks bundled into one JSON-serializable report.

Each section returns ``{"status": "pass" | "fail" | "skipped", ...}`` with
the numbers that decided it.  A section that raises is reported as failed
with the exception text, so one broken stage never hides the others.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .bargmann import (Diverging, Finite, IndecisiveError, bargmann_norm_sq, eigenfunction_series,
                       gaussian_polynomial_series, norm_sq_adaptive)
from .eigenfunction import (build_eigenfunction, beta_coeffs, default_radii, degenerate_solution,
                            growth_order_type, ode_residual_second_order, ode_residual_system)
from .model import ModelParams, as_uplus
from .oracle import MatchReport, level_shifts, match_spectra, reliable_ceiling
from .spectrum import Branch, SpectralPoint, m_value, rho_value, solve_level
from .stokes import (characteristic_exponents, equivalence_check, multiplier_predicate,
                     quantization_predicate, saddle_points, whittaker_params)

SECTIONS = ("identities", "residuals", "norms", "growth", "whittaker", "oracle")

IDENTITY_TOL = 1e-12
RESIDUAL_TOL = 1e-10
NORM_STABILITY = 1e-10
ORDER_RANGE = (1.9, 2.1)
TYPE_REL = 0.05
MATCH_TOL = 1e-6
STAB_TOL = 1e-8


def residual_grid(half_width: float = 2.0, points: int = 5) -> np.ndarray:
    """points x points complex grid on [-w, w]^2."""
    t = np.linspace(-half_width, half_width, points)
    return (t[:, None] + 1j * t[None, :]).ravel()


def random_admissible_x(count: int, rng: np.random.Generator, span: float = 50.0) -> np.ndarray:
    """x with |x| > 1, half on each branch, log-spread in distance from the branch point."""
    dist = np.exp(rng.uniform(math.log(1e-6), math.log(span), count))
    sign = np.where(rng.random(count) < 0.5, -1.0, 1.0)
    return sign * (1.0 + dist)


def random_parameter_sets(count: int, rng: np.random.Generator) -> list[ModelParams]:
    """Random degenerate-coupling parameters, every fourth one at U = -2 omega.

    omega in [0.5, 2], omega0 in [-omega, 0.9 omega] before the reflection,
    and g^2 = f omega (omega - omega0) / 2 with f in [0.1, 2], so the Lower
    branch (f < 1/2 at omega0 = omega/2) is populated in some sets and empty
    in others.
    """
    sets = []
    for i in range(count):
        w = rng.uniform(0.5, 2.0)
        w0 = rng.uniform(-w, 0.9 * w)
        g = math.sqrt(rng.uniform(0.1, 2.0) * w * (w - w0) / 2)
        if i % 4 == 3:
            sets.append(ModelParams(w, -w0, g, -2.0 * w))
        else:
            sets.append(ModelParams.uplus(w, w0, g))
    return sets


def identity_errors(params: ModelParams, xs) -> dict[str, float]:
    """Largest relative error of each algebraic identity over ``xs``."""
    xs = np.asarray(xs, dtype=float)
    p, _ = as_uplus(params)
    m = m_value(p, xs)
    rho = rho_value(p, xs)
    err = {"m = -4 rho": float(np.max(np.abs(m + 4.0 * rho) / np.abs(m)))}
    prod, s_beta, prod_a, s_alpha, kappa, sums = [], [], [], [], [], []
    for x, r in zip(xs, rho):
        bp, bm = beta_coeffs(x)
        prod.append(abs(4.0 * bp * bm - 1.0))
        s_beta.append(abs(bp + bm - x) / abs(x))
        pair = saddle_points(x)
        prod_a.append(abs(4.0 * pair.alpha1 * pair.alpha2 - 1.0))
        s_alpha.append(abs(pair.alpha1 + pair.alpha2 + x) / abs(x))
        kappa.append(abs(whittaker_params(p, x).kappa - r) / abs(r))
        table = characteristic_exponents(float(r))
        s1, s2 = table.pair_sums()
        sums.append(max(abs(s1 + 1.5) / 1.5, abs(s2 + 0.5) / 0.5))
    err["beta+ beta- = 1/4"] = max(prod)
    err["beta+ + beta- = x"] = max(s_beta)
    err["4 alpha1 alpha2 = 1"] = max(prod_a)
    err["alpha1 + alpha2 = -x"] = max(s_alpha)
    err["kappa = rho"] = max(kappa)
    err["exponent pair sums"] = max(sums)
    # the exact version of the pair sums
    exact = characteristic_exponents(Fraction(-3, 4)).pair_sums()
    err["exponent pair sums (exact)"] = 0.0 if exact == (Fraction(-3, 2), Fraction(-1, 2)) else 1.0
    return err


def eigen_points(params: ModelParams, nmax: int, tau_root: float = 1e-12,
                 branches=(Branch.UPPER, Branch.LOWER)) -> list[SpectralPoint]:
    return [pt for b in branches for n in range(nmax + 1) for pt in solve_level(params, n, b, tol=tau_root)]


def max_residuals(params: ModelParams, point: SpectralPoint, z=None) -> tuple[float, float]:
    """(system residual, second-order residual) of the eigenfunction at ``point``."""
    z = residual_grid() if z is None else z
    reduced, _ = as_uplus(params)
    ef = build_eigenfunction(params, point)
    r1, r2 = ode_residual_system(reduced, point.energy, ef.psi1, ef.psi2, z)
    r3 = ode_residual_second_order(reduced, point.x, ef.psi1, z)
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2)))), float(np.max(np.abs(r3)))


def eigen_norms(params: ModelParams, point: SpectralPoint, kmax: int = 4000,
                rel_tol: float = 1e-13) -> list[dict]:
    """Norms of both components with their change under K -> 2K.

    K doubles from kmax/16 until the tail test returns Finite with a tail
    bound below ``rel_tol`` of the value; the norm at 2K <= kmax is then
    compared against it.  Components that never settle are reported with
    ``finite`` False and the reason.
    """
    ef = build_eigenfunction(params, point)
    out = []
    for idx in (0, 1):
        def norm(K, i=idx):
            return bargmann_norm_sq(eigenfunction_series(ef, K)[i])

        entry = {"component": idx + 1, "finite": False, "value": None, "change": math.inf,
                 "truncation": None, "reason": ""}
        K = max(kmax // 16, 1)
        while 2 * K <= kmax:
            try:
                a = norm(K)
            except IndecisiveError as exc:
                entry["reason"] = str(exc)
                K *= 2
                continue
            if isinstance(a, Diverging):
                entry["reason"] = a.reason
            elif a.tail_bound <= rel_tol * a.value:
                try:
                    b = norm(2 * K)
                except IndecisiveError as exc:
                    b = None
                    entry["reason"] = str(exc)
                if isinstance(b, Finite):
                    entry.update(finite=True, value=b.value, truncation=K, reason="",
                                 change=abs(b.value - a.value) / b.value)
                    break
            K *= 2
        out.append(entry)
    return out


def boundary_norms(params: ModelParams, kmax: int = 4000) -> list:
    reduced, _ = as_uplus(params)
    return [norm_sq_adaptive(lambda K, gp=gp: gaussian_polynomial_series(gp, K),
                             K0=min(256, kmax), K_max=kmax, rel_tol=None)
            for gp in degenerate_solution(reduced)]


def growth_check(params: ModelParams, point: SpectralPoint) -> dict:
    ef = build_eigenfunction(params, point)
    est = growth_order_type(ef, default_radii(ef.beta))
    target = abs(ef.beta.real)
    return {"n": point.n, "branch": point.branch.value, "order": est.order_hat,
            "type": est.type_hat, "type_target": target,
            "ok": ORDER_RANGE[0] <= est.order_hat <= ORDER_RANGE[1]
            and abs(est.type_hat - target) <= TYPE_REL * target}


def whittaker_grid(branch: Branch, count: int = 1000) -> np.ndarray:
    dist = np.geomspace(1e-3, 1e3, count)
    return branch.sign * (1.0 + dist)


def whittaker_agreement(params: ModelParams, points, count: int = 1000) -> dict:
    """Pointwise agreement on x-grids plus a positive check at every root."""
    reduced, _ = as_uplus(params)
    disagree = 0
    total = 0
    for branch in Branch:
        for x in whittaker_grid(branch, count):
            total += 1
            disagree += not equivalence_check(reduced, float(x))
    roots_ok = all(multiplier_predicate(reduced, pt.x) and quantization_predicate(reduced, pt.x)
                   for pt in points)
    return {"grid_points": total, "disagreements": disagree, "roots_checked": len(points),
            "roots_ok": roots_ok}


def oracle_report(params: ModelParams, nmax: int, cutoff: int, branches=(Branch.UPPER, Branch.LOWER),
                  tau_root: float = 1e-12, match_tol: float = MATCH_TOL,
                  stab_tol: float = STAB_TOL) -> MatchReport:
    """Match analytic levels below the reliability ceiling against the N = cutoff spectrum.

    Stability is judged against the N = cutoff - 100 truncation.
    """
    ceiling = reliable_ceiling(params, cutoff)
    analytic = [pt for pt in eigen_points(params, nmax, tau_root, branches) if pt.energy < ceiling]
    shifts = level_shifts(params, max(cutoff - 100, 0), cutoff, (-np.inf, ceiling), stab_tol)
    return match_spectra(analytic, shifts.energies, match_tol, shifts.stabilized)


def oracle_passes(report: MatchReport) -> bool:
    """Upper levels must all match; Lower levels only where the truncation has stabilized."""
    for lv in report.levels:
        if lv.branch is Branch.UPPER and lv.delta is None:
            return False
        if lv.delta is not None and lv.delta > MATCH_TOL:
            return False
    return True


def _section(fn):
    try:
        return fn()
    except Exception as exc:  # reported, not raised
        return {"status": "fail", "error": f"{type(exc).__name__}: {exc}"}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def run_verification(params: ModelParams, nmax: int = 5, cutoff: int = 400, kmax: int = 4000,
                     tau_root: float = 1e-12, skip=(), seed: int = 0) -> dict:
    """Run every section and collect a report; sections listed in ``skip`` are marked skipped."""
    as_uplus(params)
    points_cache: list = []

    def points():
        if not points_cache:
            points_cache.extend(eigen_points(params, nmax, tau_root))
        return points_cache

    def identities():
        err = identity_errors(params, random_admissible_x(10_000, np.random.default_rng(seed)))
        return {"status": _status(max(err.values()) <= IDENTITY_TOL), "max_rel_error": err}

    def residuals():
        rows = []
        for pt in points():
            sys_r, second = max_residuals(params, pt)
            rows.append({"n": pt.n, "branch": pt.branch.value, "system": sys_r, "second_order": second})
        worst = max([max(r["system"], r["second_order"]) for r in rows], default=0.0)
        return {"status": _status(bool(rows) and worst <= RESIDUAL_TOL), "max": worst, "levels": rows}

    def norms():
        rows = []
        ok = True
        for pt in points():
            for entry in eigen_norms(params, pt, kmax):
                entry.update(n=pt.n, branch=pt.branch.value)
                ok &= entry["finite"] and entry["change"] < NORM_STABILITY
                rows.append(entry)
        boundary = boundary_norms(params, kmax)
        ok &= all(isinstance(b, Diverging) for b in boundary)
        return {"status": _status(ok), "levels": rows,
                "boundary": ["Diverging" if isinstance(b, Diverging) else "Finite" for b in boundary]}

    def growth():
        rows = [growth_check(params, pt) for pt in points()]
        return {"status": _status(all(r["ok"] for r in rows)), "levels": rows}

    def whittaker():
        res = whittaker_agreement(params, points())
        res["status"] = _status(res["disagreements"] == 0 and res["roots_ok"])
        return res

    def oracle():
        report = oracle_report(params, nmax, cutoff, tau_root=tau_root)
        out = report.to_dict()
        out["status"] = _status(oracle_passes(report))
        out["max_delta"] = report.max_delta
        out["note"] = "Lower levels count only where N-100 -> N moved them by less than 1e-8"
        return out

    funcs = {"identities": identities, "residuals": residuals, "norms": norms,
             "growth": growth, "whittaker": whittaker, "oracle": oracle}
    sections = {}
    for name in SECTIONS:
        sections[name] = {"status": "skipped"} if name in skip else _section(funcs[name])
    failures = [name for name in SECTIONS if sections[name]["status"] == "fail"]
    return {
        "params": {"omega": params.omega, "omega0": params.omega0, "g": params.g, "u": params.u},
        "settings": {"nmax": nmax, "cutoff": cutoff, "kmax": kmax, "tau_root": tau_root},
        "sections": sections,
        "passed": not failures,
        "first_failure": failures[0] if failures else None,
    }
