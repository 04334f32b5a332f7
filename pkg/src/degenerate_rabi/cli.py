"""Command line front end: ``python -m degenerate_rabi <command> ...``.

Exit codes: 0 success, 1 I/O or invalid configuration, 2 coupling outside
U = +-2 omega, 3 empty spectrum request, 4 verification failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import verify
from .bargmann import (Diverging, IndecisiveError, eigenfunction_series, gaussian_polynomial_series,
                       norm_sq_adaptive)
from .eigenfunction import build_eigenfunction, degenerate_solution, ode_residual_system
from .model import ModelParams, OutOfScopeError, as_uplus, x_to_e
from .spectrum import Branch, SpectralKind, classify_energy, fmt, m_value, solve_level, spectrum_sweep
from .stokes import multiplier_vanishes, whittaker_params

EXIT_OK, EXIT_IO, EXIT_SCOPE, EXIT_EMPTY, EXIT_VERIFY = 0, 1, 2, 3, 4


class ConfigError(ValueError):
    pass


class EmptySpectrumError(LookupError):
    pass


def parse_range(text: str) -> np.ndarray:
    """``start:stop:step``, endpoints included within half a step; a bare number is one point."""
    parts = text.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}") from exc
    if len(values) == 1:
        return np.array(values)
    if len(values) != 3:
        raise ConfigError(f"range must be start:stop:step, got {text!r}")
    start, stop, step = values
    if step <= 0 or stop < start:
        raise ConfigError(f"range {text!r} needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return start + step * np.arange(count)


@dataclass
class RunConfig:
    command: str
    omega: float = 1.0
    omega0: float = 0.5
    g: float = 1.0
    u: float | None = None
    g_range: np.ndarray | None = None
    nmax: int = 5
    branch: str = "both"
    energy: float | None = None
    n: int = 0
    cutoff: int = 400
    kmax: int = 4000
    tau_root: float = 1e-12
    z_re: np.ndarray = field(default_factory=lambda: np.array([0.0]))
    z_im: np.ndarray = field(default_factory=lambda: np.array([0.0]))
    out: str = "-"
    format: str | None = None
    skip: tuple = ()

    def __post_init__(self):
        if self.u is None:
            self.u = 2.0 * self.omega
        if self.nmax < 0 or self.n < 0 or self.cutoff < 1 or self.kmax < 1:
            raise ConfigError("counts and cutoffs must be non-negative")
        if self.tau_root <= 0:
            raise ConfigError("tolerances must be positive")
        if self.g_range is not None and self.g_range.size == 0:
            raise ConfigError("empty coupling grid")

    @property
    def params(self) -> ModelParams:
        try:
            return ModelParams(self.omega, self.omega0, self.g, self.u)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def branches(self) -> tuple[Branch, ...]:
        if self.branch == "both":
            return (Branch.UPPER, Branch.LOWER)
        return (Branch(self.branch),)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="degenerate_rabi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--omega", type=float, default=1.0)
    common.add_argument("--omega0", type=float, default=0.5)
    common.add_argument("--g", type=float, default=1.0)
    common.add_argument("--u", type=float, default=None, help="defaults to +2 omega")
    common.add_argument("--out", default="-", help="output file, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--tau-root", type=float, default=1e-12)

    p = sub.add_parser("spectrum", parents=[common], help="quantized levels over a g grid")
    p.add_argument("--g-range", type=parse_range, default=None)
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--branch", choices=("upper", "lower", "both"), default="both")

    p = sub.add_parser("classify", parents=[common], help="classify one energy")
    p.add_argument("--energy", type=float, required=True)

    p = sub.add_parser("eigenfunction", parents=[common], help="sample psi_1, psi_2 on a grid")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--branch", choices=("upper", "lower"), default="upper")
    p.add_argument("--z-re", type=parse_range, default=np.array([0.0]))
    p.add_argument("--z-im", type=parse_range, default=np.array([0.0]))

    p = sub.add_parser("norm", parents=[common], help="Bargmann norm of an eigenfunction")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--branch", choices=("upper", "lower", "boundary"), default="upper")
    p.add_argument("--kmax", type=int, default=4000)

    p = sub.add_parser("oracle", parents=[common], help="match against the truncated Hamiltonian")
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--branch", choices=("upper", "lower", "both"), default="both")
    p.add_argument("--cutoff", type=int, default=400)

    p = sub.add_parser("verify", parents=[common], help="run all verification sections")
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--cutoff", type=int, default=400)
    p.add_argument("--kmax", type=int, default=4000)
    p.add_argument("--skip", action="append", default=[], choices=verify.SECTIONS)
    return parser


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None or k == "u"}
    if "skip" in values:
        values["skip"] = tuple(values["skip"])
    return RunConfig(**values)


@contextlib.contextmanager
def _sink(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _dump_json(obj, path: str):
    with _sink(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _num(v):
    """JSON numbers carried as 17-significant-digit floats."""
    return None if v is None else float(fmt(v))


def cmd_spectrum(cfg: RunConfig) -> int:
    grid = cfg.g_range if cfg.g_range is not None else np.array([cfg.g])
    base = cfg.params
    as_uplus(base)
    table = spectrum_sweep(base, list(grid), cfg.nmax, cfg.branches(), tol=cfg.tau_root)
    with _sink(cfg.out) as fh:
        table.to_csv(fh)
    summary = ", ".join(f"{b}: {c} roots" for b, c in table.counts().items())
    print(summary, file=sys.stderr)
    return EXIT_OK


def classification_summary(params: ModelParams, energy: float) -> dict:
    cls = classify_energy(params, energy)
    out = {"E": _num(energy), "x": _num(cls.x), "class": cls.kind.value,
           "nearest_level": None, "whittaker": None}
    if abs(cls.x) > 1.0 and cls.kind is not SpectralKind.BOUNDARY:
        branch = Branch.of(cls.x)
        value = branch.sign * m_value(params, cls.x)
        n = max(int(round((value - 1.0) / 2.0)), 0)
        out["nearest_level"] = {"n": n, "branch": branch.value,
                                "residual": _num(value - (2 * n + 1))}
        wp = whittaker_params(params, cls.x)
        alpha, beta = multiplier_vanishes(wp)
        out["whittaker"] = {"kappa": _num(wp.kappa), "mu": wp.mu,
                            "alpha_vanishes": alpha, "beta_vanishes": beta}
    return out


def cmd_classify(cfg: RunConfig) -> int:
    _dump_json(classification_summary(cfg.params, cfg.energy), cfg.out)
    return EXIT_OK


def _first_level(params: ModelParams, n: int, branch: Branch, tol: float):
    points = solve_level(params, n, branch, tol=tol)
    if not points:
        raise EmptySpectrumError(f"no root for n={n} on the {branch.value} branch")
    return points[0]


def cmd_eigenfunction(cfg: RunConfig) -> int:
    params = cfg.params
    reduced, _ = as_uplus(params)
    point = _first_level(params, cfg.n, Branch(cfg.branch), cfg.tau_root)
    ef = build_eigenfunction(params, point)
    z = (cfg.z_re[:, None] + 1j * cfg.z_im[None, :]).ravel()
    r1, r2 = ode_residual_system(reduced, point.energy, ef.psi1, ef.psi2, z)
    worst = float(np.max(np.abs(np.concatenate([r1, r2]))))
    psi1, psi2 = ef.components(z)
    with _sink(cfg.out) as fh:
        fh.write(f"# n={cfg.n} branch={cfg.branch} x={fmt(point.x)} E={fmt(point.energy)} "
                 f"max_ode_residual={fmt(worst)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["re_z", "im_z", "re_psi1", "im_psi1", "re_psi2", "im_psi2"])
        for zi, a, b in zip(z, psi1, psi2):
            writer.writerow([fmt(v) for v in (zi.real, zi.imag, a.real, a.imag, b.real, b.imag)])
    return EXIT_OK


def _norm_json(result) -> dict:
    if isinstance(result, Diverging):
        return {"status": "Diverging", "evidence": _num(result.evidence), "reason": result.reason}
    return {"status": "Finite", "value": _num(result.value), "tail_bound": _num(result.tail_bound)}


def cmd_norm(cfg: RunConfig) -> int:
    params = cfg.params
    if cfg.branch == "boundary":
        report = {"branch": "boundary", "x": 1.0, "E": _num(x_to_e(params, 1.0))}
        pair = degenerate_solution(as_uplus(params)[0])
        names = ("psi2", "psi1") if as_uplus(params)[1] else ("psi1", "psi2")
        for name, gp in zip(names, pair):
            result = norm_sq_adaptive(lambda K, gp=gp: gaussian_polynomial_series(gp, K),
                                      K0=min(256, cfg.kmax), K_max=cfg.kmax, rel_tol=None)
            report[name] = _norm_json(result)
    else:
        point = _first_level(params, cfg.n, Branch(cfg.branch), cfg.tau_root)
        ef = build_eigenfunction(params, point)
        report = {"branch": cfg.branch, "n": cfg.n, "x": _num(point.x), "E": _num(point.energy)}
        for idx, name in ((0, "psi1"), (1, "psi2")):
            if ef.swap:
                name = {"psi1": "psi2", "psi2": "psi1"}[name]
            result = norm_sq_adaptive(lambda K, i=idx: eigenfunction_series(ef, K)[i],
                                      K0=min(256, cfg.kmax), K_max=cfg.kmax)
            report[name] = _norm_json(result)
    _dump_json(report, cfg.out)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    report = verify.oracle_report(cfg.params, cfg.nmax, cfg.cutoff, cfg.branches(), cfg.tau_root)
    payload = report.to_dict()
    for lv in payload["levels"]:
        for key in ("E_analytic", "E_numeric", "delta"):
            lv[key] = _num(lv[key])
    payload["unmatched_numeric"] = [_num(e) for e in payload["unmatched_numeric"]]
    _dump_json(payload, cfg.out)
    return EXIT_OK if verify.oracle_passes(report) else EXIT_VERIFY


def cmd_verify(cfg: RunConfig) -> int:
    report = verify.run_verification(cfg.params, nmax=cfg.nmax, cutoff=cfg.cutoff, kmax=cfg.kmax,
                                     tau_root=cfg.tau_root, skip=cfg.skip)
    _dump_json(report, cfg.out)
    if not report["passed"]:
        print(f"verification failed in section {report['first_failure']}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "eigenfunction": cmd_eigenfunction,
    "norm": cmd_norm,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg)
    except OutOfScopeError as exc:
        print(f"out of scope: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except EmptySpectrumError as exc:
        print(f"empty spectrum: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ConfigError, IndecisiveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
