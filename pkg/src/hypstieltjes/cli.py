"""Command-line front end.

Subcommands::

    eval      F(sigma, A; B; -z) at one or more points
    density   rho, rho1, mu, phi or Phi_eps on a grid
    moments   quadrature vs closed-form power moments of rho
    pade      [m+j/m] approximants, normality table, convergence curve
    verify    run verification suites and emit a JSON report

Exit codes: 0 success or all checks passed, 1 a verification failed,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .gdensity import DEFAULT_CONFIG, GKernelSpec, QuadratureConfig, mellin_moments
from .hypeval import ConvergenceError, DomainError
from .params import ParameterError, ParameterSet
from .pade import HankelError, convergence_check, normality_check, pade
from .quadrature import QuadratureError
from .stieltjes import density_export, density_csv, hypergeometric, phi_epsilon
from .verify import SUITES, _clean, verify_suite

__all__ = ["RunConfig", "build_parser", "parse_complex", "parse_grid", "run", "main"]

CSV_HELP = """\
CSV columns:
  eval      z_re, z_im, value_re, value_im
  density   x, value, error   (error is the quadrature error estimate)
  moments   k, quadrature, closed_form, rel_error
  pade      m, j, z, value, reference, abs_error   (convergence curve)
"""


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """``"1"``, ``"0.5-2i"``, ``"3i"``, ``"-i"`` and ``"1e-3+2e1j"``."""
    t = text.strip().replace(" ", "")
    try:
        return complex(float(t))
    except ValueError:
        pass
    try:
        return complex(t.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def _vector(text: str) -> tuple:
    try:
        vals = tuple(parse_complex(v) for v in text.split(",") if v.strip())
    except UsageError as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from exc
    if not vals:
        raise UsageError("empty parameter vector")
    return tuple(v.real if v.imag == 0 else v for v in vals)


def parse_grid(text: str) -> np.ndarray:
    """``lo:hi:n`` to ``n`` evenly spaced points."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}") from exc
    if n < 1 or not lo <= hi:
        raise UsageError("grid needs n >= 1 and lo <= hi")
    return np.linspace(lo, hi, n)


@dataclass
class RunConfig:
    command: str
    sigma: object = None
    a: tuple = ()
    b: tuple = ()
    z: tuple = ()
    grid: str | None = None
    kind: str = "rho"
    epsilon: float | None = None
    m: int = 5
    j: int = 0
    suite: tuple = ("all",)
    seed: int = 0
    format: str | None = None
    out: str | None = None
    timings: bool = False
    quadrature: dict = field(default_factory=dict)

    def parameter_set(self) -> ParameterSet:
        if self.sigma is None or not self.a or not self.b:
            raise UsageError("--sigma, --a and --b are required")
        return ParameterSet(self.sigma, self.a, self.b)

    def quadrature_config(self) -> QuadratureConfig:
        return replace(DEFAULT_CONFIG, **self.quadrature)

    def to_dict(self) -> dict:
        return _clean(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)

        def unpack(v):
            return complex(*v) if isinstance(v, list) else v

        d["sigma"] = unpack(d.get("sigma"))
        for key in ("a", "b", "z", "suite"):
            d[key] = tuple(unpack(v) for v in d.get(key, ()))
        return cls(**d)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hypstieltjes",
        description="Generalized hypergeometric functions through their Stieltjes representation.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, params=True):
        if params:
            sp.add_argument("--sigma", help="Stieltjes exponent (real or complex, e.g. 0.5 or 1+0.2i)")
            sp.add_argument("--a", help="upper parameters, comma separated")
            sp.add_argument("--b", help="lower parameters, comma separated")
        sp.add_argument("--format", choices=("json", "csv"), help="output format (default: plain text or per command)")
        sp.add_argument("--out", help="write output to this path instead of stdout")
        g = sp.add_argument_group("quadrature overrides")
        g.add_argument("--tol-abs", type=float, help=f"absolute tolerance (default {DEFAULT_CONFIG.abs_tol:g})")
        g.add_argument("--tol-rel", type=float, help=f"relative tolerance (default {DEFAULT_CONFIG.rel_tol:g})")
        g.add_argument("--contour-c", type=float, help="contour abscissa c (default chosen from the parameters)")
        g.add_argument("--contour-T", type=float, help=f"contour truncation height (default {DEFAULT_CONFIG.truncation_height:g})")

    e = sub.add_parser("eval", help="evaluate F(sigma, A; B; -z)")
    common(e)
    e.add_argument("--z", action="append", help="point as re+imi; repeat or comma separate")
    e.add_argument("--grid", help="real points lo:hi:n")

    d = sub.add_parser("density", help="export a density on a grid")
    common(d)
    d.add_argument("--kind", choices=("rho", "rho1", "mu", "phi", "phi-eps"), default="rho")
    d.add_argument("--grid", required=True, help="lo:hi:n")
    d.add_argument("--epsilon", type=float, help="epsilon for --kind phi-eps")

    mo = sub.add_parser("moments", help="power moments of rho, quadrature vs closed form")
    common(mo)
    mo.add_argument("--m", type=int, default=15, help="highest moment index")

    pa = sub.add_parser("pade", help="Pade table of F(sigma, A; B; -z)")
    common(pa)
    pa.add_argument("--m", type=int, default=5, help="largest denominator degree")
    pa.add_argument("--j", type=int, default=0, help="numerator excess: [m+j/m]")
    pa.add_argument("--z", action="append", help="points for the convergence curve")

    v = sub.add_parser("verify", help="run verification suites")
    common(v, params=False)
    v.add_argument("--suite", default="all", help="comma separated from: all, " + ", ".join(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--timings", action="store_true", help="record suite runtimes (reports then differ run to run)")
    return p


def _points(values) -> tuple:
    out = []
    for v in values or ():
        out.extend(parse_complex(s) for s in v.split(",") if s.strip())
    return tuple(out)


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    quad = {}
    if ns.tol_abs is not None:
        quad["abs_tol"] = ns.tol_abs
    if ns.tol_rel is not None:
        quad["rel_tol"] = ns.tol_rel
    if ns.contour_c is not None:
        quad["contour_offset"] = ns.contour_c
    if ns.contour_T is not None:
        quad["truncation_height"] = ns.contour_T
    cfg = RunConfig(command=ns.command, format=ns.format, out=ns.out, quadrature=quad)
    if ns.command != "verify":
        if ns.sigma is None or ns.a is None or ns.b is None:
            raise UsageError("--sigma, --a and --b are required")
        s = parse_complex(ns.sigma)
        cfg.sigma = s.real if s.imag == 0 else s
        cfg.a, cfg.b = _vector(ns.a), _vector(ns.b)
    if ns.command in ("eval", "pade"):
        cfg.z = _points(ns.z)
    if ns.command in ("eval", "density"):
        cfg.grid = ns.grid
    if ns.command == "density":
        cfg.kind, cfg.epsilon = ns.kind, ns.epsilon
        if ns.kind == "phi-eps" and ns.epsilon is None:
            raise UsageError("--kind phi-eps needs --epsilon")
    if ns.command in ("moments", "pade"):
        cfg.m = ns.m
    if ns.command == "pade":
        cfg.j = ns.j
    if ns.command == "verify":
        cfg.suite = tuple(s.strip() for s in ns.suite.split(",") if s.strip())
        cfg.seed, cfg.timings = ns.seed, ns.timings
        bad = [s for s in cfg.suite if s != "all" and s not in SUITES]
        if bad:
            raise UsageError(f"unknown suite(s): {', '.join(bad)}")
    return cfg


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _records(text: str) -> list:
    rows = list(csv.reader(io.StringIO(text)))
    return [dict(zip(rows[0], map(float, r))) for r in rows[1:]]


def _json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _cmd_eval(rc: RunConfig) -> tuple[str, int]:
    P, qc = rc.parameter_set(), rc.quadrature_config()
    pts = list(rc.z)
    if rc.grid:
        pts.extend(complex(x) for x in parse_grid(rc.grid))
    if not pts:
        raise UsageError("eval needs --z or --grid")
    z = np.array(pts)
    real = bool(np.all(z.imag == 0)) and P.is_real
    vals = np.atleast_1d(hypergeometric(P, -(z.real if real else z), qc))
    if rc.format == "json":
        return _json({"parameters": P.to_dict(), "z": [complex(v) for v in z], "value": [complex(v) for v in vals]}), 0
    if rc.format == "csv":
        rows = [(float(zz.real), float(zz.imag), float(np.real(v)), float(np.imag(v))) for zz, v in zip(z, vals)]
        return _csv(("z_re", "z_im", "value_re", "value_im"), rows), 0
    lines = [repr(float(np.real(v))) if real else repr(complex(v)) for v in vals]
    return "\n".join(lines) + "\n", 0


def _cmd_density(rc: RunConfig) -> tuple[str, int]:
    P, qc = rc.parameter_set(), rc.quadrature_config()
    xs = parse_grid(rc.grid)
    if rc.kind == "phi-eps":
        v = np.real(phi_epsilon(xs, rc.epsilon, P, qc))
        text = density_csv([(float(x), float(y), float(abs(y) * qc.rel_tol)) for x, y in zip(xs, v)])
    else:
        text = density_export(rc.kind, P, xs, qc)
    if rc.format == "json":
        return _json({"parameters": P.to_dict(), "kind": rc.kind, "rows": _records(text)}), 0
    return text, 0


def _cmd_moments(rc: RunConfig) -> tuple[str, int]:
    P, qc = rc.parameter_set(), rc.quadrature_config()
    if rc.m < 0:
        raise UsageError("--m must be nonnegative")
    ks = np.arange(rc.m + 1)
    quad, exact = mellin_moments(GKernelSpec(P.b, P.a), ks, qc)
    rows = [(int(k), float(np.real(q)), float(np.real(e)), float(abs(q - e) / abs(e))) for k, q, e in zip(ks, quad, exact)]
    if rc.format == "json":
        keys = ("k", "quadrature", "closed_form", "rel_error")
        return _json({"parameters": P.to_dict(), "moments": [dict(zip(keys, r)) for r in rows]}), 0
    return _csv(("k", "quadrature", "closed_form", "rel_error"), rows), 0


def _cmd_pade(rc: RunConfig) -> tuple[str, int]:
    P, qc = rc.parameter_set(), rc.quadrature_config()
    if rc.m < 1:
        raise UsageError("--m must be at least 1")
    curve = []
    for zz in rc.z:
        zr = zz.real if zz.imag == 0 else zz
        ref = complex(hypergeometric(P, -np.asarray(zr), qc))
        errs = convergence_check(P, zr, rc.m, rc.j, reference=ref, cfg=qc)
        for m, err in enumerate(errs, start=1):
            val = complex(pade(P, m, rc.j)(zr))
            curve.append((m, rc.j, zz, val, ref, float(err)))
    if rc.format == "csv":
        if not curve:
            raise UsageError("CSV output is the convergence curve; give --z")
        rows = [(m, j, str(z), str(v), str(r), e) for m, j, z, v, r, e in curve]
        return _csv(("m", "j", "z", "value", "reference", "abs_error"), rows), 0
    nc = normality_check(P, rc.m, rc.m)
    table = [pade(P, m, rc.j).to_dict() for m in range(1, rc.m + 1)]
    out = {
        "parameters": P.to_dict(),
        "approximants": table,
        "normality": {"normal": nc["normal"], "all_normal": nc["all_normal"], "duplicates": nc["duplicates"], "min_scaled_det": nc["min_scaled_det"]},
        "convergence": [{"m": m, "j": j, "z": z, "value": v, "reference": r, "abs_error": e} for m, j, z, v, r, e in curve],
    }
    return _json(out), 0


def _cmd_verify(rc: RunConfig) -> tuple[str, int]:
    rep = verify_suite(rc.suite, rc.seed, rc.quadrature_config(), timings=rc.timings)
    if rc.format == "csv":
        rows = [(e["theorem"], e["check"], e["status"], e["worst_margin"], e["threshold"], e["seed"]) for e in rep.entries]
        return _csv(("theorem", "check", "status", "worst_margin", "threshold", "seed"), rows), 0 if rep.all_passed else 1
    return rep.to_json() + "\n", 0 if rep.all_passed else 1


COMMANDS = {"eval": _cmd_eval, "density": _cmd_density, "moments": _cmd_moments, "pade": _cmd_pade, "verify": _cmd_verify}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the command and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rc = config_from_args(ns)
        text, code = COMMANDS[rc.command](rc)
    except (UsageError, ParameterError, DomainError, ValueError) as exc:
        print(f"{parser.prog} {ns.command}: error: {exc}", file=stderr)
        return 2
    except (QuadratureError, ConvergenceError, HankelError) as exc:
        print(f"{parser.prog} {ns.command}: numerical failure: {exc}", file=stderr)
        return 1
    if rc.out:
        with open(rc.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
