"""Verification suites and the versioned report they produce.

Each suite runs a group of checks with its own seeded generator, so a
``(selection, seed)`` pair always yields the same report.  Suites run in a
thread pool capped by ``STIELTJES_HYP_THREADS``; entries are assembled in
a fixed order afterwards.
"""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate

from . import analysis as an
from .gdensity import (
    DEFAULT_CONFIG,
    GKernelSpec,
    QuadratureConfig,
    closed_form_q1,
    closed_form_q2,
    endpoint_slope,
    laplace_identity_check,
    meijer_g,
    mellin_moments,
    multidim_oracle,
    vanish_check,
)
from .hypeval import contiguous_shift, eval_series
from .pade import convergence_check, moments as pade_moments, normality_check, pade
from .params import (
    ParameterSet,
    chain_condition,
    elementary_symmetric,
    random_supermajorized,
)
from .stieltjes import (
    density_mu,
    eval_stieltjes,
    exact_order_test,
    hypergeometric,
    limit_measure_q2,
    power_denominator_rep,
    rho1_spec,
)

__all__ = ["SCHEMA_VERSION", "SUITES", "TOLERANCES", "VerificationReport", "verify_suite", "thread_cap"]

SCHEMA_VERSION = "1.0"

# one block of default thresholds, echoed into every report
TOLERANCES = {
    "moments_rel": 1e-6,
    "kernel_rel": 1e-6,
    "monte_carlo_se": 3.0,
    "vanish_abs": 1e-6,
    "nonneg_abs": 1e-8,
    "representation_rel": 1e-7,
    "continuation_abs": 1e-8,
    "order_rel": 0.05,
    "limit_measure_rel": 1e-6,
    "corollary_rel": 1e-5,
    "equality_at_zero": 1e-12,
    "pade_order": 1e-9,
    "pade_orthogonality": 1e-8,
    "pade_error_m8": 1e-6,
    "laplace_rel": 1e-5,
    "sector_im": 1e-12,
}


@dataclass
class VerificationReport:
    seed: int
    selection: list
    entries: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    @property
    def failed(self) -> list:
        return [e for e in self.entries if e["status"] == "fail"]

    @property
    def all_passed(self) -> bool:
        return not self.failed

    def to_dict(self) -> dict:
        counts = {s: sum(e["status"] == s for e in self.entries) for s in ("pass", "fail", "advisory")}
        return {
            "schema_version": self.schema_version,
            "seed": self.seed,
            "selection": list(self.selection),
            "config": self.config,
            "tolerances": self.tolerances,
            "summary": counts,
            "all_passed": self.all_passed,
            "entries": self.entries,
        }

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict()), indent=2, sort_keys=True)


def _clean(obj):
    """Plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


def _entry(theorem: str, check: str, passed, measured, threshold, config=None, seed=None, details=None, advisory=False) -> dict:
    status = "advisory" if advisory else ("pass" if passed else "fail")
    return {
        "theorem": theorem,
        "check": check,
        "status": status,
        "worst_margin": measured,
        "threshold": threshold,
        "config": config or {},
        "seed": seed,
        "details": details or {},
    }


def _rng(seed: int, suite: str) -> np.random.Generator:
    # independent stream per suite, stable across runs and selections
    return np.random.default_rng([seed, sum(ord(c) * 31**i for i, c in enumerate(suite)) % (2**32)])


def _families(rng, qs, n, **kw):
    out = []
    for q in qs:
        for _ in range(n):
            a, b = random_supermajorized(rng, q, **kw)
            out.append((tuple(map(float, a)), tuple(map(float, b))))
    return out


# ---------------------------------------------------------------------------
# suites


def _suite_moments(seed, cfg):
    rng = _rng(seed, "moments")
    ks = np.arange(16)
    entries = []
    worst, fams = 0.0, _families(rng, (1, 2, 3), 10)
    for a, b in fams:
        quad, exact = mellin_moments(GKernelSpec(b, a), ks, cfg)
        worst = max(worst, float(np.max(np.abs(quad - exact) / np.abs(exact))))
    tol = TOLERANCES["moments_rel"]
    entries.append(_entry("moment-identity", "quadrature vs gamma ratios, k=0..15", worst <= tol, worst, tol, {"families": fams}, seed))

    s = np.linspace(0.05, 0.95, 19)
    worst = 0.0
    cases = []
    for _ in range(5):
        a1, a2 = rng.uniform(0.3, 3.0, 2)
        b1, b2 = a1 + rng.uniform(0.2, 2.0), a2 + rng.uniform(0.2, 2.0)
        g1 = meijer_g(s, GKernelSpec([b1], [a1]), cfg)
        e1 = np.max(np.abs(g1 - closed_form_q1(s, a1, b1)) / np.abs(g1))
        g2 = meijer_g(s, GKernelSpec([b1, b2], [a1, a2]), cfg)
        e2 = np.max(np.abs(g2 - closed_form_q2(s, a1, a2, b1, b2)) / np.abs(g2))
        worst = max(worst, float(e1), float(e2))
        cases.append([a1, a2, b1, b2])
    tol = TOLERANCES["kernel_rel"]
    entries.append(_entry("g-kernel-definition", "q=1,2 closed forms vs contour", worst <= tol, worst, tol, {"cases": cases}, seed))

    a, b, x = (1.0, 1.5, 2.0), (2.0, 2.5, 3.5), 0.4
    mean, se = multidim_oracle(x, a, b, seed=seed)
    g = float(meijer_g(x, GKernelSpec(b, a), cfg))
    z = abs(mean - g) / se
    k = TOLERANCES["monte_carlo_se"]
    entries.append(
        _entry("multidimensional-integral", "q=3 contour vs Monte Carlo", z <= k, z, k, {"A": a, "B": b, "x": x}, seed, {"contour": g, "mc_mean": mean, "mc_se": se})
    )
    return entries


def _suite_vanish(seed, cfg):
    rng = _rng(seed, "vanish")
    xs = np.array([1.1, 1.5, 2.0, 10.0])
    worst, monotone, fams = 0.0, True, _families(rng, (1, 2, 3), 4)[:10]
    for a, b in fams:
        r = vanish_check(xs, GKernelSpec(b, a), cfg)
        worst = max(worst, float(r.max()))
        monotone &= bool(np.all(np.diff(r) <= 0))
    tol = TOLERANCES["vanish_abs"]
    entries = [
        _entry("vanishing-lemma", "|G(x)| for x>1, residual decreasing", worst <= tol and monotone, worst, tol, {"families": fams, "x": xs}, seed, {"monotone": monotone})
    ]
    # leading power at the origin: local slope approaches min(bottom)
    worst = 0.0
    for a, b in fams[:4]:
        spec = GKernelSpec(b, a)
        expo, mult = spec.zero_exponent
        if mult != 1:
            continue
        sl = endpoint_slope(spec, np.array([1e-9, 2e-9]), cfg)[0]
        worst = max(worst, abs(sl - expo))
    entries.append(_entry("g-asymptotics-zero", "local slope at 1e-9 vs leading exponent", worst <= 1e-2, worst, 1e-2, {"families": fams[:4]}, seed))
    return entries


def _suite_nonneg(seed, cfg):
    rng = _rng(seed, "nonneg")
    xs = np.sort(rng.uniform(1e-4, 1 - 1e-4, 1000))
    worst, fams = math.inf, _families(rng, (2, 3), 10)
    for a, b in fams:
        worst = min(worst, float(np.min(meijer_g(xs, GKernelSpec(b, a), cfg))))
    tol = TOLERANCES["nonneg_abs"]
    entries = [_entry("nonnegativity-lemma", "min G over 1000 sampled x", worst >= -tol, worst, -tol, {"families": fams}, seed)]
    worst, fams = 0.0, _families(rng, (1, 2, 3), 2)[:5]
    for a, b in fams:
        for x in (0.5, 1.0, 2.0, 5.0):
            worst = max(worst, laplace_identity_check(x, a, b, cfg))
    tol = TOLERANCES["laplace_rel"]
    entries.append(_entry("laplace-remark", "gamma ratio vs Laplace integral", worst <= tol, worst, tol, {"families": fams}, seed))
    return entries


def _suite_representation(seed, cfg):
    rng = _rng(seed, "representation")
    fams = _families(rng, (1, 2, 3), 2)
    r = 0.8 * np.sqrt(rng.uniform(0, 1, 400))
    z = r * np.exp(2j * math.pi * rng.uniform(0, 1, 400))
    worst = 0.0
    for i, (a, b) in enumerate(fams):
        P = ParameterSet(float(rng.uniform(0.2, 2.0)), a, b)
        zi = z[i::len(fams)]
        ref = eval_series(P, -zi).value
        worst = max(worst, float(np.max(np.abs(eval_stieltjes(P, zi, cfg) - ref) / np.abs(ref))))
    tol = TOLERANCES["representation_rel"]
    entries = [_entry("stieltjes-representation", "integral vs series on |z|<=0.8", worst <= tol, worst, tol, {"families": fams}, seed)]
    err = abs(float(eval_stieltjes(ParameterSet(1, [1], [2]), 9.0, cfg)) - math.log(10) / 9)
    tol = TOLERANCES["continuation_abs"]
    entries.append(_entry("stieltjes-representation", "continuation at z=9 vs ln(10)/9", err <= tol, err, tol, {"sigma": 1, "A": [1], "B": [2]}, seed))

    # mu-form on (1, inf) reproduces the same function
    P = ParameterSet(0.7, [1.2, 0.5], [2.1, 1.3])
    worst = 0.0
    for zz in (0.5, 3.0):
        val, _ = integrate.quad(lambda t: float(density_mu(t, P, cfg)[0]) / (t + zz) ** P.sigma, 1.0, np.inf, epsabs=1e-12, epsrel=1e-10, limit=200)
        ref = eval_stieltjes(P, zz, cfg)
        worst = max(worst, abs(val - ref) / abs(ref))
    entries.append(_entry("mu-representation", "mu-form integral vs rho-form", worst <= 1e-6, worst, 1e-6, P.to_dict(), seed))

    worst = 0.0
    for a, b in fams[:4]:
        P = ParameterSet(0.8, a, b)
        for m in (1, 2, 5):
            lhs, rhs = contiguous_shift(P, m, np.array([0.3, -0.5, 0.4j]))
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.abs(lhs))))
    entries.append(_entry("contiguous-relation", "both sides by series", worst <= 1e-12, worst, 1e-12, {"families": fams[:4]}, seed))
    return entries


ORDER_FAMILIES = [
    ParameterSet(0.5, [1], [2]),
    ParameterSet(1, [1, 2], [2, 3]),
    ParameterSet(0.5, [1, 3], [2, 2]),
    ParameterSet(0.8, [1.2, 2.0, 3.0], [1.5, 2.5, 3.5]),
    ParameterSet(1.2, [1.5, 2.5], [2.0, 3.5]),
]


def _suite_order(seed, cfg):
    entries = []
    tol = TOLERANCES["order_rel"]
    for P in ORDER_FAMILIES:
        r = exact_order_test(P, 0.1, 1e5, cfg, tolerance=tol)
        dev = abs(r.limit_estimate - r.target) / r.target
        entries.append(_entry("exact-order", f"doubling ratio, psi={float(P.psi):g}", r.passes, dev, tol, P.to_dict(), seed, r.to_dict()))
    # psi = 0 with q = 3: no representing measure is known
    P = ParameterSet(0.5, [1, 2, 3], [1.2, 2.3, 2.5])
    try:
        r = exact_order_test(P, 0.1, 1e5, cfg, tolerance=tol)
        details, dev = r.to_dict(), abs(r.limit_estimate - r.target) / r.target
    except Exception as exc:  # reported, never fatal
        details, dev = {"error": str(exc)}, math.nan
    entries.append(_entry("exact-order", "psi=0, q=3 (open case)", None, dev, tol, P.to_dict(), seed, details, advisory=True))
    return entries


def _suite_limit(seed, cfg):
    rng = _rng(seed, "limit-measure")
    entries = []
    tol = TOLERANCES["limit_measure_rel"]
    for sigma, a1, a2, b1, b2 in [(0.5, 1.0, 3.0, 2.0, 2.0), (1.2, 0.6, 2.4, 1.1, 1.9)]:
        spec = limit_measure_q2(sigma, a1, a2, b1, b2, cfg)
        z = 0.8 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * math.pi * rng.uniform(0, 1, 20))
        ref = eval_series(ParameterSet(sigma, [a1, a2], [b1, b2]), -z).value
        err = float(np.max(np.abs(spec.stieltjes(z, sigma, cfg) - ref) / np.abs(ref)))
        entries.append(
            _entry(
                "limit-measure-q2",
                "atom plus continuous part vs series",
                err <= tol,
                err,
                tol,
                {"sigma": sigma, "A": [a1, a2], "B": [b1, b2]},
                seed,
                spec.metadata.get("coefficient_resolution", {}),
            )
        )
    return entries


def _suite_corollary(seed, cfg):
    rng = _rng(seed, "corollary1")
    tol = TOLERANCES["corollary_rel"]
    cases = [
        (ParameterSet(2, [1], [2]), "gauss"),
        (ParameterSet(2, [1.5], [2.7]), "gauss"),
        (ParameterSet(2, [1, 1], [2, 2]), "sigma2"),
        (ParameterSet(2, [0.5, 1.5], [1.5, 2.5]), "general"),
        (ParameterSet(3, [1, 1.5], [2, 2.2]), "general"),
    ]
    entries = []
    for P, method in cases:
        r = 0.1 + 0.7 * rng.uniform(0, 1, 10)
        th = rng.uniform(-0.9, 0.9, 10) * math.pi / (2 * P.sigma)
        z = r * np.exp(1j * th)
        ref = eval_series(P, -z).value
        val = power_denominator_rep(P, z, cfg, method=method)
        err = float(np.max(np.abs(val - ref) / np.abs(ref)))
        entries.append(_entry("power-denominator", f"method={method}", err <= tol, err, tol, P.to_dict(), seed))
    return entries


def _suite_inequalities(seed, cfg, families: int = 20, points: int = 1000):
    rng = _rng(seed, "inequalities")
    entries = []
    tz = TOLERANCES["equality_at_zero"]

    def grid_minus1():
        return np.concatenate([[0.0], np.sort(-1 + 10 ** rng.uniform(-3, 2, points - 1))])

    def run(theorem, name, make, check):
        worst, ok, echo = math.inf, True, []
        for _ in range(families):
            args = make()
            res = check(*args)
            worst = min(worst, res.worst_margin)
            ok &= res.passed
            echo.append(res.hypotheses)
        entries.append(_entry(theorem, name, ok, worst, 0.0, {"families": echo, "points": points}, seed))

    def mk_ratio():
        a, b = random_supermajorized(rng, int(rng.integers(1, 4)))
        s = float(rng.choice([-1, 1]) * rng.uniform(0.2, 2.0))
        return ParameterSet(s, a, b), float(rng.uniform(0.2, 2.0)), grid_minus1()

    run("ratio-monotonicity", "monotone ratio on (-1, 100]", mk_ratio, lambda P, d, x: an.ratio_monotonicity(P, d, x, cfg))

    def mk_lower():
        a, b = random_supermajorized(rng, int(rng.integers(1, 4)))
        return ParameterSet(float(rng.uniform(0.1, 3.0)), a, b), grid_minus1()

    run("lower-bound", "lower bound, equality at 0", mk_lower, lambda P, x: an.lower_bound_check(P, x, cfg))

    def mk_upper():
        a, b = random_supermajorized(rng, int(rng.integers(1, 4)), low=1.05)
        return ParameterSet(float(rng.uniform(0.05, 1.0)), a, b), np.sort(10 ** rng.uniform(-3, 2, points))

    run("upper-bound", "upper bound on (0, 100]", mk_upper, lambda P, x: an.upper_bound_check(P, x, cfg))

    def mk_logc():
        a, b = random_supermajorized(rng, int(rng.integers(1, 4)))
        s1, s2 = sorted(rng.uniform(0.0, 2.0, 2))
        x = np.concatenate([[0.0], 1 - 10 ** rng.uniform(-2, 1.5, points - 1)])
        return tuple(a), tuple(b), x, float(s1), float(s2) + 1e-3, float(rng.uniform(0.1, 1.0))

    run("log-convexity", "four-point inequality, x<1", mk_logc, lambda a, b, x, s1, s2, d: an.logconvexity_check(a, b, x, s1, s2, d, cfg))

    # equality at x = 0, exact
    P = ParameterSet(1.3, [1, 3], [2, 2.5])
    eq = abs(float(eval_stieltjes(P, 0.0, cfg)) - 1.0)
    entries.append(_entry("lower-bound", "F(0) = 1", eq <= tz, eq, tz, P.to_dict(), seed))

    found = an.logconvexity_search(rng, families=40, cfg=cfg)
    entries.append(
        _entry("log-convexity", "negative control: chain condition alone, x<0", None, len(found["violations"]), None, {"families": 40}, seed, found, advisory=True)
    )
    return entries


def _suite_schur(seed, cfg):
    rng = _rng(seed, "schur")
    fails = 0
    for i in range(1000):
        a, b = random_supermajorized(rng, 2 + i % 3, strict_psi=bool(i % 2))
        fails += not chain_condition(a, b)
    entries = [_entry("schur-lemma", "chain condition on 1000 pairs", fails == 0, fails, 0, {"q": [2, 3, 4]}, seed)]
    worst = math.inf
    for _ in range(1000):
        x = rng.uniform(0.01, 10.0, int(rng.integers(2, 8)))
        for k in range(2, x.size + 1):
            e1, e0, e2 = elementary_symmetric(x, k - 1), elementary_symmetric(x, k), elementary_symmetric(x, k - 2)
            worst = min(worst, (e1 * e1 - e0 * e2) / (e1 * e1))
    entries.append(_entry("newton-inequality", "e_{k-1}^2 >= e_k e_{k-2}", worst >= 0, worst, 0.0, {"vectors": 1000}, seed))
    return entries


def _suite_pade(seed, cfg):
    P = ParameterSet(1, [1], [2])
    entries = []
    nc = normality_check(P, 4, 4)
    entries.append(_entry("pade-normality", "5x5 table", nc["all_normal"], nc["min_scaled_det"], 0.0, P.to_dict(), seed, {"duplicates": nc["duplicates"]}))
    # orthogonality by quadrature against rho_1, independent of the moment solve
    rho1 = rho1_spec(P)
    worst_order, worst_orth = 0.0, 0.0
    for m in range(1, 6):
        for j in range(0, 3):
            pa = pade(P, m, j)
            worst_order = max(worst_order, pa.order_residual)
            c = np.asarray(pa.extra["pi"])
            pw = j + 1 + np.arange(m)
            inner = rho1.integrate(lambda t: t[:, None] ** pw[None, :] * npoly.polyval(t, c)[:, None], cfg)
            scale = rho1.integrate(lambda t: t[:, None] ** pw[None, :] * npoly.polyval(t, np.abs(c))[:, None], cfg)
            worst_orth = max(worst_orth, float(np.max(np.abs(inner) / scale)))
    t1, t2 = TOLERANCES["pade_order"], TOLERANCES["pade_orthogonality"]
    entries.append(_entry("pade-denominators", "order condition residual", worst_order <= t1, worst_order, t1, P.to_dict(), seed))
    entries.append(_entry("pade-denominators", "orthogonality residual", worst_orth <= t2, worst_orth, t2, P.to_dict(), seed))
    errs = convergence_check(P, 1.0, 8, reference=math.log(2))
    tol = TOLERANCES["pade_error_m8"]
    ok = errs[-1] <= tol and bool(np.all(np.diff(errs) < 0))
    entries.append(_entry("pade-convergence", "[m/m](1) vs ln 2, m=1..8", ok, float(errs[-1]), tol, P.to_dict(), seed, {"errors": errs}))

    Q = ParameterSet(0.5, [1, 3], [2, 2])
    spec = rho1_spec(Q)
    ks = np.arange(8)
    got = spec.moments(ks, cfg)
    ser = np.asarray(pade_moments(Q, 8).values)[: ks.size]
    err = float(np.max(np.abs(got - ser) / np.abs(ser)))
    z = np.array([0.3, 2.0, 1j])
    e2 = float(np.max(np.abs(spec.stieltjes(z, 1.0, cfg) - hypergeometric(Q, -z, cfg))))
    entries.append(_entry("order-one-density", "rho_1 moments and transform", max(err, e2) <= 1e-8, max(err, e2), 1e-8, Q.to_dict(), seed))
    return entries


MAPPING_FAMILIES = [
    ParameterSet(1, [1], [2]),
    ParameterSet(2, [1], [2]),
    ParameterSet(1.5, [1, 3], [2, 2]),
    ParameterSet(3, [0.5, 2], [1, 3]),
    ParameterSet(1.2, [0.8, 1.5, 2.0], [1.0, 2.5, 2.2]),
]


def _suite_mapping(seed, cfg, samples: int = 10_000):
    entries = []
    for i, P in enumerate(MAPPING_FAMILIES):
        res = an.sector_map_check(P, an.MappingProbe("sector", samples, seed + i), cfg)
        entries.append(_entry("sector-mapping", "Im F(-z) < 0 in the sector", res.passed, res.worst_margin, -TOLERANCES["sector_im"], P.to_dict(), seed + i, res.details))
    probes = [
        (ParameterSet(0.5, [1], [2]), an.MappingProbe("half_plane", 2000, seed), "half-plane-univalence"),
        (ParameterSet(1, [1, 3], [2, 2]), an.MappingProbe("half_plane", 2000, seed + 1), "half-plane-univalence"),
        (ParameterSet(1, [1], [2]), an.MappingProbe("disk", 2000, seed, 0.9), "half-plane-univalence"),
        (ParameterSet(2, [1], [2]), an.MappingProbe("disk", 2000, seed, 0.8), "disk-univalence"),
    ]
    for P, probe, theorem in probes:
        res = an.univalence_check(P, probe, cfg)
        entries.append(_entry(theorem, f"sampled injectivity, {probe.region} r={probe.radius}", res.passed, res.worst_margin, 0.0, P.to_dict(), probe.seed, res.details))
    for P in (ParameterSet(1, [1], [2]), ParameterSet(0.5, [1, 3], [2, 2])):
        res = an.starlikeness_check(P, 0.9)
        entries.append(_entry("starlikeness", "min Re(z g'/g) on |z|=0.9", res.passed, res.worst_margin, 0.0, P.to_dict(), seed, res.details))
    return entries


SUITES: dict[str, Callable] = {
    "moments": _suite_moments,
    "vanish": _suite_vanish,
    "nonneg": _suite_nonneg,
    "representation": _suite_representation,
    "order": _suite_order,
    "limit-measure": _suite_limit,
    "corollary1": _suite_corollary,
    "inequalities": _suite_inequalities,
    "schur": _suite_schur,
    "pade": _suite_pade,
    "mapping": _suite_mapping,
}


def thread_cap() -> int:
    env = os.environ.get("STIELTJES_HYP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(4, os.cpu_count() or 1))


def _run_one(name, seed, cfg, timings):
    t0 = time.perf_counter()
    try:
        entries = SUITES[name](seed, cfg)
    except Exception as exc:  # a crashing suite is a failed entry, the rest continue
        entries = [_entry(f"suite:{name}", "suite raised", False, math.nan, None, {}, seed, {"error": f"{type(exc).__name__}: {exc}"})]
    dt = time.perf_counter() - t0
    for e in entries:
        e["suite"] = name
        if timings:
            e["runtime_s"] = round(dt, 3)
    return entries


def verify_suite(selection, seed: int = 0, cfg: QuadratureConfig | None = None, timings: bool = False, threads: int | None = None) -> VerificationReport:
    """Run the selected suites; ``selection`` may contain ``"all"``."""
    sel = list(selection)
    if "all" in sel:
        sel = list(SUITES)
    unknown = [s for s in sel if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    sel = [s for s in SUITES if s in sel]
    cfg = cfg or DEFAULT_CONFIG
    report = VerificationReport(seed=seed, selection=sel, config=cfg.to_dict(), tolerances=dict(TOLERANCES))
    if not sel:
        return report
    with ThreadPoolExecutor(max_workers=min(threads or thread_cap(), len(sel))) as pool:
        futures = [pool.submit(_run_one, name, seed, cfg, timings) for name in sel]
        results = [f.result() for f in futures]
    entries = [e for group in results for e in group]
    # stable sort keeps suite order within a theorem
    entries.sort(key=lambda e: e["theorem"])
    report.entries = [_clean(e) for e in entries]
    return report
