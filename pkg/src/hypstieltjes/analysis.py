"""Grid verification of inequalities and mapping properties of ``q+1Fq``.

Every check returns a :class:`CheckResult` carrying the worst margin seen,
so a passing check also says how close it came to failing.  Univalence is
tested only through necessary conditions (sampled injectivity and a
nonvanishing derivative); sampling cannot prove it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial import cKDTree

from .gdensity import DEFAULT_CONFIG
from .hypeval import eval_series, series_derivative
from .params import (
    ParameterError,
    ParameterSet,
    chain_condition,
    majorization_verdict,
    random_supermajorized,
)
from .quadrature import QuadratureError
from .stieltjes import hypergeometric

__all__ = [
    "R_STAR",
    "R_S",
    "InequalityGrid",
    "MappingProbe",
    "CheckResult",
    "ratio_monotonicity",
    "lower_bound_check",
    "upper_bound_check",
    "logconvexity_check",
    "logconvexity_search",
    "sector_map_check",
    "univalence_check",
    "starlikeness_check",
    "sample_points",
]

R_STAR = math.sqrt(13.0 * math.sqrt(13.0) - 46.0)
R_S = math.sqrt(math.sqrt(32.0) - 5.0)


@dataclass
class InequalityGrid:
    x_values: np.ndarray
    sigma_values: np.ndarray = field(default_factory=lambda: np.array([1.0]))
    delta: float = 1.0
    samples: int = 0

    def __post_init__(self):
        self.x_values = np.asarray(self.x_values, dtype=float)
        self.sigma_values = np.asarray(self.sigma_values, dtype=float)
        if self.delta <= 0:
            raise ValueError("delta must be positive")


@dataclass
class MappingProbe:
    region: str
    sample_count: int = 2000
    seed: int = 0
    radius: float | None = None

    def __post_init__(self):
        if self.region not in ("sector", "half_plane", "disk"):
            raise ValueError(f"unknown region {self.region!r}")
        if self.region == "disk" and not (self.radius and self.radius > 0):
            raise ValueError("disk probe needs a positive radius")


@dataclass
class CheckResult:
    check: str
    theorem: str
    passed: bool
    worst_margin: float
    n_points: int
    hypotheses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "theorem": self.theorem,
            "passed": bool(self.passed),
            "worst_margin": float(self.worst_margin),
            "n_points": int(self.n_points),
            "hypotheses": self.hypotheses,
            "details": self.details,
        }


def _echo(P: ParameterSet) -> dict:
    return P.to_dict()


def _require_supermajorized(P: ParameterSet):
    v = majorization_verdict(P.a, P.b)
    if not v.weak_supermajorized:
        raise ParameterError(f"B is not weakly supermajorized by A: {v.reason}")
    return v


def _F_minus(P: ParameterSet, x, cfg=None):
    """``F(sigma, A; B; -x)`` for real ``x > -1`` (or complex off the cut)."""
    return hypergeometric(P, -np.asarray(x), cfg)


# ---------------------------------------------------------------------------
# inequalities


def ratio_monotonicity(P: ParameterSet, delta: float, grid, cfg=None, slack: float = 1e-9) -> CheckResult:
    """``x -> F(sigma, A+delta; B+delta; -x) / F(sigma, A; B; -x)`` on an increasing grid.

    Decreasing for ``sigma > 0``, increasing for ``sigma < 0``.
    """
    _require_supermajorized(P)
    if delta <= 0:
        raise ValueError("delta must be positive")
    x = np.sort(np.asarray(getattr(grid, "x_values", grid), dtype=float))
    if np.any(x <= -1):
        raise ValueError("grid must lie in (-1, inf)")
    r = _F_minus(P.shifted(delta), x, cfg) / _F_minus(P, x, cfg)
    step = np.diff(r)
    sgn = 1.0 if P.sigma > 0 else -1.0
    # positive margin means the step goes the right way
    margin = -sgn * step / np.maximum(1.0, np.abs(r[1:]))
    worst = float(margin.min()) if margin.size else math.inf
    at0 = np.abs(r[x == 0] - 1.0)
    return CheckResult(
        "ratio_monotonicity",
        "monotone ratio",
        bool(worst >= -slack and np.all(at0 <= 1e-12)),
        worst,
        x.size,
        {"P": _echo(P), "delta": delta},
        {"direction": "decreasing" if sgn > 0 else "increasing", "slack": slack},
    )


def _lower_bound(P: ParameterSet, x):
    rho = float(np.prod(np.asarray(P.a) / np.asarray(P.b)))
    return np.exp(-P.sigma * np.log1p(x * rho))


def lower_bound_check(P: ParameterSet, grid, cfg=None, slack: float = 1e-10) -> CheckResult:
    """``(1 + x prod(a/b))^-sigma <= F(sigma, A; B; -x)`` for ``x > -1``."""
    _require_supermajorized(P)
    if not P.sigma > 0:
        raise ParameterError("lower bound needs sigma > 0")
    x = np.asarray(getattr(grid, "x_values", grid), dtype=float)
    if np.any(x <= -1):
        raise ValueError("grid must lie in (-1, inf)")
    f = _F_minus(P, x, cfg)
    lb = _lower_bound(P, x)
    margin = (f - lb) / np.maximum(1.0, np.abs(f))
    eq0 = np.abs(f[x == 0] - 1.0)
    nonzero = x != 0
    return CheckResult(
        "lower_bound_check",
        "lower bound",
        bool(margin.min() >= -slack and np.all(eq0 <= 1e-12)),
        float(margin.min()),
        x.size,
        {"P": _echo(P)},
        {
            "slack": slack,
            "strict_count": int(np.sum(margin[nonzero] > 0)),
            "nonzero_points": int(nonzero.sum()),
            "equality_at_zero": float(eq0.max()) if eq0.size else None,
        },
    )


def upper_bound_check(P: ParameterSet, grid, cfg=None, slack: float = 1e-10) -> CheckResult:
    """``F(sigma, A; B; -x) < (1 + x prod((a-1)/(b-1)))^-sigma`` for ``x > 0``.

    All entries of ``A`` and ``B`` must exceed 1 and ``0 < sigma <= 1``.
    """
    _require_supermajorized(P)
    if not 0 < P.sigma <= 1:
        raise ParameterError("upper bound needs 0 < sigma <= 1")
    if min(P.a) <= 1 or min(P.b) <= 1:
        raise ParameterError("upper bound needs every a_i, b_i > 1")
    x = np.asarray(getattr(grid, "x_values", grid), dtype=float)
    if np.any(x <= 0):
        raise ValueError("grid must lie in (0, inf)")
    f = _F_minus(P, x, cfg)
    rho = float(np.prod((np.asarray(P.a) - 1) / (np.asarray(P.b) - 1)))
    ub = np.exp(-P.sigma * np.log1p(x * rho))
    margin = (ub - f) / np.maximum(1.0, np.abs(f))
    return CheckResult(
        "upper_bound_check",
        "upper bound",
        bool(margin.min() >= -slack),
        float(margin.min()),
        x.size,
        {"P": _echo(P)},
        {"slack": slack, "strict_count": int(np.sum(margin > 0))},
    )


def _four_point(a, b, x, s1, s2, delta, cfg):
    """``f(s1) f(s2+d) - f(s1+d) f(s2)`` (nonnegative under log-convexity), scaled."""
    vals = {}
    for s in (s1, s2, s1 + delta, s2 + delta):
        if s not in vals:
            vals[s] = np.ones_like(x) if s == 0 else np.real(hypergeometric(ParameterSet(s, a, b), x, cfg))
    lhs = vals[s1 + delta] * vals[s2]
    rhs = vals[s1] * vals[s2 + delta]
    return (rhs - lhs) / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def logconvexity_check(a, b, x, sigma1: float, sigma2: float, delta: float, cfg=None, slack: float = 1e-10) -> CheckResult:
    """``f(s1+d) f(s2) <= f(s1) f(s2+d)`` for ``f(s) = F(s, A; B; x)``, ``x < 1``."""
    v = majorization_verdict(a, b)
    if not v.weak_supermajorized:
        raise ParameterError(f"B is not weakly supermajorized by A: {v.reason}")
    if not 0 <= sigma1 < sigma2 or delta <= 0:
        raise ValueError("need 0 <= sigma1 < sigma2 and delta > 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x >= 1):
        raise ValueError("need x < 1")
    margin = _four_point(a, b, x, sigma1, sigma2, delta, cfg)
    return CheckResult(
        "logconvexity_check",
        "log-convexity in sigma",
        bool(margin.min() >= -slack),
        float(margin.min()),
        x.size,
        {"A": list(map(float, a)), "B": list(map(float, b)), "sigma1": sigma1, "sigma2": sigma2, "delta": delta},
        {"slack": slack},
    )


def logconvexity_search(rng: np.random.Generator, families: int = 200, q: int = 2, cfg=None) -> dict:
    """Look for four-point violations at ``x < 0`` under the chain condition alone.

    Families satisfy the elementary-symmetric chain but not weak
    supermajorization.  Reports what was found; asserts nothing.
    """
    found = []
    tried = 0
    x = -np.geomspace(0.05, 20.0, 12)
    attempts = 0
    while tried < families and attempts < 50 * families:
        attempts += 1
        a = np.sort(rng.uniform(0.1, 3.0, q))
        b = np.sort(rng.uniform(0.1, 4.0, q))
        if majorization_verdict(a, b).weak_supermajorized or not chain_condition(a, b):
            continue
        if np.sum(b) - np.sum(a) <= 0.05:
            continue
        tried += 1
        s1, s2 = map(float, sorted(rng.uniform(0.0, 2.0, 2)))
        d = float(rng.uniform(0.1, 1.0))
        if s2 - s1 < 1e-3:
            continue
        try:
            m = _four_point(tuple(a), tuple(b), x, s1, s2, d, cfg)
        except Exception:
            continue
        if m.min() < -1e-8:
            k = int(np.argmin(m))
            found.append(
                {"A": a.tolist(), "B": b.tolist(), "x": float(x[k]), "sigma1": s1, "sigma2": s2, "delta": d, "margin": float(m[k])}
            )
    return {"families_tested": tried, "violations": found}


# ---------------------------------------------------------------------------
# mapping properties


def sample_points(probe: MappingProbe, sigma: float = 1.0) -> np.ndarray:
    """Seeded samples from the probe region."""
    rng = np.random.default_rng(probe.seed)
    n = probe.sample_count
    if probe.region == "sector":
        r = 10.0 ** rng.uniform(-2.0, 2.0, n)
        th = rng.uniform(0.01, 0.99, n) * math.pi / sigma
        return r * np.exp(1j * th)
    if probe.region == "half_plane":
        # z = 1 - w, Re w > 0, |w| log-uniform
        r = 10.0 ** rng.uniform(-1.5, 1.5, n)
        th = rng.uniform(-0.98, 0.98, n) * math.pi / 2
        return 1.0 - r * np.exp(1j * th)
    r = probe.radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    th = rng.uniform(0.0, 2 * math.pi, n)
    return r * np.exp(1j * th)


def sector_map_check(P: ParameterSet, probe: MappingProbe, cfg=None, slack: float = 1e-12, chunk: int = 2000) -> CheckResult:
    """``Im F(sigma, A; B; -z) < 0`` for ``0 < arg z < pi/sigma``."""
    _require_supermajorized(P)
    if P.sigma < 1:
        raise ParameterError("sector mapping needs sigma >= 1")
    z = sample_points(probe, P.sigma)
    deep = replace(cfg or DEFAULT_CONFIG, endpoint_levels=11)
    parts, retried = [], 0
    for i in range(0, z.size, chunk):
        try:
            parts.append(np.imag(_F_minus(P, z[i : i + chunk], cfg)))
        except QuadratureError:
            # nodes near the cut need finer steps
            retried += 1
            parts.append(np.imag(_F_minus(P, z[i : i + chunk], deep)))
    im = np.concatenate(parts)
    # conjugate symmetry: the reflected sample must flip the sign
    k = min(50, z.size)
    refl = np.imag(_F_minus(P, np.conj(z[:k]), deep))
    sym = float(np.max(np.abs(refl + im[:k])))
    worst = float(im.max())
    return CheckResult(
        "sector_map_check",
        "sector mapping",
        bool(worst < -slack and sym < 1e-9),
        worst,
        z.size,
        {"P": _echo(P)},
        {"region": "sector", "seed": probe.seed, "min_abs_im": float(np.min(np.abs(im))), "reflection_error": sym, "retried_chunks": retried},
    )


def _collisions(z: np.ndarray, w: np.ndarray, image_tol: float, pre_tol: float):
    pts = np.column_stack([w.real, w.imag])
    tree = cKDTree(pts)
    pairs = tree.query_pairs(image_tol, output_type="ndarray")
    bad = [(int(i), int(j)) for i, j in pairs if abs(z[i] - z[j]) > pre_tol]
    d, _ = tree.query(pts, k=2)
    return bad, float(d[:, 1].min())


def univalence_check(P: ParameterSet, probe: MappingProbe, cfg=None, image_tol: float = 1e-12, pre_tol: float = 1e-6) -> CheckResult:
    """Sampled injectivity plus nonvanishing derivative (necessary conditions).

    The half-plane probe tests both ``F(z)`` and ``z F(z)``; disk probes
    test ``z F(z)``.
    """
    _require_supermajorized(P)
    if probe.region == "half_plane" and not 0 < P.sigma <= 1:
        raise ParameterError("half-plane univalence needs 0 < sigma <= 1")
    if probe.region == "disk" and not 0 < P.sigma <= 2:
        raise ParameterError("disk univalence needs 0 < sigma <= 2")
    if probe.region == "sector":
        raise ValueError("univalence is checked on half_plane or disk")
    z = sample_points(probe, P.sigma)
    F = np.asarray(hypergeometric(P, z, cfg), dtype=complex)
    maps = {"zF": z * F}
    if probe.region == "half_plane":
        maps["F"] = F
    # derivative on a subgrid: F' = sigma prod(a)/prod(b) F(sigma+1, A+1; B+1; z)
    sub = z[:: max(1, z.size // 200)]
    coef = P.sigma * np.prod(P.a) / np.prod(P.b)
    dF = coef * np.asarray(hypergeometric(ParameterSet(P.sigma + 1, [x + 1 for x in P.a], [x + 1 for x in P.b]), sub, cfg))
    Fs = np.asarray(hypergeometric(P, sub, cfg), dtype=complex)
    derivs = {"zF": Fs + sub * dF, "F": dF}
    details = {"region": probe.region, "radius": probe.radius, "seed": probe.seed}
    passed = True
    worst = math.inf
    for name, w in maps.items():
        bad, closest = _collisions(z, w, image_tol, pre_tol)
        dmin = float(np.min(np.abs(derivs[name])))
        details[name] = {"collisions": len(bad), "closest_image_pair": closest, "min_abs_derivative": dmin}
        passed &= not bad and dmin > 0
        worst = min(worst, closest)
    return CheckResult("univalence_check", "univalence (sampled)", bool(passed), worst, z.size, {"P": _echo(P)}, details)


def starlikeness_check(P: ParameterSet, r: float, points: int = 360) -> CheckResult:
    """``Re(z g'(z) / g(z)) > 0`` on ``|z| = r`` for ``g(z) = z F(z)``."""
    _require_supermajorized(P)
    if not 0 < P.sigma <= 1:
        raise ParameterError("starlikeness needs 0 < sigma <= 1")
    if not 0 < r < 1:
        raise ValueError("series evaluation needs 0 < r < 1")
    z = r * np.exp(2j * math.pi * np.arange(points) / points)
    F = np.asarray(eval_series(P, z).value, dtype=complex)
    dF = np.asarray(series_derivative(P, z), dtype=complex)
    q = 1.0 + z * dF / F
    worst = float(q.real.min())
    return CheckResult(
        "starlikeness_check",
        "starlikeness",
        bool(worst > 0),
        worst,
        points,
        {"P": _echo(P), "r": r},
        {"r_star": R_STAR, "below_r_star": bool(r < R_STAR)},
    )


def random_family(rng: np.random.Generator, q: int, *, low: float = 0.2, high: float = 4.0):
    """``(A, B)`` with ``B`` weakly supermajorized by ``A`` and ``psi > 0``."""
    return random_supermajorized(rng, q, low=low, high=high)
