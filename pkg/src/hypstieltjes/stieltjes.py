"""Stieltjes-type integral representations of ``q+1Fq``.

For ``Re a_i > 0`` and ``Re psi > 0``

    F(sigma, A; B; -z) = int_0^1 rho(s) (1 + s z)^(-sigma) ds,
    rho(s) = prod Gamma(b_i)/Gamma(a_i) * G(s | B; A) / s,

which continues the series to the plane cut along ``(-inf, -1]``.  This
module also builds the order-one density ``rho_1``, the fractional
functional ``Phi_eps`` used to certify the exact order, the measure with
an atom that replaces ``rho`` when ``psi = 0`` and ``q = 2``, and the
representation with denominator ``y^sigma + z^sigma`` for ``sigma >= 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import loggamma

from .gdensity import (
    DEFAULT_CONFIG,
    GKernelSpec,
    QuadratureConfig,
    _g_from_u,
    density_csv,
)
from .hypeval import DomainError, binomial_case, eval_series
from .params import ParameterError, ParameterSet, majorization_verdict
from .quadrature import UnitNodes, integrate_unit

__all__ = [
    "DensitySpec",
    "OrderTestResult",
    "gamma_prefactor",
    "eval_stieltjes",
    "hypergeometric",
    "density_rho",
    "density_mu",
    "density_rho1",
    "rho1_spec",
    "phi_epsilon",
    "exact_order_test",
    "resolve_limit_coefficient",
    "limit_measure_q2",
    "power_denominator_rep",
    "phi_y",
    "density_export",
]

SERIES_RADIUS = 0.7


def gamma_prefactor(a: Sequence, b: Sequence):
    """``prod Gamma(b_i) / Gamma(a_i)`` formed in log space."""
    acc = sum(loggamma(complex(v)) for v in b) - sum(loggamma(complex(v)) for v in a)
    val = complex(np.exp(acc))
    if all(complex(v).imag == 0 for v in list(a) + list(b)):
        return val.real
    return val


def _cfg(cfg):
    return cfg or DEFAULT_CONFIG


def _integrate(f: Callable[[UnitNodes], np.ndarray], cfg: QuadratureConfig):
    return integrate_unit(
        f,
        abs_tol=cfg.abs_tol,
        rel_tol=cfg.rel_tol,
        h0=cfg.endpoint_step,
        max_levels=cfg.endpoint_levels,
    )


def _kernel_at(spec: GKernelSpec, n: UnitNodes, cfg: QuadratureConfig) -> np.ndarray:
    # every node of the unit map satisfies 0 < s < 1 with u > 0
    return _g_from_u(n.u, spec, cfg)


def _power(base, sigma):
    """Principal ``base^(-sigma)``."""
    return np.exp(-complex(sigma) * np.log(base))


def _check_cut(z):
    zc = np.asarray(z, dtype=complex)
    if np.any((zc.imag == 0) & (zc.real <= -1.0)):
        raise DomainError("z lies on the cut (-inf, -1]")
    return zc


# ---------------------------------------------------------------------------
# densities


@dataclass
class DensitySpec:
    """A representing density on (0, 1) or (1, inf), optionally with an atom.

    The absolutely continuous part is
    ``prefactor * kernel(x) * x^x_power * (1 - x)^one_power`` on (0, 1);
    the (1, inf) form is stored for reference and evaluated by
    :func:`density_mu`.
    """

    support: tuple
    kernel: GKernelSpec
    prefactor: complex
    x_power: float = -1.0
    one_power: float = 0.0
    atom: tuple | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(abs(self.prefactor)):
            raise ParameterError("density prefactor is not finite")

    @property
    def zero_exponent(self):
        a, m = self.kernel.reduced().zero_exponent
        return a + self.x_power, m

    @property
    def one_exponent(self) -> float:
        return self.kernel.reduced().one_exponent + self.one_power

    def pdf(self, s, cfg: QuadratureConfig | None = None):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        g = _g_from_u(-np.log(s), self.kernel, _cfg(cfg))
        return self.prefactor * g * s**self.x_power * (1.0 - s) ** self.one_power

    def _weighted(self, n: UnitNodes, cfg) -> np.ndarray:
        g = _kernel_at(self.kernel, n, cfg)
        return self.prefactor * g * np.exp(-self.x_power * n.u) * n.c**self.one_power

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray], cfg: QuadratureConfig | None = None):
        """``int fn(s) dF(s)`` including the atom; ``fn`` maps nodes to (n, ...)."""
        cfg = _cfg(cfg)

        def f(n: UnitNodes):
            w = self._weighted(n, cfg)
            vals = np.asarray(fn(n.s))
            return w.reshape(w.shape + (1,) * (vals.ndim - 1)) * vals

        out = _integrate(f, cfg)
        if self.atom is not None:
            loc, weight = self.atom
            out = out + weight * np.asarray(fn(np.array([loc])))[0]
        return out

    def moments(self, ks, cfg: QuadratureConfig | None = None) -> np.ndarray:
        ks = np.atleast_1d(np.asarray(ks, dtype=float))
        return self.integrate(lambda s: s[:, None] ** ks[None, :], cfg)

    def stieltjes(self, z, sigma, cfg: QuadratureConfig | None = None):
        """``int dF(s) / (1 + s z)^sigma`` for each ``z``."""
        zc = np.atleast_1d(_check_cut(z))
        return self.integrate(lambda s: _power(1.0 + s[:, None] * zc[None, :], sigma), cfg)

    def to_dict(self) -> dict:
        pref = self.prefactor
        a, m = self.zero_exponent
        return {
            "support": list(self.support),
            "kernel": self.kernel.to_dict(),
            "prefactor": [pref.real, pref.imag] if isinstance(pref, complex) else float(pref),
            "x_power": self.x_power,
            "one_power": self.one_power,
            "zero_exponent": a,
            "zero_multiplicity": m,
            "one_exponent": self.one_exponent,
            "atom": None if self.atom is None else [float(self.atom[0]), float(self.atom[1])],
            "metadata": self.metadata,
        }


def _representation_checks(P: ParameterSet):
    a, b = P.reduced()
    if any(complex(v).real <= 0 for v in a):
        raise ParameterError("representation needs Re(a_i) > 0")
    p = complex(sum(complex(x) for x in b) - sum(complex(x) for x in a))
    if a and p.real <= 0:
        raise ParameterError(f"representation needs Re(psi) > 0, got {p}")
    return a, b


def density_rho(P: ParameterSet) -> DensitySpec:
    """Density ``rho`` of the representation on (0, 1)."""
    a, b = _representation_checks(P)
    return DensitySpec(
        support=(0.0, 1.0),
        kernel=GKernelSpec(b, a),
        prefactor=gamma_prefactor(a, b),
        metadata={"form": "rho"},
    )


def density_mu(t, P: ParameterSet, cfg: QuadratureConfig | None = None):
    """Density ``mu(t) = prefactor t^(sigma-1) G(1/t)`` on (1, inf)."""
    a, b = _representation_checks(P)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 1):
        raise ValueError("mu lives on (1, inf)")
    g = _g_from_u(np.log(t), GKernelSpec(b, a), _cfg(cfg))
    out = gamma_prefactor(a, b) * np.exp((complex(P.sigma) - 1.0) * np.log(t)) * g
    return np.real(out) if P.is_real else out


def rho1_spec(P: ParameterSet) -> DensitySpec:
    """Order-one density: the kernel padded with the pair (1, sigma)."""
    sigma = P.sigma
    if complex(sigma).real <= 0:
        raise ParameterError("rho_1 needs Re(sigma) > 0")
    if any(complex(v).real <= 0 for v in P.a):
        raise ParameterError("rho_1 needs Re(a_i) > 0")
    if (complex(P.psi) + 1 - complex(sigma)).real <= 0:
        raise ParameterError("rho_1 needs Re(psi) + 1 > Re(sigma)")
    pref = gamma_prefactor(list(P.a) + [sigma], list(P.b) + [1.0])
    return DensitySpec(
        support=(0.0, 1.0),
        kernel=GKernelSpec([1.0, *P.b], [sigma, *P.a]),
        prefactor=pref,
        metadata={"form": "rho1"},
    )


def density_rho1(s, P: ParameterSet, cfg: QuadratureConfig | None = None):
    """``rho_1(s)``, whose moments are ``(sigma)_k prod (a)_k / (prod (b)_k k!)``."""
    spec = rho1_spec(P)
    out = spec.pdf(s, cfg)
    if P.is_real:
        out = np.real(out)
    return out[0] if np.ndim(s) == 0 else out


# ---------------------------------------------------------------------------
# evaluation


def eval_stieltjes(P: ParameterSet, z, cfg: QuadratureConfig | None = None):
    """``int_0^1 rho(s) (1 + s z)^(-sigma) ds``, which equals ``F(sigma, A; B; -z)``.

    Valid for ``z`` off the cut ``(-inf, -1]``; the power is principal.
    """
    zc = _check_cut(z)
    a, b = _representation_checks(P)
    if not a:
        out = binomial_case(P.sigma, zc)
    else:
        out = density_rho(P).stieltjes(np.atleast_1d(zc), P.sigma, cfg)
        out = out if np.ndim(z) else out[0]
    if P.is_real and not np.iscomplexobj(z):
        out = np.real(out)
    return out


def hypergeometric(P: ParameterSet, z, cfg: QuadratureConfig | None = None):
    """``F(sigma, A; B; z)`` choosing the route by ``|z|`` and ``psi``.

    The series is used for ``|z| <= 0.7``; otherwise the integral
    representation, or the measure with an atom when ``psi = 0``, ``q = 2``.
    """
    zc = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(zc.shape, dtype=complex)
    near = np.abs(zc) <= SERIES_RADIUS
    if np.any(near):
        out[near] = eval_series(P, zc[near]).value
    if np.any(~near):
        a, b = P.reduced()
        psi = complex(sum(map(complex, b)) - sum(map(complex, a)))
        if a and psi == 0:
            if len(a) == 1:
                # reduced pair with psi = 0 is a == b: already cancelled
                raise ParameterError("unexpected unreduced pair")
            if len(a) != 2:
                raise ParameterError("psi = 0 with q >= 3: representing measure not implemented")
            a1, a2 = sorted(complex(v).real for v in a)
            b1, b2 = sorted(complex(v).real for v in b)
            spec = limit_measure_q2(P.sigma, a1, a2, b1, b2, cfg)
            out[~near] = spec.stieltjes(-zc[~near], P.sigma, cfg)
        else:
            out[~near] = eval_stieltjes(P, -zc[~near], cfg)
    if P.is_real and not np.iscomplexobj(z):
        out = out.real
    return out[0] if np.ndim(z) == 0 else out


# ---------------------------------------------------------------------------
# exact order


@dataclass
class OrderTestResult:
    epsilon: float
    y_grid: np.ndarray
    ratios: np.ndarray
    limit_estimate: float
    passes: bool
    target: float
    tolerance: float
    advisory: bool = False
    method: str = ""

    @property
    def ratio_at_max(self) -> float:
        return float(self.ratios[-1])

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "y_grid": [float(v) for v in self.y_grid],
            "ratios": [float(v) for v in self.ratios],
            "limit_estimate": float(self.limit_estimate),
            "target": self.target,
            "tolerance": self.tolerance,
            "passes": bool(self.passes),
            "advisory": bool(self.advisory),
            "method": self.method,
        }


def _order_checks(P: ParameterSet, epsilon: float):
    if not P.is_real:
        raise ParameterError("exact-order test needs real parameters")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    v = majorization_verdict(P.a, P.b)
    if not v.weak_supermajorized:
        raise ParameterError(f"B is not weakly supermajorized by A: {v.reason}")
    if not 0 < P.sigma <= min(P.a):
        raise ParameterError("exact order needs 0 < sigma <= min(A)")
    return v


def phi_epsilon(y, epsilon: float, P: ParameterSet, cfg: QuadratureConfig | None = None):
    """``Phi_eps(y) = int_1^y mu(u) du / (y - u)^eps`` in closed G form.

    ``Gamma(1-eps) y^(sigma-eps) prod Gamma(b)/Gamma(a) G^{q+1,0}(1/y | 1-eps+sigma, B; sigma, A)``;
    at ``eps = 0`` this is the distribution function of the measure.
    """
    if not 0 <= epsilon < 1:
        raise ValueError("epsilon must lie in [0, 1)")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 1):
        raise ValueError("y must exceed 1")
    sigma = P.sigma
    spec = GKernelSpec([1.0 - epsilon + sigma, *P.b], [sigma, *P.a])
    g = _g_from_u(np.log(y), spec, _cfg(cfg))
    pref = gamma_prefactor(P.a, P.b) * math.gamma(1.0 - epsilon)
    out = pref * np.exp((sigma - epsilon) * np.log(y)) * g
    return out


def _aitken(r: np.ndarray) -> float:
    r0, r1, r2 = r[-3], r[-2], r[-1]
    den = (r2 - r1) - (r1 - r0)
    if den == 0 or not np.isfinite(den):
        return float(r2)
    est = r2 - (r2 - r1) ** 2 / den
    # accept only a modest correction
    return float(est) if abs(est - r2) <= 2 * abs(r2 - r1) + 1e-15 else float(r2)


def exact_order_test(
    P: ParameterSet,
    epsilon: float = 0.1,
    y_max: float = 1e5,
    cfg: QuadratureConfig | None = None,
    levels: int = 8,
    tolerance: float = 0.05,
) -> OrderTestResult:
    """Doubling ratios ``Phi_eps(2y)/Phi_eps(y)`` on ``y = y_max / 2^k``.

    The limit is extrapolated: Aitken's process when the leading endpoint
    exponent is simple, a fit in ``1/log y`` when it carries a logarithm.
    ``passes`` compares the estimate with ``2^-eps`` at relative
    ``tolerance``.
    """
    _order_checks(P, epsilon)
    ys = y_max / 2.0 ** np.arange(levels, 0, -1)
    ys = ys[ys > 1]
    if ys.size < 3:
        raise ValueError("y_max too small for the doubling grid")
    vals = phi_epsilon(np.concatenate([ys, [2 * ys[-1]]]), epsilon, P, cfg)
    ratios = vals[1:] / vals[:-1]
    if np.any(ratios <= 0):
        raise ParameterError("nonpositive Phi ratio: measure not nonnegative")
    spec = GKernelSpec([1.0 - epsilon + P.sigma, *P.b], [P.sigma, *P.a]).reduced()
    _, mult = spec.zero_exponent
    if mult > 1:
        basis = np.vstack([np.ones_like(ys), 1 / np.log(ys), 1 / np.log(ys) ** 2]).T
        coef, *_ = np.linalg.lstsq(basis, ratios, rcond=None)
        est, method = float(coef[0]), "log-fit"
    else:
        est, method = _aitken(ratios), "aitken"
    target = 2.0 ** (-epsilon)
    # psi = 0 with q >= 3 has no known representing measure
    advisory = abs(complex(P.psi)) <= 1e-12 * sum(abs(complex(v)) for v in P.b) and P.q >= 3
    return OrderTestResult(
        epsilon=epsilon,
        y_grid=ys,
        ratios=ratios,
        limit_estimate=est,
        passes=bool(abs(est - target) <= tolerance * target),
        target=target,
        tolerance=tolerance,
        advisory=bool(advisory),
        method=method,
    )


# ---------------------------------------------------------------------------
# psi = 0, q = 2


def _limit_candidates(a1, a2, b1, b2):
    return {
        "(b2-a1)(b1-a1)": (b2 - a1) * (b1 - a1),
        "(b2-a2)(b1-a1)": (b2 - a2) * (b1 - a1),
    }


def _limit_spec(a1, a2, b1, b2, coef, atom_weight) -> DensitySpec:
    # t^(a2-1) 2F1(b1-a1+1, b2-a1+1; 2; 1-t) = G(t | b1, b2; a1-1, a2-1) / (1-t)
    return DensitySpec(
        support=(0.0, 1.0),
        kernel=GKernelSpec([b1, b2], [a1 - 1.0, a2 - 1.0]),
        prefactor=atom_weight * coef,
        x_power=0.0,
        one_power=-1.0,
        atom=(1.0, atom_weight),
    )


def resolve_limit_coefficient(a1, a2, b1, b2, cfg: QuadratureConfig | None = None, kmax: int = 6) -> dict:
    """Pick the continuous-part coefficient by matching moments.

    The candidates differ when ``psi = 0``; moment ``k`` of the measure is
    the ratio of Pochhammer products, equivalently the ``k``-th series
    coefficient up to ``(sigma)_k (-1)^k / k!``.
    """
    ks = np.arange(kmax + 1)
    exact = np.array(
        [math.exp(sum(math.lgamma(x + k) - math.lgamma(x) for x in (a1, a2)) - sum(math.lgamma(x + k) - math.lgamma(x) for x in (b1, b2))) for k in ks]
    )
    w = gamma_prefactor([a1, a2], [b1, b2])
    out = {"candidates": {}, "moments_exact": exact.tolist()}
    for name, coef in _limit_candidates(a1, a2, b1, b2).items():
        if coef == 0:
            mom = np.full(ks.shape, w)
        else:
            mom = _limit_spec(a1, a2, b1, b2, coef, w).moments(ks, cfg)
        err = float(np.max(np.abs(mom - exact) / exact))
        out["candidates"][name] = {"coefficient": coef, "max_rel_moment_error": err}
    best = min(out["candidates"], key=lambda k: out["candidates"][k]["max_rel_moment_error"])
    out["chosen"] = best
    out["coefficient"] = out["candidates"][best]["coefficient"]
    out["max_rel_moment_error"] = out["candidates"][best]["max_rel_moment_error"]
    return out


def limit_measure_q2(sigma, a1, a2, b1, b2, cfg: QuadratureConfig | None = None, tol: float = 1e-8) -> DensitySpec:
    """Representing measure of ``3F2(sigma, a1, a2; b1, b2; -z)`` when ``psi = 0``.

    An atom at ``t = 1`` of weight ``Gamma(b1)Gamma(b2)/(Gamma(a1)Gamma(a2))``
    plus a density on (0, 1) whose coefficient is resolved by
    :func:`resolve_limit_coefficient` before use.
    """
    if b1 + b2 != a1 + a2:
        raise ParameterError("limit measure needs psi = 0")
    v = majorization_verdict([a1, a2], [b1, b2])
    if not v.weak_supermajorized:
        raise ParameterError(f"limit measure needs B weakly supermajorized by A: {v.reason}")
    a1, a2 = sorted((float(a1), float(a2)))
    b1, b2 = sorted((float(b1), float(b2)))
    res = resolve_limit_coefficient(a1, a2, b1, b2, cfg)
    if res["max_rel_moment_error"] > tol:
        raise ParameterError(f"no candidate coefficient reproduces the moments: {res}")
    w = gamma_prefactor([a1, a2], [b1, b2])
    spec = _limit_spec(a1, a2, b1, b2, res["coefficient"], w)
    spec.metadata = {"form": "limit-q2", "sigma": sigma, "coefficient_resolution": res}
    return spec


# ---------------------------------------------------------------------------
# power-denominator representation (sigma >= 2)


def _corollary_checks(P: ParameterSet, z):
    if not P.is_real:
        raise ParameterError("power-denominator form needs real parameters")
    v = majorization_verdict(P.a, P.b)
    if not v.weak_supermajorized or not P.psi > 0:
        raise ParameterError("power-denominator form needs B weakly supermajorized by A with psi > 0")
    if P.sigma < 2:
        raise ParameterError("power-denominator form needs sigma >= 2")
    zc = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zc == 0) or np.any(np.abs(np.angle(zc)) >= math.pi / P.sigma):
        raise DomainError("need z != 0 and |arg z| < pi / sigma")
    return zc


def _log1p_sq(logr: np.ndarray, cs: float) -> np.ndarray:
    """``log(1 + 2 r cs + r^2)`` from ``log r`` without overflow."""
    r = np.exp(np.minimum(logr, 0.0))
    ir = np.exp(-np.maximum(logr, 0.0))
    small = logr <= 0
    return np.where(
        small,
        np.log1p(2.0 * r * cs + r * r),
        2.0 * np.maximum(logr, 0.0) + np.log1p(2.0 * ir * cs + ir * ir),
    )


def _phi_log(logy: np.ndarray, P: ParameterSet, cfg: QuadratureConfig, method: str, extra: np.ndarray):
    """``phi(y) * exp(extra)`` with every large factor kept in log space."""
    a, b = P.reduced()
    sigma = float(P.sigma)
    logy = np.asarray(logy, dtype=float)
    extra = np.broadcast_to(np.asarray(extra, dtype=float), logy.shape)
    if method == "gauss":
        # (4b/(pi c)) y^2 3F2(2, (b+1)/2, (b+2)/2; (c+1)/2, (c+2)/2; -y^2)
        bb, cc = a[0], b[0]
        inner = ParameterSet(2.0, [(bb + 1) / 2, (bb + 2) / 2], [(cc + 1) / 2, (cc + 2) / 2])
        rho = density_rho(inner)

        def f3(n):
            g = _kernel_at(rho.kernel, n, cfg) * rho.prefactor / n.s
            lw = -n.u[:, None] + 2.0 * logy[None, :]
            return g[:, None] * np.exp(extra[None, :] + 2.0 * logy[None, :] - 2.0 * np.logaddexp(0.0, lw))

        return (4.0 * bb / (math.pi * cc)) * _integrate(f3, cfg)
    pref = gamma_prefactor(a, b)
    spec = GKernelSpec(b, a)
    if method == "sigma2":
        # (4/pi) y^2 int G(t) / (1 + t^2 y^2)^2 dt
        def f2(n):
            g = _kernel_at(spec, n, cfg)
            logr = -n.u[:, None] + logy[None, :]
            return g[:, None] * np.exp(extra[None, :] + 2.0 * logy[None, :] - 2.0 * _log1p_sq(logr, 0.0))

        return (4.0 / math.pi) * pref * _integrate(f2, cfg)
    cs, sn = math.cos(math.pi / sigma), math.sin(math.pi / sigma)

    def fg(n):
        g = _kernel_at(spec, n, cfg)
        logr = -n.u[:, None] + logy[None, :]
        r_lo = np.exp(np.minimum(logr, 0.0))
        ir = np.exp(-np.maximum(logr, 0.0))
        ang = np.where(logr <= 0, np.arctan2(r_lo * sn, 1.0 + r_lo * cs), np.arctan2(sn, ir + cs))
        # y^(sigma-1) / (t (1 + 2 t y cos + t^2 y^2)^(sigma/2))
        logw = extra[None, :] + (sigma - 1.0) * logy[None, :] + n.u[:, None] - 0.5 * sigma * _log1p_sq(logr, cs)
        # fold |g| into the exponent: e^u overflows where g underflows
        with np.errstate(divide="ignore"):
            logg = np.log(np.abs(g))
        return np.sign(g)[:, None] * np.sin(sigma * ang) * np.exp(logg[:, None] + logw)

    return (sigma / math.pi) * pref * _integrate(fg, cfg)


def _pick_method(P: ParameterSet, method: str) -> str:
    sigma = float(P.sigma)
    a, _ = P.reduced()
    if method == "auto":
        if sigma == 2.0:
            return "gauss" if len(a) == 1 else "sigma2"
        return "general"
    if method not in ("general", "sigma2", "gauss"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("sigma2", "gauss") and sigma != 2.0:
        raise ParameterError(f"method {method!r} needs sigma = 2")
    if method == "gauss" and len(a) != 1:
        raise ParameterError("Gauss fast path needs q = 1 after cancellation")
    return method


def phi_y(y, P: ParameterSet, cfg: QuadratureConfig | None = None, method: str = "auto"):
    """Density ``phi`` of the measure in ``int phi(y) dy / (y^sigma + z^sigma)``."""
    if not P.is_real or P.sigma < 2:
        raise ParameterError("phi needs real parameters and sigma >= 2")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise ValueError("y must be positive")
    return _phi_log(np.log(y), P, _cfg(cfg), _pick_method(P, method), 0.0)


def _tail_cutoff(P: ParameterSet) -> float:
    """``log Y`` beyond which the outer integrand is dropped.

    For large ``y`` the integrand decays like ``y^(-1-min(a_min, sigma))``,
    so the dropped tail is about ``Y^(-min(a_min, 1))`` relative; the inner
    integrals resolve ``t ~ 1/y`` only up to a finite ``y``.
    """
    a, _ = P.reduced()
    amin = min([float(np.real(v)) for v in a] + [1.0])
    return min(100.0, 17.0 / amin) * math.log(10.0)


def power_denominator_rep(P: ParameterSet, z, cfg: QuadratureConfig | None = None, method: str = "auto"):
    """``F(sigma, A; B; -z)`` as ``int_0^inf phi(y) dy / (y^sigma + z^sigma)``.

    ``method`` is ``"general"``, ``"sigma2"`` (simplified kernel),
    ``"gauss"`` (``q = 1``, ``sigma = 2``, inner integral as a ``3F2``) or
    ``"auto"``.  The outer integral is split at ``y = 1`` and the tail
    mapped by ``y -> 1/y``.
    """
    cfg = _cfg(cfg)
    zc = _corollary_checks(P, z)
    sigma = float(P.sigma)
    method = _pick_method(P, method)
    zs = np.exp(sigma * np.log(zc))
    log_ymax = _tail_cutoff(P)

    def f(n: UnitNodes):
        # (0,1): y = s ; (1,inf): y = 1/s, dy = ds / s^2
        low = _phi_log(-n.u, P, cfg, method, 0.0)[:, None] / (n.s[:, None] ** sigma + zs[None, :])
        keep = n.u <= log_ymax
        high = np.zeros((n.u.size, zs.size), dtype=complex)
        uk = n.u[keep]
        hk = _phi_log(uk, P, cfg, method, -(sigma - 2.0) * uk)[:, None]
        high[keep] = hk / (1.0 + zs[None, :] * n.s[keep][:, None] ** sigma)
        return low + high

    out = _integrate(f, cfg)
    if np.ndim(z) == 0:
        out = out[0]
    if not np.iscomplexobj(z):
        out = np.real(out)
    return out


# ---------------------------------------------------------------------------
# export


def density_export(kind: str, P: ParameterSet, xs, cfg: QuadratureConfig | None = None) -> str:
    """CSV of ``rho``, ``rho1``, ``mu`` or ``phi`` on a grid, with error estimates.

    For ``psi = 0`` and ``q = 2`` the ``rho`` rows hold the continuous part
    of the limit measure.
    """
    cfg = _cfg(cfg)
    xs = np.asarray(xs, dtype=float)
    a, b = P.reduced()
    if kind == "rho" and P.is_real and len(a) == 2 and complex(P.psi) == 0:
        # continuous part of the limit measure; the atom at 1 is not a density value
        spec = limit_measure_q2(P.sigma, a[0], a[1], b[0], b[1], cfg)
        v = np.real(spec.pdf(xs, cfg))
        rows = zip(xs, v, np.abs(v) * cfg.rel_tol)
    elif kind in ("rho", "rho1"):
        spec = density_rho(P) if kind == "rho" else rho1_spec(P)
        val, info = _g_from_u(-np.log(xs), spec.kernel, cfg, full_output=True)
        scale = np.real(spec.prefactor) * xs**spec.x_power
        err = (info["tail"] + info["floor"] + info["imag_residual"]) * np.abs(scale)
        rows = zip(xs, np.real(val) * scale, err)
    elif kind == "mu":
        a, b = _representation_checks(P)
        val, info = _g_from_u(np.log(xs), GKernelSpec(b, a), cfg, full_output=True)
        scale = np.real(gamma_prefactor(a, b)) * xs ** (float(np.real(P.sigma)) - 1.0)
        rows = zip(xs, np.real(val) * scale, (info["tail"] + info["floor"]) * np.abs(scale))
    elif kind == "phi":
        v = phi_y(xs, P, cfg)
        rows = zip(xs, v, np.abs(v) * cfg.rel_tol)
    else:
        raise ValueError(f"unknown density kind {kind!r}")
    return density_csv([(float(x), float(v), float(e)) for x, v, e in rows])
