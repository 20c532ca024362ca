"""Meijer ``G^{q,0}_{q,q}`` kernels by Mellin-Barnes contour quadrature.

The kernel evaluated here is

    G(x | top; bottom) = 1/(2 pi i) int  prod Gamma(bottom_j + s) / prod Gamma(top_j + s) x^(-s) ds

over an upward contour to the right of every pole of the numerator gammas.
With ``u = -log x`` this is a Bromwich integral in ``s`` evaluated at
"time" ``u``, so for ``0 < x < 1`` the straight line is deformed into a
left-opening parabola (Weideman & Trefethen's optimised contour) on which
the integrand decays exponentially; for ``x > 1`` the contour opens to the
right and encloses no poles.  The straight line itself is only
conditionally convergent when ``Re(psi) <= 1``.

Gamma ratios are formed as log-gamma differences.  At large ``|s|`` the
difference is taken from its Stirling series directly, which avoids the
cancellation between two large log-gammas near ``x = 1``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import bernoulli, betainc, betaln, gammaln, loggamma

from .hypeval import eval_series
from .params import ParameterError, ParameterSet
from .quadrature import UnitNodes, integrate_unit

__all__ = [
    "ContourError",
    "GKernelSpec",
    "QuadratureConfig",
    "log_gamma_ratio",
    "meijer_g",
    "closed_form_q1",
    "closed_form_q2",
    "multidim_oracle",
    "mellin_moment",
    "mellin_moments",
    "vanish_check",
    "laplace_identity_check",
    "endpoint_slope",
    "density_table",
    "density_csv",
]

# Weideman-Trefethen parabola z(theta) = kappa (A0 - A2 theta^2 + i A1 theta)
_A0, _A2, _A1 = 0.1309, 0.1194, 0.25
_STIRLING_TERMS = 20
_DEFAULT_SEED = 20130415


class ContourError(ValueError):
    """Contour placement or truncation violates the kernel's requirements."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings shared by every integral kernel.

    contour_offset
        Abscissa ``c`` of the Bromwich line (vertex of the right-opening
        contour used for ``x > 1``); ``None`` picks
        ``max(1, 1 - min Re(bottom)) + 1/2``.
    truncation_height
        Half-range ``T`` of the contour parameter; doubled (with the node
        count) while the tail estimate exceeds ``abs_tol / 10``.
    node_count
        Contour nodes per half-range.
    endpoint_step
        Initial tanh-sinh step for integrals over (0, 1).
    """

    contour_offset: float | None = None
    truncation_height: float = 3.0
    node_count: int = 32
    endpoint_step: float = 0.25
    endpoint_levels: int = 7
    abs_tol: float = 1e-12
    rel_tol: float = 1e-11
    max_doublings: int = 3

    def __post_init__(self):
        if self.truncation_height <= 0 or self.node_count <= 0:
            raise ValueError("truncation_height and node_count must be positive")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_CONFIG = QuadratureConfig()


def _tuple(v) -> tuple:
    out = []
    for x in np.atleast_1d(v):
        c = complex(x)
        out.append(c.real if c.imag == 0 else c)
    return tuple(out)


@dataclass(frozen=True)
class GKernelSpec:
    """Parameter lists of ``G^{q,0}_{q,q}(x | top; bottom)``.

    ``top`` are the gamma-denominator parameters, ``bottom`` the
    gamma-numerator ones; the density of the Stieltjes representation uses
    ``top = B`` and ``bottom = A``.  Endpoint exponents are derived, never
    stored.
    """

    top: tuple
    bottom: tuple

    def __init__(self, top, bottom):
        top = _tuple(top)
        bottom = _tuple(bottom)
        if len(top) != len(bottom):
            raise ParameterError("top and bottom must have equal length")
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)

    @classmethod
    def from_params(cls, P: ParameterSet) -> "GKernelSpec":
        return cls(P.b, P.a)

    @property
    def q(self) -> int:
        return len(self.top)

    @property
    def psi(self):
        return sum(complex(t) for t in self.top) - sum(complex(b) for b in self.bottom)

    @property
    def is_real(self) -> bool:
        return all(isinstance(v, float) for v in self.top + self.bottom)

    def reduced(self) -> "GKernelSpec":
        """Drop exactly equal top/bottom pairs (their gamma factors cancel)."""
        top = list(self.top)
        bottom = list(self.bottom)
        for b in list(bottom):
            if b in top:
                top.remove(b)
                bottom.remove(b)
        return GKernelSpec(top, bottom)

    @property
    def zero_exponent(self) -> tuple[float, int]:
        """``(a, m)`` with ``G(x) = O(x^a log^(m-1)(1/x))`` as ``x -> 0``.

        Bottom entries whose poles are all cancelled by zeros of a top gamma
        (``top_j = bottom_i - l``, ``l = 0, 1, ...``) are skipped.
        """
        free = []
        used = set()
        for b in self.bottom:
            hit = None
            for j, t in enumerate(self.top):
                if j in used:
                    continue
                d = complex(b) - complex(t)
                if d.imag == 0 and d.real >= 0 and d.real == math.floor(d.real):
                    hit = j
                    break
            if hit is None:
                free.append(complex(b).real)
            else:
                used.add(hit)
        if not free:
            return math.inf, 0
        a = min(free)
        m = sum(1 for f in free if abs(f - a) < 1e-12)
        return a, m

    @property
    def one_exponent(self) -> float:
        return self.psi.real - 1.0

    def pole_abscissa(self) -> float:
        """Real part of the rightmost numerator pole."""
        if not self.bottom:
            return -math.inf
        return -min(complex(b).real for b in self.bottom)

    def default_offset(self) -> float:
        mb = min((complex(b).real for b in self.bottom), default=0.0)
        return max(1.0, 1.0 - mb) + 0.5

    def to_dict(self) -> dict:
        def enc(v):
            return [v.real, v.imag] if isinstance(v, complex) else v

        a, m = self.zero_exponent
        return {
            "top": [enc(v) for v in self.top],
            "bottom": [enc(v) for v in self.bottom],
            "zero_exponent": a,
            "zero_multiplicity": m,
            "one_exponent": self.one_exponent,
        }


# ---------------------------------------------------------------------------
# log-gamma ratios


@lru_cache(maxsize=None)
def _bernoulli_numbers(n: int) -> tuple:
    return tuple(float(v) for v in bernoulli(n))


def _bernoulli_poly(n: int, x: complex) -> complex:
    bn = _bernoulli_numbers(n)
    return sum(math.comb(n, k) * bn[k] * x ** (n - k) for k in range(n + 1))


@lru_cache(maxsize=256)
def _stirling_coeffs(bottom: tuple, top: tuple) -> np.ndarray:
    # coefficient of s^-k in sum_j [log G(s+bottom_j) - log G(s+top_j)]
    out = np.zeros(_STIRLING_TERMS + 1, dtype=complex)
    for a, b in zip(bottom, top):
        for k in range(1, _STIRLING_TERMS + 1):
            out[k] += (-1) ** (k + 1) * (
                _bernoulli_poly(k + 1, complex(a)) - _bernoulli_poly(k + 1, complex(b))
            ) / (k * (k + 1))
    out[0] = sum(complex(a) - complex(b) for a, b in zip(bottom, top))
    return out


def log_gamma_ratio(bottom: Sequence, top: Sequence, s) -> np.ndarray:
    """``sum log Gamma(bottom_j + s) - sum log Gamma(top_j + s)`` for complex ``s``.

    The result is defined modulo ``2 pi i``; only its exponential is used.
    """
    s = np.asarray(s, dtype=complex)
    bottom = _tuple(bottom)
    top = _tuple(top)
    out = np.zeros(s.shape, dtype=complex)
    if not bottom and not top:
        return out
    pmax = max(abs(complex(v)) for v in bottom + top)
    big = np.abs(s) > 40.0 + 4.0 * pmax
    if np.any(~big):
        sm = s[~big]
        acc = np.zeros(sm.shape, dtype=complex)
        for a in bottom:
            acc += loggamma(complex(a) + sm)
        for b in top:
            acc -= loggamma(complex(b) + sm)
        out[~big] = acc
    if np.any(big):
        sb = s[big]
        coeffs = _stirling_coeffs(bottom, top)
        inv = 1.0 / sb
        # Horner in 1/s for sum_k c_k s^-k, k >= 1
        acc = np.zeros(sb.shape, dtype=complex)
        for c in coeffs[:0:-1]:
            acc = (acc + c) * inv
        out[big] = coeffs[0] * np.log(sb) + acc
    return out


# ---------------------------------------------------------------------------
# contour quadrature


def _pole_safe_kappa(spec: GKernelSpec, shift: float, kappa: np.ndarray) -> np.ndarray:
    # the parabola at height y has real part shift + A0 k - y^2 / (4 A1^2 k / ...)
    # simplified: Re = shift + kappa*A0 - A2 * y^2 / (A1^2 * kappa)
    need = kappa
    for b in spec.bottom:
        p = -complex(b)
        if p.imag == 0:
            continue
        x_rel = p.real - shift + 0.25
        y2 = p.imag**2
        # solve A0 k^2 - x_rel k - (A2/A1^2) y2 > 0
        root = (x_rel + math.sqrt(x_rel**2 + 4 * _A0 * (_A2 / _A1**2) * y2)) / (2 * _A0)
        need = np.maximum(need, root)
    return need


def _contour_sum(spec: GKernelSpec, u: np.ndarray, cfg: QuadratureConfig, T: float, N: int, shared: bool = False):
    """Trapezoid sums on the deformed contour for each ``u`` (``u != 0``).

    Returns the complex integral, an absolute tail estimate and the sum of
    absolute terms (rounding floor).  With ``shared`` every ``x > 1`` uses
    the contour built for the smallest one, so all term moduli decrease in x.
    """
    h = T / N
    theta = np.arange(-N, N + 1) * h
    u = np.asarray(u, dtype=float)[:, None]
    left = u > 0
    kappa = N / np.abs(u)
    c = cfg.contour_offset if cfg.contour_offset is not None else spec.default_offset()
    if c <= spec.pole_abscissa():
        raise ContourError(
            f"contour offset {c} is not right of the pole at {spec.pole_abscissa()}"
        )
    shift_left = spec.pole_abscissa()
    # right-opening contour: the vertex may move right freely (no poles), and
    # x^(-vertex) then bounds the whole integral.  kappa keeps the nearest
    # pole about one unit away from the real theta axis.
    u_right = np.abs(u)
    if shared and np.any(~left):
        u_right = np.full_like(u_right, np.min(u_right[~left]))
    vertex = np.maximum(c, 10.0 / u_right)
    im_max = max((abs(complex(b).imag) for b in spec.bottom), default=0.0)
    kappa_right = (vertex - shift_left) / ((_A2 + _A1) * (1.0 + im_max))
    kappa = np.where(left, _pole_safe_kappa(spec, shift_left, kappa), kappa_right)
    # left-opening: s = shift + kappa (A0 - A2 t^2 + i A1 t)
    # right-opening: s = vertex + kappa (A2 t^2 + i A1 t)
    re_part = np.where(left, shift_left + kappa * (_A0 - _A2 * theta**2), vertex + kappa * _A2 * theta**2)
    s = re_part + 1j * kappa * _A1 * theta
    ds = kappa * (np.where(left, -2 * _A2 * theta, 2 * _A2 * theta) + 1j * _A1)
    logm = log_gamma_ratio(spec.bottom, spec.top, s)
    terms = np.exp(logm + s * u) * ds
    scale = h / (2j * math.pi)
    total = terms.sum(axis=1) * scale
    tail = np.maximum(np.abs(terms[:, 0]), np.abs(terms[:, -1])) * abs(scale)
    floor = np.abs(terms).sum(axis=1) * abs(scale) * np.finfo(float).eps
    return total, tail, floor


def _g_from_u(u, spec: GKernelSpec, cfg: QuadratureConfig, full_output: bool = False, shared: bool = False):
    """Kernel values at ``x = exp(-u)``; ``u`` may be computed accurately near x=1."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    spec = spec.reduced()
    if spec.q == 0:
        # delta mass at x = 1; zero elsewhere
        val = np.zeros(u.shape)
        info = {"imag_residual": np.zeros(u.shape), "tail": np.zeros(u.shape), "floor": np.zeros(u.shape)}
        return (val, info) if full_output else val
    if np.any(u == 0):
        raise ContourError("x = 1 is the endpoint singularity of the kernel")
    if spec.psi.real <= 0:
        raise ContourError(f"Re(psi) = {spec.psi.real} <= 0: kernel not a function")
    T, N = cfg.truncation_height, cfg.node_count
    for _ in range(cfg.max_doublings + 1):
        total, tail, floor = _contour_sum(spec, u, cfg, T, N, shared)
        if np.all(tail < max(cfg.abs_tol / 10.0, 1e-300) + cfg.rel_tol * np.abs(total) / 10.0):
            break
        T, N = 2 * T, 2 * N
    else:
        raise ContourError(f"contour tail estimate {tail.max():.3e} above tolerance")
    val = total.real if spec.is_real else total
    if full_output:
        return val, {"imag_residual": np.abs(total.imag), "tail": tail, "floor": floor}
    return val


def meijer_g(x, spec: GKernelSpec, cfg: QuadratureConfig | None = None, full_output: bool = False):
    """Evaluate ``G^{q,0}_{q,q}(x | top; bottom)`` for ``x > 0``, ``x != 1``.

    Requires ``Re(psi) > 0`` with ``psi = sum(top) - sum(bottom)``.  For real
    parameters the result is real and the imaginary part of the contour sum
    is returned in ``info['imag_residual']`` when ``full_output`` is set.
    """
    cfg = cfg or DEFAULT_CONFIG
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValueError("x must be positive")
    u = -np.log(np.atleast_1d(xa))
    res = _g_from_u(u, spec, cfg, full_output)
    if full_output:
        val, info = res
        if spec.is_real and np.any(info["imag_residual"] > cfg.abs_tol + cfg.rel_tol * np.abs(val)):
            raise ContourError("imaginary residual above tolerance for real parameters")
        return (val[0] if xa.ndim == 0 else val), info
    return res[0] if xa.ndim == 0 else res


# ---------------------------------------------------------------------------
# closed forms and oracles


def closed_form_q1(s, a: float, b: float):
    """``s^a (1-s)^(b-a-1) / Gamma(b-a)``, the kernel for one parameter pair."""
    if not b > a > 0:
        raise ParameterError("closed form needs b > a > 0")
    s = np.asarray(s, dtype=float)
    if np.any((s <= 0) | (s >= 1)):
        raise ValueError("s must lie in (0, 1)")
    out = np.exp(a * np.log(s) + (b - a - 1) * np.log1p(-s) - gammaln(b - a))
    return out[()] if out.ndim == 0 else out


def closed_form_q2(t, a1: float, a2: float, b1: float, b2: float, swap: bool = False):
    """Two-pair kernel through a Gauss function in ``1 - t``.

    ``t^a2 (1-t)^(psi-1) / Gamma(psi) 2F1(b1-a1, b2-a1; psi; 1-t)`` with
    ``psi = b1+b2-a1-a2``.  ``swap=True`` exchanges the roles of ``a1`` and
    ``a2``; both forms must agree.
    """
    if swap:
        a1, a2 = a2, a1
    if not (a1 > 0 and a2 > 0 and b1 + b2 > a1 + a2):
        raise ParameterError("need a1, a2 > 0 and b1 + b2 > a1 + a2")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any((t <= 0) | (t >= 1)):
        raise ValueError("t must lie in (0, 1)")
    ps = b1 + b2 - a1 - a2
    f = eval_series(ParameterSet(b1 - a1, [b2 - a1], [ps]), 1.0 - t, tol=1e-16).value
    out = np.exp(a2 * np.log(t) + (ps - 1) * np.log1p(-t) - gammaln(ps)) * np.real(f)
    return out[0] if out.size == 1 else out


def multidim_oracle(x: float, a: Sequence, b: Sequence, samples: int = 200_000, seed: int = _DEFAULT_SEED):
    """Monte Carlo value of the kernel from its (q-1)-fold integral form.

    The integration region is ``[0,1]^(q-1)`` restricted to ``t_2 ... t_q > x``.
    Each ``t_k`` is drawn from a Beta law truncated to ``(x, 1)`` that carries
    the ``(1-t_k)^(b_k-a_k-1)`` endpoint factor exactly.  Returns
    ``(estimate, standard_error)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    q = a.size
    if q < 2 or b.size != q:
        raise ParameterError("oracle needs q >= 2 and matching lengths")
    if not np.all(b > a) or not np.all(a > 0):
        raise ParameterError("oracle needs b_k > a_k > 0")
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    # lead with the pair whose boundary factor is least singular
    lead = int(np.argmax(b - a))
    order = [lead] + [k for k in range(q) if k != lead]
    a, b = a[order], b[order]
    a1, b1 = a[0], b[0]
    rng = np.random.default_rng(seed)
    alpha = np.maximum(a[1:] - a1, 0.5)
    beta = b[1:] - a[1:]
    lo = betainc(alpha, beta, x)
    log_z = betaln(alpha, beta) + np.log1p(-lo)
    from scipy.special import betaincinv

    uu = rng.uniform(size=(samples, q - 1))
    t = betaincinv(alpha, beta, lo + uu * (1.0 - lo))
    prod = np.prod(t, axis=1)
    inside = prod > x
    logw = np.sum(log_z) + np.sum((a[1:] - a1 - alpha) * np.log(t), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        boundary = np.where(inside, (b1 - a1 - 1) * np.log1p(-x / np.where(inside, prod, 1.0)), -np.inf)
    w = np.where(inside, np.exp(logw + boundary), 0.0)
    pref = math.exp(a1 * math.log(x) - float(np.sum(gammaln(b - a))))
    mean = float(w.mean()) * pref
    se = float(w.std(ddof=1) / math.sqrt(samples)) * pref
    return mean, se


# ---------------------------------------------------------------------------
# moment-type integrals over (0, 1)


def _exact_mellin(spec: GKernelSpec, k) -> np.ndarray:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    acc = np.zeros(k.shape, dtype=complex)
    for b in spec.bottom:
        acc += loggamma(k + complex(b))
    for t in spec.top:
        acc -= loggamma(k + complex(t))
    out = np.exp(acc)
    return out.real if spec.is_real else out


def mellin_moments(spec: GKernelSpec, ks, cfg: QuadratureConfig | None = None):
    """Quadrature of ``int_0^1 s^(k-1) G(s) ds`` for each ``k`` in ``ks``.

    Returns ``(quadrature, exact)`` where ``exact`` is the gamma ratio
    ``prod Gamma(k+bottom) / prod Gamma(k+top)``.  ``k`` may be real.
    """
    cfg = cfg or DEFAULT_CONFIG
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    a, _ = spec.reduced().zero_exponent
    if spec.q and np.any(ks + a <= 0):
        raise ParameterError("moment order must exceed -min Re(bottom)")

    def f(n: UnitNodes):
        g = _g_from_u(n.u, spec, cfg)
        # s^(k-1) = exp(-(k-1) u)
        return g[:, None] * np.exp(-np.outer(n.u, ks - 1.0))

    quad = integrate_unit(
        f,
        abs_tol=cfg.abs_tol,
        rel_tol=cfg.rel_tol,
        h0=cfg.endpoint_step,
        max_levels=cfg.endpoint_levels,
    )
    return quad, _exact_mellin(spec, ks)


def mellin_moment(spec: GKernelSpec, k, cfg: QuadratureConfig | None = None):
    quad, exact = mellin_moments(spec, [k], cfg)
    return quad[0], exact[0]


def laplace_identity_check(x: float, a: Sequence, b: Sequence, cfg: QuadratureConfig | None = None) -> float:
    """Relative gap between ``prod Gamma(x+a_i)/Gamma(x+b_i)`` and its Laplace integral.

    The integral ``int_0^inf e^(-t x) G(e^(-t)) dt`` is computed after the
    substitution ``u = e^(-t)``.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    spec = GKernelSpec(b, a)
    quad, exact = mellin_moments(spec, [x], cfg)
    return float(abs(quad[0] - exact[0]) / abs(exact[0]))


def vanish_check(x, spec: GKernelSpec, cfg: QuadratureConfig | None = None):
    """Residual of the kernel for ``x > 1``, where it vanishes identically.

    Returns ``|value| + tail + rounding floor`` of the right-opening contour
    sum.  All points of one call share a contour, on which every term
    modulus carries a factor ``x^(-Re s)``, so the floor and tail decrease
    in ``x``.
    """
    cfg = cfg or DEFAULT_CONFIG
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 1):
        raise ValueError("vanish_check needs x > 1")
    if spec.reduced().psi.real <= 0:
        raise ContourError("Re(psi) must be positive")
    val, info = _g_from_u(-np.log(xa), spec, cfg, full_output=True, shared=True)
    res = np.abs(val) + info["tail"] + info["floor"]
    return float(res[0]) if np.ndim(x) == 0 else res


def endpoint_slope(spec: GKernelSpec, xs, cfg: QuadratureConfig | None = None) -> np.ndarray:
    """Local exponent ``d log G / d log x`` between consecutive grid points."""
    xs = np.asarray(xs, dtype=float)
    g = meijer_g(xs, spec, cfg)
    return np.diff(np.log(g)) / np.diff(np.log(xs))


def density_table(spec: GKernelSpec, xs, cfg: QuadratureConfig | None = None, prefactor: float = 1.0, divide_by_x: bool = False):
    """Rows ``(x, value, error_estimate)`` for CSV export."""
    xs = np.asarray(xs, dtype=float)
    val, info = _g_from_u(-np.log(xs), spec, cfg or DEFAULT_CONFIG, full_output=True)
    err = info["tail"] + info["floor"] + info["imag_residual"]
    scale = prefactor / xs if divide_by_x else prefactor
    return [(float(x), float(np.real(v)), float(e)) for x, v, e in zip(xs, val * scale, err * np.abs(scale))]


def density_csv(rows, header=("x", "value", "error")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) for v in r])
    return buf.getvalue()
