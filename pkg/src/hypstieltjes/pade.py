"""Pade table of ``F(sigma, A; B; -z)`` from its moment sequence.

The Taylor coefficients of ``F(-z)`` in powers of ``-z`` are the moments

    m_k = (sigma)_k prod (a_i)_k / (prod (b_i)_k k!) = int_0^1 s^k rho_1(s) ds,

so for ``0 < sigma <= 1`` the function is a Stieltjes function and the
denominators of its near-diagonal approximants are orthogonal polynomials.
For ``[m+j/m]`` the orthogonality weight is ``s^(j+1) rho_1(s)``: with
``j = -1`` this is the classical ``[m-1/m]`` case with weight ``rho_1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .params import ParameterError, ParameterSet, majorization_verdict

__all__ = [
    "MomentSequence",
    "PadeApproximant",
    "HankelError",
    "moments",
    "hankel",
    "orthogonal_denominator",
    "pade",
    "pade_from_series",
    "normality_check",
    "convergence_check",
]

M_CAP = 10
RANK_TOL = 1e-13


class HankelError(np.linalg.LinAlgError):
    """Singular (numerically rank-deficient) Hankel system."""


@dataclass
class MomentSequence:
    values: np.ndarray
    source: ParameterSet | None = None

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, k):
        return self.values[k]

    @property
    def series(self) -> np.ndarray:
        """Taylor coefficients of ``F(-z)`` in powers of ``z``."""
        k = np.arange(self.values.size)
        return np.where(k % 2 == 0, 1.0, -1.0) * self.values


def moments(P: ParameterSet, K: int) -> MomentSequence:
    """``m_0 .. m_K`` from the term ratio, accumulated in log space with sign."""
    if not P.is_real:
        raise ParameterError("moments need real parameters")
    a, b = P.reduced()
    n = np.arange(K, dtype=float)
    ratio = (P.sigma + n) / (n + 1.0)
    for x, y in zip(a, b):
        ratio = ratio * (x + n) / (y + n)
    with np.errstate(divide="ignore"):
        logs = np.concatenate([[0.0], np.cumsum(np.log(np.abs(ratio)))])
    sign = np.concatenate([[1.0], np.cumprod(np.sign(ratio))])
    return MomentSequence(sign * np.exp(logs), P)


def _as_array(mom) -> np.ndarray:
    return np.asarray(mom.values if isinstance(mom, MomentSequence) else mom, dtype=float)


def hankel(mom, m: int, shift: int) -> np.ndarray:
    """``(m_{i+k+shift})_{i,k<m}``."""
    v = _as_array(mom)
    if shift < 0:
        raise ValueError("negative moment index")
    if 2 * m - 2 + shift >= v.size:
        raise ValueError(f"need moments up to index {2 * m - 2 + shift}")
    i = np.arange(m)
    return v[i[:, None] + i[None, :] + shift]


def _numerically_singular(H: np.ndarray) -> bool:
    if H.size == 0:
        return False
    # rank judged after symmetric diagonal equilibration
    d = np.abs(np.diag(H))
    if np.all(d > 0):
        H = H / np.sqrt(d)[:, None] / np.sqrt(d)[None, :]
    sv = np.linalg.svd(H, compute_uv=False)
    return not (sv[-1] > RANK_TOL * sv[0])


def _refined_solve(H: np.ndarray, rhs: np.ndarray, steps: int = 3) -> np.ndarray:
    """Equilibrated LU solve followed by iterative refinement."""
    d = 1.0 / np.sqrt(np.abs(np.diag(H)))
    Hs = H * d[:, None] * d[None, :]
    rs = rhs * d
    x = np.linalg.solve(Hs, rs)
    for _ in range(steps):
        r = rs - Hs @ x
        x = x + np.linalg.solve(Hs, r)
    return x * d


def orthogonal_denominator(mom, m: int, j: int) -> np.ndarray:
    """Monic ``pi_m^j`` orthogonal to lower degrees under ``s^j rho_1(s) ds``.

    Returns ascending coefficients ``[c_0, ..., c_{m-1}, 1]``.  Only moments
    of nonnegative index exist, so ``j >= 0``; the ``[m-1/m]`` denominator
    uses ``j = 0`` through :func:`pade`.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if j < 0:
        raise ValueError("weight s^j needs j >= 0 (moment of index -1 is not available)")
    if m == 0:
        return np.array([1.0])
    if m > M_CAP:
        raise ValueError(f"m capped at {M_CAP} in double precision")
    H = hankel(mom, m, j)
    if _numerically_singular(H):
        raise HankelError(f"Hankel matrix of order {m} (shift {j}) is numerically singular")
    v = _as_array(mom)
    rhs = -v[np.arange(m) + m + j]
    c = _refined_solve(H, rhs)
    return np.concatenate([c, [1.0]])


@dataclass
class PadeApproximant:
    m: int
    j: int
    numerator_coeffs: np.ndarray
    denominator_coeffs: np.ndarray
    hankel_det: float = float("nan")
    order_residual: float = float("nan")
    extra: dict = field(default_factory=dict)

    @property
    def L(self) -> int:
        return self.m + self.j

    def __call__(self, z):
        z = np.asarray(z, dtype=complex if np.iscomplexobj(z) else float)
        return npoly.polyval(z, self.numerator_coeffs) / npoly.polyval(z, self.denominator_coeffs)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "j": self.j,
            "numerator": [float(v) for v in self.numerator_coeffs],
            "denominator": [float(v) for v in self.denominator_coeffs],
            "hankel_det": float(self.hankel_det),
            "order_residual": float(self.order_residual),
        }


def _order_residual(series: np.ndarray, num: np.ndarray, den: np.ndarray, L: int, M: int) -> float:
    """Largest relative coefficient of ``F Q - P`` over indices ``0 .. L+M``."""
    n = L + M + 1
    prod = np.convolve(series[:n], den)[:n]
    scale = np.convolve(np.abs(series[:n]), np.abs(den))[:n]
    p = np.zeros(n)
    p[: num.size] = num[:n]
    return float(np.max(np.abs(prod - p) / np.where(scale > 0, scale, 1.0)))


def pade_from_series(series, L: int, M: int) -> PadeApproximant:
    """Generic ``[L/M]`` from Taylor coefficients (``Q(0) = 1``)."""
    c = np.asarray(series, dtype=float)
    if c.size < L + M + 1:
        raise ValueError(f"need {L + M + 1} coefficients")

    def coef(n):
        return c[n] if n >= 0 else 0.0

    if M == 0:
        q = np.array([1.0])
        det = 1.0
    else:
        A = np.array([[coef(L + i - k) for k in range(1, M + 1)] for i in range(1, M + 1)])
        rhs = -np.array([coef(L + i) for i in range(1, M + 1)])
        if _numerically_singular(A):
            raise HankelError(f"[{L}/{M}] system is numerically singular")
        det = float(np.linalg.det(A))
        x = np.linalg.solve(A, rhs)
        for _ in range(2):
            x = x + np.linalg.solve(A, rhs - A @ x)
        q = np.concatenate([[1.0], x])
    p = np.convolve(c[: L + 1], q)[: L + 1]
    res = _order_residual(c, p, q, L, M)
    return PadeApproximant(M, L - M, p, q, det, res)


def _check_pade_hypotheses(P: ParameterSet):
    if not P.is_real:
        raise ParameterError("Pade table needs real parameters")
    if not 0 < P.sigma <= 1:
        raise ParameterError("Pade approximants here need 0 < sigma <= 1")
    v = majorization_verdict(P.a, P.b)
    if not v.weak_supermajorized:
        raise ParameterError(f"B is not weakly supermajorized by A: {v.reason}")


def pade(P: ParameterSet, m: int, j: int, check: bool = True) -> PadeApproximant:
    """``[m+j/m]`` with denominator ``(-z)^m pi_m^{j+1}(-1/z)``.

    The numerator is the degree-``m+j`` truncation of ``F(-z) Q(z)``.
    """
    if check:
        _check_pade_hypotheses(P)
    if j < -1:
        raise ValueError("j must be >= -1")
    K = 2 * m + j + 2
    mom = moments(P, max(K, 1))
    pi = orthogonal_denominator(mom, m, j + 1)
    # Q(z) = (-z)^m pi(-1/z): coefficient of z^d is (-1)^d c_{m-d}
    d = np.arange(m + 1)
    q = np.where(d % 2 == 0, 1.0, -1.0) * pi[::-1]
    q = q / q[0]
    series = mom.series
    L = m + j
    p = np.convolve(series[: L + 1], q)[: L + 1] if L >= 0 else np.zeros(0)
    det = float(np.linalg.det(hankel(mom, m, j + 1))) if m else 1.0
    res = _order_residual(series, p, q, L, m)
    return PadeApproximant(m, j, p, q, det, res, {"pi": pi})


def _same_rational(a: PadeApproximant, b: PadeApproximant, tol: float = 1e-8) -> bool:
    """``P_a Q_b == P_b Q_a`` up to relative ``tol`` on coefficients."""
    lhs = np.convolve(a.numerator_coeffs, b.denominator_coeffs) if a.numerator_coeffs.size else np.zeros(1)
    rhs = np.convolve(b.numerator_coeffs, a.denominator_coeffs) if b.numerator_coeffs.size else np.zeros(1)
    n = max(lhs.size, rhs.size)
    lhs = np.pad(lhs, (0, n - lhs.size))
    rhs = np.pad(rhs, (0, n - rhs.size))
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)), 1e-300)
    return bool(np.max(np.abs(lhs - rhs)) <= tol * scale)


def _c_det(series: np.ndarray, L: int, M: int):
    """``C(L/M) = det(c_{L-M+i+k+1})``, with its diagonal-scaled magnitude and rank verdict."""
    if M == 0:
        return 1.0, 1.0, True
    idx = L - M + 1 + np.arange(M)[:, None] + np.arange(M)[None, :]
    H = np.where(idx >= 0, series[np.maximum(idx, 0)], 0.0)
    det = float(np.linalg.det(H))
    diag = np.prod(np.abs(np.diag(H)))
    return det, (abs(det) / diag if diag > 0 else math.inf), not _numerically_singular(H)


def normality_check(P: ParameterSet, m_max: int, n_max: int, check: bool = True) -> dict:
    """Normality of every ``[m/n]``, ``m <= m_max``, ``n <= n_max``.

    An entry is normal when ``C(m/n)``, ``C(m+1/n)``, ``C(m/n+1)`` and
    ``C(m+1/n+1)`` are numerically nonzero; separately all table entries
    must be pairwise distinct rational functions.
    """
    if check:
        _check_pade_hypotheses(P)
    K = m_max + n_max + 3
    series = moments(P, K).series
    table = np.zeros((m_max + 1, n_max + 1), dtype=bool)
    dets = {}
    entries = {}
    for L in range(m_max + 1):
        for M in range(n_max + 1):
            ok = True
            for dl, dm in ((0, 0), (1, 0), (0, 1), (1, 1)):
                key = (L + dl, M + dm)
                if key not in dets:
                    dets[key] = _c_det(series, *key)
                ok &= dets[key][2]
            table[L, M] = ok
            try:
                entries[(L, M)] = pade_from_series(series, L, M)
            except HankelError:
                table[L, M] = False
    keys = sorted(entries)
    duplicates = []
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1 :]:
            if _same_rational(entries[k1], entries[k2]):
                duplicates.append((k1, k2))
                table[k1] = table[k2] = False
    return {
        "normal": table,
        "all_normal": bool(table.all()),
        "duplicates": duplicates,
        "determinants": {f"{k[0]}/{k[1]}": [v[0], v[1]] for k, v in sorted(dets.items())},
        "min_scaled_det": float(min(v[1] for v in dets.values())),
    }


def convergence_check(P: ParameterSet, z_eval, m_max: int, j: int = 0, reference=None, cfg=None, check: bool = True) -> np.ndarray:
    """``|[m+j/m](z) - F(-z)|`` for ``m = 1 .. m_max``.

    ``reference`` defaults to :func:`hypergeometric` at ``-z`` (the series
    near the origin, the integral representation elsewhere).
    """
    if check:
        _check_pade_hypotheses(P)
    if reference is None:
        from .stieltjes import hypergeometric

        reference = hypergeometric(P, -np.asarray(z_eval), cfg)
    errs = []
    for m in range(1, m_max + 1):
        errs.append(abs(pade(P, m, j, check=False)(z_eval) - reference))
    return np.array(errs)
