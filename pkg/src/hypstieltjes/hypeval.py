"""Power-series evaluation of ``q+1Fq`` inside the unit disk.

This is the ground truth wherever the series converges; continuation to
the cut plane lives in :mod:`hypstieltjes.stieltjes`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ParameterSet

__all__ = [
    "DomainError",
    "ConvergenceError",
    "SeriesResult",
    "eval_series",
    "series_derivative",
    "contiguous_shift",
    "binomial_case",
]

MAX_TERMS = 100_000


class DomainError(ValueError):
    """Argument outside the region where an evaluation route is valid."""


class ConvergenceError(RuntimeError):
    """Series did not meet its tolerance within the term cap."""


@dataclass
class SeriesResult:
    value: complex | np.ndarray
    terms_used: int | np.ndarray
    truncation_bound: float | np.ndarray


def _cast(x, real_ok):
    if real_ok:
        return np.real(x) if np.ndim(x) else float(np.real(x))
    return x


def eval_series(
    P: ParameterSet,
    z,
    tol: float = 1e-15,
    max_terms: int = MAX_TERMS,
) -> SeriesResult:
    """Sum the hypergeometric series at ``z`` (scalar or array, ``|z| < 1``).

    Terms are generated by the running ratio
    ``(sigma+n) prod(a_i+n) / (prod(b_i+n) (n+1)) z``.  Summation stops once
    two consecutive term moduli fall below ``tol * |partial sum|``.
    Exactly equal upper/lower parameters are cancelled first.
    """
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if np.any(np.abs(zarr) >= 1.0):
        raise DomainError("series requires |z| < 1")
    a, b = P.reduced()
    sigma = complex(P.sigma)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)

    total = np.ones_like(zarr)
    term = np.ones_like(zarr)
    small_prev = np.zeros(zarr.shape, dtype=bool)
    done = np.zeros(zarr.shape, dtype=bool)
    used = np.ones(zarr.shape, dtype=int)
    last = np.zeros(zarr.shape)
    n = 0
    while not np.all(done):
        if n >= max_terms:
            bad = np.flatnonzero(~done)
            raise ConvergenceError(
                f"series not converged after {max_terms} terms at z={zarr[bad[0]]!r}, "
                f"last term {abs(term[bad[0]]):.3e}"
            )
        ratio = (sigma + n) * np.prod(a + n) / (np.prod(b + n) * (n + 1))
        term = np.where(done, 0.0, term * ratio * zarr)
        total = total + term
        n += 1
        mag = np.abs(term)
        small = mag <= tol * np.abs(total)
        newly = small & small_prev & ~done
        used[newly] = n + 1
        last[newly] = mag[newly]
        done |= newly
        small_prev = small
    real_ok = P.is_real and not np.iscomplexobj(z)
    value = _cast(total, real_ok)
    if scalar:
        return SeriesResult(value[0] if np.ndim(value) else value, int(used[0]), float(last[0]))
    return SeriesResult(value, used, last)


def series_derivative(P: ParameterSet, z, tol: float = 1e-15):
    """``d/dz F(sigma, A; B; z)`` through the shifted-parameter identity."""
    coef = complex(P.sigma) * np.prod(np.asarray(P.a, complex)) / np.prod(np.asarray(P.b, complex))
    shifted = ParameterSet(
        P.sigma + 1, [ai + 1 for ai in P.a], [bi + 1 for bi in P.b]
    )
    return coef * eval_series(shifted, z, tol).value


def contiguous_shift(P: ParameterSet, m: float, z, tol: float = 1e-15) -> tuple:
    """Both sides of the contiguous relation used to bound ``b_q + 1/m`` families.

    With ``beta = b_q + 1/m`` and ``B' = (b_1, ..., b_{q-1})``::

        F(s, A; B', beta; -z) = F(s, A; B', beta+1; -z)
            - z s prod(a) / (beta (beta+1) prod(B')) F(s+1, A+1; B'+1, beta+2; -z)

    Returns ``(lhs, rhs)``.  The upper parameter ``s`` is raised by one in
    the correction term; coefficient matching shows it must be.
    """
    sigma = P.sigma
    a = list(P.a)
    bp = list(P.b[:-1])
    beta = P.b[-1] + 1.0 / m
    lhs = eval_series(ParameterSet(sigma, a, bp + [beta]), -np.asarray(z), tol).value
    first = eval_series(ParameterSet(sigma, a, bp + [beta + 1]), -np.asarray(z), tol).value
    coef = sigma * np.prod(a) / (beta * (beta + 1) * np.prod(bp))
    corr = eval_series(
        ParameterSet(sigma + 1, [x + 1 for x in a], [x + 1 for x in bp] + [beta + 2]),
        -np.asarray(z),
        tol,
    ).value
    rhs = first - np.asarray(z) * coef * corr
    return lhs, rhs


def binomial_case(sigma, z):
    """``(1+z)^(-sigma)`` on the principal branch; ``z`` off ``(-inf, -1]``."""
    zc = np.asarray(z, dtype=complex)
    on_cut = (zc.imag == 0) & (zc.real <= -1)
    if np.any(on_cut):
        raise DomainError("z lies on the cut (-inf, -1]")
    out = np.exp(-complex(sigma) * np.log1p(zc))
    if np.isrealobj(z) and complex(sigma).imag == 0:
        out = out.real
    return out[()] if out.ndim == 0 else out
