"""Parameter sets, rising factorials and majorization predicates.

The hypergeometric function handled throughout the package is

    F(sigma, A; B; z) = sum_n (sigma)_n (a_1)_n ... (a_q)_n / ((b_1)_n ... (b_q)_n n!) z^n

so a parameter set is the triple ``(sigma, A, B)`` with ``len(A) == len(B)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations
from numbers import Number
from typing import Sequence

import numpy as np
from scipy.special import loggamma

__all__ = [
    "ParameterError",
    "ParameterSet",
    "MajorizationVerdict",
    "pochhammer",
    "psi",
    "majorization_verdict",
    "elementary_symmetric",
    "elementary_symmetric_brute",
    "chain_condition",
    "random_supermajorized",
]


class ParameterError(ValueError):
    """Raised when a parameter vector violates a stated precondition."""


def _as_scalar(x):
    """Collapse numbers with zero imaginary part to float."""
    c = complex(x)
    return c.real if c.imag == 0.0 else c


def _is_nonpositive_integer(x) -> bool:
    c = complex(x)
    return c.imag == 0.0 and c.real <= 0 and c.real == math.floor(c.real)


@dataclass(frozen=True)
class ParameterSet:
    """Parameters ``(sigma, A, B)`` of a ``q+1Fq`` function.

    Entries may be complex; real-valued entries are stored as floats.
    """

    sigma: complex
    a: tuple
    b: tuple

    def __init__(self, sigma, a, b):
        a = tuple(_as_scalar(v) for v in np.atleast_1d(a))
        b = tuple(_as_scalar(v) for v in np.atleast_1d(b))
        if len(a) != len(b):
            raise ParameterError(f"len(A)={len(a)} != len(B)={len(b)}")
        if len(a) < 1:
            raise ParameterError("q must be at least 1")
        for bi in b:
            if _is_nonpositive_integer(bi):
                raise ParameterError(f"lower parameter {bi} is a nonpositive integer")
        object.__setattr__(self, "sigma", _as_scalar(sigma))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def q(self) -> int:
        return len(self.a)

    @property
    def psi(self):
        return psi(self.a, self.b)

    @property
    def is_real(self) -> bool:
        return all(isinstance(v, float) for v in (self.sigma, *self.a, *self.b))

    def reduced(self) -> tuple[tuple, tuple]:
        """Return ``(A, B)`` with exactly equal upper/lower pairs removed."""
        a = list(self.a)
        b = list(self.b)
        for ai in list(a):
            if ai in b:
                a.remove(ai)
                b.remove(ai)
        return tuple(a), tuple(b)

    def shifted(self, delta) -> "ParameterSet":
        """Parameter set with ``delta`` added to every entry of A and B."""
        return ParameterSet(
            self.sigma,
            [ai + delta for ai in self.a],
            [bi + delta for bi in self.b],
        )

    def with_sigma(self, sigma) -> "ParameterSet":
        return ParameterSet(sigma, self.a, self.b)

    def to_dict(self) -> dict:
        def enc(v):
            return [v.real, v.imag] if isinstance(v, complex) else v

        return {
            "sigma": enc(self.sigma),
            "a": [enc(v) for v in self.a],
            "b": [enc(v) for v in self.b],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterSet":
        def dec(v):
            return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else v

        return cls(dec(d["sigma"]), [dec(v) for v in d["a"]], [dec(v) for v in d["b"]])


@dataclass(frozen=True)
class MajorizationVerdict:
    weak_supermajorized: bool
    majorized: bool
    psi: complex
    chain_holds: bool
    reason: str = ""


def pochhammer(a, n: int, return_overflow: bool = False):
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``.

    Small ``n`` uses the direct product; large ``n`` goes through
    log-gamma differences.  An overflowing result is returned as ``inf``
    and, with ``return_overflow=True``, flagged in the second return value.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    is_real = isinstance(a, Number) and complex(a).imag == 0.0
    overflow = False
    if n <= 64 or _is_nonpositive_integer(a) or _is_nonpositive_integer(complex(a) + n):
        acc = 1.0 if is_real else 1.0 + 0j
        av = complex(a).real if is_real else complex(a)
        with np.errstate(over="ignore"):
            for k in range(n):
                acc *= av + k
        val = acc
        overflow = bool(not np.isfinite(val)) if is_real else bool(not np.isfinite(abs(val)))
    else:
        lg = complex(loggamma(complex(a) + n) - loggamma(complex(a)))
        if lg.real > 709.0:
            overflow = True
            val = math.inf
            if not is_real:
                val = complex(math.inf, 0.0)
        else:
            val = np.exp(lg)
            val = float(val.real) if is_real else complex(val)
    if overflow:
        warnings.warn(f"pochhammer({a}, {n}) overflowed", RuntimeWarning, stacklevel=2)
    if return_overflow:
        return val, overflow
    return val


def psi(a: Sequence, b: Sequence):
    """Parameter excess ``sum(b_k - a_k)``."""
    if len(a) != len(b):
        raise ParameterError(f"length mismatch: {len(a)} vs {len(b)}")
    return _as_scalar(sum(complex(bk) - complex(ak) for ak, bk in zip(a, b)))


def _real_vector(x, name):
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise ParameterError(f"{name} must be real for majorization")
        arr = arr.real
    return np.asarray(arr, dtype=float)


def majorization_verdict(a: Sequence, b: Sequence, rtol: float = 1e-12) -> MajorizationVerdict:
    """Check ``B`` weakly supermajorized by ``A`` (and plain majorization).

    Both vectors are sorted ascending internally.  Prefix sums are compared
    with ``<=`` up to ``rtol`` relative, so boundary cases such as ``4 <= 4``
    pass and so do sums that differ only by rounding; ``psi`` counts as zero
    under the same tolerance.
    """
    av = np.sort(_real_vector(a, "A"))
    bv = np.sort(_real_vector(b, "B"))
    if av.shape != bv.shape:
        raise ParameterError("length mismatch")
    p = psi(tuple(av), tuple(bv))
    chain = bool(np.all(av > 0) and np.all(bv > 0) and chain_condition(av, bv))
    if np.any(av <= 0) or np.any(bv <= 0):
        return MajorizationVerdict(False, False, p, chain, "nonpositive entry")
    sa = np.cumsum(av)
    sb = np.cumsum(bv)
    bad = np.nonzero(~(sa <= sb + rtol * sa))[0]
    if bad.size:
        k = int(bad[0]) + 1
        return MajorizationVerdict(
            False, False, p, chain, f"prefix sum k={k}: {sa[k - 1]} > {sb[k - 1]}"
        )
    return MajorizationVerdict(True, bool(abs(p) <= rtol * sa[-1]), p, chain, "")


def elementary_symmetric(x: Sequence, k: int) -> float:
    """k-th elementary symmetric polynomial via the prefix recurrence."""
    x = np.asarray(x, dtype=float)
    q = x.size
    if not 0 <= k <= q:
        raise ValueError(f"k={k} outside [0, {q}]")
    e = np.zeros(q + 1)
    e[0] = 1.0
    for i, xi in enumerate(x, start=1):
        # right-hand side is evaluated on the previous prefix before assignment
        e[1 : i + 1] = e[1 : i + 1] + xi * e[0:i]
    return float(e[k])


def elementary_symmetric_brute(x: Sequence, k: int) -> float:
    """Reference implementation summing over all k-subsets."""
    return float(sum(math.prod(c) for c in combinations(list(x), k)))


def chain_condition(a: Sequence, b: Sequence, rtol: float = 1e-12) -> bool:
    """Check ``e_k(B)/e_k(A) >= e_{k-1}(B)/e_{k-1}(A) >= ... >= 1``.

    Evaluated as cross-multiplied inequalities; no ratios are formed.  Each
    step may fall short by ``rtol`` relative, which absorbs rounding in the
    equality cases (``psi = 0``).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    q = a.size
    ea = [elementary_symmetric(a, k) for k in range(q + 1)]
    eb = [elementary_symmetric(b, k) for k in range(q + 1)]
    # k = 1 step against e_0 ratio 1 is the condition e_1(B) >= e_1(A)
    for k in range(1, q + 1):
        lhs, rhs = eb[k] * ea[k - 1], eb[k - 1] * ea[k]
        if lhs < rhs - rtol * abs(rhs):
            return False
    return True


def random_supermajorized(
    rng: np.random.Generator,
    q: int,
    *,
    strict_psi: bool = True,
    low: float = 0.2,
    high: float = 4.0,
    max_excess: float = 2.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``(A, B)`` with ``B`` weakly supermajorized by ``A``.

    ``B`` is a doubly-stochastic average of permutations of ``A`` (which is
    majorized by ``A``) plus nonnegative increments, so the family covers
    cases where ``b_k < a_k`` for some ``k``.  With ``strict_psi`` the
    increments have a positive total so that ``psi > 0``.
    """
    a = np.sort(rng.uniform(low, high, size=q))
    weights = rng.dirichlet(np.ones(3))
    perms = [np.arange(q), rng.permutation(q), rng.permutation(q)]
    mix = sum(w * np.eye(q)[p] for w, p in zip(weights, perms))
    b = mix @ a
    if strict_psi:
        inc = rng.uniform(0.0, 1.0, size=q) * rng.binomial(1, 0.7, size=q)
        if inc.sum() == 0.0:
            inc[rng.integers(q)] = 1.0
        inc *= rng.uniform(0.05, max_excess) / inc.sum()
        b = b + inc
    return a, np.sort(b)
