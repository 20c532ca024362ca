import math

import mpmath as mp
import numpy as np
import pytest

from hypstieltjes.params import ParameterError, ParameterSet
from hypstieltjes.pade import (
    M_CAP,
    HankelError,
    MomentSequence,
    convergence_check,
    hankel,
    moments,
    normality_check,
    orthogonal_denominator,
    pade,
    pade_from_series,
)

LOG = ParameterSet(1, [1], [2])


def test_moments_of_log_family():
    # rho_1 = 1 on (0, 1): moments 1/(k+1)
    m = moments(LOG, 6)
    np.testing.assert_allclose(m.values, 1 / np.arange(1, 8), rtol=1e-14)
    np.testing.assert_allclose(m.series, (-1.0) ** np.arange(7) / np.arange(1, 8), rtol=1e-14)


def test_orthogonal_denominator_examples():
    assert orthogonal_denominator(moments(LOG, 4), 0, 0).tolist() == [1.0]
    # shifted Legendre: first polynomial s - 1/2
    np.testing.assert_allclose(orthogonal_denominator(moments(LOG, 4), 1, 0), [-0.5, 1.0], atol=1e-15)


def test_orthogonal_denominator_legendre_degree2():
    # s^2 - s + 1/6
    np.testing.assert_allclose(orthogonal_denominator(moments(LOG, 6), 2, 0), [1 / 6, -1.0, 1.0], atol=1e-13)


def test_orthogonal_denominator_errors():
    mom = moments(LOG, 30)
    with pytest.raises(ValueError):
        orthogonal_denominator(mom, 2, -1)
    with pytest.raises(ValueError):
        orthogonal_denominator(mom, M_CAP + 1, 0)


def test_singular_hankel_reported():
    # a single atom has rank-one moment matrices
    mom = MomentSequence(np.ones(10), "atom at 1")
    with pytest.raises(HankelError):
        orthogonal_denominator(mom, 2, 0)


def test_pade_zero_one():
    # DERIVED: [0/1] of ln(1+z)/z is 1/(1+z/2)
    p = pade(LOG, 1, -1)
    np.testing.assert_allclose(p.numerator_coeffs, [1.0])
    np.testing.assert_allclose(p.denominator_coeffs, [1.0, 0.5])


def test_pade_matches_generic_solver():
    for m, j in [(2, 0), (3, 1), (4, 2)]:
        a = pade(LOG, m, j)
        b = pade_from_series(moments(LOG, 2 * m + j + 2).series, m + j, m)
        np.testing.assert_allclose(a.numerator_coeffs, b.numerator_coeffs, rtol=1e-10, atol=1e-14)
        np.testing.assert_allclose(a.denominator_coeffs, b.denominator_coeffs, rtol=1e-10, atol=1e-14)


def test_pade_against_mpmath():
    # DERIVED: mpmath.pade on the same Taylor coefficients
    c = [mp.mpf((-1) ** k) / (k + 1) for k in range(8)]
    p_ref, q_ref = mp.pade(c, 4, 3)
    p = pade(LOG, 3, 1)
    np.testing.assert_allclose(p.numerator_coeffs, [float(v) for v in p_ref], rtol=1e-10)
    np.testing.assert_allclose(p.denominator_coeffs, [float(v) for v in q_ref], rtol=1e-10)


def test_order_residual_small():
    for m in range(1, 7):
        assert pade(LOG, m, 0).order_residual < 1e-12


def test_hypotheses_enforced():
    with pytest.raises(ParameterError):
        pade(ParameterSet(1.5, [1], [2]), 2, 0)
    with pytest.raises(ParameterError):
        pade(ParameterSet(1, [2, 2], [1, 3]), 2, 0)


def test_normality_examples():
    assert normality_check(LOG, 4, 4)["all_normal"]
    assert normality_check(ParameterSet(0.5, [1, 3], [2, 2]), 3, 3)["all_normal"]


def test_normality_binomial_degenerate():
    # (1+z)^-1 is rational: the table repeats
    nc = normality_check(ParameterSet(1, [1.5], [1.5]), 2, 2)
    assert not nc["all_normal"] and nc["duplicates"]


def test_convergence_examples():
    errs = convergence_check(LOG, 1.0, 8, reference=math.log(2))
    assert errs[-1] <= 1e-6 and np.all(np.diff(errs) < 0)
    assert np.all(convergence_check(LOG, 0.0, 4, reference=1.0) == 0)


def test_convergence_near_cut():
    errs = convergence_check(LOG, -0.9, 8)
    assert np.all(np.diff(errs) < 0)
    assert errs[-1] > convergence_check(LOG, 1.0, 8)[-1]


def test_hankel_shape():
    H = hankel(moments(LOG, 10), 3, 1)
    assert H.shape == (3, 3) and H[0, 0] == pytest.approx(0.5)


def test_to_dict():
    d = pade(LOG, 2, 0).to_dict()
    assert d["m"] == 2 and len(d["denominator"]) == 3
