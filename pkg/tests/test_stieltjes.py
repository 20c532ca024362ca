import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypstieltjes.hypeval import DomainError, eval_series
from hypstieltjes.params import ParameterError, ParameterSet, pochhammer, random_supermajorized
from hypstieltjes.stieltjes import (
    density_export,
    density_mu,
    density_rho,
    density_rho1,
    eval_stieltjes,
    exact_order_test,
    hypergeometric,
    limit_measure_q2,
    phi_epsilon,
    phi_y,
    power_denominator_rep,
    resolve_limit_coefficient,
    rho1_spec,
)

LOG = ParameterSet(1, [1], [2])


# representation


def test_log_values():
    # DERIVED: ln(1+z)/z
    assert eval_stieltjes(LOG, 1.0) == pytest.approx(math.log(2), rel=1e-13)
    assert eval_stieltjes(LOG, 9.0) == pytest.approx(math.log(10) / 9, abs=1e-12)


def test_value_at_zero():
    assert eval_stieltjes(ParameterSet(0.7, [1.2, 0.5], [2.1, 1.3]), 0.0) == pytest.approx(1.0, abs=1e-13)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.floats(0.2, 2.0), st.floats(0.0, 0.8), st.floats(0, 2 * math.pi))
def test_matches_series_in_disk(seed, q, sigma, r, th):
    a, b = random_supermajorized(np.random.default_rng(seed), q)
    P = ParameterSet(sigma, a, b)
    z = r * complex(math.cos(th), math.sin(th))
    ref = eval_series(P, -z).value
    assert abs(eval_stieltjes(P, z) - ref) <= 1e-9 * abs(ref)


def test_continuation_against_mpmath():
    # DERIVED: mpmath analytic continuation outside the disk
    P = ParameterSet(0.7, [1.2, 0.5], [2.1, 1.3])
    for z in (3.0, 20.0 + 5j, -0.5 + 4j):
        ref = complex(mp.hyper([0.7, 1.2, 0.5], [2.1, 1.3], -z))
        assert abs(eval_stieltjes(P, z) - ref) <= 1e-9 * abs(ref)


def test_cut_rejected():
    with pytest.raises(DomainError):
        eval_stieltjes(LOG, -2.0)


def test_representation_requires_positive_psi():
    with pytest.raises(ParameterError):
        eval_stieltjes(ParameterSet(1, [1, 3], [2, 2]), 0.5)


def test_necessity_moments_do_not_vanish():
    # psi = 0: the moment sequence tends to a nonzero constant
    a, b = (1.0, 3.0), (2.0, 2.0)
    m = [math.exp(sum(math.lgamma(x + k) - math.lgamma(x) for x in a) - sum(math.lgamma(x + k) - math.lgamma(x) for x in b)) for k in (50, 100)]
    assert m[1] == pytest.approx(0.5, rel=0.02) and abs(m[1] - m[0]) < 0.01


def test_hypergeometric_dispatch():
    P = ParameterSet(0.5, [1, 3], [2, 2])
    # series, limit measure and direct series agree near the origin
    assert hypergeometric(P, 0.3) == pytest.approx(eval_series(P, 0.3).value, rel=1e-12)
    ref = complex(mp.hyper([0.5, 1, 3], [2, 2], -5))
    assert hypergeometric(P, -5.0) == pytest.approx(ref.real, rel=1e-9)


def test_density_rho_normalised():
    spec = density_rho(ParameterSet(0.7, [1.2, 0.5], [2.1, 1.3]))
    assert spec.moments([0])[0] == pytest.approx(1.0, rel=1e-12)


def test_mu_form_against_rho():
    P = ParameterSet(0.7, [1.2, 0.5], [2.1, 1.3])
    t = np.array([1.5, 4.0])
    rho = density_rho(P).pdf(1 / t)
    # mu(t) = rho(1/t) t^(sigma-2) after t = 1/s
    np.testing.assert_allclose(density_mu(t, P), np.real(rho) * t ** (P.sigma - 2), rtol=1e-10)


# order-one density


def test_rho1_collapses_for_log():
    assert density_rho1(0.5, LOG) == pytest.approx(1.0, rel=1e-12)


def test_rho1_moments():
    P = ParameterSet(0.5, [1], [2])
    ks = np.arange(6)
    got = rho1_spec(P).moments(ks)
    ref = [pochhammer(0.5, k) * pochhammer(1, k) / (pochhammer(2, k) * math.factorial(k)) for k in ks]
    np.testing.assert_allclose(got, ref, rtol=1e-11)
    assert density_rho1(0.5, P) > 0


# exact order


@pytest.mark.parametrize(
    "P",
    [ParameterSet(0.5, [1], [2]), ParameterSet(1, [1, 2], [2, 3]), ParameterSet(0.5, [1, 3], [2, 2])],
)
def test_exact_order_examples(P):
    r = exact_order_test(P, 0.1, 1e5)
    assert r.passes
    assert r.to_dict()["target"] == pytest.approx(2 ** -0.1)


def test_phi_epsilon_is_distribution_at_zero():
    # eps = 0 gives the mass of mu on (1, y); mu(t) = 1/t here
    assert phi_epsilon(4.0, 0.0, LOG)[0] == pytest.approx(math.log(4), rel=1e-10)


def test_exact_order_rejects_bad_sigma():
    with pytest.raises(ParameterError):
        exact_order_test(ParameterSet(2, [1], [2]))


def test_exact_order_advisory_flag():
    r = exact_order_test(ParameterSet(0.5, [1, 2, 3], [1.2, 2.3, 2.5]))
    assert r.advisory


# psi = 0 limit measure


def test_limit_measure_example():
    spec = limit_measure_q2(0.5, 1, 3, 2, 2)
    z = np.array([0.5, -0.7, 0.8j])
    ref = eval_series(ParameterSet(0.5, [1, 3], [2, 2]), -z).value
    np.testing.assert_allclose(spec.stieltjes(z, 0.5), ref, rtol=1e-10)
    res = spec.metadata["coefficient_resolution"]
    assert res["chosen"] == "(b2-a1)(b1-a1)" and res["max_rel_moment_error"] < 1e-10


def test_limit_measure_degenerate():
    spec = limit_measure_q2(0.7, 1.5, 1.5, 1.5, 1.5)
    assert spec.stieltjes(np.array([2.0]), 0.7)[0] == pytest.approx(3 ** -0.7, rel=1e-12)


def test_limit_measure_needs_psi_zero():
    with pytest.raises(ParameterError):
        limit_measure_q2(0.5, 1, 2, 2, 2)


def test_resolution_rejects_wrong_candidate():
    res = resolve_limit_coefficient(1.0, 3.0, 1.5, 2.5)
    errs = sorted(c["max_rel_moment_error"] for c in res["candidates"].values())
    assert errs[0] < 1e-10 < errs[1]


# power-denominator form


def test_power_denominator_gauss():
    # DERIVED: 2F1(2,1;2;-x) = 1/(1+x)
    P = ParameterSet(2, [1], [2])
    assert power_denominator_rep(P, 0.5) == pytest.approx(1 / 1.5, rel=1e-12)
    for method in ("general", "sigma2", "gauss"):
        assert power_denominator_rep(P, 0.5, method=method) == pytest.approx(1 / 1.5, rel=1e-10)


def test_power_denominator_series():
    P = ParameterSet(2, [1, 1], [2, 2])
    for z in (0.3, 0.3 + 0.2j):
        ref = eval_series(P, -z).value
        assert abs(power_denominator_rep(P, z) - ref) <= 1e-10 * abs(ref)


def test_power_denominator_near_zero():
    assert power_denominator_rep(ParameterSet(3, [1, 1.5], [2, 2.2]), 1e-6) == pytest.approx(1.0, abs=1e-5)


def test_power_denominator_large_z():
    P = ParameterSet(2, [1, 1.5], [2, 2.2])
    ref = complex(mp.hyper([2, 1, 1.5], [2, 2.2], -30))
    assert abs(power_denominator_rep(P, 30.0) - ref) <= 1e-8 * abs(ref)


def test_power_denominator_domain():
    with pytest.raises(DomainError):
        power_denominator_rep(ParameterSet(2, [1], [2]), 1j)
    with pytest.raises(ParameterError):
        power_denominator_rep(ParameterSet(1, [1], [2]), 0.5)


def test_phi_y_nonnegative():
    assert np.all(phi_y(np.geomspace(0.01, 100, 9), ParameterSet(2, [1, 1], [2, 2])) >= 0)


def test_density_export_rows():
    text = density_export("rho", ParameterSet(0.5, [1, 3], [2, 2]), np.linspace(0.01, 0.99, 99))
    lines = text.strip().splitlines()
    assert lines[0] == "x,value,error" and len(lines) == 100
    with pytest.raises(ValueError):
        density_export("nope", LOG, [0.5])
