import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypstieltjes.gdensity import (
    DEFAULT_CONFIG,
    ContourError,
    GKernelSpec,
    QuadratureConfig,
    closed_form_q1,
    closed_form_q2,
    density_csv,
    density_table,
    endpoint_slope,
    laplace_identity_check,
    log_gamma_ratio,
    meijer_g,
    mellin_moment,
    mellin_moments,
    multidim_oracle,
    vanish_check,
)


def mp_g(x, top, bottom):
    return complex(mp.meijerg([[], list(top)], [list(bottom), []], x))


# kernel values


def test_q1_examples():
    # DERIVED: q=1 closed form reduces to s and s(1-s)
    assert meijer_g(0.5, GKernelSpec([2], [1])) == pytest.approx(0.5, rel=1e-12)
    assert meijer_g(0.25, GKernelSpec([3], [1])) == pytest.approx(0.1875, rel=1e-12)


def test_q2_matches_multidim_oracle():
    # DERIVED: the q=2 case of the multidimensional integral done analytically
    # is x * ln(1/x) for A=(1,1), B=(2,2); at x=0.5 this is 0.5 ln 2
    g = meijer_g(0.5, GKernelSpec([2, 2], [1, 1]))
    assert g == pytest.approx(0.5 * math.log(2), rel=1e-12)
    mean, se = multidim_oracle(0.5, (1, 1), (2, 2), samples=100_000)
    assert abs(mean - g) <= 3 * se


@pytest.mark.parametrize(
    "top,bottom",
    [((2.5, 3.1, 1.7), (1.2, 0.8, 1.5)), ((1.15, 2.0), (1.0, 2.0)), ((3, 4, 5), (1, 1, 1)), ((2.2,), (0.3,))],
)
def test_against_mpmath(top, bottom):
    # DERIVED: mpmath.meijerg, arbitrary precision
    xs = np.array([1e-3, 0.05, 0.3, 0.7, 0.95])
    got = meijer_g(xs, GKernelSpec(top, bottom))
    ref = np.array([mp_g(x, top, bottom).real for x in xs])
    np.testing.assert_allclose(got, ref, rtol=1e-10)


def test_complex_parameters_against_mpmath():
    spec = GKernelSpec((1, 3), (0.5 - 0.7j, 1 + 0.3j))
    got = meijer_g(0.4, spec)
    assert abs(got - mp_g(0.4, (1, 3), (0.5 - 0.7j, 1 + 0.3j))) < 1e-11


def test_closed_form_q1_examples():
    assert closed_form_q1(0.5, 1, 2) == pytest.approx(0.5)
    assert closed_form_q1(0.25, 2, 3) == pytest.approx(0.0625)
    assert closed_form_q1(1 - 1e-12, 1, 3.5) < 1e-10


def test_closed_form_q2_example():
    assert closed_form_q2(0.5, 1, 1, 2, 2) == pytest.approx(0.5 * math.log(2), rel=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(0.15, 2.0), st.floats(0.15, 2.0), st.floats(0.05, 0.95))
def test_closed_form_q2_matches_contour(a1, a2, d1, d2, t):
    g = meijer_g(t, GKernelSpec([a1 + d1, a2 + d2], [a1, a2]))
    assert closed_form_q2(t, a1, a2, a1 + d1, a2 + d2) == pytest.approx(g, rel=1e-9)


def test_multidim_q3():
    # DERIVED: Monte Carlo vs contour within 3 standard errors
    mean, se = multidim_oracle(0.5, (1, 1, 1), (2, 2, 2), samples=100_000)
    g = meijer_g(0.5, GKernelSpec([2, 2, 2], [1, 1, 1]))
    assert abs(mean - g) <= 3 * se


def test_multidim_near_one():
    mean, _ = multidim_oracle(1 - 1e-9, (1, 1), (2, 2), samples=20_000)
    assert mean < 1e-6


# moments and identities


def test_mellin_moment_examples():
    q, e = mellin_moment(GKernelSpec([2], [1]), 1)
    assert q == pytest.approx(0.5, rel=1e-12) and e == pytest.approx(0.5, rel=1e-14)
    q, e = mellin_moment(GKernelSpec([2], [1]), 3)
    assert q == pytest.approx(0.25, rel=1e-12)
    q, e = mellin_moment(GKernelSpec([2, 3], [1, 2]), 5)
    assert q == pytest.approx(1 / 42, rel=1e-12) and e == pytest.approx(1 / 42, rel=1e-14)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_moments_property(seed, q):
    from hypstieltjes.params import random_supermajorized

    a, b = random_supermajorized(np.random.default_rng(seed), q)
    quad, exact = mellin_moments(GKernelSpec(b, a), np.arange(10))
    np.testing.assert_allclose(quad, exact, rtol=1e-8)


@pytest.mark.parametrize("x,a,b,tol", [(1, (1,), (2,), 1e-6), (2, (1,), (3,), 1e-6), (1, (1, 2), (1.5, 2.5), 1e-5)])
def test_laplace_identity(x, a, b, tol):
    assert laplace_identity_check(x, a, b) <= tol


def test_laplace_needs_positive_x():
    with pytest.raises(ValueError):
        laplace_identity_check(0.0, (1,), (2,))


# vanishing for x > 1


def test_vanish_examples():
    assert vanish_check(2.0, GKernelSpec([2], [1])) <= 1e-6
    assert vanish_check(1.5, GKernelSpec([2, 2], [1, 1])) <= 1e-6


def test_vanish_monotone_in_x():
    r = vanish_check(np.array([1.1, 1.5, 2.0, 10.0]), GKernelSpec([2.5, 3.1, 1.7], [1.2, 0.8, 1.5]))
    assert np.all(np.diff(r) <= 0) and r.max() <= 1e-6


def test_vanish_rejects_small_x():
    with pytest.raises(ValueError):
        vanish_check(0.5, GKernelSpec([2], [1]))


def test_vanish_needs_positive_psi():
    with pytest.raises(ContourError):
        vanish_check(2.0, GKernelSpec([1, 3], [2, 2]))


# structure


def test_endpoint_slope():
    # leading power x^min(bottom) when the exponent is simple
    spec = GKernelSpec([2.5, 3.1], [1.2, 0.8])
    sl = endpoint_slope(spec, np.geomspace(1e-6, 1e-2, 5))
    assert abs(sl[0] - 0.8) < 0.02
    assert spec.zero_exponent == (0.8, 1)


def test_zero_exponent_multiplicity():
    assert GKernelSpec([2, 2], [1, 1]).zero_exponent == (1.0, 2)


def test_reduced_cancels():
    assert GKernelSpec([2, 3], [1, 2]).reduced().q == 1


def test_log_gamma_ratio_against_scipy():
    from scipy.special import loggamma

    s = np.array([0.5 + 3j, 2 + 100j, 60 - 5j])
    got = log_gamma_ratio([1.5, 2.5], [0.5, 1.0], s)
    ref = loggamma(s + 1.5) + loggamma(s + 2.5) - loggamma(s + 0.5) - loggamma(s + 1.0)
    # compare modulo 2 pi i
    d = got - ref
    assert np.all(np.abs(d.real) < 1e-10)
    assert np.all(np.abs(np.exp(1j * d.imag) - 1) < 1e-10)


def test_config_validation_and_override():
    with pytest.raises(ValueError):
        QuadratureConfig(node_count=0)
    cfg = QuadratureConfig(truncation_height=4.0, node_count=48)
    g = meijer_g(0.3, GKernelSpec([2.5], [1.0]), cfg)
    assert g == pytest.approx(closed_form_q1(0.3, 1.0, 2.5), rel=1e-11)
    assert DEFAULT_CONFIG.to_dict()["node_count"] == 32


def test_density_csv():
    rows = density_table(GKernelSpec([2], [1]), [0.25, 0.5])
    text = density_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "x,value,error" and len(lines) == 3
    assert float(lines[2].split(",")[1]) == pytest.approx(0.5)
