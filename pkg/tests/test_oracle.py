"""Quadrature and Monte Carlo oracles: the independent routes."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from recordmle import (
    ArgumentError,
    DomainError,
    ExperimentConfig,
    alpha_n_exponential,
    consistency_curve,
    exact_expected_cdf_hat,
    exact_expected_pdf_hat,
    exact_mse_cdf_hat,
    exact_mse_g_power,
    exact_mse_pdf_hat,
    exact_mse_theta_hat,
    expect_over_gamma,
    expected_cdf_hat_series,
    ks_two_sample,
    make_exponential,
    make_lomax,
    make_weibull,
    mc_estimate,
    mc_statistic_array,
    mse_cdf_hat_series,
)

EXP = make_exponential()


# ---------------------------------------------------------------------------
# expect_over_gamma


@given(
    size=st.integers(min_value=1, max_value=60),
    rate=st.floats(min_value=0.1, max_value=10.0),
    p=st.integers(min_value=0, max_value=3),
)
@settings(max_examples=80, deadline=None)
def test_gamma_polynomial_moments(size, rate, p):
    # E[T^p] = Gamma(size+p) / (Gamma(size) rate^p)
    res = expect_over_gamma(lambda t, p=p: t**p, size, rate)
    assert not res.diverged
    want = math.exp(math.lgamma(size + p) - math.lgamma(size)) / rate**p
    assert abs(res.value - want) <= 1e-10 * max(1.0, abs(want))


def test_gamma_moment_large_shape():
    # the substitution is scaled by the gamma mean, so a sharp spike at
    # shape 1e4 still lands on the panel grid
    res = expect_over_gamma(lambda t: t, 10000, 10000.0)
    assert not res.diverged
    assert res.value == pytest.approx(1.0, rel=1e-9)


def test_exponential_transform_is_bessel():
    # E[exp(-1/T)] for unit-rate exponential T equals 2 K_1(2)
    res = expect_over_gamma(lambda t: math.exp(-1.0 / t), 1, 1.0)
    assert not res.diverged
    with mpmath.workdps(30):
        want = float(2 * mpmath.besselk(1, 2))
    assert res.value == pytest.approx(want, abs=1e-12)


def test_constant_and_mean_expectations():
    # density integrates to one; E[T] is shape/rate
    assert expect_over_gamma(lambda t: 1.0, 4, 3.0).value == pytest.approx(1.0, abs=1e-10)
    assert expect_over_gamma(lambda t: t, 3, 2.0).value == pytest.approx(1.5, rel=1e-10)


def test_expect_over_gamma_validation():
    with pytest.raises(ArgumentError):
        expect_over_gamma(lambda t: 1.0, 0, 1.0)
    with pytest.raises(ArgumentError):
        expect_over_gamma(lambda t: 1.0, 3, 0.0)
    with pytest.raises(ArgumentError):
        expect_over_gamma(lambda t: 1.0, 3, math.nan)


# ---------------------------------------------------------------------------
# exact moment targets


def test_exact_values_large_size():
    assert exact_expected_cdf_hat(EXP, 1.0, 1.0, 200) == pytest.approx(
        0.6330360319716533, rel=1e-12
    )
    assert exact_expected_pdf_hat(EXP, 1.0, 1.0, 200) == pytest.approx(
        0.3669548409369166, rel=1e-12
    )
    assert exact_mse_cdf_hat(EXP, 1.0, 1.0, 200) == pytest.approx(
        0.0006757782576051197, rel=1e-10
    )
    assert exact_mse_pdf_hat(EXP, 1.0, 1.0, 200) == pytest.approx(
        2.607291373672755e-06, rel=1e-9
    )


def test_expected_cdf_hat_support_edge_and_bessel_value():
    # at the lower support endpoint the plug-in cdf is identically zero
    assert exact_expected_cdf_hat(EXP, 1.0, 0.0, 5) == 0.0
    # size 1: E[exp(-A(x)/T)] with T ~ Exp(1) at x = 1 is 2 K_1(2)
    with mpmath.workdps(30):
        want = float(1 - 2 * mpmath.besselk(1, 2))
    assert exact_expected_cdf_hat(EXP, 1.0, 1.0, 1) == pytest.approx(want, abs=1e-10)


def test_exact_mse_cdf_nonnegative_and_zero_at_edge():
    # three quadratures cancel at the edge, so only roundoff survives
    assert exact_mse_cdf_hat(EXP, 1.0, 0.0, 4) == pytest.approx(0.0, abs=1e-12)
    for theta in (0.5, 2.0):
        for x in (0.2, 1.0, 3.0):
            for size in (2, 7):
                assert exact_mse_cdf_hat(EXP, theta, x, size) >= 0.0


def test_series_and_quadrature_agree_in_asymptotic_regime():
    size = 200
    s = expected_cdf_hat_series(EXP, 1.0, 1.0, size).value
    q = exact_expected_cdf_hat(EXP, 1.0, 1.0, size)
    assert abs(s - q) < 1e-9
    s = mse_cdf_hat_series(EXP, 1.0, 1.0, size).value
    q = exact_mse_cdf_hat(EXP, 1.0, 1.0, size)
    assert abs(s - q) < 1e-9


def test_quadrature_adjudicates_truncation_defect():
    # size 2, x = 0.8: the truncated series says 1.6 (impossible for a
    # probability); the exact moment is a genuine probability
    series = expected_cdf_hat_series(EXP, 1.0, 0.8, 2)
    exact = exact_expected_cdf_hat(EXP, 1.0, 0.8, 2)
    assert series.value == pytest.approx(1.6, abs=1e-12)
    assert not series.in_natural_bounds
    assert exact == pytest.approx(0.6272774696121026, rel=1e-11)
    assert 0.0 < exact < 1.0


def test_exact_mse_theta_matches_closed_form_exponential():
    # theta_hat = T/n for the mean parametrization, so the MSE is exactly
    # theta^2/n; a strong independent check of the whole quadrature path
    for theta, n in [(1.0, 5), (1.5, 7), (0.3, 12)]:
        got = exact_mse_theta_hat(EXP, theta, n)
        assert got == pytest.approx(alpha_n_exponential(theta, n), rel=1e-9)


def test_exact_mse_theta_other_families():
    # weibull B identity: theta_hat = n/T, E[(n/T - theta)^2] =
    # theta^2 (n^2/((n-1)(n-2)) - 2n/(n-1) + 1) for T ~ Gamma(n, theta)
    n, theta = 9, 1.3
    want = theta**2 * (n * n / ((n - 1) * (n - 2)) - 2 * n / (n - 1) + 1)
    got = exact_mse_theta_hat(make_weibull(2.0), theta, n)
    assert got == pytest.approx(want, rel=1e-9)


def test_exact_mse_g_regimes():
    # k < 1: convergent, frozen values
    res = exact_mse_g_power(1.0, 10, 0.5)
    assert not res.diverged
    assert res.value == pytest.approx(0.012794851001966397, rel=1e-10)
    res5 = exact_mse_g_power(1.0, 5, 0.5)
    assert not res5.diverged
    assert res5.value == pytest.approx(0.025775767363710334, rel=1e-10)
    # k > 1: the exponential growth at T -> 0 is not integrable; the signal
    # is a divergence flag with blown-up refinement totals, not an exception
    div = exact_mse_g_power(1.0, 7, math.e)
    assert div.diverged
    assert div.last_totals is not None
    assert max(div.last_totals) > 1e100


def test_exact_target_domain_validation():
    with pytest.raises(DomainError):
        exact_expected_cdf_hat(EXP, -1.0, 1.0, 5)
    with pytest.raises(DomainError):
        exact_expected_cdf_hat(EXP, 1.0, -1.0, 5)
    with pytest.raises(DomainError):
        exact_mse_theta_hat(EXP, 0.0, 5)
    with pytest.raises(DomainError):
        exact_mse_g_power(-2.0, 5, 0.5)


# ---------------------------------------------------------------------------
# Monte Carlo engine


def _cfg(**kw):
    base = dict(family="exponential", theta=1.0, sizes=(8,), reps=2048, seed=5)
    base.update(kw)
    return ExperimentConfig(**base)


def test_mc_arrays_deterministic_and_worker_invariant():
    cfg = _cfg()
    a = mc_statistic_array(cfg, "sample", "theta_hat", workers=1)
    b = mc_statistic_array(cfg, "sample", "theta_hat", workers=1)
    c = mc_statistic_array(cfg, "sample", "theta_hat", workers=4)
    d = mc_statistic_array(cfg, "sample", "theta_hat", workers=16)
    assert a.shape == (2048,)
    assert np.array_equal(a, b)
    # concatenation in block order makes the result independent of the
    # thread count, bit for bit
    assert np.array_equal(a, c)
    assert np.array_equal(a, d)
    e = mc_statistic_array(_cfg(seed=6), "sample", "theta_hat")
    assert not np.array_equal(a, e)


def test_mc_sources_differ_but_share_law():
    cfg = _cfg(reps=20000, sizes=(5,))
    s = mc_statistic_array(cfg, "sample", "theta_hat")
    r = mc_statistic_array(_cfg(reps=20000, sizes=(5,), seed=77), "records_direct",
                           "theta_hat")
    assert not np.array_equal(s, r)
    # identical sampling law at n = m: KS well under the 0.02 working bound
    assert ks_two_sample(s, r) < 0.02


def test_sequential_records_source_agrees():
    # theta_hat is a strictly decreasing function of A(R_m) here, and the KS
    # statistic is invariant under monotone transforms, so this compares the
    # m-th record laws of the two samplers at full strength
    cfg = _cfg(reps=20000, sizes=(4,))
    direct = mc_statistic_array(cfg, "records_direct", "theta_hat")
    seq = mc_statistic_array(_cfg(reps=20000, sizes=(4,), seed=99), "records",
                             "theta_hat")
    assert ks_two_sample(direct, seq) < 0.02


def test_mc_estimate_cross_checks_quadrature():
    cfg = _cfg(reps=40000, sizes=(12,), x_grid=(0.7,))
    rep = mc_estimate(cfg, "E_cdf_hat", "sample")
    assert rep.failures == 0
    assert rep.quad_value is not None and not rep.quad_divergent
    assert rep.series_value is not None
    assert abs(rep.mc_value - rep.quad_value) < 3.0 * rep.mc_stderr
    assert rep.mc_stderr < 0.005


def test_mc_estimate_mse_target():
    cfg = _cfg(reps=60000, sizes=(10,))
    rep = mc_estimate(cfg, "MSE_theta_hat", "sample")
    want = alpha_n_exponential(1.0, 10)
    assert abs(rep.mc_value - want) < 3.0 * rep.mc_stderr
    assert rep.quad_value == pytest.approx(want, rel=1e-8)
    # no closed series op covers this target
    assert rep.series_value is None


def test_mc_estimate_divergent_target_flagged():
    cfg = _cfg(reps=512, sizes=(6,), g_k=math.e)
    rep = mc_estimate(cfg, "MSE_g_hat", "records_direct")
    assert rep.quad_divergent
    assert rep.quad_value is None
    assert rep.series_value is not None
    d = rep.to_json_dict()
    assert d["quad_divergent"] is True
    assert d["series_value"]["regime_note"] == "truncation_suspect"


def test_mc_estimate_requires_one_size():
    with pytest.raises(ArgumentError):
        mc_estimate(_cfg(sizes=(5, 10)), "E_cdf_hat", "sample")
    with pytest.raises(ArgumentError):
        mc_estimate(_cfg(), "nonsense", "sample")
    with pytest.raises(ArgumentError):
        mc_estimate(_cfg(), "E_cdf_hat", "nonsense")
    with pytest.raises(ArgumentError):
        # point targets need exactly one evaluation point
        mc_estimate(_cfg(x_grid=()), "E_cdf_hat", "sample")


def test_experiment_config_validation():
    with pytest.raises(ArgumentError):
        ExperimentConfig(family="exponential", theta=1.0, sizes=())
    with pytest.raises(ArgumentError):
        ExperimentConfig(family="exponential", theta=1.0, sizes=(0,))
    with pytest.raises(ArgumentError):
        ExperimentConfig(family="exponential", theta=1.0, sizes=(5,), reps=10)
    with pytest.raises(ArgumentError):
        ExperimentConfig(family="exponential", theta=1.0, sizes=(5,), quad_tol=1.0)
    cfg = ExperimentConfig(family="lomax", theta=2.0, sizes=[3], reps=150.0)
    assert cfg.sizes == (3,) and cfg.reps == 150
    assert cfg.resolve().name == "lomax"


# ---------------------------------------------------------------------------
# KS statistic


def test_ks_hand_values():
    assert ks_two_sample([1.0, 2.0], [1.5]) == pytest.approx(0.5)
    assert ks_two_sample([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0
    assert ks_two_sample([0.0, 1.0], [5.0, 6.0]) == 1.0


@given(
    a=st.lists(st.floats(min_value=-50, max_value=50), min_size=1, max_size=40),
    b=st.lists(st.floats(min_value=-50, max_value=50), min_size=1, max_size=40),
)
@settings(max_examples=60)
def test_ks_symmetric_bounded_and_transform_invariant(a, b):
    d = ks_two_sample(a, b)
    assert 0.0 <= d <= 1.0
    assert d == ks_two_sample(b, a)
    # strictly increasing common transform preserves every ordering
    fa = [math.atan(v) for v in a]
    fb = [math.atan(v) for v in b]
    assert ks_two_sample(fa, fb) == pytest.approx(d, abs=1e-12)


def test_ks_rejects_bad_input():
    with pytest.raises(ArgumentError):
        ks_two_sample([], [1.0])
    with pytest.raises(ArgumentError):
        ks_two_sample([1.0], [math.nan])


# ---------------------------------------------------------------------------
# consistency curve


def test_consistency_curve_decreases_and_is_stable():
    curve = consistency_curve(EXP, 1.0, 0.2, (5, 20), reps=4000, seed=31)
    again = consistency_curve(EXP, 1.0, 0.2, (5, 20), reps=4000, seed=31)
    assert curve == again
    probs = [p for _, p in curve]
    assert probs[0] > probs[1]
    # exact tail masses from the Gamma law of T: P(|T/n - 1| > 0.2)
    assert probs[0] == pytest.approx(0.6562, abs=0.03)
    assert probs[1] == pytest.approx(0.3680, abs=0.03)


def test_consistency_curve_prefix_stable_under_extension():
    # per-size derived streams: adding a size must not change earlier entries
    short = consistency_curve(EXP, 1.0, 0.2, (5, 20), reps=2000, seed=8)
    long = consistency_curve(EXP, 1.0, 0.2, (5, 20, 40), reps=2000, seed=8)
    assert long[:2] == short


def test_consistency_curve_huge_tolerance_is_all_zero():
    curve = consistency_curve(EXP, 1.0, 1e12, (3, 6), reps=400, seed=2)
    assert [p for _, p in curve] == [0.0, 0.0]


def test_consistency_curve_validation():
    with pytest.raises(ArgumentError):
        consistency_curve(EXP, 1.0, 0.0, (5, 10), reps=500, seed=0)
    with pytest.raises(ArgumentError):
        consistency_curve(EXP, 1.0, 0.2, (10, 5), reps=500, seed=0)
    with pytest.raises(ArgumentError):
        consistency_curve(EXP, 1.0, 0.2, (), reps=500, seed=0)
