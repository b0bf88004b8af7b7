import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from oracles import grid_alpha, grid_fit, ks_distance, powerlaw_sample
from sfattack import _plkernels
from sfattack.errors import DegenerateSequence, TailTooSmall
from sfattack.generators import BaConfig, generate_ba
from sfattack.powerlaw import (
    PowerLawSampler,
    TailFit,
    fit_tail,
    gof_pvalue,
    likelihood_ratio,
    powerlaw_logpmf,
    scan_tail,
)

degree_lists = st.lists(st.integers(0, 60), min_size=2, max_size=200).filter(
    lambda xs: len({x for x in xs if x > 0}) >= 2)


def whole_sample_fit(x):
    """Fit with x_min pinned to the smallest value (the whole sample is the tail)."""
    xm, al, ks, nt = scan_tail(x)
    return TailFit(float(al[0]), int(xm[0]), int(nt[0]), float(ks[0]), len(x))


# --- zeta -----------------------------------------------------------------

@given(st.floats(1.001, 8.0), st.integers(1, 5000))
def test_hurwitz_zeta_matches_mpmath(s, q):
    ref = float(mpmath.zeta(s, q))
    assert _plkernels.hurwitz_zeta(s, float(q)) == pytest.approx(ref, rel=1e-11)
    assert _plkernels.zeta(s, q) == pytest.approx(ref, rel=1e-11)


def test_logpmf_normalises():
    k = np.arange(3, 200_000)
    assert np.exp(powerlaw_logpmf(k, 2.7, 3)).sum() == pytest.approx(1.0, abs=1e-5)


# --- fit_tail -------------------------------------------------------------

def test_fit_recovers_exponent_on_large_sample():
    x = powerlaw_sample(2.5, 1, 10_000, np.random.default_rng(2024))
    fit = fit_tail(x)
    assert 2.4 <= fit.alpha <= 2.6
    assert fit.x_min in (1, 2)
    tail = x[x >= fit.x_min]
    assert abs(fit.alpha - grid_alpha(tail, fit.x_min)) <= 0.02


@pytest.mark.parametrize("seq", [[4, 4, 4, 4], [0, 0, 3], []])
def test_degenerate_sequences(seq):
    with pytest.raises(DegenerateSequence):
        fit_tail(seq)


def test_zeros_are_ignored():
    x = powerlaw_sample(2.5, 1, 300, np.random.default_rng(5))
    assert fit_tail(np.concatenate((x, np.zeros(40, dtype=int)))) == fit_tail(x)


def test_two_point_tail_is_fitted():
    fit = fit_tail([1, 1, 1, 2])
    assert fit.x_min == 1 and fit.n_tail == 4


def test_ba_exponent_range():
    alphas = [fit_tail(generate_ba(BaConfig(1000, 2, seed)).degrees).alpha for seed in range(40)]
    inside = sum(2.0 < a < 3.5 for a in alphas)
    assert inside >= 0.95 * len(alphas)


@given(degree_lists)
def test_fit_invariants(xs):
    fit = fit_tail(xs)
    x = np.asarray(xs)
    assert fit.alpha > 1.0
    assert fit.n_tail == int((x >= fit.x_min).sum())
    assert 0.0 <= fit.ks <= 1.0
    assert fit.n == int((x > 0).sum())


@given(degree_lists)
def test_fit_is_deterministic(xs):
    assert fit_tail(xs) == fit_tail(list(xs))


@given(degree_lists)
def test_n_tail_non_increasing_over_scan(xs):
    xm, _, _, nt = scan_tail(xs)
    assert np.all(np.diff(xm) > 0)
    assert np.all(np.diff(nt) < 0)
    assert nt[-1] >= 2


@given(degree_lists)
def test_duplication_keeps_fit(xs):
    a = fit_tail(xs)
    b = fit_tail(xs + xs)
    assert b.alpha == pytest.approx(a.alpha, abs=1e-9)
    assert b.x_min == a.x_min
    assert b.n_tail == 2 * a.n_tail


@given(degree_lists)
def test_scan_matches_oracle_ks_and_alpha(xs):
    xm, al, ks, _ = scan_tail(xs)
    x = np.asarray(xs)
    for j in range(len(xm)):
        tail = x[x >= xm[j]]
        assert ks[j] == pytest.approx(ks_distance(tail, al[j], int(xm[j])), abs=1e-9)
        assert abs(al[j] - grid_alpha(tail, int(xm[j]))) <= 0.02 or al[j] > 7.99


@given(degree_lists)
def test_fit_backends_agree(xs):
    values, counts = np.unique(np.asarray([x for x in xs if x > 0]), return_counts=True)
    a1, k1, n1 = _plkernels.fit_scan_numba(values, counts)
    a2, k2, n2 = _plkernels.fit_scan_numpy(values, counts)
    assert np.array_equal(n1, n2)
    assert np.allclose(a1, a2, atol=1e-5)
    assert np.allclose(k1, k2, atol=1e-6)


def test_fit_matches_grid_oracle_on_mixed_sample():
    rng = np.random.default_rng(77)
    x = np.concatenate((powerlaw_sample(2.3, 6, 250, rng), rng.integers(1, 6, size=250)))
    fit = fit_tail(x)
    alpha, x_min, n_tail, _ = grid_fit(x)
    assert fit.x_min == x_min and fit.n_tail == n_tail
    assert abs(fit.alpha - alpha) <= 0.02


# --- sampler --------------------------------------------------------------

def test_sampler_matches_pmf():
    alpha, x_min = 2.5, 3
    draws = PowerLawSampler(alpha, x_min).sample(200_000, np.random.default_rng(9))
    assert draws.min() >= x_min
    edges = [3, 4, 5, 6, 8, 11, 16, 30, 100]
    obs = [((draws >= lo) & (draws < hi)).sum() for lo, hi in zip(edges, edges[1:])]
    obs.append((draws >= edges[-1]).sum())
    cdf = lambda k: 1.0 - float(mpmath.zeta(alpha, k)) / float(mpmath.zeta(alpha, x_min))
    probs = [cdf(hi) - cdf(lo) for lo, hi in zip(edges, edges[1:])] + [1.0 - cdf(edges[-1])]
    assert chisquare(obs, np.array(probs) * draws.size).pvalue > 0.001


def test_sampler_beyond_table_is_heavy():
    s = PowerLawSampler(2.1, 1, table_size=100)
    draws = s.sample(100_000, np.random.default_rng(3))
    frac = (draws >= 101).mean()
    expected = float(mpmath.zeta(2.1, 101) / mpmath.zeta(2.1, 1))
    assert frac == pytest.approx(expected, rel=0.1)


# --- goodness of fit ------------------------------------------------------

def test_gof_p_is_multiple_of_one_over_reps():
    x = powerlaw_sample(2.5, 1, 400, np.random.default_rng(1))
    res = gof_pvalue(x, fit_tail(x), reps=100, rng=4)
    assert res.bootstrap_reps == 100
    assert round(res.p_value * 100) == pytest.approx(res.p_value * 100, abs=1e-9)


def test_gof_is_reproducible():
    x = powerlaw_sample(2.5, 2, 400, np.random.default_rng(1))
    fit = fit_tail(x)
    assert gof_pvalue(x, fit, 50, 11) == gof_pvalue(x, fit, 50, 11)
    assert gof_pvalue(x, fit, 50, np.random.default_rng(3)) == gof_pvalue(x, fit, 50, np.random.default_rng(3))


def test_gof_null_data_mostly_passes():
    passes = 0
    for trial in range(30):
        x = powerlaw_sample(2.5, 1, 500, np.random.default_rng(100 + trial))
        passes += gof_pvalue(x, fit_tail(x), 100, trial).p_value >= 0.1
    assert passes >= 0.8 * 30


def test_gof_rejects_power_law_over_whole_geometric_sample():
    rejected = 0
    for trial in range(20):
        x = np.random.default_rng(trial).geometric(0.5, 5000)
        rejected += gof_pvalue(x, whole_sample_fit(x), 100, trial).p_value < 0.1
    assert rejected >= 0.9 * 20


@pytest.mark.xfail(strict=True, reason="KS-optimal x_min retreats to a short geometric tail that a steep "
                                        "power law fits; rejection rate is about 40%, see decisions ledger")
def test_gof_rejects_geometric_data_with_scanned_x_min():
    rejected = 0
    for trial in range(20):
        x = np.random.default_rng(trial).geometric(0.5, 5000)
        rejected += gof_pvalue(x, fit_tail(x), 100, trial).p_value < 0.1
    assert rejected >= 0.9 * 20


def test_gof_replicate_failures_do_not_count_as_exceeding():
    # a two-value sample whose tail draws are almost surely constant
    x = np.array([1] * 3 + [50, 51])
    fit = TailFit(40.0, 50, 2, 0.0, 5)
    res = gof_pvalue(x, fit, 20, 0)
    assert res.failures > 0
    assert res.p_value <= (20 - res.failures) / 20


# --- likelihood ratio -----------------------------------------------------

def test_lr_favours_power_law_on_power_law_data():
    wins = 0
    for trial in range(20):
        x = powerlaw_sample(2.5, 1, 5000, np.random.default_rng(200 + trial))
        lr = likelihood_ratio(x, fit_tail(x), "exponential")
        wins += lr.r > 0 and lr.p_r < 0.1
    assert wins >= 0.9 * 20


def test_lr_favours_exponential_over_whole_exponential_sample():
    wins = 0
    for trial in range(20):
        x = np.random.default_rng(300 + trial).geometric(0.3, 5000)
        lr = likelihood_ratio(x, whole_sample_fit(x), "exponential")
        wins += lr.r < 0 and lr.p_r < 0.1
    assert wins >= 0.9 * 20


@pytest.mark.xfail(strict=True, reason="with the KS-optimal x_min only the last few hundred points remain "
                                        "and the sign is rarely significant, see decisions ledger")
def test_lr_favours_exponential_with_scanned_x_min():
    wins = 0
    for trial in range(20):
        x = np.random.default_rng(300 + trial).geometric(0.3, 5000)
        lr = likelihood_ratio(x, fit_tail(x), "exponential")
        wins += lr.r < 0 and lr.p_r < 0.1
    assert wins >= 0.9 * 20


def test_lr_identical_points_carry_no_information():
    lr = likelihood_ratio([1, 2, 5, 5], TailFit(2.5, 5, 2, 0.0, 4), "exponential")
    assert lr.r == 0.0
    assert lr.p_r == 1.0


def test_lr_needs_two_tail_points():
    with pytest.raises(TailTooSmall):
        likelihood_ratio([1, 2, 9], TailFit(2.5, 9, 1, 0.0, 3))


def test_lr_lognormal_alternative():
    rng = np.random.default_rng(8)
    x = np.floor(rng.lognormal(1.0, 1.0, 4000)).astype(int) + 1
    lr = likelihood_ratio(x, whole_sample_fit(x), "lognormal")
    assert lr.r < 0 and lr.p_r < 0.1
    assert lr.alternative == "lognormal"


def test_lr_unknown_alternative():
    with pytest.raises(ValueError):
        likelihood_ratio([1, 2, 3], TailFit(2.5, 1, 3, 0.1, 3), "weibull")


@given(degree_lists)
def test_lr_invariants(xs):
    fit = fit_tail(xs)
    lr = likelihood_ratio(xs, fit)
    assert math.isfinite(lr.r)
    assert 0.0 <= lr.p_r <= 1.0
