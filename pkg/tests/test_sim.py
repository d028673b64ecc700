import math

import numpy as np
import pytest
from scipy import stats

from panelhet.bandwidth import BandwidthPolicy
from panelhet.errors import OutOfDomain, OutOfSupport
from panelhet.sim import (
    CSV_COLUMNS,
    DgpDraw,
    McConfig,
    draw_unit_params,
    run_study,
    simulate_ar1,
    simulate_panel,
    true_cdf,
    true_density,
    true_quantile,
)
from panelhet.unit_stats import Autocorrelation, Autocovariance, Mean

ACOV0, ACOR1 = Autocovariance(0), Autocorrelation(1)


def test_unit_param_moments():
    n = 10**6
    d = draw_unit_params(np.random.default_rng(1), n)
    assert abs(d.varsigma.mean() + 1.0) < 0.005
    # 5 standard errors of each sample mean
    assert abs(d.phi.mean() + 1 / 3) < 5 * d.phi.std() / math.sqrt(n)
    assert abs(d.sigma2.mean() - 1.8) < 5 * d.sigma2.std() / math.sqrt(n)
    assert np.all(np.abs(d.phi) < 1) and np.all(d.sigma2 > 0)
    # distributional shape, not just the first moment
    assert stats.kstest((d.phi[:20000] + 1) / 2, stats.beta(2, 4).cdf).pvalue > 1e-3
    assert stats.kstest(d.sigma2[:20000] / 3, stats.beta(3, 2).cdf).pvalue > 1e-3


def test_white_noise_case():
    y = simulate_ar1(DgpDraw(0.0, 0.0, 1.0), 10**6, np.random.default_rng(2))[0]
    assert abs(y.var() - 1.0) < 0.01


@pytest.mark.parametrize("mu, phi, s2", [(-1.5, 0.6, 2.0), (0.3, -0.4, 0.7)])
def test_single_unit_stationary_moments(mu, phi, s2):
    T = 10**6
    y = simulate_ar1(DgpDraw(mu, phi, s2), T, np.random.default_rng(3))[0]
    # long-run se of the mean and of the lag-1 autocorrelation
    se_mean = math.sqrt(s2 * (1 + phi) / (1 - phi) / T)
    assert abs(y.mean() - mu) < 5 * se_mean
    se_var = s2 * math.sqrt(2 * (1 + phi**2) / (1 - phi**2) / T)
    assert abs(y.var() - s2) < 5 * se_var
    d = y - y.mean()
    rho = float(d[1:] @ d[:-1] / (d @ d))
    assert abs(rho - phi) < 5 * math.sqrt((1 - phi**2) / T)


def test_panel_determinism():
    a, pa = simulate_panel(20, 8, np.random.default_rng(9))
    b, pb = simulate_panel(20, 8, np.random.default_rng(9))
    assert np.array_equal(a.values, b.values) and np.array_equal(pa.phi, pb.phi)
    assert a.values.shape == (20, 8) and a.time_ids == tuple(range(1, 9))


def test_true_mean_density_values():
    vals = [true_density(Mean(), true_quantile(Mean(), q)) for q in (0.2, 0.4, 0.6, 0.8)]
    np.testing.assert_allclose(vals, [0.280, 0.386, 0.386, 0.280], atol=5e-4)
    assert vals[0] == pytest.approx(vals[3], abs=1e-12)
    assert vals[1] == pytest.approx(vals[2], abs=1e-12)
    assert vals[0] == pytest.approx(stats.norm.pdf(stats.norm.ppf(0.2)), abs=1e-10)


@pytest.mark.parametrize("kind, dist", [
    (Mean(), stats.norm(-1, 1)),
    (ACOV0, stats.beta(3, 2, scale=3)),
    (ACOR1, stats.beta(2, 4, loc=-1, scale=2)),
])
def test_true_distributions_match_scipy(kind, dist):
    for p in (0.05, 0.2, 0.5, 0.8, 0.95):
        x = true_quantile(kind, p)
        assert abs(true_cdf(kind, x) - p) < 1e-10
        assert x == pytest.approx(dist.ppf(p), abs=1e-9)
        assert true_density(kind, x) == pytest.approx(dist.pdf(x), abs=1e-12)


def test_true_errors():
    with pytest.raises(OutOfSupport):
        true_density(ACOV0, -0.1)
    with pytest.raises(OutOfSupport):
        true_density(ACOR1, 1.5)
    with pytest.raises(OutOfDomain):
        true_quantile(Mean(), 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(R=0)
    with pytest.raises(OutOfDomain):
        McConfig(quantiles=(0.0,))
    with pytest.raises(ValueError):
        McConfig(kinds=(Autocovariance(2),))


def test_small_study_deterministic():
    cfg = McConfig(N=100, T=12, R=2, seed=11)
    a = run_study(cfg)
    b = run_study(cfg, threads=4)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == ",".join(CSV_COLUMNS)
    assert len(a.rows) == 3 * 4 * 4
    for r in a.rows:
        assert 0.0 <= r.cp <= 1.0 and r.std >= 0 and r.h_std >= 0
    assert a.row(Mean(), 0.2, "NE").estimator == "NE"


def test_jackknife_shares_ne_bandwidth():
    res = run_study(McConfig(N=200, T=12, R=3, seed=5, kinds=(Mean(),), bandwidth=BandwidthPolicy.rule_of_thumb()))
    ne = res.row("mean", 0.4, "NE")
    for e in ("HPJ", "TOJ"):
        r = res.row("mean", 0.4, e)
        assert (r.h_mean, r.h_std) == (ne.h_mean, ne.h_std)


@pytest.mark.slow
def test_ie_mean_bias_and_coverage():
    res = run_study(McConfig(N=1000, T=2, R=500, seed=424242, kinds=(Mean(),), estimators=("IE",)), threads=4)
    for q in (0.2, 0.4, 0.6, 0.8):
        r = res.row(Mean(), q, "IE")
        assert abs(r.bias) <= 0.02
        assert abs(r.cp - 0.95) <= 0.03


@pytest.mark.slow
def test_ne_acov_bias_shrinks_with_T():
    def bias(T):
        cfg = McConfig(N=1000, T=T, R=100, seed=99, kinds=(ACOV0,), quantiles=(0.8,), estimators=("NE",))
        return run_study(cfg, threads=4).row(ACOV0, 0.8, "NE").bias

    assert abs(bias(96)) < abs(bias(12))
