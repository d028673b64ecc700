import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import norm

from panelhet.bandwidth import BandwidthPolicy, resolve, robust_spread, rot_bandwidth, rot_from_spread
from panelhet.errors import DegenerateDispersion, InvalidBandwidth
from panelhet.kernels import EPANECHNIKOV, GAUSSIAN


def test_rot_closed_form():
    assert rot_from_spread(1.0, 100000, GAUSSIAN) == pytest.approx(0.106, rel=1e-12)
    assert rot_from_spread(1.0, 100000, EPANECHNIKOV) == pytest.approx(0.234, rel=1e-12)


def test_rot_on_standardized_sample():
    n = 100000
    x = norm.ppf((np.arange(n) + 0.5) / n)
    x = (x - x.mean()) / x.std(ddof=1)
    assert rot_bandwidth(x, EPANECHNIKOV) == pytest.approx(0.234, abs=5e-4)


def test_spread_rules():
    x = np.array([0.0, 0.0, 0.0, 0.0, 10.0])
    # IQR is zero: fall back to the sample standard deviation
    assert robust_spread(x) == pytest.approx(np.std(x, ddof=1))
    y = np.random.default_rng(0).standard_t(2, size=2000)
    q75, q25 = np.percentile(y, [75, 25])
    assert robust_spread(y) == pytest.approx(min(y.std(ddof=1), (q75 - q25) / 1.349))


def test_degenerate():
    with pytest.raises(DegenerateDispersion):
        rot_bandwidth(np.full(10, 2.0), EPANECHNIKOV)


def test_resolve():
    xi = np.random.default_rng(1).normal(size=300)
    assert resolve(BandwidthPolicy.fixed(0.65), xi, EPANECHNIKOV) == 0.65
    assert resolve(BandwidthPolicy.rule_of_thumb(), xi, EPANECHNIKOV) == rot_bandwidth(xi, EPANECHNIKOV)
    assert resolve(BandwidthPolicy.rule_of_thumb(2.0), xi, GAUSSIAN) == 2.0 * rot_bandwidth(xi, GAUSSIAN)
    with pytest.raises(InvalidBandwidth):
        BandwidthPolicy.fixed(-1)
    with pytest.raises(InvalidBandwidth):
        BandwidthPolicy.rule_of_thumb(0.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 100), st.integers(0, 10_000))
def test_scale_equivariance(b, seed):
    xi = np.random.default_rng(seed).normal(size=50)
    assert rot_bandwidth(b * xi, EPANECHNIKOV) == pytest.approx(b * rot_bandwidth(xi, EPANECHNIKOV), rel=1e-12)


def test_n_rate():
    assert rot_from_spread(1.3, 2000, GAUSSIAN) / rot_from_spread(1.3, 1000, GAUSSIAN) == pytest.approx(
        2 ** -0.2, rel=1e-14
    )
