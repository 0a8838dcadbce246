
import collections
import math

import numpy as np
import pytest

import nfadlab.util.stats as _stats

FixtureTestData = collections.namedtuple(
    'FixtureTestData',
    ['input', 'output'])


class TestWilsonBounds:
    """
    Tests for the `nfadlab.util.stats.wilson_bounds` method.
    """

    def test_no_trials(self):
        assert _stats.wilson_bounds(0.0, 0) == (0.0, 1.0)

    def test_zero_successes(self):
        n = 1000
        z = _stats.DEFAULT_Z
        (lower, upper) = _stats.wilson_bounds(0.0, n)
        assert lower == 0.0
        assert upper == pytest.approx(z * z / (n + z * z))

    def test_all_successes(self):
        n = 1000
        z = _stats.DEFAULT_Z
        (lower, upper) = _stats.wilson_bounds(1.0, n)
        assert upper == 1.0
        assert lower == pytest.approx(n / (n + z * z))

    def test_contains_estimate(self):
        for (k, n) in [(1, 10), (50, 100), (999, 1000), (3, 7)]:
            (lower, upper) = _stats.wilson_bounds(k / n, n)
            assert 0.0 <= lower <= k / n <= upper <= 1.0

    def test_narrows_with_trials(self):
        (l1, u1) = _stats.wilson_bounds(0.5, 100)
        (l2, u2) = _stats.wilson_bounds(0.5, 10000)
        assert u2 - l2 < u1 - l1


class TestZForConfidence:

    def test_95(self):
        assert _stats.z_for_confidence(0.95) == pytest.approx(1.959964, abs=1e-5)


class TestIsotonic:

    test_data = [
        FixtureTestData([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]),
        FixtureTestData([3.0, 1.0], [2.0, 2.0]),
        FixtureTestData([1.0, 3.0, 2.0, 4.0], [1.0, 2.5, 2.5, 4.0]),
        FixtureTestData([], []),
    ]

    test_ids = [
        "{input} => {output}".format(input=d.input, output=d.output)
        for d in test_data
    ]

    @pytest.mark.parametrize("test_data", test_data, ids=test_ids)
    def test_regression(self, test_data):
        assert _stats.isotonic_regression(test_data.input).tolist() == \
            pytest.approx(test_data.output)

    def test_weighted(self):
        fitted = _stats.isotonic_regression([3.0, 1.0], weights=[3.0, 1.0])
        assert fitted.tolist() == pytest.approx([2.5, 2.5])

    def test_deviation_monotone(self):
        assert _stats.max_isotonic_deviation([0.0, 0.1, 0.1, 0.9]) == 0.0

    def test_deviation(self):
        assert _stats.max_isotonic_deviation([0.0, 0.4, 0.2]) == pytest.approx(0.1)


class TestGaussianFit:
    """
    Tests for the `nfadlab.util.stats.fit_gaussian_histogram` method.
    """

    SIGMA = 40e-12
    MEAN = 3e-9

    def test_recovers_width(self):
        samples = np.random.default_rng(0).normal(self.MEAN, self.SIGMA, 100000)
        fit = _stats.fit_gaussian_histogram(samples)

        assert fit.sigma == pytest.approx(self.SIGMA, rel=0.05)
        assert fit.mean == pytest.approx(self.MEAN, abs=0.05 * self.SIGMA)
        assert fit.fwhm == pytest.approx(_stats.FWHM_PER_SIGMA * fit.sigma)
        assert fit.residual < 0.05
        assert 99990 <= fit.counts.sum() <= 100000
        assert len(fit.edges) == 101


class TestWidths:

    def test_fwhm_roundtrip_constant(self):
        assert _stats.FWHM_PER_SIGMA == pytest.approx(2.354820, abs=1e-6)
        assert _stats.fwhm_to_sigma(_stats.FWHM_PER_SIGMA) == pytest.approx(1.0)

    def test_rss(self):
        assert _stats.rss(3.0, 4.0) == pytest.approx(5.0)
        assert _stats.rss() == 0.0
        assert _stats.rss(33e-12, 5.15e-12) == pytest.approx(
            math.hypot(33e-12, 5.15e-12))
