# =============================================================================
# nfadlab
#
# STATISTICS SUB-MODULE
# =============================================================================

# Python stdlib imports
import collections as _collections
import math as _math
import typing as _typing

# External dependencies
import numpy as _np
import scipy.optimize as _optimize
import scipy.stats as _stats

# =============================================================================

# Global submodule constants
FWHM_PER_SIGMA = 2.0 * _math.sqrt(2.0 * _math.log(2.0))
DEFAULT_Z = 1.96

GaussianFit = _collections.namedtuple(
    "GaussianFit",
    ["amplitude", "mean", "sigma", "fwhm", "residual", "counts", "edges"])

# =============================================================================

def z_for_confidence(confidence):
    # type: (float) -> float
    """
    Two-sided standard normal quantile, e.g. 1.96 for 0.95.
    """
    return float(_stats.norm.ppf(0.5 + confidence / 2.0))


def wilson_bounds(phat, n, z=DEFAULT_Z):
    # type: (float, int, float) -> _typing.Tuple[float, float]
    """
    Wilson interval bounds for a Bernoulli rate.

    Returns (L, U). For n<=0, returns (0.0, 1.0).
    """
    if n <= 0:
        return (0.0, 1.0)
    z2 = z * z
    denom = 1.0 + z2 / n
    center = phat + z2 / (2.0 * n)
    radicand = (phat * (1.0 - phat) / n) + (z2 / (4.0 * n * n))
    radius = z * _math.sqrt(max(0.0, radicand))
    upper = min(1.0, (center + radius) / denom)
    lower = max(0.0, (center - radius) / denom)
    return (lower, upper)

# =============================================================================

def isotonic_regression(values, weights=None):
    # type: (_typing.Sequence[float], _typing.Optional[_typing.Sequence[float]]) -> _np.ndarray
    """
    Weighted least-squares nondecreasing fit (pool adjacent violators).
    """
    y = _np.asarray(values, dtype=float)
    w = _np.ones_like(y) if weights is None else _np.asarray(weights, dtype=float)

    # Blocks of (mean, weight, length)
    means, block_weights, lengths = [], [], []
    for (value, weight) in zip(y, w):
        means.append(value)
        block_weights.append(weight)
        lengths.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            total = block_weights[-2] + block_weights[-1]
            merged = (means[-2] * block_weights[-2] +
                      means[-1] * block_weights[-1]) / total
            means[-2:] = [merged]
            block_weights[-2:] = [total]
            lengths[-2:] = [lengths[-2] + lengths[-1]]

    return _np.repeat(means, lengths)


def max_isotonic_deviation(values, weights=None):
    # type: (_typing.Sequence[float], _typing.Optional[_typing.Sequence[float]]) -> float
    """
    Largest absolute distance between `values` and their isotonic fit; zero
    for a nondecreasing sequence.
    """
    y = _np.asarray(values, dtype=float)
    if y.size == 0:
        return 0.0
    return float(_np.max(_np.abs(y - isotonic_regression(y, weights))))

# =============================================================================

def gaussian(x, amplitude, mean, sigma):
    """Gaussian function for fitting."""
    return amplitude * _np.exp(-0.5 * ((x - mean) / sigma) ** 2)


def fit_gaussian_histogram(samples, bins=100, span=5.0):
    # type: (_typing.Sequence[float], int, float) -> GaussianFit
    """
    Histograms `samples` over `span` standard deviations around their median
    and least-squares fits a Gaussian to the binned counts.

    The residual is the RMS of the fit residuals relative to the fitted peak.
    """
    data = _np.asarray(samples, dtype=float)
    center = float(_np.median(data))
    spread = float(_np.std(data)) or 1.0
    counts, edges = _np.histogram(
        data, bins=bins, range=(center - span * spread, center + span * spread))
    centers = 0.5 * (edges[1:] + edges[:-1])

    # Fit in units of the sample spread to keep the problem well scaled
    x = (centers - center) / spread
    p0 = [float(counts.max()), 0.0, 1.0]
    popt, _ = _optimize.curve_fit(gaussian, x, counts, p0=p0, maxfev=5000)

    amplitude, mean, sigma = popt
    sigma = abs(sigma) * spread
    fitted = gaussian(x, *popt)
    residual = float(_np.sqrt(_np.mean((counts - fitted) ** 2)) / max(amplitude, 1.0))

    return GaussianFit(
        amplitude=float(amplitude),
        mean=float(center + mean * spread),
        sigma=float(sigma),
        fwhm=float(FWHM_PER_SIGMA * sigma),
        residual=residual,
        counts=counts,
        edges=edges,
    )


def fwhm_to_sigma(fwhm):
    # type: (float) -> float
    return fwhm / FWHM_PER_SIGMA


def rss(*widths):
    # type: (float) -> float
    """
    Root-sum-square composition of independent Gaussian widths.
    """
    return _math.sqrt(sum(width * width for width in widths))

# =============================================================================
