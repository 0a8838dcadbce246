# =============================================================================
# nfadlab
#
# OPTICS SUB-MODULE
# =============================================================================

"""
Optical timelines as produced by the two-laser test bench: a CW laser for
blinding, a pulsed laser for trigger pulses, and attenuated light for
single photons, combined additively on the detector.
"""

# Python stdlib imports
import bisect as _bisect
import math as _math
import typing as _typing

# External dependencies
import numpy as _np

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging
import nfadlab.util.rng as _rng
import nfadlab.util.stats as _stats

from nfadlab.circuit_model import PHOTON_ENERGY
from nfadlab.models.scenario import CwSegment, OpticalScenario, TriggerPulse

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def _check_time(scenario, t):
    if not 0.0 <= t <= scenario.duration:
        raise _errors.ScenarioError(
            reason="t = {} s outside of [0, {}]".format(t, scenario.duration))


def cw_power_at(scenario, t):
    # type: (OpticalScenario, float) -> float
    """
    Power [W] of the CW segment covering `t`, 0 outside of every segment.
    Segments are half-open: at `t_end` the segment is already off.
    """
    _check_time(scenario, t)
    starts = [segment.t_start for segment in scenario.cw]
    index = _bisect.bisect_right(starts, t) - 1
    if index >= 0 and t < scenario.cw[index].t_end:
        return scenario.cw[index].power
    return 0.0


def pulse_power_at(scenario, t):
    # type: (OpticalScenario, float) -> float
    """
    Sum of the Gaussian pulse envelopes at `t` [W]; each envelope integrates
    to its pulse energy.
    """
    _check_time(scenario, t)
    power = 0.0
    for pulse in scenario.pulses:
        sigma = _stats.fwhm_to_sigma(pulse.fwhm)
        x = (t - pulse.t_peak) / sigma
        if abs(x) < 40.0:
            power += pulse.energy * _math.exp(-0.5 * x * x) / (
                sigma * _math.sqrt(2.0 * _math.pi))
    return power


def optical_power_at(scenario, t):
    # type: (OpticalScenario, float) -> float
    """
    Instantaneous power on the detector: CW plus pulse envelopes. The single
    photon flux is not included (see `mean_power`).
    """
    return cw_power_at(scenario, t) + pulse_power_at(scenario, t)


def mean_power(scenario, t):
    # type: (OpticalScenario, float) -> float
    """
    DC power [W] the bias network sees at `t`: CW plus the mean power of the
    single-photon flux.
    """
    return cw_power_at(scenario, t) + scenario.photon_rate * PHOTON_ENERGY

# =============================================================================

def sample_photon_arrivals(scenario):
    # type: (OpticalScenario) -> _typing.List[float]
    """
    Realizes the homogeneous Poisson single-photon flux over [0, duration],
    reproducibly from `scenario.rng_seed`.
    """
    if scenario.photon_rate == 0.0:
        return []
    rng = _rng.make_rng(scenario.rng_seed, _rng.STREAM_PHOTONS)
    count = rng.poisson(scenario.photon_rate * scenario.duration)
    return _np.sort(rng.uniform(0.0, scenario.duration, size=count)).tolist()

# =============================================================================

def periodic_trigger_times(rate, count, t0=0.0):
    # type: (float, int, float) -> _typing.Tuple[float, ...]
    if rate <= 0:
        raise _errors.ScenarioError(reason="trigger rate must be > 0")
    return tuple(t0 + k / rate for k in range(int(count)))


def trigger_pulse_train(times, energy, fwhm=33e-12):
    # type: (_typing.Iterable[float], float, float) -> _typing.Tuple[TriggerPulse, ...]
    return tuple(
        TriggerPulse(t_peak=t, energy=energy, fwhm=fwhm) for t in times)


def continuous_blinding(power, duration):
    # type: (float, float) -> _typing.Tuple[CwSegment, ...]
    """
    One CW segment covering the whole run, or none for zero power.
    """
    if power <= 0.0:
        return ()
    return (CwSegment(t_start=0.0, t_end=duration, power=power),)


def illumination_windows(scenario):
    # type: (OpticalScenario) -> _typing.List[_typing.Tuple[float, float]]
    """
    Intervals during which CW light reaches the detector, merged when
    contiguous.
    """
    windows = []
    for segment in scenario.cw:
        if segment.power <= 0.0:
            continue
        if windows and windows[-1][1] >= segment.t_start:
            windows[-1] = (windows[-1][0], segment.t_end)
        else:
            windows.append((segment.t_start, segment.t_end))
    return windows

# =============================================================================
