# =============================================================================
# nfadlab
#
# PRESETS SUB-MODULE
# =============================================================================

"""
Parameter sets of the four characterized NFADs. Values marked [published]
come from the device datasheets and bench settings; the others are
calibrated so that the model reproduces the measured blinding thresholds
and mean currents.
"""

# Python stdlib imports
import collections as _collections
import typing as _typing

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging

from nfadlab.models.params import NfadParams

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

CUSTOM = "custom"
DEFAULT_EFFICIENCY = 0.10

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

DeviceInfo = _collections.namedtuple(
    "DeviceInfo", ["model_number", "diameter", "coupling"])

DEVICES = _collections.OrderedDict([
    # [published]
    ("d1", DeviceInfo("E2G6", 22e-6, "capacitive")),
    ("d2", DeviceInfo("E3G3", 32e-6, "capacitive")),
    ("d3", DeviceInfo("E2G6", 22e-6, "inductive")),
    ("d4", DeviceInfo("E3G3", 32e-6, "inductive")),
])

_SHARED = {
    "v_br": 60.0,
    "r_integrated": 1.1e6,              # [published]
    "r1": 1e3,                          # [published]
    "responsivity": 1.0,
    "gain_exponent": 30.0,
    "amp_transimpedance": 6.6e11,
}

_CAPACITIVE = {
    "r2": 50.0,                         # [published]
    "v_quench": 5.0,                    # [published]
    "tau_d": 18e-6,                     # [published]
    "v_th": 0.05,
    "noise_sigma": 0.004,
    "sp_jitter_fwhm": 104.9e-12,        # [published]
    "electronics_jitter_fwhm": 5.15e-12,
}

_INDUCTIVE = {
    "r2": 100.0,                        # [published]
    "v_quench": 4.0,                    # [published]
    "tau_d": 20e-6,                     # [published]
    "v_th": 0.08,
    "noise_sigma": 0.008,
    "sp_jitter_fwhm": 271.8e-12,        # [published]
    "electronics_jitter_fwhm": 11e-12,
}

_PRESETS = {
    "d1": dict(_SHARED, **_CAPACITIVE, active_diameter=22e-6, max_linear_gain=1273.0),
    "d2": dict(_SHARED, **_CAPACITIVE, active_diameter=32e-6, max_linear_gain=1000.0),
    "d3": dict(_SHARED, **_INDUCTIVE, active_diameter=22e-6, max_linear_gain=1200.0),
    "d4": dict(_SHARED, **_INDUCTIVE, active_diameter=32e-6, max_linear_gain=85.7),
}

# Excess bias [V] setting each efficiency
EFFICIENCY_EXCESS = {
    "d1": {0.10: 1.3, 0.20: 4.1},       # [published]
    "d2": {0.10: 3.066, 0.20: 5.70},
    "d3": {0.10: 2.0, 0.20: 5.0},       # [published]
    "d4": {0.10: 2.0},                  # [published]
}

# Trigger pulse FWHM of the bench lasers [s]
BENCH_PULSE_FWHM = {
    "d1": 33e-12,                       # [published]
    "d2": 33e-12,                       # [published]
    "d3": 161e-12,                      # [published]
    "d4": 161e-12,                      # [published]
}

# Effective pulse width behind the faked-state timing histograms [s]
JITTER_PULSE_FWHM = {
    "d1": 33e-12,
    "d2": 33e-12,
    "d3": 100e-12,
    "d4": 100e-12,
}

# Blinding powers [W] of the mean-current measurements under control
BLINDING_POWER_TABLE = {
    ("d2", 0.10): 70e-9,                # [published]
    ("d2", 0.20): 45.4e-9,              # [published]
}

# =============================================================================

def list_presets():
    # type: () -> _typing.List[str]
    return sorted(_PRESETS)


def efficiencies(name):
    # type: (str) -> _typing.List[float]
    """
    Efficiencies at which the preset `name` is calibrated.
    """
    _check_name(name)
    return sorted(EFFICIENCY_EXCESS[name])


def _check_name(name):
    if name not in _PRESETS:
        raise _errors.UnknownPresetError(
            preset=name, available=", ".join(list_presets() + [CUSTOM]))


def get_preset(name, efficiency=DEFAULT_EFFICIENCY, **overrides):
    # type: (str, float, _typing.Any) -> NfadParams
    """
    Returns the parameter set of the detector `name` at `efficiency`, with
    `overrides` applied on top. The name "custom" starts from the default
    `NfadParams` instead.

    :raises UnknownPresetError: If `name` is not a known preset.
    :raises ParameterValidationError: If the preset has no calibrated excess
        bias at `efficiency` and none is overridden, or if an override
        violates a parameter invariant.
    """
    if name == CUSTOM:
        return NfadParams(**dict(overrides, name=CUSTOM, efficiency=efficiency))

    _check_name(name)
    fields = dict(_PRESETS[name], name=name, efficiency=efficiency)

    excess = EFFICIENCY_EXCESS[name]
    matches = [v for (eff, v) in excess.items() if abs(eff - efficiency) < 1e-9]
    if matches:
        fields["v_excess"] = matches[0]
    elif "v_excess" not in overrides:
        raise _errors.ParameterValidationError(
            owner=name,
            reason="no excess bias calibrated at efficiency {}; known: {}".format(
                efficiency, sorted(excess)))

    fields.update(overrides)
    _logger.debug("Preset {} at {:.0%} efficiency with {} override(s)".format(
        name, efficiency, len(overrides)))
    return NfadParams(**fields)


def blinding_power(name, efficiency):
    # type: (str, float) -> _typing.Optional[float]
    """
    Published blinding power for the mean-current measurements, if any.
    """
    for ((preset, eff), power) in BLINDING_POWER_TABLE.items():
        if preset == name and abs(eff - efficiency) < 1e-9:
            return power
    return None

# =============================================================================
