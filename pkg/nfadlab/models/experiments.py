# =============================================================================
# nfadlab
#
# EXPERIMENT RECORDS SUB-MODULE
# =============================================================================

# Python stdlib imports
import collections as _collections
import copy as _copy
import typing as _typing

# Local imports
import nfadlab.errors as _errors

from nfadlab.util.misc import DocEnum

from .abstract.record import Record

# =============================================================================

class ExperimentKind(DocEnum):
    """
    Named experiments the command-line interface can run.
    """

    CLICK_CURVE = "click_curve", """
                                 Forced-click probability against trigger
                                 pulse energy at one blinding power.
                                 """

    THRESHOLD_MAP = "threshold_map", """
                                     E_never and E_always against blinding
                                     power.
                                     """

    JITTER = "jitter", """
                       Timing histograms of faked-state and single-photon
                       clicks.
                       """

    COUNT_RATE_SWEEP = "count_rate_sweep", """
                                           Count rate and mean current
                                           against incident photon flux.
                                           """

    TABLE_CURRENTS = "table_currents", """
                                       Mean current under continuous
                                       blinding against trigger rate.
                                       """

    GATED_BLINDING = "gated_blinding", """
                                       Continuous against deadtime-gated
                                       blinding, seen by the mean-current
                                       monitor.
                                       """

    BB84 = "bb84", """
                   Statistics induced by the faked-state attack on BB84.
                   """

    FAST_MONITOR = "fast_monitor", """
                                   Bias-voltage probe on clean, continuous
                                   and gated runs.
                                   """

# =============================================================================

# Settings of each experiment; None is resolved from the detector at run time
DEFAULT_SETTINGS = {
    ExperimentKind.CLICK_CURVE: {
        "p_blinding": None,
        "energies": None,
        "n_energies": 25,
        "n_trials": 1000,
        "trigger_rate": 40e3,
    },
    ExperimentKind.THRESHOLD_MAP: {
        "powers": None,
        "n_trials": 1000,
        "epsilon": 0.005,
        "trigger_rate": 40e3,
    },
    ExperimentKind.JITTER: {
        "p_blinding": None,
        "e_pulse": None,
        "n_pulses": 100000,
        "pulse_fwhm": None,
        "trigger_rate": 40e3,
        "single_photon": True,
        "mean_photons": 10.0,
        "bins": 100,
    },
    ExperimentKind.COUNT_RATE_SWEEP: {
        "photon_rates": [1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12],
        "duration": 0.01,
    },
    ExperimentKind.TABLE_CURRENTS: {
        "efficiencies": [0.10, 0.20],
        "trigger_rates": [40e3, 50e3, 55e3],
        "p_blinding": None,
        "n_triggers": 2000,
        "e_pulse": None,
    },
    ExperimentKind.GATED_BLINDING: {
        "p_blinding": None,
        "p_continuous": None,
        "e_pulse": None,
        "e_continuous": None,
        "n_triggers": None,
        "trigger_rate": 40e3,
        "delay": 0.5e-6,
        "on_lead": 0.5e-6,
        "laser_off_margin": 0.0,
        "current_threshold": 100e-9,
        "monitor": {},
    },
    ExperimentKind.BB84: {
        "p_blinding": None,
        "e_pulses": None,
        "n_rounds": 100000,
        "n_trials": 1000,
        "epsilon": 0.005,
        "trigger_rate": 40e3,
    },
    ExperimentKind.FAST_MONITOR: {
        "p_blinding": None,
        "e_pulse": None,
        "n_triggers": 20,
        "trigger_rate": 40e3,
        "photon_rate": 1e5,
        "monitor": {},
        "trace_length": 200e-6,
    },
}

_TOP_LEVEL_KEYS = {"experiment", "seed", "output", "detector", "settings"}
_DETECTOR_KEYS = {"preset", "efficiency", "overrides"}
# Written by the manifest, ignored on reading
_MANIFEST_KEYS = {"nfadlab_version", "artifacts", "resolved_params"}


def resolve_settings(kind, settings):
    # type: (ExperimentKind, dict) -> dict
    """
    Overlays `settings` on the defaults of the experiment `kind`.

    :raises ConfigError: On settings the experiment does not know.
    """
    defaults = DEFAULT_SETTINGS[kind]
    unknown = sorted(set(settings) - set(defaults))
    if unknown:
        raise _errors.ConfigError(
            reason="Unknown setting(s) for experiment '{}': {}.".format(
                kind, ", ".join(unknown)))
    resolved = _copy.deepcopy(defaults)
    resolved.update(_copy.deepcopy(settings))
    return resolved

# =============================================================================

class ExperimentConfig(Record):
    """
    One experiment run: what to run, on which detector, with which seed and
    where to write the artifacts.
    """

    _FIELDS = {
        "experiment": (ExperimentKind, "Experiment to run."),
        "preset": (str, "Detector preset (d1 to d4, or custom).", "d1"),
        "efficiency": (float, "Detection efficiency selecting the bias.", 0.10),
        "overrides": (dict, "Overrides of the preset parameters.", {}),
        "settings": (dict, "Overrides of the experiment settings.", {}),
        "output_dir": (str, "Directory receiving the artifacts.", "results"),
        "seed": (int, "Root seed of every random stream.", 0),
    }

    _FIELDS_REQUIRED = ["experiment"]

    def _coerce(self, name, field_type, value):
        if name == "experiment" and value is not None:
            try:
                return ExperimentKind(value)
            except ValueError:
                raise _errors.ConfigError(
                    reason="Unknown experiment '{}' (known: {}).".format(
                        value, ", ".join(kind.value for kind in ExperimentKind)))
        return super(ExperimentConfig, self)._coerce(name, field_type, value)

    def _normalize(self, data):
        for name in ("overrides", "settings"):
            if data[name] is None:
                data[name] = dict()
            elif not isinstance(data[name], dict):
                raise _errors.ConfigError(
                    reason="'{}' must be a mapping.".format(name))
        return data

    def _validate(self):
        self._require(self.seed >= 0, "seed must be >= 0")
        self.resolved_settings()

    def resolved_settings(self):
        # type: () -> dict
        return resolve_settings(self.experiment, self.settings)

    @classmethod
    def from_mapping(cls, data, **overrides):
        # type: (dict, _typing.Any) -> ExperimentConfig
        """
        Builds a configuration from a parsed YAML mapping (a config file or
        a manifest); keyword `overrides` that are not None take precedence.

        :raises ConfigError: On unknown keys or a missing experiment.
        """
        unknown = sorted(set(data) - _TOP_LEVEL_KEYS - _MANIFEST_KEYS)
        detector = data.get("detector") or {}
        if not isinstance(detector, dict):
            raise _errors.ConfigError(reason="'detector' must be a mapping.")
        unknown += ["detector." + key for key in sorted(set(detector) - _DETECTOR_KEYS)]
        if unknown:
            raise _errors.ConfigError(
                reason="Unknown configuration key(s): {}.".format(
                    ", ".join(unknown)))

        fields = {
            "experiment": data.get("experiment"),
            "seed": data.get("seed"),
            "output_dir": data.get("output"),
            "settings": data.get("settings"),
            "preset": detector.get("preset"),
            "efficiency": detector.get("efficiency"),
            "overrides": detector.get("overrides"),
        }
        fields = {key: value for (key, value) in fields.items() if value is not None}
        fields.update(
            (key, value) for (key, value) in overrides.items() if value is not None)

        if "experiment" not in fields:
            raise _errors.ConfigError(
                reason="No experiment selected (set 'experiment' or pass --experiment).")

        return cls(**fields)

    def to_mapping(self, overrides=None, settings=None):
        # type: (_typing.Optional[dict], _typing.Optional[dict]) -> dict
        """
        Inverse of `from_mapping`, optionally with fully resolved parameter
        overrides and settings.
        """
        return {
            "experiment": self.experiment.value,
            "seed": self.seed,
            "output": self.output_dir,
            "detector": {
                "preset": self.preset,
                "efficiency": self.efficiency,
                "overrides": dict(self.overrides if overrides is None else overrides),
            },
            "settings": dict(self.settings if settings is None else settings),
        }


ExperimentResult = _collections.namedtuple(
    "ExperimentResult", ["tables", "settings", "params", "summary"])

# =============================================================================
