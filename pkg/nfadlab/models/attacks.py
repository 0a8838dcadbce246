# =============================================================================
# nfadlab
#
# ATTACK RECORDS SUB-MODULE
# =============================================================================

# Python stdlib imports
import collections as _collections

# Local imports
import nfadlab.errors as _errors

from .abstract.record import Record
from .params import NfadParams

# =============================================================================

ClickCurvePoint = _collections.namedtuple(
    "ClickCurvePoint",
    ["energy", "n_trials", "n_clicks", "p_hat", "p_lower", "p_upper"])

ThresholdEntry = _collections.namedtuple(
    "ThresholdEntry", ["p_blinding", "e_never", "e_always"])

TableCurrentsRow = _collections.namedtuple(
    "TableCurrentsRow",
    ["efficiency", "trigger_rate", "p_blinding", "mean_current"])

# =============================================================================

class ThresholdMap(Record):
    """
    Estimated (E_never, E_always) pairs indexed by blinding power, for one
    detector parameter set. Entries are kept sorted by blinding power.
    """

    _FIELDS = {
        "entries": (tuple, "ThresholdEntry list.", ()),
        "params": (NfadParams, "Detector parameters of the estimation."),
        "n_trials": (int, "Trigger pulses per tested energy.", 1000),
        "epsilon": (float, "Never/always probability margin.", 0.005),
    }

    _FIELDS_REQUIRED = ["params"]

    def _normalize(self, data):
        data["entries"] = tuple(sorted(
            (ThresholdEntry(*entry) for entry in data["entries"]),
            key=lambda entry: entry.p_blinding))
        return data

    def _validate(self):
        for entry in self.entries:
            self._require(
                entry.e_never <= entry.e_always,
                "e_never ({}) must not exceed e_always ({}) at {} W".format(
                    entry.e_never, entry.e_always, entry.p_blinding))
        self._require(0.0 < self.epsilon < 0.5, "epsilon must lie in (0, 0.5)")
        self._require(self.n_trials > 0, "n_trials must be > 0")

# =============================================================================

class GatedBlindingPlan(Record):
    """
    Eve's forced-click schedule under blinding light.

    Continuous plans (`gated=False`) keep the blinding laser on over the whole
    run. Gated plans switch it off `laser_off_margin` after each forced click
    and back on `on_lead` before the deadtime ends, so no light arrives during
    [t_click + laser_off_margin, t_click + tau_d - on_lead).
    """

    _FIELDS = {
        "trigger_times": (tuple, "Peak times of the trigger pulses [s]."),
        "p_blinding": (float, "Blinding power [W]."),
        "e_pulse": (float, "Trigger pulse energy [J]."),
        "duration": (float, "Length of the run [s]."),
        "on_lead": (float, "Re-illumination before the deadtime ends [s].", 0.5e-6),
        "laser_off_margin": (float, "Light kept on after each forced click [s].", 0.0),
        "gated": (bool, "Switch the blinding off during deadtimes.", True),
        "pulse_fwhm": (float, "Trigger pulse FWHM [s].", 33e-12),
    }

    _FIELDS_REQUIRED = ["trigger_times", "p_blinding", "e_pulse", "duration"]

    def _normalize(self, data):
        data["trigger_times"] = tuple(
            sorted(float(t) for t in data["trigger_times"]))
        return data

    def _fail(self, reason):
        raise _errors.PlanTimingError(reason=reason)

    def _validate(self):
        self._require(len(self.trigger_times) > 0, "plan has no trigger")
        self._require(self.on_lead >= 0, "on_lead must be >= 0")
        self._require(self.laser_off_margin >= 0, "laser_off_margin must be >= 0")
        self._require(self.p_blinding > 0, "p_blinding must be > 0")
        self._require(self.e_pulse >= 0, "e_pulse must be >= 0")
        self._require(self.pulse_fwhm > 0, "pulse_fwhm must be > 0")
        self._require(
            not self.gated or self.trigger_times[0] - self.on_lead >= 0,
            "first trigger must come at least on_lead after t = 0")
        self._require(
            self.trigger_times[-1] + self.laser_off_margin <= self.duration,
            "triggers must end before the run does")

    @property
    def trigger_rate(self):
        # type: () -> float
        """Mean trigger rate over the run [Hz]."""
        return len(self.trigger_times) / self.duration

# =============================================================================

class JitterResult(Record):
    """
    Time-correlated histogram of click time minus pulse peak time, and its
    Gaussian fit.
    """

    _FIELDS = {
        "cause": (str, "Click cause histogrammed."),
        "n_pulses": (int, "Pulses sent."),
        "n_clicks": (int, "Clicks histogrammed."),
        "counts": (tuple, "Histogram counts."),
        "edges": (tuple, "Histogram bin edges [s]."),
        "center": (float, "Fitted mean offset [s]."),
        "sigma": (float, "Fitted standard deviation [s]."),
        "fwhm": (float, "Fitted FWHM [s]."),
        "residual": (float, "RMS fit residual relative to the peak."),
    }

    _FIELDS_REQUIRED = list(_FIELDS)

    @property
    def bin_centers(self):
        return tuple(
            0.5 * (lo + hi) for (lo, hi) in zip(self.edges[:-1], self.edges[1:]))

# =============================================================================
