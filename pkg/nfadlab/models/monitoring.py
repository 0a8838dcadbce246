# =============================================================================
# nfadlab
#
# MONITORING RECORDS SUB-MODULE
# =============================================================================

# Python stdlib imports
import collections as _collections
import typing as _typing

# External dependencies
import numpy as _np
import pandas as _pd

# Local imports
from nfadlab.util.misc import DocEnum, format_si

from .abstract.record import Record

# =============================================================================

class MonitorKind(DocEnum):
    """
    Countermeasure a trace or report belongs to.
    """

    MEAN_CURRENT = "mean_current", """
                                   Current-mirror copy of the APD supply
                                   current, averaged and digitized once per
                                   sampling period.
                                   """

    BIAS_VOLTAGE = "bias_voltage", """
                                   Deviation of the bias voltage seen through
                                   the output impedance of the bias source.
                                   """


class Verdict(DocEnum):
    """
    Outcome of a countermeasure over one run.
    """

    CLEAN = "clean", """
                     No alarm was raised.
                     """

    BLINDING_SUSPECTED = "blinding_suspected", """
                                               At least one alarm was raised.
                                               """

# =============================================================================

class MonitorConfig(Record):
    """
    Settings of both countermeasures: the slow current monitor and the fast
    bias-voltage probe.
    """

    _FIELDS = {
        "sample_period": (float, "Mean-current sampling period [s].", 1.0),
        "mirror_ratio": (float, "Fraction of the APD current copied by the mirror.", 0.20),
        "adc_bits": (int, "ADC resolution [bits].", 24),
        "adc_full_scale": (float, "ADC full scale, mirror side [A].", 10e-6),
        "z_out": (float, "Output impedance of the bias source [Ohm].", 1e3),
        "filter_tau": (float, "Time constant of the bias probe low-pass [s].", 100e-9),
        "probe_dt": (float, "Sampling step of the bias probe [s].", 10e-9),
        "transient_amplitude": (float, "Quench transient peak amplitude [V].", 5e-3),
        "guard_taus": (float, "Guard window after each transient [filter_tau].", 3.0),
        "current_threshold": (float, "Mean-current alarm threshold, APD side [A].", 100e-9),
        "drop_threshold": (float, "Bias drop alarm threshold [V].", 1e-3),
        "min_duration": (float, "Shortest drop raising an alarm [s].", 100e-9),
    }

    def _validate(self):
        for name in ("sample_period", "mirror_ratio", "adc_full_scale", "z_out",
                     "filter_tau", "probe_dt", "current_threshold", "drop_threshold"):
            self._require(getattr(self, name) > 0, "{} must be > 0".format(name))
        self._require(self.mirror_ratio <= 1.0, "mirror_ratio must be <= 1")
        self._require(self.adc_bits > 0, "adc_bits must be > 0")
        self._require(self.transient_amplitude >= 0, "transient_amplitude must be >= 0")
        self._require(self.guard_taus >= 0, "guard_taus must be >= 0")
        self._require(self.min_duration >= 0, "min_duration must be >= 0")

    @property
    def adc_lsb(self):
        # type: () -> float
        return self.adc_full_scale / 2 ** self.adc_bits

    @property
    def guard(self):
        # type: () -> float
        """Length of the guard window after a transient [s]."""
        return self.guard_taus * self.filter_tau

# =============================================================================

class MonitorTrace(Record):
    """
    Sampled monitor output. Mean-current values are mirror-side amperes at
    the end of each sampling window; bias-voltage values are volts.
    """

    _FIELDS = {
        "kind": (MonitorKind, "Countermeasure the trace feeds."),
        "times": (_np.ndarray, "Sample times [s], non-decreasing."),
        "values": (_np.ndarray, "Sample values [A or V]."),
        "config": (MonitorConfig, "Monitor settings.", None),
        "duration": (float, "Length of the monitored run [s]."),
        "transient_times": (tuple, "Deadtime starts and ends [s].", ()),
        "click_times": (tuple, "Registered click times [s].", ()),
    }

    _FIELDS_REQUIRED = ["kind", "times", "values", "duration"]

    def _normalize(self, data):
        data["times"] = _np.asarray(data["times"], dtype=float)
        data["values"] = _np.asarray(data["values"], dtype=float)
        if data["config"] is None:
            data["config"] = MonitorConfig()
        data["transient_times"] = tuple(sorted(data["transient_times"]))
        return data

    def _validate(self):
        self._require(
            self.times.shape == self.values.shape and self.times.ndim == 1,
            "times and values must be 1-d arrays of equal length")
        self._require(
            bool(_np.all(_np.diff(self.times) >= 0)),
            "samples must be time-ordered")

    @property
    def samples(self):
        # type: () -> _typing.List[_typing.Tuple[float, float]]
        return list(zip(self.times.tolist(), self.values.tolist()))

    def to_frame(self):
        # type: () -> _pd.DataFrame
        unit = "A" if self.kind is MonitorKind.MEAN_CURRENT else "V"
        return _pd.DataFrame({
            "t_s": self.times,
            "value_{}".format(unit): self.values,
        })

# =============================================================================

class Alarm(_collections.namedtuple(
        "Alarm", ["t_start", "t_end", "kind", "peak_deviation"])):
    """
    Interval [t_start, t_end) flagged by a monitor; `peak_deviation` is the
    largest excursion past the threshold (amperes above it, or volts of drop).
    """
    __slots__ = ()

    @property
    def length(self):
        return self.t_end - self.t_start


AlarmScore = _collections.namedtuple(
    "AlarmScore", ["recall", "false_positives", "n_windows", "n_alarms"])


class AlarmReport(Record):
    """
    Alarms raised by one countermeasure over one run.
    """

    _FIELDS = {
        "kind": (MonitorKind, "Countermeasure."),
        "threshold": (float, "Alarm threshold [A or V]."),
        "duration": (float, "Length of the monitored run [s]."),
        "alarms": (tuple, "Alarm list, time-ordered.", ()),
        "verdict": (Verdict, "Clean unless alarms were raised.", None),
        "compromised_clicks": (tuple, "Click times inside or right after an alarm [s].", ()),
    }

    _FIELDS_REQUIRED = ["kind", "threshold", "duration"]

    def _normalize(self, data):
        data["alarms"] = tuple(sorted(
            (Alarm(*alarm) for alarm in data["alarms"]),
            key=lambda alarm: alarm.t_start))
        if data["verdict"] is None:
            data["verdict"] = (
                Verdict.BLINDING_SUSPECTED if data["alarms"] else Verdict.CLEAN)
        return data

    def _validate(self):
        self._require(
            (self.verdict is Verdict.BLINDING_SUSPECTED) == bool(self.alarms),
            "verdict {} does not match {} alarm(s)".format(
                self.verdict, len(self.alarms)))
        for alarm in self.alarms:
            self._require(
                0.0 <= alarm.t_start <= alarm.t_end <= self.duration,
                "alarm [{}, {}) outside of the run".format(
                    alarm.t_start, alarm.t_end))

    @property
    def is_clean(self):
        # type: () -> bool
        return self.verdict is Verdict.CLEAN

    def to_frame(self):
        # type: () -> _pd.DataFrame
        return _pd.DataFrame(
            [(alarm.t_start, alarm.t_end, alarm.kind, alarm.peak_deviation)
             for alarm in self.alarms],
            columns=["t_start_s", "t_end_s", "kind", "peak_deviation"])

    def to_text(self):
        # type: () -> str
        """
        Line-oriented summary, one line per alarm after a header line.
        """
        unit = "A" if self.kind is MonitorKind.MEAN_CURRENT else "V"
        lines = [
            "{}: {} (threshold {}, {} alarm(s) over {})".format(
                self.kind, self.verdict, format_si(self.threshold, unit),
                len(self.alarms), format_si(self.duration, "s")),
        ]
        for alarm in self.alarms:
            lines.append("  alarm {} .. {}  peak {}".format(
                format_si(alarm.t_start, "s"), format_si(alarm.t_end, "s"),
                format_si(alarm.peak_deviation, unit)))
        if self.compromised_clicks:
            lines.append("  {} click(s) possibly compromised".format(
                len(self.compromised_clicks)))
        return "\n".join(lines)

# =============================================================================
