# =============================================================================
# nfadlab
#
# MONITOR SUB-MODULE
# =============================================================================

"""
Bob's countermeasures: the slow mean-current monitor (current mirror and a
high-resolution ADC sampled once per period) and the fast bias-voltage probe
which sees the supply current drop the bias while light is on.
"""

# Python stdlib imports
import math as _math
import typing as _typing

# External dependencies
import numpy as _np
import scipy.signal as _signal

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging

from nfadlab.models.monitoring import (
    Alarm, AlarmReport, AlarmScore, MonitorConfig, MonitorKind, MonitorTrace)
from nfadlab.models.runs import DetectorRun

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

# Dense traces only; the streaming monitor holds one chunk at a time
MAX_PROBE_SAMPLES = 50000000
CHUNK_SAMPLES = 1000000

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def _config(config):
    return config if config is not None else MonitorConfig()


def quantize(values, config):
    # type: (_np.ndarray, MonitorConfig) -> _np.ndarray
    """
    Rounds mirror-side currents to the ADC grid and clips them to its range.
    """
    lsb = config.adc_lsb
    return _np.clip(_np.round(_np.asarray(values) / lsb) * lsb,
                    0.0, config.adc_full_scale)


def mean_current_trace(run, config=None):
    # type: (DetectorRun, _typing.Optional[MonitorConfig]) -> MonitorTrace
    """
    Averages the supply current (DC part and charge impulses) over each
    complete sampling window, mirrors and digitizes it.

    :raises RunTooShortError: If the run is shorter than one window.
    """
    config = _config(config)
    period = config.sample_period
    n_windows = int(_math.floor(run.duration / period * (1.0 + 1e-12)))
    if n_windows < 1:
        raise _errors.RunTooShortError(
            duration=run.duration, sample_period=period)

    edges = _np.minimum(_np.arange(n_windows + 1) * period, run.duration)
    charges = _np.array([run.charge_until(t) for t in edges])
    means = _np.diff(charges) / period

    return MonitorTrace(
        kind=MonitorKind.MEAN_CURRENT,
        times=edges[1:],
        values=quantize(means * config.mirror_ratio, config),
        config=config,
        duration=run.duration,
        click_times=tuple(click.t for click in run.clicks),
    )


class _AlarmBuilder(object):
    """
    Merges consecutive flagged samples into alarms at least `min_duration`
    long. Samples may arrive in several chunks; a run of flagged samples
    spanning a chunk boundary yields a single alarm.
    """

    def __init__(self, kind, min_duration=0.0):
        # type: (MonitorKind, float) -> None
        self.kind = kind
        self.min_duration = min_duration
        self.alarms = []  # type: _typing.List[Alarm]
        self._open = None  # type: _typing.Optional[_typing.Tuple[float, float, float]]

    def _close(self):
        if self._open is not None:
            (t_start, t_end, peak) = self._open
            if t_end - t_start >= self.min_duration:
                self.alarms.append(Alarm(t_start, t_end, self.kind.value, peak))
            self._open = None

    def feed(self, starts, ends, flagged, deviations):
        if self._open is not None and flagged.size and not flagged[0]:
            self._close()
        padded = _np.concatenate(([False], flagged, [False])).astype(int)
        changes = _np.diff(padded)
        for (lo, hi) in zip(_np.flatnonzero(changes == 1), _np.flatnonzero(changes == -1)):
            (t_start, t_end, peak) = (
                float(starts[lo]), float(ends[hi - 1]), float(deviations[lo:hi].max()))
            if self._open is not None:
                # Continues the run left open by the previous chunk
                t_start = self._open[0]
                peak = max(peak, self._open[2])
            self._open = (t_start, t_end, peak)
            if hi < flagged.size:
                self._close()

    def finish(self):
        # type: () -> _typing.List[Alarm]
        self._close()
        return self.alarms


def mean_current_monitor(run, threshold=None, config=None):
    # type: (DetectorRun, _typing.Optional[float], _typing.Optional[MonitorConfig]) -> AlarmReport
    """
    Flags the sampling windows whose APD-referred mean current exceeds
    `threshold` [A] (default: `config.current_threshold`).

    :raises RunTooShortError: If the run is shorter than one window.
    """
    config = _config(config)
    threshold = config.current_threshold if threshold is None else threshold
    if not threshold > 0:
        raise _errors.ParameterValidationError(
            owner="mean_current_monitor",
            reason="threshold must be > 0, got {}".format(threshold))

    trace = mean_current_trace(run, config)
    currents = trace.values / config.mirror_ratio
    builder = _AlarmBuilder(MonitorKind.MEAN_CURRENT)
    builder.feed(
        trace.times - config.sample_period, trace.times, currents > threshold,
        currents - threshold)
    alarms = builder.finish()

    report = AlarmReport(
        kind=MonitorKind.MEAN_CURRENT,
        threshold=threshold,
        duration=run.duration,
        alarms=alarms)
    _logger.debug("Mean-current monitor: max {:.4g} A over {} window(s), {}".format(
        currents.max(), currents.size, report.verdict))
    return report

# =============================================================================

class _BiasStream(object):
    """
    Bias deviation -Z_out * I(t) on a `probe_dt` grid, with each charge
    impulse spread over one step and a bipolar transient pair at every
    deadtime (+A at its start, -A at its end), all passed through an exact
    first-order low-pass of time constant `filter_tau`. Samples are produced
    in chunks, the filter state carried from one chunk to the next.
    """

    def __init__(self, run, config):
        # type: (DetectorRun, MonitorConfig) -> None
        self.run = run
        self.config = config
        self.n_samples = int(_math.ceil(run.duration / config.probe_dt))

        deadtimes = run.deadtimes()
        starts = _np.array([lo for (lo, _) in deadtimes], dtype=float)
        ends = _np.array([hi for (_, hi) in deadtimes if hi < run.duration], dtype=float)
        self.transients = _np.sort(_np.concatenate((starts, ends)))

        self.a = _math.exp(-config.probe_dt / config.filter_tau)
        kick = config.transient_amplitude / (1.0 - self.a)
        index = _np.concatenate((
            self._index_of([imp.t for imp in run.charges]),
            self._index_of(starts), self._index_of(ends)))
        weight = _np.concatenate((
            _np.array([-config.z_out * imp.charge / config.probe_dt
                       for imp in run.charges], dtype=float),
            _np.full(starts.size, kick), _np.full(ends.size, -kick)))
        order = _np.argsort(index, kind="stable")
        self.kick_index = index[order]
        self.kick_weight = weight[order]

    def _index_of(self, t):
        t = _np.asarray(t, dtype=float)
        return _np.clip((t / self.config.probe_dt).astype(int), 0, self.n_samples - 1)

    def chunks(self, chunk_samples=CHUNK_SAMPLES, n_samples=None):
        # type: (int, _typing.Optional[int]) -> _typing.Iterator[_typing.Tuple[_np.ndarray, _np.ndarray]]
        """
        Yields `(times, values)` for consecutive chunks of the first
        `n_samples` samples (all of them by default).
        """
        n_samples = self.n_samples if n_samples is None else min(n_samples, self.n_samples)
        (b, den) = ([1.0 - self.a], [1.0, -self.a])
        zi = None
        for i0 in range(0, n_samples, chunk_samples):
            i1 = min(i0 + chunk_samples, n_samples)
            times = _np.arange(i0, i1) * self.config.probe_dt
            baseline = -self.config.z_out * self.run.current_at(times)
            x = baseline.copy()
            (lo, hi) = _np.searchsorted(self.kick_index, [i0, i1])
            _np.add.at(x, self.kick_index[lo:hi] - i0, self.kick_weight[lo:hi])
            if zi is None:
                zi = _signal.lfilter_zi(b, den) * baseline[0]
            (values, zi) = _signal.lfilter(b, den, x, zi=zi)
            yield (times, values)


def bias_voltage_trace(run, config=None, t_stop=None):
    # type: (DetectorRun, _typing.Optional[MonitorConfig], _typing.Optional[float]) -> MonitorTrace
    """
    Dense bias-voltage probe trace of `run`, or of its first `t_stop` seconds.
    For long runs use `fast_blinding_monitor`, which never holds the whole
    trace.

    :raises ParameterValidationError: If the trace exceeds
        `MAX_PROBE_SAMPLES` samples.
    """
    config = _config(config)
    stream = _BiasStream(run, config)
    n_samples = stream.n_samples
    if t_stop is not None:
        n_samples = min(n_samples, int(_math.ceil(t_stop / config.probe_dt)))
    if n_samples > MAX_PROBE_SAMPLES:
        raise _errors.ParameterValidationError(
            owner="bias_voltage_trace",
            reason="{} probe samples; increase probe_dt or shorten the run".format(
                n_samples))

    chunks = list(stream.chunks(n_samples=n_samples))
    empty = _np.zeros(0)
    return MonitorTrace(
        kind=MonitorKind.BIAS_VOLTAGE,
        times=_np.concatenate([c[0] for c in chunks]) if chunks else empty,
        values=_np.concatenate([c[1] for c in chunks]) if chunks else empty,
        config=config,
        duration=run.duration,
        transient_times=tuple(stream.transients.tolist()),
        click_times=tuple(click.t for click in run.clicks),
    )


def _guard_mask(times, transients, config):
    # type: (_np.ndarray, _np.ndarray, MonitorConfig) -> _np.ndarray
    """
    True on samples within [t - probe_dt, t + guard] of a quench transient.
    `transients` must be sorted.
    """
    mask = _np.zeros(times.shape, dtype=bool)
    if not (times.size and transients.size):
        return mask
    (first, last) = (
        _np.searchsorted(transients, times[0] - config.guard, side="left"),
        _np.searchsorted(transients, times[-1] + config.probe_dt, side="right"))
    transients = transients[first:last]
    lo = _np.searchsorted(times, transients - config.probe_dt, side="left")
    hi = _np.searchsorted(times, transients + config.guard, side="right")
    # Difference array marks the union of all [lo, hi) ranges
    marks = _np.zeros(times.size + 1, dtype=int)
    _np.add.at(marks, lo, 1)
    _np.add.at(marks, hi, -1)
    return _np.cumsum(marks[:-1]) > 0


def _clicks_in_alarms(click_times, alarms, tail):
    """
    Clicks with `t_start <= t <= t_end + tail` for some alarm. Alarms are
    time-ordered and disjoint.
    """
    if not (alarms and click_times):
        return ()
    starts = _np.array([alarm.t_start for alarm in alarms])
    ends = _np.array([alarm.t_end for alarm in alarms]) + tail
    t = _np.asarray(click_times, dtype=float)
    k = _np.searchsorted(starts, t, side="right") - 1
    hit = (k >= 0) & (t <= ends[_np.maximum(k, 0)])
    return tuple(t[hit].tolist())


def _detect_drops(chunks, transients, click_times, duration, config,
                  drop_threshold, min_duration):
    builder = _AlarmBuilder(MonitorKind.BIAS_VOLTAGE, min_duration)
    for (times, values) in chunks:
        flagged = (values < -drop_threshold) & ~_guard_mask(times, transients, config)
        builder.feed(
            times, _np.minimum(times + config.probe_dt, duration), flagged, -values)
    alarms = builder.finish()

    return AlarmReport(
        kind=MonitorKind.BIAS_VOLTAGE,
        threshold=drop_threshold,
        duration=duration,
        alarms=alarms,
        compromised_clicks=_clicks_in_alarms(click_times, alarms, 2.0 * config.guard))


def fast_blinding_detector(trace, drop_threshold=None, min_duration=None):
    # type: (MonitorTrace, _typing.Optional[float], _typing.Optional[float]) -> AlarmReport
    """
    Flags intervals where the bias drops below -`drop_threshold` for at least
    `min_duration`, outside of the guard windows around quench transients.
    Clicks registered inside an alarm, or within two guard windows after it,
    are reported as possibly compromised.

    :raises TraceKindError: If `trace` is not a bias-voltage trace.
    """
    if trace.kind is not MonitorKind.BIAS_VOLTAGE:
        raise _errors.TraceKindError(
            expected=MonitorKind.BIAS_VOLTAGE.value, actual=trace.kind.value)

    config = trace.config
    drop_threshold = config.drop_threshold if drop_threshold is None else drop_threshold
    min_duration = config.min_duration if min_duration is None else min_duration

    with _logging.start_action(
            action_type="nfadlab:fast_blinding_detector",
            drop_threshold=drop_threshold, min_duration=min_duration) as action:
        report = _detect_drops(
            [(trace.times, trace.values)], _np.asarray(trace.transient_times, dtype=float),
            trace.click_times, trace.duration, config, drop_threshold, min_duration)
        action.add_success_fields(
            n_alarms=len(report.alarms), n_compromised=len(report.compromised_clicks))

    return report


def fast_blinding_monitor(run, config=None, drop_threshold=None, min_duration=None,
                          chunk_samples=CHUNK_SAMPLES):
    # type: (DetectorRun, _typing.Optional[MonitorConfig], _typing.Optional[float], _typing.Optional[float], int) -> AlarmReport
    """
    Same detector as `fast_blinding_detector`, run on the probe trace of
    `run` one chunk at a time, so that runs of any length (a full sampling
    period of the mean-current monitor, say) can be watched.
    """
    config = _config(config)
    drop_threshold = config.drop_threshold if drop_threshold is None else drop_threshold
    min_duration = config.min_duration if min_duration is None else min_duration
    if chunk_samples < 1:
        raise _errors.ParameterValidationError(
            owner="fast_blinding_monitor",
            reason="chunk_samples must be >= 1, got {}".format(chunk_samples))

    stream = _BiasStream(run, config)
    with _logging.start_action(
            action_type="nfadlab:fast_blinding_monitor",
            n_samples=stream.n_samples, chunk_samples=chunk_samples,
            drop_threshold=drop_threshold, min_duration=min_duration) as action:
        report = _detect_drops(
            stream.chunks(chunk_samples), stream.transients,
            tuple(click.t for click in run.clicks), run.duration, config,
            drop_threshold, min_duration)
        action.add_success_fields(
            n_alarms=len(report.alarms), n_compromised=len(report.compromised_clicks))

    return report

# =============================================================================

def score_alarms(report, windows):
    # type: (AlarmReport, _typing.Sequence[_typing.Tuple[float, float]]) -> AlarmScore
    """
    Scores `report` against ground-truth illumination `windows`: recall is
    the fraction of windows overlapped by an alarm, false positives are
    alarms overlapping no window. Windows must be disjoint.
    """
    windows = sorted(windows)
    alarms = report.alarms
    if windows and alarms:
        (a_start, a_end) = (_np.array([a.t_start for a in alarms]),
                            _np.array([a.t_end for a in alarms]))
        (w_start, w_end) = (_np.array([w[0] for w in windows]),
                            _np.array([w[1] for w in windows]))
        # Last alarm starting before each window ends, and vice versa
        k = _np.searchsorted(a_start, w_end, side="left") - 1
        detected = int(((k >= 0) & (a_end[_np.maximum(k, 0)] > w_start)).sum())
        j = _np.searchsorted(w_start, a_end, side="left") - 1
        covered = (j >= 0) & (w_end[_np.maximum(j, 0)] > a_start)
        false_positives = int((~covered).sum())
    else:
        detected = 0
        false_positives = len(alarms)

    return AlarmScore(
        recall=detected / len(windows) if windows else 1.0,
        false_positives=false_positives,
        n_windows=len(windows),
        n_alarms=len(alarms))

# =============================================================================
