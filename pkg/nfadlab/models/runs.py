# =============================================================================
# nfadlab
#
# DETECTOR RUN SUB-MODULE
# =============================================================================

# Python stdlib imports
import collections as _collections
import typing as _typing

# External dependencies
import numpy as _np
import pandas as _pd

# Local imports
from nfadlab.util.misc import DocEnum

from .abstract.record import Record
from .params import NfadParams
from .scenario import OpticalScenario

# =============================================================================

class ClickCause(DocEnum):
    """
    Attribution of a detector click.
    """

    PHOTON = "photon", "Avalanche triggered by a single photon."

    FAKED_STATE = "faked_state", """
                                 Bright trigger pulse crossing the comparator
                                 threshold of a blinded detector.
                                 """

    DARK = "dark", "Thermally generated avalanche."


class ClickEvent(_collections.namedtuple(
        "ClickEvent", ["t", "cause", "amplitude", "t_origin"])):
    """
    Detector output: registered click time `t` (after jitter), its `cause`,
    the comparator-input `amplitude` [V] that produced it, and `t_origin`,
    the time of the optical event (photon arrival or pulse peak).
    """
    __slots__ = ()


class CurrentSegment(_collections.namedtuple(
        "CurrentSegment", ["t_start", "t_end", "current"])):
    """
    Constant supply current [A] over [t_start, t_end).
    """
    __slots__ = ()


class ChargeImpulse(_collections.namedtuple(
        "ChargeImpulse", ["t", "charge"])):
    """
    Charge [C] delivered at once by an avalanche or a linear-mode pulse.
    """
    __slots__ = ()

# =============================================================================

class DetectorRun(Record):
    """
    Result of simulating one detector under one optical scenario. The supply
    current is the piecewise-constant `current_trace` plus the `charges`.
    """

    _FIELDS = {
        "clicks": (tuple, "ClickEvent list, in registration order.", ()),
        "current_trace": (tuple, "CurrentSegment list tiling [0, duration].", ()),
        "charges": (tuple, "ChargeImpulse list, time-ordered.", ()),
        "params": (NfadParams, "Detector parameters."),
        "scenario": (OpticalScenario, "Simulated scenario."),
        "rng_seed": (int, "Seed of the detector streams.", 0),
        "suppressed_pulses": (int, "Trigger pulses lost in deadtime.", 0),
    }

    _FIELDS_REQUIRED = ["params", "scenario"]

    def _validate(self):
        if self.current_trace:
            self._require(
                self.current_trace[0].t_start == 0.0 and
                self.current_trace[-1].t_end == self.duration,
                "current trace must tile [0, duration]")

    @property
    def duration(self):
        # type: () -> float
        return self.scenario.duration

    @property
    def click_rate(self):
        # type: () -> float
        return len(self.clicks) / self.duration

    def clicks_by_cause(self):
        # type: () -> _typing.Dict[ClickCause, int]
        counter = _collections.Counter(click.cause for click in self.clicks)
        return {cause: counter.get(cause, 0) for cause in ClickCause}

    def deadtimes(self):
        # type: () -> _typing.List[_typing.Tuple[float, float]]
        """
        Deadtime intervals [t_origin, t_origin + tau_d), clipped to the run.
        """
        return [
            (click.t_origin, min(click.t_origin + self.params.tau_d, self.duration))
            for click in self.clicks
        ]

    # -------------------------------------------------------------------------

    def _arrays(self):
        cached = self.__dict__.get("_cached_arrays")
        if cached is None:
            starts = _np.array([seg.t_start for seg in self.current_trace])
            ends = _np.array([seg.t_end for seg in self.current_trace])
            currents = _np.array([seg.current for seg in self.current_trace])
            cumulative = _np.concatenate(
                ([0.0], _np.cumsum(currents * (ends - starts))))
            charge_times = _np.array([imp.t for imp in self.charges])
            charge_cumulative = _np.concatenate(
                ([0.0], _np.cumsum([imp.charge for imp in self.charges])))
            cached = (starts, currents, cumulative, charge_times, charge_cumulative)
            self.__dict__["_cached_arrays"] = cached
        return cached

    def charge_until(self, t):
        # type: (float) -> float
        """
        Total charge [C] delivered over [0, t).
        """
        (starts, currents, cumulative, charge_times, charge_cumulative) = self._arrays()
        t = min(max(float(t), 0.0), self.duration)

        charge = 0.0
        if starts.size:
            k = int(_np.searchsorted(starts, t, side="right")) - 1
            if k >= 0:
                charge += cumulative[k] + currents[k] * (t - starts[k])
        if charge_times.size:
            charge += charge_cumulative[int(_np.searchsorted(charge_times, t, side="left"))]
        return float(charge)

    def mean_current(self, t0=0.0, t1=None):
        # type: (float, _typing.Optional[float]) -> float
        """
        Time-averaged supply current [A] over [t0, t1).
        """
        if t1 is None:
            t1 = self.duration
        if t1 <= t0:
            return 0.0
        return (self.charge_until(t1) - self.charge_until(t0)) / (t1 - t0)

    def current_at(self, times):
        # type: (_np.ndarray) -> _np.ndarray
        """
        Piecewise-constant part of the supply current at `times` [A].
        """
        (starts, currents, _, _, _) = self._arrays()
        times = _np.asarray(times, dtype=float)
        if not starts.size:
            return _np.zeros_like(times)
        index = _np.clip(
            _np.searchsorted(starts, times, side="right") - 1, 0, starts.size - 1)
        return currents[index]

    # -------------------------------------------------------------------------

    def to_frames(self):
        # type: () -> _typing.Tuple[_pd.DataFrame, _pd.DataFrame]
        """
        Returns the click table (t_s, cause, amplitude_V) and the current
        trace table (t_start_s, t_end_s, current_A).
        """
        clicks = _pd.DataFrame(
            {
                "t_s": [click.t for click in self.clicks],
                "cause": [click.cause.value for click in self.clicks],
                "amplitude_V": [click.amplitude for click in self.clicks],
            },
            columns=["t_s", "cause", "amplitude_V"])
        current = _pd.DataFrame(
            list(self.current_trace),
            columns=["t_start", "t_end", "current"]).rename(columns={
                "t_start": "t_start_s",
                "t_end": "t_end_s",
                "current": "current_A",
            })
        return (clicks, current)

# =============================================================================
