# =============================================================================
# nfadlab
#
# DETECTOR CORE SUB-MODULE
# =============================================================================

"""
Event-driven model of a free-running NFAD: Geiger-mode avalanches from
photons and dark counts, forced clicks from bright pulses once blinded,
deadtime gating, timing jitter, and the supply current the monitors see.
"""

# Python stdlib imports
import collections as _collections
import math as _math
import typing as _typing

# External dependencies
import scipy.stats as _stats

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging
import nfadlab.util.rng as _rng
import nfadlab.util.stats as _nstats

from nfadlab import circuit_model as _circuit
from nfadlab.circuit_model import ELEMENTARY_CHARGE, PHOTON_ENERGY
from nfadlab.models.params import Mode, NfadParams, OperatingPoint
from nfadlab.models.runs import (
    ChargeImpulse, ClickCause, ClickEvent, CurrentSegment, DetectorRun)
from nfadlab.models.scenario import OpticalScenario

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

# Ordering of simultaneous events
_ORDER_CW_ON = 0
_ORDER_PULSE = 1
_ORDER_CW_OFF = 2

CountRatePoint = _collections.namedtuple(
    "CountRatePoint", ["rate_in", "rate_out", "mean_current"])

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def pulse_amplitude(e_pulse, gain, params):
    # type: (float, float, NfadParams) -> float
    """
    Comparator-input amplitude [V] of a linear-mode pulse: the multiplied
    photocharge times the amplifier transimpedance.
    """
    return (params.amp_transimpedance * (e_pulse / PHOTON_ENERGY) *
            ELEMENTARY_CHARGE * gain)


def energy_for_amplitude(amplitude, op, params):
    # type: (float, OperatingPoint, NfadParams) -> float
    """
    Pulse energy [J] producing `amplitude` at the operating point `op`.
    """
    return amplitude / pulse_amplitude(1.0, op.gain, params)


def saturating_energy(op, params, margin=8.0):
    # type: (OperatingPoint, NfadParams, float) -> float
    """
    Pulse energy whose amplitude sits `margin` noise widths above threshold,
    i.e. a pulse that clicks with probability 1 for all practical purposes.
    """
    return energy_for_amplitude(
        params.v_th + margin * params.noise_sigma, op, params)


def click_probability(e_pulse, op, params):
    # type: (float, OperatingPoint, NfadParams) -> float
    """
    Probability that a trigger pulse of energy `e_pulse` [J] crosses the
    comparator threshold of a blinded detector at the operating point `op`:
    Phi((A - v_th) / noise_sigma).

    :raises NotBlindedError: If `op` is a Geiger-mode point.
    """
    if op.mode is Mode.GEIGER:
        raise _errors.NotBlindedError(
            p_blinding=op.p_optical,
            p_min=_circuit.min_blinding_power(params),
            name=params.name)
    if e_pulse < 0:
        raise _errors.ParameterValidationError(
            owner="click_probability",
            reason="e_pulse must be >= 0, got {}".format(e_pulse))

    amplitude = pulse_amplitude(e_pulse, op.gain, params)
    return float(_stats.norm.cdf((amplitude - params.v_th) / params.noise_sigma))


def geiger_pulse_click_probability(e_pulse, params):
    # type: (float, NfadParams) -> float
    """
    Click probability of an attenuated pulse on a Geiger-mode detector:
    at least one of its Poisson-distributed photons is detected.
    """
    return -_math.expm1(-params.efficiency * e_pulse / PHOTON_ENERGY)

# =============================================================================

class _CurrentTrace(object):
    """
    Accumulates constant-current segments, merging equal neighbours.
    """

    def __init__(self):
        self.segments = []

    def add(self, t_start, t_end, current):
        if t_end <= t_start:
            return
        if self.segments:
            last = self.segments[-1]
            if last.current == current and last.t_end == t_start:
                self.segments[-1] = CurrentSegment(last.t_start, t_end, current)
                return
        self.segments.append(CurrentSegment(t_start, t_end, current))


class _DetectorSimulation(object):
    """
    State machine of one detector run. Poisson arrivals are memoryless, so
    the next candidate avalanche is drawn afresh whenever the detector state
    changes instead of pre-sampling the whole photon stream.
    """

    def __init__(self, scenario, params, seed):
        self.scenario = scenario
        self.params = params
        self.seed = seed

        self._photon_rng = _rng.make_rng(scenario.rng_seed, _rng.STREAM_PHOTONS)
        self._thinning_rng = _rng.make_rng(seed, _rng.STREAM_THINNING)
        self._dark_rng = _rng.make_rng(seed, _rng.STREAM_DARK)
        self._pulse_rng = _rng.make_rng(seed, _rng.STREAM_PULSES)
        self._jitter_rng = _rng.make_rng(seed, _rng.STREAM_JITTER)

        self._sigma_photon = _nstats.fwhm_to_sigma(params.sp_jitter_fwhm)
        self._avalanche_amplitude = params.amp_transimpedance * params.avalanche_charge

        self.clicks = []
        self.charges = []
        self.trace = _CurrentTrace()
        self.suppressed_pulses = 0

        self._cw_power = 0.0
        self._active_segment = None
        self._dead_until = -_math.inf
        self._last_registered = -_math.inf

    # -------------------------------------------------------------------------

    def _dc_power(self):
        return self._cw_power + self.scenario.photon_rate * PHOTON_ENERGY

    def _live_point(self):
        return _circuit.solve_operating_point(self._dc_power(), self.params)

    def _dead_point(self):
        return _circuit.solve_operating_point(
            self._dc_power(), self.params, quenched=True)

    @staticmethod
    def _current_of(op):
        return 0.0 if op.mode is Mode.GEIGER else op.i_apd

    def _events(self):
        events = []
        for segment in self.scenario.cw:
            events.append((segment.t_start, _ORDER_CW_ON, len(events), segment))
            events.append((segment.t_end, _ORDER_CW_OFF, len(events), segment))
        for pulse in self.scenario.pulses:
            events.append((pulse.t_peak, _ORDER_PULSE, len(events), pulse))
        events.sort(key=lambda event: event[:3])
        return events

    # -------------------------------------------------------------------------

    def _next_avalanche(self, t):
        """
        Earliest candidate Geiger avalanche after `t`, as (time, cause).
        """
        candidate = (_math.inf, None)

        rate = self.scenario.photon_rate + self._cw_power / PHOTON_ENERGY
        efficiency = self.params.efficiency
        if rate > 0.0 and efficiency > 0.0:
            # Thinning: arrivals until the first detected one, and their span
            arrivals = self._thinning_rng.geometric(efficiency)
            candidate = (t + self._photon_rng.gamma(arrivals, 1.0 / rate),
                         ClickCause.PHOTON)

        if self.params.dark_count_rate > 0.0:
            t_dark = t + self._dark_rng.exponential(1.0 / self.params.dark_count_rate)
            if t_dark < candidate[0]:
                candidate = (t_dark, ClickCause.DARK)

        return candidate

    def _register(self, t_event, cause, amplitude, sigma):
        """
        Emits a click for an avalanche at `t_event` and starts the deadtime.
        Returns `False` if jitter would bring it within tau_d of the previous
        registered click, in which case nothing is emitted.
        """
        jitter = self._jitter_rng.normal(0.0, sigma) if sigma > 0.0 else 0.0
        t_registered = t_event + jitter
        if t_registered - self._last_registered < self.params.tau_d:
            return False

        self.clicks.append(ClickEvent(t_registered, cause, amplitude, t_event))
        self._last_registered = t_registered
        self._dead_until = t_event + self.params.tau_d
        return True

    def _on_pulse(self, t, pulse):
        params = self.params

        if t < self._dead_until:
            self.suppressed_pulses += 1
            op = self._dead_point()
            if op.mode is not Mode.GEIGER:
                self.charges.append(ChargeImpulse(
                    t, params.responsivity * pulse.energy * op.gain))
            return

        op = self._live_point()

        if op.mode is Mode.GEIGER:
            p_click = geiger_pulse_click_probability(pulse.energy, params)
            if self._pulse_rng.random() < p_click:
                if self._register(t, ClickCause.PHOTON,
                                  self._avalanche_amplitude, self._sigma_photon):
                    self.charges.append(ChargeImpulse(t, params.avalanche_charge))
            return

        self.charges.append(ChargeImpulse(
            t, params.responsivity * pulse.energy * op.gain))
        amplitude = (pulse_amplitude(pulse.energy, op.gain, params) +
                     self._pulse_rng.normal(0.0, params.noise_sigma))
        if amplitude > params.v_th:
            sigma = _nstats.fwhm_to_sigma(
                _nstats.rss(pulse.fwhm, params.electronics_jitter_fwhm))
            self._register(t, ClickCause.FAKED_STATE, amplitude, sigma)

    def _on_event(self, event):
        (t, order, _, payload) = event
        if order == _ORDER_CW_ON:
            self._cw_power = payload.power
            self._active_segment = payload
        elif order == _ORDER_CW_OFF:
            if self._active_segment is payload:
                self._cw_power = 0.0
                self._active_segment = None
        else:
            self._on_pulse(t, payload)

    # -------------------------------------------------------------------------

    def run(self):
        duration = self.scenario.duration
        events = self._events()
        index = 0
        t = 0.0

        while True:
            t_next = events[index][0] if index < len(events) else duration

            if t < self._dead_until:
                current = self._current_of(self._dead_point())
                if self._dead_until <= t_next:
                    self.trace.add(t, min(self._dead_until, duration), current)
                    t = self._dead_until
                    continue
                self.trace.add(t, t_next, current)
                t = t_next
            else:
                op = self._live_point()
                if op.mode is Mode.GEIGER:
                    (t_click, cause) = self._next_avalanche(t)
                    if t_click < t_next and t_click < duration:
                        self.trace.add(t, t_click, 0.0)
                        if self._register(t_click, cause,
                                          self._avalanche_amplitude,
                                          self._sigma_photon):
                            self.charges.append(ChargeImpulse(
                                t_click, self.params.avalanche_charge))
                        t = t_click
                        continue
                self.trace.add(t, t_next, self._current_of(op))
                t = t_next

            if index >= len(events):
                break
            self._on_event(events[index])
            index += 1

        return DetectorRun(
            clicks=tuple(self.clicks),
            current_trace=tuple(self.trace.segments),
            charges=tuple(sorted(self.charges, key=lambda imp: imp.t)),
            params=self.params,
            scenario=self.scenario,
            rng_seed=self.seed,
            suppressed_pulses=self.suppressed_pulses,
        )

# =============================================================================

def simulate(scenario, params, seed=None):
    # type: (OpticalScenario, NfadParams, _typing.Optional[int]) -> DetectorRun
    """
    Simulates the detector `params` under `scenario`.

    The photon stream is drawn from `scenario.rng_seed`; the detector's own
    randomness (detection, dark counts, comparator noise, jitter) from `seed`,
    which defaults to the scenario seed. Identical inputs give identical runs.
    """
    if seed is None:
        seed = scenario.rng_seed
    seed = _rng.validate_seed(seed, owner="simulate")

    with _logging.start_action(
            action_type="nfadlab:simulate",
            detector=params.name,
            duration=scenario.duration,
            n_pulses=len(scenario.pulses),
            photon_rate=scenario.photon_rate) as action:

        run = _DetectorSimulation(scenario, params, seed).run()

        action.add_success_fields(
            n_clicks=len(run.clicks),
            suppressed_pulses=run.suppressed_pulses)

    return run


def count_rate_curve(photon_rates, params, duration=0.05, seed=0):
    # type: (_typing.Iterable[float], NfadParams, float, int) -> _typing.List[CountRatePoint]
    """
    Measured click rate and mean supply current for each incident photon
    rate, one independent run per rate.
    """
    points = []
    for (index, rate) in enumerate(photon_rates):
        if rate < 0:
            raise _errors.ParameterValidationError(
                owner="count_rate_curve",
                reason="photon rates must be >= 0, got {}".format(rate))
        scenario = OpticalScenario(
            photon_rate=rate,
            duration=duration,
            rng_seed=_rng.derive_seed(seed, _rng.STREAM_PHOTONS, index))
        run = simulate(
            scenario, params,
            seed=_rng.derive_seed(seed, _rng.STREAM_EXPERIMENT, index))
        points.append(CountRatePoint(float(rate), run.click_rate, run.mean_current()))
        _logger.debug("Photon rate {:.3g}/s: {:.4g} clicks/s, {:.4g} A".format(
            rate, run.click_rate, points[-1].mean_current))
    return points

# =============================================================================
