# =============================================================================
# nfadlab
#
# ATTACK LAB SUB-MODULE
# =============================================================================

"""
Eve's procedures against a blinded NFAD: forced-click probability scans,
(E_never, E_always) threshold estimation, jitter measurements, and the
continuous and deadtime-gated blinding plans.
"""

# Python stdlib imports
import math as _math
import typing as _typing

# External dependencies
import numpy as _np

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging
import nfadlab.util.rng as _rng
import nfadlab.util.stats as _stats

from nfadlab import circuit_model as _circuit
from nfadlab import detector_core as _core
from nfadlab import optics as _optics
from nfadlab import presets as _presets
from nfadlab.circuit_model import PHOTON_ENERGY
from nfadlab.models.attacks import (
    ClickCurvePoint, GatedBlindingPlan, JitterResult, TableCurrentsRow,
    ThresholdEntry, ThresholdMap)
from nfadlab.models.params import NfadParams
from nfadlab.models.runs import ClickCause, DetectorRun
from nfadlab.models.scenario import CwSegment, OpticalScenario

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

DEFAULT_TRIGGER_RATE = 40e3
DEFAULT_EPSILON = 0.005
DEFAULT_PULSE_FWHM = 33e-12
DEFAULT_ON_LEAD = 0.5e-6
DEFAULT_RECOVERY_DELAY = 0.5e-6
FIRST_TRIGGER = 100e-9
# Blinding power of a continuous attack, and of a gated one, in units of P_min
CONTROL_MARGIN = 2.0
GATED_MARGIN = 1.05
MIN_JITTER_CLICKS = 100
THRESHOLD_RESOLUTION = 1.01
MAX_DECADES = 30

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def wilson_interval(k, n, z=_stats.DEFAULT_Z):
    # type: (int, int, float) -> _typing.Tuple[float, float, float]
    """
    Returns (p_hat, lower, upper) for `k` successes out of `n` trials.
    """
    p_hat = k / n if n > 0 else 0.0
    (lower, upper) = _stats.wilson_bounds(p_hat, n, z)
    return (p_hat, lower, upper)


def require_blinded(p_blinding, params):
    # type: (float, NfadParams) -> None
    """
    :raises NotBlindedError: If `p_blinding` leaves the detector in Geiger
        mode.
    """
    p_min = _circuit.min_blinding_power(params)
    if p_blinding < p_min or not _circuit.is_blinded(p_blinding, params):
        raise _errors.NotBlindedError(
            p_blinding=p_blinding, p_min=p_min, name=params.name)


def _require_trigger_rate(trigger_rate, params):
    if not 0.0 < trigger_rate < params.deadtime_rate:
        raise _errors.ParameterValidationError(
            owner="trigger_rate",
            reason="{} Hz must lie in (0, 1/tau_d = {:.6g} Hz)".format(
                trigger_rate, params.deadtime_rate))

# =============================================================================

def _forced_click_run(p_blinding, energy, n_pulses, params, seed,
                      trigger_rate=DEFAULT_TRIGGER_RATE,
                      pulse_fwhm=DEFAULT_PULSE_FWHM):
    # type: (float, float, int, NfadParams, int, float, float) -> DetectorRun
    t0 = 0.5 / trigger_rate
    duration = t0 + n_pulses / trigger_rate
    scenario = OpticalScenario(
        cw=_optics.continuous_blinding(p_blinding, duration),
        pulses=_optics.trigger_pulse_train(
            _optics.periodic_trigger_times(trigger_rate, n_pulses, t0),
            energy, pulse_fwhm),
        duration=duration,
        rng_seed=seed)
    return _core.simulate(scenario, params, seed=seed)


def _count_forced_clicks(p_blinding, energy, n_trials, params, seed, trigger_rate):
    run = _forced_click_run(
        p_blinding, energy, n_trials, params, seed, trigger_rate=trigger_rate)
    return run.clicks_by_cause()[ClickCause.FAKED_STATE]


def estimate_click_curve(p_blinding, energies, n_trials, params, seed=0,
                         trigger_rate=DEFAULT_TRIGGER_RATE, z=_stats.DEFAULT_Z):
    # type: (float, _typing.Iterable[float], int, NfadParams, int, float, float) -> _typing.List[ClickCurvePoint]
    """
    Sends `n_trials` trigger pulses per energy to the detector blinded with
    `p_blinding` and returns the click fraction with its Wilson interval.

    :raises NotBlindedError: If the detector is not blinded.
    """
    require_blinded(p_blinding, params)
    _require_trigger_rate(trigger_rate, params)

    points = []
    with _logging.start_action(
            action_type="nfadlab:estimate_click_curve",
            detector=params.name, p_blinding=p_blinding, n_trials=n_trials):
        for (index, energy) in enumerate(energies):
            k = _count_forced_clicks(
                p_blinding, energy, n_trials, params,
                _rng.derive_seed(seed, _rng.STREAM_EXPERIMENT, index),
                trigger_rate)
            (p_hat, lower, upper) = wilson_interval(k, n_trials, z)
            points.append(ClickCurvePoint(
                float(energy), int(n_trials), int(k), p_hat, lower, upper))

    return points

# =============================================================================

class _ThresholdSearch(object):
    """
    Bisection over log-energy on the statistical never/always predicates,
    memoizing every measured energy.
    """

    def __init__(self, p_blinding, params, epsilon, n_trials, seed,
                 trigger_rate, z):
        self.p_blinding = p_blinding
        self.params = params
        self.epsilon = epsilon
        self.n_trials = n_trials
        self.seed = seed
        self.trigger_rate = trigger_rate
        self.z = z
        self._measured = dict()

    def _interval(self, energy):
        if energy not in self._measured:
            k = _count_forced_clicks(
                self.p_blinding, energy, self.n_trials, self.params,
                _rng.derive_seed(self.seed, _rng.STREAM_EXPERIMENT,
                                 len(self._measured)),
                self.trigger_rate)
            self._measured[energy] = wilson_interval(k, self.n_trials, self.z)
        return self._measured[energy]

    def never(self, energy):
        return self._interval(energy)[2] <= self.epsilon

    def always(self, energy):
        return self._interval(energy)[1] >= 1.0 - self.epsilon

    @staticmethod
    def _refine(lo, hi, predicate_holds_low):
        # Invariant: predicate_holds_low(lo) and not predicate_holds_low(hi)
        while hi / lo > THRESHOLD_RESOLUTION:
            mid = _math.sqrt(lo * hi)
            if predicate_holds_low(mid):
                lo = mid
            else:
                hi = mid
        return (lo, hi)

    def e_never(self, e_start):
        if self.never(e_start):
            (lo, hi) = (e_start, 10.0 * e_start)
            for _ in range(MAX_DECADES):
                if not self.never(hi):
                    break
                (lo, hi) = (hi, 10.0 * hi)
        else:
            (lo, hi) = (e_start / 10.0, e_start)
            for _ in range(MAX_DECADES):
                if self.never(lo):
                    break
                (lo, hi) = (lo / 10.0, lo)
            else:
                return 0.0
        return self._refine(lo, hi, self.never)[0]

    def e_always(self, e_start):
        (lo, hi) = (e_start, 10.0 * e_start)
        for _ in range(MAX_DECADES):
            if self.always(hi):
                break
            (lo, hi) = (hi, 10.0 * hi)
        else:
            raise _errors.ExperimentError(
                reason="no energy up to {:.3g} J always clicks".format(hi))
        return self._refine(lo, hi, lambda e: not self.always(e))[1]

    @property
    def n_measurements(self):
        return len(self._measured)


def estimate_thresholds(p_blinding, params, epsilon=DEFAULT_EPSILON,
                        n_trials=1000, seed=0,
                        trigger_rate=DEFAULT_TRIGGER_RATE, z=_stats.DEFAULT_Z):
    # type: (float, NfadParams, float, int, int, float, float) -> _typing.Tuple[float, float]
    """
    Estimates (e_never, e_always) at the blinding power `p_blinding`.

    e_never is the largest tested energy whose click probability has a Wilson
    upper bound <= epsilon; e_always the smallest tested energy whose lower
    bound is >= 1 - epsilon. Both are refined by bisection over log-energy to
    a relative width of 1%, and the e_always search starts at e_never.

    :raises NotBlindedError: If the detector is not blinded.
    """
    if not 0.0 < epsilon < 0.5:
        raise _errors.ParameterValidationError(
            owner="estimate_thresholds",
            reason="epsilon must lie in (0, 0.5), got {}".format(epsilon))
    if _stats.wilson_bounds(0.0, n_trials, z)[1] > epsilon:
        raise _errors.ParameterValidationError(
            owner="estimate_thresholds",
            reason="{} trials cannot resolve epsilon = {}".format(
                n_trials, epsilon))
    require_blinded(p_blinding, params)
    _require_trigger_rate(trigger_rate, params)

    op = _circuit.solve_operating_point(p_blinding, params)
    e_threshold = _core.energy_for_amplitude(params.v_th, op, params)

    with _logging.start_action(
            action_type="nfadlab:estimate_thresholds",
            detector=params.name, p_blinding=p_blinding) as action:

        search = _ThresholdSearch(
            p_blinding, params, epsilon, n_trials, seed, trigger_rate, z)
        e_never = search.e_never(e_threshold)
        e_always = search.e_always(e_never if e_never > 0.0 else e_threshold)

        action.add_success_fields(
            e_never=e_never, e_always=e_always,
            n_measurements=search.n_measurements)

    return (e_never, e_always)


def estimate_threshold_map(powers, params, epsilon=DEFAULT_EPSILON,
                           n_trials=1000, seed=0,
                           trigger_rate=DEFAULT_TRIGGER_RATE):
    # type: (_typing.Iterable[float], NfadParams, float, int, int, float) -> ThresholdMap
    entries = []
    for (index, p_blinding) in enumerate(powers):
        (e_never, e_always) = estimate_thresholds(
            p_blinding, params, epsilon=epsilon, n_trials=n_trials,
            seed=_rng.derive_seed(seed, _rng.STREAM_EXPERIMENT, index),
            trigger_rate=trigger_rate)
        entries.append(ThresholdEntry(float(p_blinding), e_never, e_always))
        _logger.info("{} at {:.4g} W: E_never = {:.4g} J, E_always = {:.4g} J".format(
            params.name, p_blinding, e_never, e_always))

    return ThresholdMap(
        entries=entries, params=params, n_trials=n_trials, epsilon=epsilon)

# =============================================================================

def jitter_experiment(p_blinding, e_pulse, n_pulses, params, seed=0,
                      trigger_rate=DEFAULT_TRIGGER_RATE,
                      pulse_fwhm=DEFAULT_PULSE_FWHM, bins=100):
    # type: (float, float, int, NfadParams, int, float, float, int) -> JitterResult
    """
    Histograms click time minus pulse peak time and fits a Gaussian.

    With `p_blinding` > 0 the detector is blinded and faked-state clicks are
    measured; with `p_blinding` = 0 it stays in Geiger mode and the pulses
    are attenuated single-photon probes (see `single_photon_energy`).

    :raises TooFewClicksError: With fewer than 100 clicks to fit.
    """
    _require_trigger_rate(trigger_rate, params)
    if p_blinding > 0.0:
        require_blinded(p_blinding, params)
        cause = ClickCause.FAKED_STATE
    else:
        cause = ClickCause.PHOTON

    with _logging.start_action(
            action_type="nfadlab:jitter_experiment",
            detector=params.name, cause=cause.value, n_pulses=n_pulses) as action:

        run = _forced_click_run(
            p_blinding, e_pulse, n_pulses, params, seed,
            trigger_rate=trigger_rate, pulse_fwhm=pulse_fwhm)
        offsets = _np.array([
            click.t - click.t_origin
            for click in run.clicks if click.cause is cause])

        if offsets.size < MIN_JITTER_CLICKS:
            raise _errors.TooFewClicksError(
                minimum=MIN_JITTER_CLICKS, count=offsets.size)

        fit = _stats.fit_gaussian_histogram(offsets, bins=bins)
        action.add_success_fields(n_clicks=int(offsets.size), fwhm=fit.fwhm)

    return JitterResult(
        cause=cause.value,
        n_pulses=n_pulses,
        n_clicks=int(offsets.size),
        counts=tuple(int(count) for count in fit.counts),
        edges=tuple(float(edge) for edge in fit.edges),
        center=fit.mean,
        sigma=fit.sigma,
        fwhm=fit.fwhm,
        residual=fit.residual,
    )


def single_photon_energy(mean_photons=10.0):
    # type: (float) -> float
    """
    Energy [J] of an attenuated probe pulse carrying `mean_photons` photons.
    """
    return mean_photons * PHOTON_ENERGY

# =============================================================================

def control_blinding_power(params):
    # type: (NfadParams) -> float
    """
    Blinding power of a continuous attack: the published value for the
    preset at its efficiency when there is one, CONTROL_MARGIN * P_min
    otherwise.
    """
    published = _presets.blinding_power(params.name, params.efficiency)
    if published is not None:
        return published
    return CONTROL_MARGIN * _circuit.min_blinding_power(params)


def gated_blinding_power(params):
    # type: (NfadParams) -> float
    """
    Blinding power of a deadtime-gated attack, just above P_min so that the
    light adds as little current as possible.
    """
    return GATED_MARGIN * _circuit.min_blinding_power(params)


def continuous_trigger_times(trigger_rate, count, t0=FIRST_TRIGGER):
    # type: (float, int, float) -> _typing.Tuple[float, ...]
    return _optics.periodic_trigger_times(trigger_rate, count, t0)


def recovery_trigger_times(tau_d, delay, count, t0=1e-6):
    # type: (float, float, int, float) -> _typing.Tuple[float, ...]
    """
    Forced-click schedule firing `delay` after each deadtime ends.
    """
    return tuple(t0 + k * (tau_d + delay) for k in range(int(count)))


def continuous_plan(params, p_blinding, e_pulse, trigger_rate, n_triggers,
                    pulse_fwhm=DEFAULT_PULSE_FWHM):
    # type: (NfadParams, float, float, float, int, float) -> GatedBlindingPlan
    """
    Blinding always on, triggers at `trigger_rate`; the run lasts exactly
    `n_triggers` trigger periods.
    """
    times = continuous_trigger_times(trigger_rate, n_triggers)
    return GatedBlindingPlan(
        trigger_times=times,
        p_blinding=p_blinding,
        e_pulse=e_pulse,
        duration=FIRST_TRIGGER + n_triggers / trigger_rate,
        gated=False,
        pulse_fwhm=pulse_fwhm)


def gated_plan(params, p_blinding, e_pulse, n_triggers,
               delay=DEFAULT_RECOVERY_DELAY, on_lead=DEFAULT_ON_LEAD,
               laser_off_margin=0.0, trigger_times=None,
               pulse_fwhm=DEFAULT_PULSE_FWHM):
    # type: (NfadParams, float, float, int, float, float, float, _typing.Optional[_typing.Sequence[float]], float) -> GatedBlindingPlan
    """
    Blinding only around forced clicks. By default the clicks are forced
    `delay` after each recovery; an explicit schedule may be given instead.
    """
    if trigger_times is None:
        trigger_times = recovery_trigger_times(
            params.tau_d, delay, n_triggers, t0=max(on_lead, FIRST_TRIGGER))
    period = params.tau_d + delay
    return GatedBlindingPlan(
        trigger_times=trigger_times,
        p_blinding=p_blinding,
        e_pulse=e_pulse,
        duration=max(trigger_times) + max(period, laser_off_margin),
        on_lead=on_lead,
        laser_off_margin=laser_off_margin,
        gated=True,
        pulse_fwhm=pulse_fwhm)


def plan_scenario(plan, params, seed=0):
    # type: (GatedBlindingPlan, NfadParams, int) -> OpticalScenario
    """
    Builds the optical scenario realizing `plan` on the detector `params`.

    :raises PlanTimingError: If triggers are not spaced by more than tau_d,
        or if a gated plan never switches the light off.
    """
    tau_d = params.tau_d
    times = plan.trigger_times

    spacing = _np.diff(times)
    if spacing.size and spacing.min() <= tau_d:
        raise _errors.PlanTimingError(
            reason="triggers {:.4g} s apart, deadtime is {:.4g} s".format(
                spacing.min(), tau_d))

    if not plan.gated:
        cw = _optics.continuous_blinding(plan.p_blinding, plan.duration)
    else:
        if plan.laser_off_margin + plan.on_lead >= tau_d:
            raise _errors.PlanTimingError(
                reason="laser_off_margin + on_lead must be shorter than tau_d")
        cw = []
        t_on = times[0] - plan.on_lead
        for t_trigger in times:
            t_off = min(t_trigger + plan.laser_off_margin, plan.duration)
            if t_on < t_off:
                cw.append(CwSegment(
                    t_start=t_on, t_end=t_off, power=plan.p_blinding))
            t_on = t_trigger + tau_d - plan.on_lead

    return OpticalScenario(
        cw=cw,
        pulses=_optics.trigger_pulse_train(times, plan.e_pulse, plan.pulse_fwhm),
        duration=plan.duration,
        rng_seed=seed)


def gated_blinding_run(plan, params, seed=0):
    # type: (GatedBlindingPlan, NfadParams, int) -> DetectorRun
    """
    Simulates `plan` against the detector `params`.
    """
    require_blinded(plan.p_blinding, params)
    scenario = plan_scenario(plan, params, seed=seed)
    run = _core.simulate(scenario, params, seed=seed)
    _logger.debug("{} plan, {} triggers: {} clicks, mean current {:.4g} A".format(
        "Gated" if plan.gated else "Continuous",
        len(plan.trigger_times), len(run.clicks), run.mean_current()))
    return run

# =============================================================================

def table_currents(settings, trigger_rates, n_triggers=2000, seed=0,
                   e_pulse=None):
    # type: (_typing.Iterable[_typing.Tuple[float, NfadParams, float]], _typing.Iterable[float], int, int, _typing.Optional[float]) -> _typing.List[TableCurrentsRow]
    """
    Mean supply current under continuous blinding for each (efficiency,
    params, p_blinding) setting and trigger rate. Trigger pulses default to a
    saturating energy, so that every pulse outside deadtime clicks.
    """
    trigger_rates = list(trigger_rates)
    rows = []
    for (index, (efficiency, params, p_blinding)) in enumerate(settings):
        require_blinded(p_blinding, params)
        op = _circuit.solve_operating_point(p_blinding, params)
        energy = e_pulse if e_pulse is not None else _core.saturating_energy(op, params)

        for (rate_index, rate) in enumerate(trigger_rates):
            _require_trigger_rate(rate, params)
            plan = continuous_plan(params, p_blinding, energy, rate, n_triggers)
            run = gated_blinding_run(
                plan, params,
                seed=_rng.derive_seed(seed, _rng.STREAM_EXPERIMENT, index, rate_index))
            rows.append(TableCurrentsRow(
                float(efficiency), float(rate), float(p_blinding), run.mean_current()))
            _logger.info("Efficiency {:.0%}, {:.0f} Hz: {:.4g} A".format(
                efficiency, rate, rows[-1].mean_current))
    return rows

# =============================================================================
