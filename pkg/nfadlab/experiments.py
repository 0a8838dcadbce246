# =============================================================================
# nfadlab
#
# EXPERIMENTS SUB-MODULE
# =============================================================================

"""
One runner per named experiment. Each turns a resolved configuration into
tables (pandas DataFrames, SI units in the column names) and a few summary
lines; writing them is left to the command-line interface.
"""

# Python stdlib imports
import collections as _collections
import math as _math
import typing as _typing

# External dependencies
import numpy as _np
import pandas as _pd

# Local imports
import nfadlab.util.custom_logging as _logging
import nfadlab.util.rng as _rng

from nfadlab import attack_lab as _lab
from nfadlab import circuit_model as _circuit
from nfadlab import detector_core as _core
from nfadlab import monitor as _monitor
from nfadlab import optics as _optics
from nfadlab import presets as _presets
from nfadlab import qkd_harness as _qkd
from nfadlab.models.abstract.record import to_plain
from nfadlab.models.experiments import (
    ExperimentConfig, ExperimentKind, ExperimentResult)
from nfadlab.models.monitoring import MonitorConfig
from nfadlab.models.params import NfadParams
from nfadlab.models.qkd import Bb84AttackConfig
from nfadlab.models.scenario import OpticalScenario
from nfadlab.util.misc import format_si

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

THRESHOLD_MAP_POWERS = [1.2, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0, 100.0]

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def resolve_params(config, efficiency=None):
    # type: (ExperimentConfig, _typing.Optional[float]) -> NfadParams
    """
    Parameter set of the configured preset with the overrides applied.
    """
    overrides = dict(config.overrides)
    overrides.pop("name", None)
    configured = overrides.pop("efficiency", config.efficiency)
    return _presets.get_preset(
        config.preset,
        efficiency=configured if efficiency is None else efficiency,
        **overrides)


def _saturating(p_blinding, params):
    op = _circuit.solve_operating_point(p_blinding, params)
    return _core.saturating_energy(op, params)


def _frame(rows, columns):
    return _pd.DataFrame([list(row) for row in rows], columns=columns)


def _triggers_in(period, spacing):
    # Rounding slack keeps an exact multiple from spilling into one more trigger
    return int(_math.ceil(period / spacing * (1.0 - 1e-12)))

# =============================================================================

def _click_curve(config, params, settings):
    if settings["p_blinding"] is None:
        settings["p_blinding"] = _lab.control_blinding_power(params)
    p_blinding = settings["p_blinding"]

    if settings["energies"] is None:
        op = _circuit.solve_operating_point(p_blinding, params)
        e_threshold = _core.energy_for_amplitude(params.v_th, op, params)
        settings["energies"] = _np.geomspace(
            0.5 * e_threshold, 2.0 * e_threshold, settings["n_energies"]).tolist()

    points = _lab.estimate_click_curve(
        p_blinding, settings["energies"], settings["n_trials"], params,
        seed=config.seed, trigger_rate=settings["trigger_rate"])

    table = _frame(points, [
        "energy_J", "n_trials", "n_clicks", "p_hat", "p_lower", "p_upper"])
    summary = ["{} energies at {}, click fraction {:.3f} to {:.3f}".format(
        len(points), format_si(p_blinding, "W"),
        points[0].p_hat, points[-1].p_hat)]
    return ({"click_curve": table}, summary)


def _threshold_map(config, params, settings):
    if settings["powers"] is None:
        p_min = _circuit.min_blinding_power(params)
        settings["powers"] = [factor * p_min for factor in THRESHOLD_MAP_POWERS]

    threshold_map = _lab.estimate_threshold_map(
        settings["powers"], params, epsilon=settings["epsilon"],
        n_trials=settings["n_trials"], seed=config.seed,
        trigger_rate=settings["trigger_rate"])
    feasibility = _qkd.attack_feasibility(threshold_map)

    rows = [
        (entry.p_blinding, entry.e_never, entry.e_always, verdict.feasible,
         verdict.window[0] if verdict.feasible else _np.nan,
         verdict.window[1] if verdict.feasible else _np.nan)
        for (entry, verdict) in zip(threshold_map.entries, feasibility)
    ]
    table = _frame(rows, [
        "p_blinding_W", "e_never_J", "e_always_J", "feasible",
        "window_low_J", "window_high_J"])
    summary = ["{} of {} blinding powers allow a full attack".format(
        sum(verdict.feasible for verdict in feasibility), len(feasibility))]
    return ({"threshold_map": table}, summary)


def _jitter(config, params, settings):
    if settings["p_blinding"] is None:
        settings["p_blinding"] = _lab.control_blinding_power(params)
    if settings["e_pulse"] is None:
        settings["e_pulse"] = _saturating(settings["p_blinding"], params)
    if settings["pulse_fwhm"] is None:
        settings["pulse_fwhm"] = _presets.JITTER_PULSE_FWHM.get(
            config.preset, _lab.DEFAULT_PULSE_FWHM)

    runs = [(settings["p_blinding"], settings["e_pulse"])]
    if settings["single_photon"]:
        runs.append((0.0, _lab.single_photon_energy(settings["mean_photons"])))

    results = [
        _lab.jitter_experiment(
            p_blinding, e_pulse, settings["n_pulses"], params,
            seed=_rng.derive_seed(config.seed, _rng.STREAM_EXPERIMENT, index),
            trigger_rate=settings["trigger_rate"],
            pulse_fwhm=settings["pulse_fwhm"], bins=settings["bins"])
        for (index, (p_blinding, e_pulse)) in enumerate(runs)
    ]

    fits = _frame(
        [(r.cause, r.n_pulses, r.n_clicks, r.center, r.sigma, r.fwhm, r.residual)
         for r in results],
        ["cause", "n_pulses", "n_clicks", "center_s", "sigma_s", "fwhm_s",
         "residual"])
    histogram = _frame(
        [(r.cause, center, count)
         for r in results for (center, count) in zip(r.bin_centers, r.counts)],
        ["cause", "bin_center_s", "count"])
    summary = ["{} clicks: FWHM {}".format(r.cause, format_si(r.fwhm, "s"))
               for r in results]
    return ({"jitter": fits, "jitter_histogram": histogram}, summary)


def _count_rate_sweep(config, params, settings):
    points = _core.count_rate_curve(
        settings["photon_rates"], params, duration=settings["duration"],
        seed=config.seed)
    table = _frame(points, ["photon_rate_Hz", "count_rate_Hz", "mean_current_A"])
    summary = ["peak count rate {} at {} photons/s, top current {}".format(
        format_si(max(p.rate_out for p in points), "Hz"),
        format_si(max(points, key=lambda p: p.rate_out).rate_in),
        format_si(points[-1].mean_current, "A"))]
    return ({"count_rate_sweep": table}, summary)


def _table_currents(config, params, settings):
    efficiencies = settings["efficiencies"]
    powers = settings["p_blinding"]
    if powers is None or _np.isscalar(powers):
        powers = [powers] * len(efficiencies)

    resolved = []
    configurations = []
    for (efficiency, power) in zip(efficiencies, powers):
        eff_params = resolve_params(config, efficiency=efficiency)
        if power is None:
            power = _lab.control_blinding_power(eff_params)
        resolved.append(power)
        configurations.append((efficiency, eff_params, power))
    settings["p_blinding"] = resolved

    rows = _lab.table_currents(
        configurations, settings["trigger_rates"],
        n_triggers=settings["n_triggers"], seed=config.seed,
        e_pulse=settings["e_pulse"])
    table = _frame(rows, [
        "efficiency", "trigger_rate_Hz", "p_blinding_W", "mean_current_A"])
    summary = ["{:.0%} at {}: {}".format(
        row.efficiency, format_si(row.trigger_rate, "Hz"),
        format_si(row.mean_current, "A")) for row in rows]
    return ({"table_currents": table}, summary)


def _gated_blinding(config, params, settings):
    monitor_config = MonitorConfig(**settings["monitor"])
    if settings["p_blinding"] is None:
        settings["p_blinding"] = _lab.gated_blinding_power(params)
    if settings["p_continuous"] is None:
        settings["p_continuous"] = _lab.control_blinding_power(params)
    if settings["e_pulse"] is None:
        settings["e_pulse"] = _saturating(settings["p_blinding"], params)
    if settings["e_continuous"] is None:
        settings["e_continuous"] = _saturating(settings["p_continuous"], params)

    # Unless given, each arm fills one monitor sampling period
    period = monitor_config.sample_period
    n_triggers = settings["n_triggers"]
    n_continuous = n_triggers or _triggers_in(period, 1.0 / settings["trigger_rate"])
    n_gated = n_triggers or _triggers_in(period, params.tau_d + settings["delay"])

    plans = [
        ("continuous", _lab.continuous_plan(
            params, settings["p_continuous"], settings["e_continuous"],
            settings["trigger_rate"], n_continuous)),
        ("gated", _lab.gated_plan(
            params, settings["p_blinding"], settings["e_pulse"],
            n_gated, delay=settings["delay"],
            on_lead=settings["on_lead"],
            laser_off_margin=settings["laser_off_margin"])),
    ]

    rows = []
    for (index, (name, plan)) in enumerate(plans):
        run = _lab.gated_blinding_run(
            plan, params,
            seed=_rng.derive_seed(config.seed, _rng.STREAM_EXPERIMENT, index))
        report = _monitor.mean_current_monitor(
            run, threshold=settings["current_threshold"], config=monitor_config)
        rows.append((name, plan.p_blinding, plan.trigger_rate,
                     len(plan.trigger_times), len(run.clicks), run.mean_current(),
                     report.verdict.value))

    table = _frame(rows, [
        "plan", "p_blinding_W", "trigger_rate_Hz", "n_triggers", "n_clicks",
        "mean_current_A", "verdict"])
    summary = ["{} blinding at {}: {} mean current, {}".format(
        row[0], format_si(row[1], "W"), format_si(row[5], "A"), row[6])
        for row in rows]
    return ({"gated_blinding": table}, summary)


def _bb84(config, params, settings):
    if settings["p_blinding"] is None:
        settings["p_blinding"] = _lab.control_blinding_power(params)
    p_blinding = settings["p_blinding"]

    (e_never, e_always) = _lab.estimate_thresholds(
        p_blinding, params, epsilon=settings["epsilon"],
        n_trials=settings["n_trials"], seed=config.seed,
        trigger_rate=settings["trigger_rate"])
    if settings["e_pulses"] is None:
        low = 0.5 * e_never if e_never > 0 else 0.5 * e_always
        settings["e_pulses"] = _np.geomspace(low, 3.0 * e_always, 9).tolist()

    rows = []
    for (index, e_pulse) in enumerate(settings["e_pulses"]):
        attack = Bb84AttackConfig(
            e_pulse=e_pulse,
            trigger_rate=settings["trigger_rate"],
            n_rounds=settings["n_rounds"],
            thresholds=(e_never, e_always),
            rng_seed=_rng.derive_seed(config.seed, _rng.STREAM_BB84, index))
        stats = _qkd.run_bb84_attack(attack, params, p_blinding)
        rows.append(dict(stats.as_row(), in_safe_window=attack.in_safe_window))

    table = _pd.DataFrame(rows, columns=[
        "p_blinding_W", "e_pulse_J", "n_rounds", "bob_click_rate",
        "qber_contribution", "double_click_rate", "basis_match_fraction",
        "in_safe_window"])
    summary = ["E_never {}, E_always {}: attack {}".format(
        format_si(e_never, "J"), format_si(e_always, "J"),
        "feasible" if e_always < 2.0 * e_never else "not feasible")]
    return ({"bb84": table}, summary)


def _fast_monitor(config, params, settings):
    monitor_config = MonitorConfig(**settings["monitor"])
    if settings["p_blinding"] is None:
        settings["p_blinding"] = _lab.control_blinding_power(params)
    if settings["e_pulse"] is None:
        settings["e_pulse"] = _saturating(settings["p_blinding"], params)

    gated = _lab.gated_plan(
        params, settings["p_blinding"], settings["e_pulse"], settings["n_triggers"])
    continuous = _lab.continuous_plan(
        params, settings["p_blinding"], settings["e_pulse"],
        settings["trigger_rate"], settings["n_triggers"])

    seed = _rng.derive_seed(config.seed, _rng.STREAM_EXPERIMENT, 0)
    runs = _collections.OrderedDict([
        ("clean", _core.simulate(OpticalScenario(
            photon_rate=settings["photon_rate"], duration=gated.duration,
            rng_seed=seed), params, seed=seed)),
        ("continuous", _lab.gated_blinding_run(continuous, params, seed=seed)),
        ("gated", _lab.gated_blinding_run(gated, params, seed=seed)),
    ])

    rows = []
    for (name, run) in runs.items():
        report = _monitor.fast_blinding_monitor(run, monitor_config)
        score = _monitor.score_alarms(
            report, _optics.illumination_windows(run.scenario))
        rows.append((name, len(run.clicks), report.verdict.value,
                     len(report.alarms), score.recall, score.false_positives,
                     len(report.compromised_clicks)))
        _logger.debug("{} run: {} alarm(s), {} compromised click(s)".format(
            name, len(report.alarms), len(report.compromised_clicks)))

    table = _frame(rows, [
        "scenario", "n_clicks", "verdict", "n_alarms", "recall",
        "false_positives", "compromised_clicks"])
    trace = _monitor.bias_voltage_trace(
        runs["gated"], monitor_config, t_stop=settings["trace_length"])
    summary = ["{}: {} (recall {:.2f}, {} false positive(s))".format(
        row[0], row[2], row[4], row[5]) for row in rows]
    return ({"fast_monitor": table,
             "fast_monitor_trace": trace.to_frame()}, summary)

# =============================================================================

_RUNNERS = {
    ExperimentKind.CLICK_CURVE: _click_curve,
    ExperimentKind.THRESHOLD_MAP: _threshold_map,
    ExperimentKind.JITTER: _jitter,
    ExperimentKind.COUNT_RATE_SWEEP: _count_rate_sweep,
    ExperimentKind.TABLE_CURRENTS: _table_currents,
    ExperimentKind.GATED_BLINDING: _gated_blinding,
    ExperimentKind.BB84: _bb84,
    ExperimentKind.FAST_MONITOR: _fast_monitor,
}


def execute(config):
    # type: (ExperimentConfig) -> ExperimentResult
    """
    Runs the configured experiment. The returned settings have every
    default resolved, so that writing them back reproduces the run.
    """
    params = resolve_params(config)
    settings = config.resolved_settings()

    with _logging.start_action(
            action_type="nfadlab:execute",
            experiment=config.experiment.value, preset=config.preset,
            seed=config.seed) as action:
        (tables, summary) = _RUNNERS[config.experiment](config, params, settings)
        action.add_success_fields(tables=sorted(tables))

    return ExperimentResult(
        tables=_collections.OrderedDict(sorted(tables.items())),
        settings=to_plain(settings),
        params=params,
        summary=summary)

# =============================================================================
