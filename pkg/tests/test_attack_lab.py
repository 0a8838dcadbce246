
import collections

import numpy as np
import pytest

import nfadlab.attack_lab as _lab
import nfadlab.circuit_model as _circuit
import nfadlab.detector_core as _core
import nfadlab.errors as _errors
import nfadlab.monitor as _monitor
import nfadlab.optics as _optics
import nfadlab.presets as _presets
import nfadlab.util.stats as _stats

from nfadlab.models.attacks import GatedBlindingPlan
from nfadlab.models.monitoring import MonitorConfig, Verdict
from nfadlab.models.runs import ClickCause

FixtureTestData = collections.namedtuple(
    'FixtureTestData',
    ['input', 'output'])


@pytest.fixture(scope="module")
def d1_threshold_energy(d1_params, d1_blinding):
    op = _circuit.solve_operating_point(d1_blinding, d1_params)
    return _core.energy_for_amplitude(d1_params.v_th, op, d1_params)


@pytest.fixture(scope="module")
def d1_saturating_energy(d1_params, d1_blinding):
    op = _circuit.solve_operating_point(d1_blinding, d1_params)
    return _core.saturating_energy(op, d1_params)


class TestWilsonInterval:

    def test_no_clicks(self):
        (p_hat, lower, upper) = _lab.wilson_interval(0, 1000)
        assert (p_hat, lower) == (0.0, 0.0)
        assert upper < _lab.DEFAULT_EPSILON

    def test_no_trials(self):
        assert _lab.wilson_interval(0, 0) == (0.0, 0.0, 1.0)


class TestRequireBlinded:

    def test_below_p_min(self, d1_params, d1_p_min):
        with pytest.raises(_errors.NotBlindedError):
            _lab.require_blinded(0.5 * d1_p_min, d1_params)

    def test_above_p_min(self, d1_params, d1_p_min):
        _lab.require_blinded(2.0 * d1_p_min, d1_params)


class TestClickCurve:

    def test_shape(self, d1_params, d1_blinding, d1_threshold_energy):
        energies = [0.0, d1_threshold_energy, 3.0 * d1_threshold_energy]
        points = _lab.estimate_click_curve(
            d1_blinding, energies, 200, d1_params, seed=4)

        assert [point.energy for point in points] == energies
        assert points[0].n_clicks == 0
        assert points[-1].n_clicks == 200
        assert 0.2 < points[1].p_hat < 0.8
        for point in points:
            assert point.n_trials == 200
            assert point.p_lower <= point.p_hat <= point.p_upper

    def test_reproducible(self, d1_params, d1_blinding, d1_threshold_energy):
        args = (d1_blinding, [d1_threshold_energy], 100, d1_params)
        assert _lab.estimate_click_curve(*args, seed=1) == \
            _lab.estimate_click_curve(*args, seed=1)

    def test_not_blinded(self, d1_params):
        with pytest.raises(_errors.NotBlindedError):
            _lab.estimate_click_curve(0.0, [1e-14], 10, d1_params)

    def test_trigger_rate_above_deadtime(self, d1_params, d1_blinding):
        with pytest.raises(_errors.ParameterValidationError):
            _lab.estimate_click_curve(
                d1_blinding, [1e-14], 10, d1_params, trigger_rate=1e5)


class TestThresholds:

    def test_bracket_threshold(self, d1_params, d1_blinding, d1_threshold_energy):
        (e_never, e_always) = _lab.estimate_thresholds(
            d1_blinding, d1_params, n_trials=1000, seed=2)

        assert 0.0 < e_never < d1_threshold_energy < e_always
        assert e_always / e_never < 3.0

    def test_too_few_trials(self, d1_params, d1_blinding):
        with pytest.raises(_errors.ParameterValidationError):
            _lab.estimate_thresholds(d1_blinding, d1_params, n_trials=300)

    @pytest.mark.parametrize("epsilon", [0.0, 0.5, -0.1])
    def test_bad_epsilon(self, d1_params, d1_blinding, epsilon):
        with pytest.raises(_errors.ParameterValidationError):
            _lab.estimate_thresholds(d1_blinding, d1_params, epsilon=epsilon)

    def test_map_grows_with_power(self, d1_params):
        threshold_map = _lab.estimate_threshold_map(
            [1e-6, 250e-9], d1_params, n_trials=1000, seed=3)

        (low, high) = threshold_map.entries
        assert (low.p_blinding, high.p_blinding) == (250e-9, 1e-6)
        assert high.e_never > low.e_never
        assert high.e_always > low.e_always
        assert threshold_map.epsilon == _lab.DEFAULT_EPSILON

    def test_excess_bias_shifts_to_higher_power(self):
        # Blinded at the same power, the higher bias sits at a higher gain,
        # so the threshold curve of 20% lies to the right of the one of 10%
        (low, high) = [_presets.get_preset("d1", efficiency=eff) for eff in (0.1, 0.2)]
        assert high.v_excess > low.v_excess
        p_blinding = 3.0 * max(
            _circuit.min_blinding_power(low), _circuit.min_blinding_power(high))

        (never_low, always_low) = _lab.estimate_thresholds(
            p_blinding, low, n_trials=1000, seed=8)
        (never_high, always_high) = _lab.estimate_thresholds(
            p_blinding, high, n_trials=1000, seed=8)

        assert never_high < never_low
        assert always_high < always_low
        assert _circuit.min_blinding_power(high) > _circuit.min_blinding_power(low)


class TestJitter:

    def test_faked_state(self, d1_params, d1_blinding, d1_saturating_energy):
        result = _lab.jitter_experiment(
            d1_blinding, d1_saturating_energy, 2000, d1_params, seed=5)

        assert result.cause == ClickCause.FAKED_STATE.value
        assert result.n_clicks == 2000
        assert result.fwhm == pytest.approx(
            _stats.rss(_lab.DEFAULT_PULSE_FWHM, d1_params.electronics_jitter_fwhm),
            rel=0.15)
        assert abs(result.center) < 5e-12
        assert len(result.bin_centers) == len(result.counts)

    def test_single_photon(self, d1_params):
        result = _lab.jitter_experiment(
            0.0, _lab.single_photon_energy(10.0), 2000, d1_params, seed=5)

        assert result.cause == ClickCause.PHOTON.value
        assert 1000 < result.n_clicks < 1500
        assert result.fwhm == pytest.approx(d1_params.sp_jitter_fwhm, rel=0.15)

    def test_faked_state_sharper(self, d1_params):
        # Blinded clicks are timed by the trigger pulse, not the avalanche
        assert _stats.rss(_lab.DEFAULT_PULSE_FWHM, d1_params.electronics_jitter_fwhm) < \
            d1_params.sp_jitter_fwhm

    def test_too_few_clicks(self, d1_params, d1_blinding, d1_saturating_energy):
        with pytest.raises(_errors.TooFewClicksError):
            _lab.jitter_experiment(
                d1_blinding, d1_saturating_energy, 50, d1_params)

    # Measured faked-state and single-photon FWHM [s] per detector
    published_data = [
        FixtureTestData("d2", (33.4e-12, 104.9e-12)),
        FixtureTestData("d3", (100.6e-12, 271.8e-12)),
    ]

    @pytest.mark.parametrize(
        "data", published_data, ids=[d.input for d in published_data])
    def test_published_widths(self, data):
        params = _presets.get_preset(data.input, efficiency=0.1)
        p_blinding = _lab.control_blinding_power(params)
        op = _circuit.solve_operating_point(p_blinding, params)
        (faked_fwhm, photon_fwhm) = data.output

        faked = _lab.jitter_experiment(
            p_blinding, _core.saturating_energy(op, params), 100000, params,
            seed=6, pulse_fwhm=_presets.JITTER_PULSE_FWHM[data.input])
        photon = _lab.jitter_experiment(
            0.0, _lab.single_photon_energy(10.0), 100000, params, seed=6)

        assert faked.fwhm == pytest.approx(faked_fwhm, rel=0.1)
        assert photon.fwhm == pytest.approx(photon_fwhm, rel=0.1)


class TestPlans:

    def test_recovery_times(self):
        times = _lab.recovery_trigger_times(18e-6, 0.5e-6, 3, t0=1e-6)
        assert np.diff(times) == pytest.approx([18.5e-6, 18.5e-6])

    def test_continuous_plan(self, d1_params, d1_blinding):
        plan = _lab.continuous_plan(d1_params, d1_blinding, 1e-14, 40e3, 10)
        scenario = _lab.plan_scenario(plan, d1_params)

        assert not plan.gated
        assert plan.trigger_times[0] == _lab.FIRST_TRIGGER
        assert len(scenario.cw) == 1
        assert scenario.cw[0].t_end == plan.duration
        assert len(scenario.pulses) == 10

    def test_triggers_too_close(self, d1_params, d1_blinding):
        plan = _lab.gated_plan(
            d1_params, d1_blinding, 1e-14, 2, trigger_times=(1e-6, 10e-6))
        with pytest.raises(_errors.PlanTimingError):
            _lab.plan_scenario(plan, d1_params)

    def test_light_never_off(self, d1_params, d1_blinding):
        plan = _lab.gated_plan(
            d1_params, d1_blinding, 1e-14, 3,
            on_lead=9e-6, laser_off_margin=9e-6)
        with pytest.raises(_errors.PlanTimingError):
            _lab.plan_scenario(plan, d1_params)

    def test_first_trigger_before_on_lead(self, d1_blinding):
        with pytest.raises(_errors.PlanTimingError):
            GatedBlindingPlan(
                trigger_times=(0.2e-6,), p_blinding=d1_blinding, e_pulse=1e-14,
                duration=1e-3, on_lead=0.5e-6)

    @pytest.mark.parametrize("laser_off_margin", [0.0, 2e-6])
    def test_gated_dark_during_deadtime(self, d1_params, d1_blinding, laser_off_margin):
        plan = _lab.gated_plan(
            d1_params, d1_blinding, 1e-14, 5, laser_off_margin=laser_off_margin)
        scenario = _lab.plan_scenario(plan, d1_params)

        for t_trigger in plan.trigger_times:
            dark = np.linspace(
                t_trigger + laser_off_margin,
                t_trigger + d1_params.tau_d - plan.on_lead,
                50, endpoint=False)
            assert all(_optics.cw_power_at(scenario, t) == 0.0 for t in dark)
            assert _optics.cw_power_at(scenario, t_trigger - 0.5 * plan.on_lead) == \
                d1_blinding


class TestGatedBlindingRun:

    def test_every_trigger_clicks(self, d1_params, d1_blinding, d1_saturating_energy):
        plan = _lab.gated_plan(d1_params, d1_blinding, d1_saturating_energy, 20)
        run = _lab.gated_blinding_run(plan, d1_params, seed=7)

        assert len(run.clicks) == 20
        assert all(click.cause is ClickCause.FAKED_STATE for click in run.clicks)
        assert [click.t_origin for click in run.clicks] == list(plan.trigger_times)

    def test_gating_lowers_current(self, d1_params, d1_blinding, d1_saturating_energy):
        gated = _lab.gated_plan(d1_params, d1_blinding, d1_saturating_energy, 20)
        rate = 1.0 / (d1_params.tau_d + _lab.DEFAULT_RECOVERY_DELAY)
        continuous = _lab.continuous_plan(
            d1_params, d1_blinding, d1_saturating_energy, rate, 20)

        i_gated = _lab.gated_blinding_run(gated, d1_params).mean_current()
        i_continuous = _lab.gated_blinding_run(continuous, d1_params).mean_current()
        assert 0.0 < i_gated < 0.3 * i_continuous

    def test_not_blinded(self, d1_params, d1_p_min):
        plan = _lab.gated_plan(d1_params, 0.5 * d1_p_min, 1e-14, 3)
        with pytest.raises(_errors.NotBlindedError):
            _lab.gated_blinding_run(plan, d1_params)


class TestTableCurrents:

    def test_rows(self):
        params = _presets.get_preset("d2", efficiency=0.1)
        p_blinding = _presets.blinding_power("d2", 0.1)
        op = _circuit.solve_operating_point(p_blinding, params)

        rows = _lab.table_currents(
            [(0.1, params, p_blinding)], [40e3, 50e3], n_triggers=200, seed=1)

        assert [(row.efficiency, row.trigger_rate) for row in rows] == \
            [(0.1, 40e3), (0.1, 50e3)]
        for row in rows:
            assert row.p_blinding == p_blinding
            assert 0.0 < row.mean_current < 1.01 * op.i_apd
        # More of the run is spent in the quenched deadtime
        assert rows[1].mean_current < rows[0].mean_current

    def test_calibrated_cells(self):
        settings = [
            (eff, _presets.get_preset("d2", efficiency=eff),
             _presets.blinding_power("d2", eff))
            for eff in (0.1, 0.2)]

        rows = _lab.table_currents(
            settings, [40e3, 50e3, 55e3], n_triggers=1000, seed=2)
        cells = {(row.efficiency, row.trigger_rate): row.mean_current for row in rows}

        # Measured mean currents
        assert cells[(0.1, 40e3)] == pytest.approx(0.87e-6, rel=0.3)
        assert cells[(0.1, 50e3)] == pytest.approx(0.38e-6, rel=0.35)
        assert cells[(0.1, 55e3)] == pytest.approx(0.15e-6, rel=0.35)
        assert cells[(0.2, 40e3)] == pytest.approx(2.39e-6, rel=0.35)
        assert cells[(0.2, 50e3)] == pytest.approx(1.23e-6, rel=0.35)
        assert cells[(0.2, 55e3)] == pytest.approx(0.71e-6, rel=0.35)
        for efficiency in (0.1, 0.2):
            assert cells[(efficiency, 40e3)] > cells[(efficiency, 50e3)] > \
                cells[(efficiency, 55e3)]
        for rate in (40e3, 50e3, 55e3):
            assert cells[(0.2, rate)] > cells[(0.1, rate)]

    def test_not_blinded(self):
        params = _presets.get_preset("d2", efficiency=0.1)
        with pytest.raises(_errors.NotBlindedError):
            _lab.table_currents([(0.1, params, 1e-12)], [40e3], n_triggers=10)


class TestClickCurveAgainstModel:

    N_TRIALS = 400

    @pytest.fixture(scope="class")
    def curve(self, d1_params, d1_blinding, d1_threshold_energy):
        energies = np.linspace(0.7, 1.3, 7) * d1_threshold_energy
        return _lab.estimate_click_curve(
            d1_blinding, energies, self.N_TRIALS, d1_params, seed=12)

    def test_matches_comparator_model(self, curve, d1_params, d1_blinding):
        op = _circuit.solve_operating_point(d1_blinding, d1_params)
        for point in curve:
            expected = _core.click_probability(point.energy, op, d1_params)
            assert abs(point.p_hat - expected) <= 3.0 * (point.p_upper - point.p_lower)

    def test_monotone_within_noise(self, curve):
        deviation = _stats.max_isotonic_deviation([point.p_hat for point in curve])
        assert deviation <= 3.0 * np.sqrt(0.25 / self.N_TRIALS)


class TestBlindingPowers:

    def test_published(self):
        params = _presets.get_preset("d2", efficiency=0.1)
        assert _lab.control_blinding_power(params) == 70e-9

    def test_unpublished(self, d1_params, d1_p_min):
        assert _lab.control_blinding_power(d1_params) == pytest.approx(
            _lab.CONTROL_MARGIN * d1_p_min)

    def test_gated_just_above_p_min(self, d1_params, d1_p_min):
        p_blinding = _lab.gated_blinding_power(d1_params)
        assert d1_p_min < p_blinding < 1.1 * d1_p_min
        _lab.require_blinded(p_blinding, d1_params)

    def test_continuous_floor_raises_alarm(self):
        # At 55 kHz the detector spends 99% of the time quenched, yet the
        # blinding light alone keeps the current above the alarm threshold
        params = _presets.get_preset("d2", efficiency=0.1)
        p_blinding = _lab.control_blinding_power(params)
        op = _circuit.solve_operating_point(p_blinding, params)
        plan = _lab.continuous_plan(
            params, p_blinding, _core.saturating_energy(op, params), 55e3, 2000)
        run = _lab.gated_blinding_run(plan, params, seed=4)

        report = _monitor.mean_current_monitor(
            run, threshold=100e-9, config=MonitorConfig(sample_period=run.duration))
        assert run.mean_current() == pytest.approx(0.15e-6, rel=0.35)
        assert report.verdict is Verdict.BLINDING_SUSPECTED

    def test_gated_below_alarm(self, d1_params):
        p_blinding = _lab.gated_blinding_power(d1_params)
        op = _circuit.solve_operating_point(p_blinding, d1_params)
        plan = _lab.gated_plan(
            d1_params, p_blinding, _core.saturating_energy(op, d1_params), 200)
        run = _lab.gated_blinding_run(plan, d1_params, seed=4)

        report = _monitor.mean_current_monitor(
            run, threshold=100e-9, config=MonitorConfig(sample_period=run.duration))
        assert len(run.clicks) == 200
        assert report.verdict is Verdict.CLEAN
