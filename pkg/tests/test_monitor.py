
import numpy as np
import pytest

import nfadlab.attack_lab as _lab
import nfadlab.circuit_model as _circuit
import nfadlab.detector_core as _core
import nfadlab.errors as _errors
import nfadlab.monitor as _monitor
import nfadlab.optics as _optics

from nfadlab.models.monitoring import (
    Alarm, AlarmReport, MonitorConfig, MonitorKind, MonitorTrace, Verdict)
from nfadlab.models.scenario import OpticalScenario

FAST_WINDOWS = MonitorConfig(sample_period=100e-6)


@pytest.fixture(scope="module")
def geiger_run(d1_params):
    scenario = OpticalScenario(photon_rate=1e6, duration=1e-3, rng_seed=11)
    return _core.simulate(scenario, d1_params)


@pytest.fixture(scope="module")
def cw_run(d1_params, d1_blinding):
    scenario = OpticalScenario(
        cw=_optics.continuous_blinding(d1_blinding, 1e-3), duration=1e-3)
    return _core.simulate(scenario, d1_params)


@pytest.fixture(scope="module")
def gated(d1_params, d1_blinding):
    op = _circuit.solve_operating_point(d1_blinding, d1_params)
    plan = _lab.gated_plan(
        d1_params, d1_blinding, _core.saturating_energy(op, d1_params), 20)
    scenario = _lab.plan_scenario(plan, d1_params, seed=3)
    return (scenario, _lab.gated_blinding_run(plan, d1_params, seed=3))


class TestQuantize:

    def test_grid_and_range(self):
        config = MonitorConfig(adc_bits=12)
        values = np.array([-1e-6, 0.0, 1.2345e-6, 3e-6, 20e-6])
        quantized = _monitor.quantize(values, config)

        steps = quantized / config.adc_lsb
        assert np.allclose(steps, np.round(steps))
        assert quantized[0] == 0.0
        assert quantized[-1] == config.adc_full_scale
        assert np.all(np.abs(quantized[1:4] - values[1:4]) <= 0.5 * config.adc_lsb)


class TestMeanCurrentMonitor:

    def test_trace_windows(self, cw_run):
        trace = _monitor.mean_current_trace(cw_run, FAST_WINDOWS)

        assert trace.kind is MonitorKind.MEAN_CURRENT
        assert trace.times.tolist() == pytest.approx(
            [100e-6 * k for k in range(1, 11)])
        assert trace.values == pytest.approx(
            cw_run.mean_current() * FAST_WINDOWS.mirror_ratio,
            abs=FAST_WINDOWS.adc_lsb)
        assert list(trace.to_frame().columns) == ["t_s", "value_A"]

    def test_clean_geiger(self, geiger_run):
        report = _monitor.mean_current_monitor(geiger_run, config=FAST_WINDOWS)

        assert report.verdict is Verdict.CLEAN
        assert report.is_clean
        assert report.alarms == ()

    def test_continuous_blinding(self, cw_run):
        report = _monitor.mean_current_monitor(cw_run, config=FAST_WINDOWS)

        assert report.verdict is Verdict.BLINDING_SUSPECTED
        (alarm,) = report.alarms
        assert (alarm.t_start, alarm.t_end) == pytest.approx((0.0, 1e-3))

    def test_gated_evades(self, gated):
        (_, run) = gated
        report = _monitor.mean_current_monitor(run, config=FAST_WINDOWS)
        assert report.is_clean

    def test_threshold_override(self, geiger_run):
        report = _monitor.mean_current_monitor(
            geiger_run, threshold=1e-15, config=FAST_WINDOWS)
        assert not report.is_clean

    def test_bad_threshold(self, geiger_run):
        with pytest.raises(_errors.ParameterValidationError):
            _monitor.mean_current_monitor(geiger_run, threshold=0.0)

    def test_run_too_short(self, geiger_run):
        with pytest.raises(_errors.RunTooShortError):
            _monitor.mean_current_monitor(geiger_run)

    def test_text(self, geiger_run):
        text = _monitor.mean_current_monitor(geiger_run, config=FAST_WINDOWS).to_text()
        assert text.splitlines()[0].startswith("mean_current: clean (threshold 100 nA")


class TestFastBlindingDetector:

    def test_clean_geiger(self, geiger_run):
        trace = _monitor.bias_voltage_trace(geiger_run)
        report = _monitor.fast_blinding_detector(trace)

        assert len(geiger_run.clicks) > 0
        assert len(trace.transient_times) > 0
        assert report.verdict is Verdict.CLEAN
        assert report.compromised_clicks == ()

    def test_continuous_blinding(self, cw_run, d1_params, d1_blinding):
        trace = _monitor.bias_voltage_trace(cw_run)
        op = _circuit.solve_operating_point(d1_blinding, d1_params)

        assert trace.values == pytest.approx(-trace.config.z_out * op.i_apd)
        report = _monitor.fast_blinding_detector(trace)
        (alarm,) = report.alarms
        assert (alarm.t_start, alarm.t_end) == pytest.approx((0.0, 1e-3))

    def test_gated_blinding(self, gated):
        (scenario, run) = gated
        report = _monitor.fast_blinding_detector(_monitor.bias_voltage_trace(run))
        score = _monitor.score_alarms(report, _optics.illumination_windows(scenario))

        assert report.verdict is Verdict.BLINDING_SUSPECTED
        assert score.n_windows == 20
        assert score.recall == 1.0
        assert len(report.compromised_clicks) == len(run.clicks) == 20
        assert all(alarm.length >= MonitorConfig().min_duration
                   for alarm in report.alarms)

    def test_long_min_duration(self, gated):
        (_, run) = gated
        report = _monitor.fast_blinding_detector(
            _monitor.bias_voltage_trace(run), min_duration=1e-6)
        assert report.is_clean

    def test_wrong_kind(self, cw_run):
        trace = _monitor.mean_current_trace(cw_run, FAST_WINDOWS)
        with pytest.raises(_errors.TraceKindError):
            _monitor.fast_blinding_detector(trace)

    def test_too_many_samples(self, cw_run):
        with pytest.raises(_errors.ParameterValidationError):
            _monitor.bias_voltage_trace(cw_run, MonitorConfig(probe_dt=1e-15))


class TestFastBlindingMonitor:

    def test_matches_dense_trace(self, gated):
        (_, run) = gated
        dense = _monitor.fast_blinding_detector(_monitor.bias_voltage_trace(run))
        streamed = _monitor.fast_blinding_monitor(run, chunk_samples=997)

        assert len(streamed.alarms) == len(dense.alarms) > 0
        for (left, right) in zip(streamed.alarms, dense.alarms):
            assert left[:2] == pytest.approx(right[:2])
        assert streamed.compromised_clicks == dense.compromised_clicks

    def test_alarm_spans_chunks(self, cw_run):
        report = _monitor.fast_blinding_monitor(cw_run, chunk_samples=1000)

        (alarm,) = report.alarms
        assert (alarm.t_start, alarm.t_end) == pytest.approx((0.0, 1e-3))

    def test_bad_chunk(self, cw_run):
        with pytest.raises(_errors.ParameterValidationError):
            _monitor.fast_blinding_monitor(cw_run, chunk_samples=0)

    def test_full_sampling_period(self, d1_params, d1_blinding):
        # One mean-current sampling period at the default 10 ns probe step
        config = MonitorConfig()
        op = _circuit.solve_operating_point(d1_blinding, d1_params)
        n_triggers = int(np.ceil(
            config.sample_period / (d1_params.tau_d + _lab.DEFAULT_RECOVERY_DELAY)))
        plan = _lab.gated_plan(
            d1_params, d1_blinding, _core.saturating_energy(op, d1_params), n_triggers)
        run = _lab.gated_blinding_run(plan, d1_params, seed=5)
        assert run.duration >= config.sample_period

        with pytest.raises(_errors.ParameterValidationError):
            _monitor.bias_voltage_trace(run, config)
        report = _monitor.fast_blinding_monitor(run, config)
        score = _monitor.score_alarms(report, _optics.illumination_windows(run.scenario))

        assert score.n_windows == n_triggers
        assert score.recall == 1.0
        assert len(report.compromised_clicks) == len(run.clicks) == n_triggers

    def test_trace_excerpt(self, gated):
        (_, run) = gated
        trace = _monitor.bias_voltage_trace(run, t_stop=49.995e-6)

        assert trace.times.size == 5000
        assert trace.duration == run.duration
        full = _monitor.bias_voltage_trace(run)
        assert trace.values == pytest.approx(full.values[:5000])


class TestRecords:

    def test_trace_shapes(self):
        with pytest.raises(_errors.ParameterValidationError):
            MonitorTrace(kind="bias_voltage", times=[0.0, 1.0], values=[0.0],
                         duration=1.0)

    def test_trace_order(self):
        with pytest.raises(_errors.ParameterValidationError):
            MonitorTrace(kind="bias_voltage", times=[1.0, 0.0], values=[0.0, 0.0],
                         duration=1.0)

    def test_verdict_derived(self):
        report = AlarmReport(
            kind="bias_voltage", threshold=1e-3, duration=1.0,
            alarms=[(0.5, 0.6, "bias_voltage", 2e-3), (0.1, 0.2, "bias_voltage", 2e-3)])
        assert report.verdict is Verdict.BLINDING_SUSPECTED
        assert [alarm.t_start for alarm in report.alarms] == [0.1, 0.5]
        assert report.alarms[0].length == pytest.approx(0.1)

    def test_verdict_mismatch(self):
        with pytest.raises(_errors.ParameterValidationError):
            AlarmReport(kind="bias_voltage", threshold=1e-3, duration=1.0,
                        verdict="blinding_suspected")

    def test_alarm_outside(self):
        with pytest.raises(_errors.ParameterValidationError):
            AlarmReport(kind="bias_voltage", threshold=1e-3, duration=1.0,
                        alarms=[Alarm(0.5, 1.5, "bias_voltage", 2e-3)])


class TestScoreAlarms:

    def test_score(self):
        report = AlarmReport(
            kind="bias_voltage", threshold=1e-3, duration=10.0,
            alarms=[Alarm(1.0, 2.0, "bias_voltage", 0.0),
                    Alarm(8.0, 9.0, "bias_voltage", 0.0)])
        score = _monitor.score_alarms(report, [(1.5, 3.0), (4.0, 5.0)])

        assert score.recall == 0.5
        assert score.false_positives == 1
        assert (score.n_windows, score.n_alarms) == (2, 2)

    def test_no_windows(self):
        report = AlarmReport(kind="bias_voltage", threshold=1e-3, duration=1.0)
        assert _monitor.score_alarms(report, []).recall == 1.0
