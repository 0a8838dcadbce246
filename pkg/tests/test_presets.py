
import pytest

import nfadlab.circuit_model as _circuit
import nfadlab.errors as _errors
import nfadlab.presets as _presets


class TestPresets:

    def test_list(self):
        assert _presets.list_presets() == ["d1", "d2", "d3", "d4"]

    @pytest.mark.parametrize("name", ["d1", "d2", "d3", "d4"])
    def test_devices(self, name):
        params = _presets.get_preset(name)
        device = _presets.DEVICES[name]

        assert params.name == name
        assert params.efficiency == _presets.DEFAULT_EFFICIENCY
        assert params.active_diameter == device.diameter
        assert params.tau_d == (18e-6 if device.coupling == "capacitive" else 20e-6)

    def test_efficiency_selects_bias(self):
        assert _presets.get_preset("d1", efficiency=0.1).v_excess == 1.3
        assert _presets.get_preset("d1", efficiency=0.2).v_excess == 4.1
        assert _presets.efficiencies("d4") == [0.1]

    def test_overrides(self):
        params = _presets.get_preset("d3", tau_d=25e-6, noise_sigma=0.01)
        assert (params.tau_d, params.noise_sigma) == (25e-6, 0.01)
        assert params.r2 == 100.0

    def test_uncalibrated_efficiency(self):
        with pytest.raises(_errors.ParameterValidationError):
            _presets.get_preset("d4", efficiency=0.2)
        params = _presets.get_preset("d4", efficiency=0.2, v_excess=4.0)
        assert params.v_excess == 4.0

    def test_unknown(self):
        with pytest.raises(_errors.UnknownPresetError) as excinfo:
            _presets.get_preset("d9")
        assert _errors.exit_code_for(excinfo.value) == 3
        with pytest.raises(_errors.UnknownPresetError):
            _presets.efficiencies("d9")

    def test_custom(self):
        params = _presets.get_preset("custom", efficiency=0.15, tau_d=10e-6)
        assert params.name == "custom"
        assert params.efficiency == 0.15
        assert params.tau_d == 10e-6

    def test_invalid_override(self):
        with pytest.raises(_errors.ParameterValidationError):
            _presets.get_preset("d1", efficiency=0.1, r1=-5.0)

    def test_published_blinding_powers(self):
        assert _presets.blinding_power("d2", 0.1) == 70e-9
        assert _presets.blinding_power("d1", 0.1) is None
        for ((name, efficiency), power) in _presets.BLINDING_POWER_TABLE.items():
            params = _presets.get_preset(name, efficiency=efficiency)
            assert _circuit.is_blinded(power, params)
