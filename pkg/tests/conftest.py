
import pytest

import nfadlab.circuit_model as _circuit
import nfadlab.presets as _presets


@pytest.fixture(scope="session")
def d1_params():
    return _presets.get_preset("d1", efficiency=0.1)


@pytest.fixture(scope="session")
def d1_p_min(d1_params):
    return _circuit.min_blinding_power(d1_params)


@pytest.fixture(scope="session")
def d1_blinding(d1_p_min):
    """
    A CW power comfortably above the minimum blinding power of D1.
    """
    return 250e-9
