"""
nfadlab: blinding attacks on negative-feedback avalanche diodes.

Simulates free-running InGaAs single-photon detectors inside their bias
network, Eve's blinding and faked-state attacks against them, and Bob's
current and bias-voltage countermeasures.

   Name: nfadlab
License: MIT
"""

# Documentation

from nfadlab.version import __version__

# Import sub-modules

from . import util
from . import errors
from . import models
from . import circuit_model
from . import optics
from . import detector_core
from . import attack_lab
from . import monitor
from . import qkd_harness
from . import presets

# Reimports

from .models import NfadParams, OpticalScenario, DetectorRun
from .presets import get_preset, list_presets
from .circuit_model import solve_operating_point, min_blinding_power
from .detector_core import simulate
