# =============================================================================
# nfadlab
#
# DOMAIN RECORD SUB-MODULES
# =============================================================================

# Reimports
from .params import Mode, NfadParams, OperatingPoint
from .scenario import CwSegment, OpticalScenario, TriggerPulse
from .runs import (
    ChargeImpulse,
    ClickCause,
    ClickEvent,
    CurrentSegment,
    DetectorRun
)
from .attacks import (
    ClickCurvePoint,
    GatedBlindingPlan,
    JitterResult,
    TableCurrentsRow,
    ThresholdEntry,
    ThresholdMap
)
from .monitoring import (
    Alarm,
    AlarmReport,
    MonitorConfig,
    MonitorKind,
    MonitorTrace,
    Verdict
)
from .qkd import Bb84AttackConfig, Bb84Stats, FeasibilityEntry
from .experiments import ExperimentConfig, ExperimentKind

# =============================================================================
