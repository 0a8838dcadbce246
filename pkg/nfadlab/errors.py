# =============================================================================
# nfadlab
#
# ERRORS SUB-MODULE
# =============================================================================

# Local imports
from .util.misc import _make_f

# =============================================================================

# Replacement f"..." with access to the module's globals
_f = _make_f(globals=lambda: globals(), locals=lambda: locals())

# =============================================================================

# Global submodule constants
EXIT_SUCCESS = 0
EXIT_GENERIC = 1
EXIT_USAGE = 2

HELP_MESSAGE = "Run `nfadlab --help` for the list of experiments and options."

# =============================================================================

class TemplatedRuntimeError(RuntimeError):
    """
    Generic unspecified run-time error within nfadlab, of which the default
    message is specified by the class attribute `DEFAULT_MESSAGE`.
    """

    DEFAULT_MESSAGE = "nfadlab Runtime Error."

    def __init__(self, message=None, **kwargs):
        """
        Initialize the run-time error, optionally with a specific message.
        """
        if message == None:
            try:
                message = _f(
                    s=self.DEFAULT_MESSAGE,
                    **kwargs
                )
            except (ValueError, IndexError):
                # Values carrying stray braces
                message = "{} {}".format(self.DEFAULT_MESSAGE, kwargs)

        super(TemplatedRuntimeError, self).__init__(message)
        self._details = kwargs

    @property
    def details(self):
        return dict(self._details)


class NfadlabError(TemplatedRuntimeError):
    """
    Base class of the errors raised by nfadlab; `EXIT_CODE` is the process
    exit status the command-line interface reports for it.
    """

    EXIT_CODE = EXIT_GENERIC

    DEFAULT_MESSAGE = "nfadlab error."

# =============================================================================

class ParameterValidationError(NfadlabError):
    """
    A detector parameter set, scenario or configuration value violates one of
    its invariants.
    """

    EXIT_CODE = 4

    DEFAULT_MESSAGE = """
        INVALID PARAMETER.
        {owner}: {reason}
        """


class GainDomainError(ParameterValidationError):
    """
    The linear-mode gain law was evaluated outside of [0, v_br).
    """

    DEFAULT_MESSAGE = """
        GAIN OUTSIDE OF LINEAR-MODE DOMAIN.
        The avalanche gain is only finite for 0 <= v_apd < v_br, but was
        requested at v_apd = {v_apd} V with v_br = {v_br} V. Branch on the
        operating mode before asking for the gain.
        """


class InvalidQuenchError(ParameterValidationError):
    """
    The quench voltage leaves no positive effective bias on the diode.
    """

    DEFAULT_MESSAGE = """
        INVALID QUENCH CONFIGURATION.
        The effective bias V_bias - v_quench = {v_eff} V during the deadtime
        must be positive.
        """


class ScenarioError(ParameterValidationError):
    """
    An optical scenario is malformed, or was queried outside of its duration.
    """

    DEFAULT_MESSAGE = """
        INVALID OPTICAL SCENARIO.
        {reason}
        """


class PlanTimingError(ParameterValidationError):
    """
    A gated blinding plan does not respect the deadtime of the detector.
    """

    DEFAULT_MESSAGE = """
        INVALID BLINDING PLAN TIMING.
        {reason}
        """


class TraceKindError(ParameterValidationError):
    """
    A monitor was given a trace of the wrong kind.
    """

    DEFAULT_MESSAGE = """
        WRONG MONITOR TRACE KIND.
        Expected a trace of kind '{expected}', got '{actual}'.
        """

# =============================================================================

class OperatingPointError(NfadlabError):
    """
    The operating-point bisection failed to converge, which signals
    ill-conditioned parameters.
    """

    EXIT_CODE = 6

    DEFAULT_MESSAGE = """
        OPERATING POINT DID NOT CONVERGE.
        Bisection stopped after {iterations} iterations with residual
        {residual} V (P = {p_optical} W, quenched = {quenched}).
        """

# =============================================================================

class ExperimentError(NfadlabError):
    """
    An experiment cannot produce a meaningful result with the given inputs.
    """

    EXIT_CODE = 7

    DEFAULT_MESSAGE = """
        EXPERIMENT ERROR.
        {reason}
        """


class NotBlindedError(ExperimentError):
    """
    An attack procedure requires a blinded detector, but the blinding power
    leaves it in Geiger mode.
    """

    DEFAULT_MESSAGE = """
        DETECTOR NOT BLINDED.
        A blinding power of {p_blinding} W is below the minimum blinding power
        {p_min} W of detector '{name}': the detector stays in Geiger mode and
        would mix single-photon clicks into the measurement.
        """


class TooFewClicksError(ExperimentError):
    """
    A jitter histogram cannot be fitted with so few clicks.
    """

    DEFAULT_MESSAGE = """
        TOO FEW CLICKS.
        The jitter fit needs at least {minimum} clicks, got {count}.
        """


class RunTooShortError(ExperimentError):
    """
    The mean-current monitor needs at least one complete sampling window.
    """

    DEFAULT_MESSAGE = """
        RUN TOO SHORT.
        The run lasts {duration} s but the monitor samples every
        {sample_period} s.
        """

# =============================================================================

class UnknownPresetError(NfadlabError):
    """
    The requested detector preset does not exist.
    """

    EXIT_CODE = 3

    DEFAULT_MESSAGE = """
        UNKNOWN DETECTOR PRESET.
        Preset '{preset}' does not exist; available presets: {available}.
        """


class ConfigError(NfadlabError):
    """
    The experiment configuration cannot be found, read or understood.
    """

    EXIT_CODE = 3

    DEFAULT_MESSAGE = """
        CONFIGURATION ERROR.
        {reason}
        {HELP_MESSAGE}
        """


class OutputError(NfadlabError):
    """
    Artifacts cannot be written to the output directory.
    """

    EXIT_CODE = 5

    DEFAULT_MESSAGE = """
        OUTPUT ERROR.
        Cannot write '{path}': {reason}
        """

# =============================================================================

def exit_code_for(exc):
    # type: (BaseException) -> int
    """
    Returns the process exit status to report for the exception `exc`.
    """
    if isinstance(exc, NfadlabError):
        return exc.EXIT_CODE
    if isinstance(exc, (IOError, OSError)):
        return OutputError.EXIT_CODE
    return EXIT_GENERIC

# =============================================================================
