# =============================================================================
# nfadlab
#
# OPTICAL SCENARIO SUB-MODULE
# =============================================================================

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.rng as _rng

from .abstract.record import Record

# =============================================================================

class CwSegment(Record):
    """
    Continuous-wave illumination over the half-open interval [t_start, t_end).
    """

    _FIELDS = {
        "t_start": (float, "Start of the segment [s]."),
        "t_end": (float, "End of the segment, excluded [s]."),
        "power": (float, "Optical power arriving on the APD [W]."),
    }

    _FIELDS_REQUIRED = ["t_start", "t_end", "power"]

    def _validate(self):
        self._require_finite("t_start", "t_end", "power")
        self._require(
            self.t_start < self.t_end,
            "t_start ({}) must precede t_end ({})".format(
                self.t_start, self.t_end))
        self._require(self.power >= 0, "power must be >= 0")

    @property
    def length(self):
        # type: () -> float
        return self.t_end - self.t_start


class TriggerPulse(Record):
    """
    Bright optical pulse with a Gaussian envelope.
    """

    _FIELDS = {
        "t_peak": (float, "Time of the envelope maximum [s]."),
        "energy": (float, "Pulse energy [J]."),
        "fwhm": (float, "Full width at half maximum [s].", 33e-12),
    }

    _FIELDS_REQUIRED = ["t_peak", "energy"]

    def _validate(self):
        self._require_finite("t_peak", "energy", "fwhm")
        self._require(self.energy >= 0, "energy must be >= 0")
        self._require(self.fwhm > 0, "fwhm must be > 0")

# =============================================================================

class OpticalScenario(Record):
    """
    Timeline of the light arriving on the detector: CW blinding segments,
    trigger pulses and a Poissonian single-photon flux. Segments and pulses
    are kept sorted by time.
    """

    _FIELDS = {
        "cw": (tuple, "CW segments, non-overlapping.", ()),
        "pulses": (tuple, "Trigger pulses.", ()),
        "photon_rate": (float, "Poissonian single-photon flux [Hz].", 0.0),
        "duration": (float, "Length of the scenario [s]."),
        "rng_seed": (int, "Seed of the photon arrival stream.", 0),
    }

    _FIELDS_REQUIRED = ["duration"]

    def _normalize(self, data):
        data["cw"] = tuple(sorted(
            data["cw"], key=lambda seg: getattr(seg, "t_start", 0.0)))
        data["pulses"] = tuple(
            sorted(data["pulses"], key=lambda pulse: getattr(pulse, "t_peak", 0.0)))
        return data

    def _fail(self, reason):
        raise _errors.ScenarioError(reason=reason)

    def _validate(self):
        self._require_finite("duration", "photon_rate")
        self._require(self.duration > 0, "duration must be > 0")
        self._require(self.photon_rate >= 0, "photon_rate must be >= 0")
        try:
            _rng.validate_seed(self.rng_seed, owner="OpticalScenario")
        except _errors.ParameterValidationError as exc:
            self._fail(str(exc).strip())

        previous = None
        for segment in self.cw:
            self._require(
                isinstance(segment, CwSegment),
                "cw entries must be CwSegment, got {!r}".format(segment))
            self._require(
                segment.t_start >= 0 and segment.t_end <= self.duration,
                "segment [{}, {}) outside of [0, {}]".format(
                    segment.t_start, segment.t_end, self.duration))
            if previous is not None:
                self._require(
                    previous.t_end <= segment.t_start,
                    "segments [{}, {}) and [{}, {}) overlap".format(
                        previous.t_start, previous.t_end,
                        segment.t_start, segment.t_end))
            previous = segment

        for pulse in self.pulses:
            self._require(
                isinstance(pulse, TriggerPulse),
                "pulse entries must be TriggerPulse, got {!r}".format(pulse))
            self._require(
                0 <= pulse.t_peak <= self.duration,
                "pulse at {} s outside of [0, {}]".format(
                    pulse.t_peak, self.duration))

# =============================================================================
