# =============================================================================
# nfadlab
#
# DETECTOR PARAMETERS SUB-MODULE
# =============================================================================

# Local imports
import nfadlab.errors as _errors

from nfadlab.util.misc import DocEnum

from .abstract.record import Record

# =============================================================================

class Mode(DocEnum):
    """
    Operating mode of the avalanche photodiode.
    """

    GEIGER = "geiger", """
                       Biased above breakdown: a single photon triggers a
                       self-sustaining avalanche.
                       """

    LINEAR = "linear", """
                       Held below breakdown by the photocurrent through the
                       bias resistors: finite gain, blind to single photons.
                       """

    QUENCHED = "quenched", """
                           Below breakdown because the quench voltage is
                           applied (deadtime).
                           """

# =============================================================================

class NfadParams(Record):
    """
    Electrical and optical parameter set of one negative-feedback avalanche
    diode and its bias network.
    """

    _FIELDS = {
        "name": (str, "Label of the parameter set.", "custom"),
        "v_br": (float, "Breakdown voltage [V].", 60.0),
        "v_excess": (float, "Excess bias above breakdown [V].", 2.0),
        "r_integrated": (float, "Resistor integrated into the NFAD [Ohm].", 1.1e6),
        "r1": (float, "External series resistor R1 [Ohm].", 1e3),
        "r2": (float, "External series resistor R2 [Ohm].", 50.0),
        "v_quench": (float, "Voltage applied during the deadtime [V].", 5.0),
        "v_th": (float, "Comparator threshold at the amplifier output [V].", 0.05),
        "tau_d": (float, "Deadtime [s].", 18e-6),
        "responsivity": (float, "Unity-gain photoresponse at 1550 nm [A/W].", 1.0),
        "gain_exponent": (float, "Exponent n of the gain law.", 30.0),
        "amp_transimpedance": (float, "Avalanche charge to comparator amplitude [V/C].", 6.6e11),
        "noise_sigma": (float, "Gaussian amplitude noise at the comparator [V].", 0.004),
        "sp_jitter_fwhm": (float, "Single-photon detection jitter FWHM [s].", 104.9e-12),
        "electronics_jitter_fwhm": (float, "Jitter added to faked-state clicks, FWHM [s].", 5.15e-12),
        "efficiency": (float, "Single-photon detection efficiency.", 0.10),
        "active_diameter": (float, "Active area diameter [m].", 32e-6),
        "max_linear_gain": (float, "Largest gain of a stable linear-mode steady state.", 1000.0),
        "dark_count_rate": (float, "Dark count rate in Geiger mode [Hz].", 0.0),
        "avalanche_charge": (float, "Charge of one Geiger avalanche [C].", 1e-12),
    }

    def _validate(self):
        self._require_finite(*[
            name for name in self._FIELDS if name != "name"])

        self._require(self.v_br > 0, "v_br must be > 0")
        self._require(self.v_excess > 0, "v_excess must be > 0")
        self._require(
            min(self.r_integrated, self.r1, self.r2) > 0,
            "all resistances must be > 0")
        self._require(self.tau_d > 0, "tau_d must be > 0")
        self._require(
            0.0 <= self.efficiency <= 1.0,
            "efficiency must lie in [0, 1], got {}".format(self.efficiency))
        self._require(self.v_quench >= 0, "v_quench must be >= 0")
        if self.v_quench >= self.v_bias:
            raise _errors.InvalidQuenchError(v_eff=self.v_bias - self.v_quench)
        self._require(self.noise_sigma > 0, "noise_sigma must be > 0")
        self._require(self.gain_exponent > 0, "gain_exponent must be > 0")
        self._require(self.responsivity > 0, "responsivity must be > 0")
        self._require(self.amp_transimpedance > 0, "amp_transimpedance must be > 0")
        self._require(self.v_th >= 0, "v_th must be >= 0")
        self._require(
            self.sp_jitter_fwhm >= 0 and self.electronics_jitter_fwhm >= 0,
            "jitter widths must be >= 0")
        self._require(self.active_diameter > 0, "active_diameter must be > 0")
        self._require(self.max_linear_gain > 1, "max_linear_gain must be > 1")
        self._require(self.dark_count_rate >= 0, "dark_count_rate must be >= 0")
        self._require(
            self.avalanche_charge > 0 and
            self.amp_transimpedance * self.avalanche_charge > self.v_th,
            "an avalanche must cross the comparator threshold")

    @property
    def v_bias(self):
        # type: () -> float
        return self.v_br + self.v_excess

    @property
    def r_series(self):
        # type: () -> float
        return self.r_integrated + self.r1 + self.r2

    @property
    def v_top(self):
        # type: () -> float
        """
        Voltage at which the gain reaches `max_linear_gain`: the upper end of
        the linear-mode bracket.
        """
        return self.v_br * (1.0 - 1.0 / self.max_linear_gain) ** (
            1.0 / self.gain_exponent)

    @property
    def deadtime_rate(self):
        # type: () -> float
        """Largest possible click rate, 1/tau_d [Hz]."""
        return 1.0 / self.tau_d

# =============================================================================

class OperatingPoint(Record):
    """
    Steady state of the diode inside its bias network.
    """

    _FIELDS = {
        "v_apd": (float, "Voltage across the APD [V]."),
        "i_apd": (float, "Current through the APD [A]."),
        "gain": (float, "Multiplication factor M(v_apd)."),
        "mode": (Mode, "Mode classification."),
        "p_optical": (float, "DC optical power it was solved for [W].", 0.0),
        "quenched": (bool, "Whether the quench voltage was applied.", False),
    }

    _FIELDS_REQUIRED = ["v_apd", "i_apd", "gain", "mode"]

    def _validate(self):
        self._require(self.i_apd >= 0, "i_apd must be >= 0")
        self._require(self.gain >= 1, "gain must be >= 1")

    @property
    def is_blinded(self):
        # type: () -> bool
        return self.mode is not Mode.GEIGER

# =============================================================================
