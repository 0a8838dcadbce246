# =============================================================================
# nfadlab
#
# QKD RECORDS SUB-MODULE
# =============================================================================

# Python stdlib imports
import collections as _collections

# Local imports
from .abstract.record import Record

# =============================================================================

FeasibilityEntry = _collections.namedtuple(
    "FeasibilityEntry", ["p_blinding", "feasible", "window"])

# =============================================================================

class Bb84AttackConfig(Record):
    """
    Eve's faked-state attack on a BB84 receiver with two detectors.
    """

    _FIELDS = {
        "e_pulse": (float, "Energy of Eve's faked state [J]."),
        "trigger_rate": (float, "Rate of the faked states [Hz].", 40e3),
        "n_rounds": (int, "Rounds simulated.", 100000),
        "thresholds": (tuple, "(e_never, e_always) at the blinding power [J].", None),
        "rng_seed": (int, "Seed of the round streams.", 0),
        "chunk_size": (int, "Rounds per independent stream.", 65536),
    }

    _FIELDS_REQUIRED = ["e_pulse"]

    def _validate(self):
        self._require(self.e_pulse >= 0, "e_pulse must be >= 0")
        self._require(self.trigger_rate > 0, "trigger_rate must be > 0")
        self._require(self.n_rounds > 0, "n_rounds must be > 0")
        self._require(self.chunk_size > 0, "chunk_size must be > 0")
        self._require(self.rng_seed >= 0, "rng_seed must be >= 0")
        if self.thresholds is not None:
            self._require(
                len(self.thresholds) == 2 and
                0 <= self.thresholds[0] <= self.thresholds[1],
                "thresholds must be (e_never, e_always) with e_never <= e_always")

    @property
    def in_safe_window(self):
        """
        Whether e_pulse lies in the open window (e_always, 2 e_never); None
        without thresholds.
        """
        if self.thresholds is None:
            return None
        (e_never, e_always) = self.thresholds
        return e_always < self.e_pulse < 2.0 * e_never


class Bb84Stats(Record):
    """
    Statistics Eve induces at Bob. Rates are per round; the error
    contribution is per sifted bit.
    """

    _FIELDS = {
        "p_blinding": (float, "Blinding power [W]."),
        "e_pulse": (float, "Faked-state energy [J]."),
        "n_rounds": (int, "Rounds simulated."),
        "n_clicks": (int, "Rounds where Bob clicked."),
        "n_double_clicks": (int, "Rounds where both detectors clicked."),
        "n_sifted": (int, "Clicked rounds where Bob's basis equals Alice's."),
        "n_errors": (int, "Sifted rounds where Bob's bit differs from Alice's."),
        "n_basis_matches": (int, "Rounds where Eve's basis equals Bob's."),
    }

    _FIELDS_REQUIRED = list(_FIELDS)

    def _validate(self):
        self._require(self.n_rounds > 0, "n_rounds must be > 0")
        self._require(
            0 <= self.n_double_clicks <= self.n_clicks <= self.n_rounds and
            0 <= self.n_errors <= self.n_sifted <= self.n_clicks and
            0 <= self.n_basis_matches <= self.n_rounds,
            "inconsistent counts")

    @property
    def bob_click_rate(self):
        # type: () -> float
        return self.n_clicks / self.n_rounds

    @property
    def qber_contribution(self):
        # type: () -> float
        return self.n_errors / self.n_sifted if self.n_sifted else 0.0

    @property
    def double_click_rate(self):
        # type: () -> float
        return self.n_double_clicks / self.n_rounds

    @property
    def basis_match_fraction(self):
        # type: () -> float
        return self.n_basis_matches / self.n_rounds

    def as_row(self):
        # type: () -> dict
        return {
            "p_blinding_W": self.p_blinding,
            "e_pulse_J": self.e_pulse,
            "n_rounds": self.n_rounds,
            "bob_click_rate": self.bob_click_rate,
            "qber_contribution": self.qber_contribution,
            "double_click_rate": self.double_click_rate,
            "basis_match_fraction": self.basis_match_fraction,
        }

# =============================================================================
