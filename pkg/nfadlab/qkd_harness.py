# =============================================================================
# nfadlab
#
# QKD HARNESS SUB-MODULE
# =============================================================================

"""
Accounting of the faked-state attack on BB84: Eve intercepts each round,
measures in a random basis and resends a bright pulse encoding her result;
Bob's blinded detectors click according to the comparator model.
"""

# Python stdlib imports
import typing as _typing

# External dependencies
import numpy as _np

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging
import nfadlab.util.rng as _rng

from nfadlab import attack_lab as _lab
from nfadlab import circuit_model as _circuit
from nfadlab import detector_core as _core
from nfadlab.models.attacks import ThresholdMap
from nfadlab.models.params import NfadParams
from nfadlab.models.qkd import Bb84AttackConfig, Bb84Stats, FeasibilityEntry

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def _run_chunk(rng, n, p_full, p_half, p_zero):
    """
    Simulates `n` rounds and returns the count vector
    (clicks, double clicks, sifted, errors, basis matches).
    """
    alice_bit = rng.integers(0, 2, n)
    alice_basis = rng.integers(0, 2, n)
    eve_basis = rng.integers(0, 2, n)
    bob_basis = rng.integers(0, 2, n)

    eve_bit = _np.where(eve_basis == alice_basis, alice_bit, rng.integers(0, 2, n))
    match = eve_basis == bob_basis

    # Matched basis: the pulse goes to the detector of Eve's bit
    p_one = _np.where(match, _np.where(eve_bit == 1, p_full, p_zero), p_half)
    p_zero_det = _np.where(match, _np.where(eve_bit == 0, p_full, p_zero), p_half)
    click_one = rng.random(n) < p_one
    click_zero = rng.random(n) < p_zero_det

    clicked = click_one | click_zero
    double = click_one & click_zero
    bob_bit = _np.where(double, rng.integers(0, 2, n), click_one.astype(int))

    sifted = clicked & (bob_basis == alice_basis)
    errors = sifted & (bob_bit != alice_bit)

    return _np.array([
        clicked.sum(), double.sum(), sifted.sum(), errors.sum(), match.sum()],
        dtype=_np.int64)


def run_bb84_attack(config, params, p_blinding, seed=None):
    # type: (Bb84AttackConfig, NfadParams, float, _typing.Optional[int]) -> Bb84Stats
    """
    Simulates `config.n_rounds` attacked rounds against two identical
    detectors blinded at `p_blinding`. Rounds are processed in chunks with
    independent streams spawned from the seed and merged by summation.

    :raises NotBlindedError: If `p_blinding` does not blind the detectors.
    """
    seed = config.rng_seed if seed is None else seed
    _lab.require_blinded(p_blinding, params)
    if config.trigger_rate >= params.deadtime_rate:
        raise _errors.ParameterValidationError(
            owner="Bb84AttackConfig",
            reason="trigger_rate {} Hz must stay below 1/tau_d = {:.6g} Hz".format(
                config.trigger_rate, params.deadtime_rate))

    op = _circuit.solve_operating_point(p_blinding, params)
    p_full = _core.click_probability(config.e_pulse, op, params)
    p_half = _core.click_probability(config.e_pulse / 2.0, op, params)
    p_zero = _core.click_probability(0.0, op, params)

    sizes = [config.chunk_size] * (config.n_rounds // config.chunk_size)
    if config.n_rounds % config.chunk_size:
        sizes.append(config.n_rounds % config.chunk_size)

    with _logging.start_action(
            action_type="nfadlab:run_bb84_attack",
            detector=params.name, p_blinding=p_blinding,
            e_pulse=config.e_pulse, n_rounds=config.n_rounds) as action:

        rngs = _rng.spawn_rngs(seed, len(sizes), _rng.STREAM_BB84)
        counts = sum(
            _run_chunk(rng, size, p_full, p_half, p_zero)
            for (rng, size) in zip(rngs, sizes))

        stats = Bb84Stats(
            p_blinding=p_blinding,
            e_pulse=config.e_pulse,
            n_rounds=config.n_rounds,
            n_clicks=counts[0],
            n_double_clicks=counts[1],
            n_sifted=counts[2],
            n_errors=counts[3],
            n_basis_matches=counts[4])

        action.add_success_fields(
            bob_click_rate=stats.bob_click_rate,
            qber_contribution=stats.qber_contribution)

    if config.in_safe_window is False:
        _logger.warning(
            "e_pulse = {:.4g} J lies outside the open window (E_always, 2 E_never)".format(
                config.e_pulse))

    return stats


def attack_feasibility(threshold_map):
    # type: (ThresholdMap) -> _typing.List[FeasibilityEntry]
    """
    For each blinding power, whether some pulse energy clicks always on a
    matched basis and never on a split one: E_always < 2 E_never. The window
    is (E_always, 2 E_never) when feasible, None otherwise.
    """
    if not threshold_map.entries:
        raise _errors.ParameterValidationError(
            owner="attack_feasibility", reason="the threshold map is empty")

    result = []
    for entry in threshold_map.entries:
        feasible = entry.e_always < 2.0 * entry.e_never
        result.append(FeasibilityEntry(
            entry.p_blinding, feasible,
            (entry.e_always, 2.0 * entry.e_never) if feasible else None))
    return result

# =============================================================================
