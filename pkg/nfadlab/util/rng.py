# =============================================================================
# nfadlab
#
# RANDOM STREAMS SUB-MODULE
# =============================================================================

"""
Named, independent random streams derived from one integer seed.

Every stochastic component draws from its own stream, keyed by the seed and
a stream identifier, so adding draws to one component never shifts the
realization of another.
"""

# Python stdlib imports
import typing as _typing

# External dependencies
import numpy as _np

# Local imports
import nfadlab.errors as _errors

# =============================================================================

# Stream identifiers
STREAM_PHOTONS = 1
STREAM_THINNING = 2
STREAM_DARK = 3
STREAM_PULSES = 4
STREAM_JITTER = 5
STREAM_EXPERIMENT = 6
STREAM_BB84 = 7

MAX_SEED = 2**64

# =============================================================================

def validate_seed(seed, owner="seed"):
    # type: (int, str) -> int
    """
    Checks that `seed` is an integer in [0, 2^64) and returns it as `int`.
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, _np.integer)):
        raise _errors.ParameterValidationError(
            owner=owner,
            reason="seed must be an integer, got {!r}".format(seed))
    if not 0 <= int(seed) < MAX_SEED:
        raise _errors.ParameterValidationError(
            owner=owner,
            reason="seed must lie in [0, 2^64), got {}".format(seed))
    return int(seed)


def seed_sequence(seed, *keys):
    # type: (int, int) -> _np.random.SeedSequence
    return _np.random.SeedSequence(
        entropy=validate_seed(seed),
        spawn_key=tuple(int(key) for key in keys))


def make_rng(seed, *keys):
    # type: (int, int) -> _np.random.Generator
    """
    Returns the generator of the stream identified by `keys` under `seed`.
    """
    return _np.random.default_rng(seed_sequence(seed, *keys))


def spawn_rngs(seed, count, *keys):
    # type: (int, int, int) -> _typing.List[_np.random.Generator]
    """
    Returns `count` independent child generators of the stream `keys`.
    """
    children = seed_sequence(seed, *keys).spawn(count)
    return [_np.random.default_rng(child) for child in children]


def derive_seed(seed, *keys):
    # type: (int, int) -> int
    """
    Derives a new 63-bit integer seed for a sub-experiment.
    """
    state = seed_sequence(seed, *keys).generate_state(2, dtype=_np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))

# =============================================================================
