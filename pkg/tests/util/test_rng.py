
import collections

import numpy as np
import pytest

import nfadlab.errors as _errors
import nfadlab.util.rng as _rng

FixtureTestData = collections.namedtuple(
    'FixtureTestData',
    ['input', 'output'])


class TestValidateSeed:
    """
    Tests for the `nfadlab.util.rng.validate_seed` method.
    """

    test_data = [
        FixtureTestData(-1, False),
        FixtureTestData(2**64, False),
        FixtureTestData(1.5, False),
        FixtureTestData("7", False),
        FixtureTestData(True, False),
        FixtureTestData(0, True),
        FixtureTestData(2**64 - 1, True),
        FixtureTestData(np.int64(12), True),
    ]

    test_ids = [
        "{input!r} => {output}".format(input=d.input, output=d.output)
        for d in test_data
    ]

    @pytest.mark.parametrize("test_data", test_data, ids=test_ids)
    def test_correctness(self, test_data):
        if test_data.output:
            assert _rng.validate_seed(test_data.input) == int(test_data.input)
        else:
            with pytest.raises(_errors.ParameterValidationError):
                _rng.validate_seed(test_data.input)


class TestStreams:

    def test_reproducible(self):
        a = _rng.make_rng(42, _rng.STREAM_PHOTONS).random(5)
        b = _rng.make_rng(42, _rng.STREAM_PHOTONS).random(5)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = _rng.make_rng(42, _rng.STREAM_PHOTONS).random(5)
        b = _rng.make_rng(42, _rng.STREAM_JITTER).random(5)
        assert not np.array_equal(a, b)

    def test_seeds_differ(self):
        a = _rng.make_rng(1, _rng.STREAM_PHOTONS).random(5)
        b = _rng.make_rng(2, _rng.STREAM_PHOTONS).random(5)
        assert not np.array_equal(a, b)

    def test_spawn_independent(self):
        children = _rng.spawn_rngs(5, 3, _rng.STREAM_BB84)
        draws = [tuple(child.random(4)) for child in children]
        assert len(set(draws)) == 3

    def test_spawn_reproducible(self):
        a = [rng.random() for rng in _rng.spawn_rngs(5, 3, _rng.STREAM_BB84)]
        b = [rng.random() for rng in _rng.spawn_rngs(5, 3, _rng.STREAM_BB84)]
        assert a == b


class TestDeriveSeed:

    def test_range(self):
        for index in range(50):
            seed = _rng.derive_seed(123, _rng.STREAM_EXPERIMENT, index)
            assert 0 <= seed < 2**63

    def test_deterministic(self):
        assert _rng.derive_seed(9, 1, 2) == _rng.derive_seed(9, 1, 2)

    def test_keys_matter(self):
        assert _rng.derive_seed(9, 1, 2) != _rng.derive_seed(9, 2, 1)
