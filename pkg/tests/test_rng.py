"""Tests for deterministic random streams."""

import numpy as np
import pytest

from boltzmix.errors import ArgumentError
from boltzmix.rng import RandomStream


def test_same_key_reproduces_sequence():
    a = RandomStream(123, 4).random(100)
    b = RandomStream(123, 4).random(100)
    assert np.array_equal(a, b)


def test_distinct_stream_ids_differ():
    a = RandomStream(123, 0).random(100)
    b = RandomStream(123, 1).random(100)
    assert not np.array_equal(a, b)


def test_distinct_seeds_differ():
    a = RandomStream(123, 0).random(100)
    b = RandomStream(124, 0).random(100)
    assert not np.array_equal(a, b)


def test_substream_equals_direct_construction():
    a = RandomStream(99, 0).substream(7).standard_normal(10)
    b = RandomStream(99, 7).standard_normal(10)
    assert np.array_equal(a, b)


def test_generator_methods_are_delegated():
    rng = RandomStream(5)
    assert 0.0 <= rng.random() < 1.0
    assert rng.integers(0, 10) in range(10)
    assert np.isfinite(rng.standard_normal())


@pytest.mark.parametrize("seed", [-1, 2 ** 64])
def test_out_of_range_seed_rejected(seed):
    with pytest.raises(ArgumentError):
        RandomStream(seed)


def test_negative_stream_id_rejected():
    with pytest.raises(ArgumentError):
        RandomStream(1, -1)
