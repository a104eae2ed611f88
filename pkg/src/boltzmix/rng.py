"""Deterministic random streams.

A RandomStream is numpy's PCG64 generator keyed by the pair
(seed, stream_id). The same pair always reproduces the same draw sequence,
and distinct stream ids give statistically independent streams, so parallel
work is organized by handing each replicate its own stream id (by default,
replicate index = stream id). That makes results independent of how work is
scheduled across threads.

All draw methods of numpy.random.Generator are available directly on the
stream (``rng.random()``, ``rng.standard_normal(...)``, ...).
"""

import numpy as np

from .errors import ArgumentError


class RandomStream:
    """Reproducible random stream keyed by (seed, stream_id).

    seed      -- nonnegative integer below 2**64
    stream_id -- nonnegative integer selecting a parallel substream
    """

    def __init__(self, seed, stream_id=0):
        seed = int(seed)
        stream_id = int(stream_id)
        if not 0 <= seed < 2 ** 64:
            raise ArgumentError("seed must be a 64-bit nonnegative integer, "
                                "got %r" % (seed,))
        if stream_id < 0:
            raise ArgumentError("stream_id must be nonnegative, got %r"
                                % (stream_id,))
        self.seed = seed
        self.stream_id = stream_id
        self.gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((seed, stream_id))))

    def substream(self, stream_id):
        """A fresh stream with the same seed and the given stream id."""
        return RandomStream(self.seed, stream_id)

    def __getattr__(self, name):
        # Delegate draw methods (random, standard_normal, beta, uniform,
        # integers, geometric, ...) to the underlying numpy Generator.
        return getattr(self.gen, name)

    def __repr__(self):
        return "RandomStream(seed=%d, stream_id=%d)" % (self.seed,
                                                        self.stream_id)
