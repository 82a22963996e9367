"""Counter-based random streams for reproducible growth.

Every variate is a pure function of (seed, lane, step, counter): the
stream for step t is keyed by the seed and t, and the coin for candidate
vertex u is read at counter u rather than in draw order. Two generators
that agree on the candidate sets therefore consume byte-identical
randomness no matter how they discover candidates, and a divergence stays
local to the (step, vertex) pair that caused it.

The stream function is the keyed BLAKE2b PRF from hashlib (RFC 7693),
which is stable across platforms and Python versions.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

from .errors import ParameterError

LANE_POSITION = 0
LANE_COIN = 1

_TO_UNIT = 2.0 ** -53


class CounterStream:
    """Random access into the uniform streams derived from one seed."""

    def __init__(self, seed: int):
        if not 0 <= seed < 2 ** 64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._key = struct.pack("<Q", seed)

    def _word(self, lane: int, t: int, counter: int) -> int:
        digest = hashlib.blake2b(
            struct.pack("<QQQ", lane, t, counter), key=self._key, digest_size=8
        ).digest()
        return int.from_bytes(digest, "little")

    def uniform(self, lane: int, t: int, counter: int) -> float:
        """One uniform in [0, 1) from the given lane/step/counter."""
        return (self._word(lane, t, counter) >> 11) * _TO_UNIT

    def position(self, t: int, m: int) -> np.ndarray:
        """The m position coordinates consumed at step t."""
        return np.array(
            [(self._word(LANE_POSITION, t, j) >> 11) * _TO_UNIT for j in range(m)]
        )

    def coin_uniforms(self, t: int, vertex_ids) -> np.ndarray:
        """Link coins for step t, one per candidate, indexed by birth index."""
        word = self._word
        return np.array(
            [(word(LANE_COIN, t, int(u)) >> 11) * _TO_UNIT for u in vertex_ids]
        )
