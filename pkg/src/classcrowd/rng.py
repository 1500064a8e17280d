"""Seeded random streams.

Each character draws from its own stream so adding draws for one character
never shifts another character's timeline. Batch-level draws (intervals,
jitter spreads) come from a single master stream.
"""

from __future__ import annotations

import numpy as np

_MASTER = 0
_CHARACTER = 1
_GAZE = 2


class Stream:
    """Buffered scalar draws from one PCG64 generator.

    Scalar ``Generator.integers`` calls cost microseconds each, which
    dominates schedule generation; doubles are drawn in blocks instead and
    mapped to integers by scaling.
    """

    _BLOCK = 256

    def __init__(self, gen: np.random.Generator):
        self.generator = gen
        self._buf: list[float] = []
        self._pos = 0

    def random(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self.generator.random(self._BLOCK).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def index(self, n: int) -> int:
        """Uniform integer on [0, n)."""
        if n < 1:
            raise ValueError("index needs n >= 1")
        return min(int(self.random() * n), n - 1)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer on [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.index(hi - lo + 1)


class Rng:
    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._streams: dict[tuple[int, int], Stream] = {}

    def _stream(self, purpose: int, ident: int) -> Stream:
        key = (purpose, ident)
        stream = self._streams.get(key)
        if stream is None:
            seq = np.random.SeedSequence(self.seed, spawn_key=key)
            stream = self._streams[key] = Stream(np.random.Generator(np.random.PCG64(seq)))
        return stream

    @property
    def master(self) -> Stream:
        return self._stream(_MASTER, 0)

    def character(self, character_id: int) -> Stream:
        return self._stream(_CHARACTER, character_id)

    def gaze(self, character_id: int) -> Stream:
        return self._stream(_GAZE, character_id)


def uniform_ms(stream: Stream, low: float, high: float) -> int:
    """Uniform draw on [low, high] seconds, returned as whole milliseconds."""
    return stream.integer(int(round(low * 1000)), int(round(high * 1000)))
