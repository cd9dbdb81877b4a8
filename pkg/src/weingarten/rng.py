"""Seedable random streams with exact integer sampling.

Each run of a sampler owns a :class:`Stream` derived from ``(seed, index)``,
so runs are independent of one another and reproducible bit-for-bit. The
underlying generator is the stdlib Mersenne Twister seeded with an integer,
whose output is fixed across platforms and Python versions.
"""

from __future__ import annotations

import random

_INDEX_BITS = 40


class Stream:
    """A deterministic random stream for one run."""

    def __init__(self, seed: int, index: int = 0):
        if seed < 0 or index < 0:
            raise ValueError("seed and index must be nonnegative")
        if index >= 1 << _INDEX_BITS:
            raise ValueError("stream index too large")
        self.seed = seed
        self.index = index
        self._gen = random.Random((seed << _INDEX_BITS) | index)

    def below(self, m: int) -> int:
        """Uniform integer in ``[0, m)`` by rejection on raw bits; exact for any ``m``."""
        if m <= 0:
            raise ValueError("m must be positive")
        if m == 1:
            return 0
        bits = (m - 1).bit_length()
        while True:
            x = self._gen.getrandbits(bits)
            if x < m:
                return x

    def weighted_index(self, weights: list[int]) -> int:
        """Index ``j`` with probability ``weights[j] / sum(weights)``, using integers only."""
        total = sum(weights)
        if total <= 0 or any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative with a positive sum")
        x = self.below(total)
        for j, w in enumerate(weights):
            if x < w:
                return j
            x -= w
        raise AssertionError("unreachable")

    def random(self) -> float:
        return self._gen.random()


def streams(seed: int, count: int) -> list[Stream]:
    return [Stream(seed, i) for i in range(count)]
