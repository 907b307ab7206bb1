"""Seedable deterministic randomness.

Every randomized protocol step draws from a :class:`RandomStream` owned by the
caller, so that a seed fully determines keys, challenges, blinding values and
therefore whole transcripts. The stream is SHAKE-256 in counter mode; each draw
consumes exactly one 64-byte block, independent of the modulus, which keeps
matched runs on different backends in lock step.
"""

from __future__ import annotations

import hashlib

_BLOCK = 64


class RandomStream:
    def __init__(self, seed: bytes | int | str):
        if isinstance(seed, int):
            seed = seed.to_bytes(max(8, (seed.bit_length() + 7) // 8), "big")
        elif isinstance(seed, str):
            seed = seed.encode()
        self.seed = bytes(seed)
        self._counter = 0

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed.hex()}, drawn={self._counter})"

    def _block(self) -> bytes:
        data = hashlib.shake_256(self.seed + self._counter.to_bytes(8, "big")).digest(_BLOCK)
        self._counter += 1
        return data

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n); wide reduction, bias below 2**-256 for n < 2**256."""
        if n <= 0:
            raise ValueError("n must be positive")
        return int.from_bytes(self._block(), "big") % n

    def scalar(self, p: int) -> int:
        return self.randbelow(p)

    def nonzero_scalar(self, p: int) -> int:
        return 1 + self.randbelow(p - 1)

    def sample(self, population: int, k: int) -> list[int]:
        """k distinct values from range(population) via a partial Fisher-Yates shuffle."""
        if not 0 <= k <= population:
            raise ValueError("sample size out of range")
        pool = list(range(population))
        for j in range(k):
            swap = j + self.randbelow(population - j)
            pool[j], pool[swap] = pool[swap], pool[j]
        return pool[:k]

    def child(self, label: int | str) -> "RandomStream":
        """Independent sub-stream, e.g. per trial index or per protocol role."""
        tag = label.to_bytes(8, "big") if isinstance(label, int) else label.encode()
        return RandomStream(hashlib.sha256(b"auditlab-child|" + self.seed + b"|" + tag).digest())
