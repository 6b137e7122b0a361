"""Named, splittable, counter-based deterministic random streams.

Every generator in the benchmark draws from an RngStream. A stream is
identified by a label path (e.g. "proteomics/normal/2/cluster"); draws hash
the path together with a per-stream counter, so values depend only on the
path and draw index. Adding a new labelled child stream never perturbs the
draws of existing streams, which keeps previously published seeds stable.
"""

from __future__ import annotations

import hashlib
import math
from typing import Sequence, TypeVar

T = TypeVar("T")

_U64 = 2**64
_FLOAT_DENOM = float(2**53)


class RngStream:
    """Deterministic random stream keyed by a label path.

    Not a subclass of random.Random on purpose: the draw sequence must be
    platform-stable and independent of CPython internals.
    """

    def __init__(self, path: str):
        self.path = path
        self._counter = 0

    def child(self, label: str) -> "RngStream":
        """Derive an independent sub-stream. Does not consume parent draws."""
        return RngStream(f"{self.path}/{label}")

    def _next_u64(self) -> int:
        h = hashlib.blake2b(
            f"{self.path}#{self._counter}".encode("utf-8"), digest_size=8
        )
        self._counter += 1
        return int.from_bytes(h.digest(), "big")

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self._next_u64() >> 11) / _FLOAT_DENOM

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        # Rejection sampling to avoid modulo bias.
        limit = _U64 - (_U64 % span)
        while True:
            v = self._next_u64()
            if v < limit:
                return lo + (v % span)

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        """k distinct elements, order randomized (Fisher-Yates prefix)."""
        if k > len(seq):
            raise ValueError("sample larger than population")
        pool = list(seq)
        out: list[T] = []
        for _ in range(k):
            i = self.randint(0, len(pool) - 1)
            out.append(pool.pop(i))
        return out

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def unit_vector(self, dim: int) -> list[float]:
        """Random direction on the unit sphere (Box-Muller + normalize)."""
        while True:
            vec = [self._gauss() for _ in range(dim)]
            norm = math.sqrt(sum(v * v for v in vec))
            if norm > 1e-9:
                return [v / norm for v in vec]

    def _gauss(self) -> float:
        u1 = self.random()
        u2 = self.random()
        while u1 <= 1e-300:
            u1 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def stream_for_task(theme: str, difficulty: str, seed: int) -> RngStream:
    """Root stream for one task instance."""
    return RngStream(f"{theme}/{difficulty}/{seed}")


def tick_hash_rng(task_path: str, label: str, tick: int) -> RngStream:
    """Stream for runtime randomness (e.g. NPC wandering) at a given tick.

    Keyed by task and tick so replays reproduce it without carrying
    generator state in the world snapshot.
    """
    return RngStream(f"{task_path}/runtime/{label}@{tick}")
