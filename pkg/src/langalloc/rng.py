"""Pinned deterministic randomness.

Seeds are expanded with splitmix64 into xoshiro256** state. Bounded draws
use Lemire rejection, shuffles are Fisher-Yates, normals come from
Box-Muller. The exact algorithms are part of the reproducibility contract:
the same 64-bit seed must yield the same draws on every platform and in
every implementation of this toolkit.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1


def _splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state, returning (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def mix64(seed: int, text: str = "") -> int:
    """Derive a 64-bit sub-seed from a seed and a label.

    Each UTF-8 byte of the label is xor-folded into a splitmix64 chain, so
    sub-seeds for distinct labels are independent and adding a label never
    perturbs the stream of another.
    """
    h = seed & _MASK
    for b in text.encode("utf-8"):
        _, h = _splitmix64_next(h ^ b)
    _, h = _splitmix64_next(h)
    return h


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256StarStar:
    """xoshiro256** generator with splitmix64 seeding."""

    def __init__(self, seed: int):
        s = seed & _MASK
        state = []
        for _ in range(4):
            s, out = _splitmix64_next(s)
            state.append(out)
        self._s = state

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via Lemire's unbiased rejection method."""
        if n <= 0:
            raise ValueError("bound must be positive")
        x = self.next_u64()
        m = x * n
        low = m & _MASK
        if low < n:
            threshold = ((1 << 64) - n) % n
            while low < threshold:
                x = self.next_u64()
                m = x * n
                low = m & _MASK
        return m >> 64

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), drawn without replacement.

        Partial Fisher-Yates: the prefix of a full shuffle, so sampling k
        and sampling k+1 agree on the first k draws.
        """
        if not 0 <= k <= n:
            raise ValueError("k out of range")
        idx = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k]

    def normal(self, mean: float = 0.0, sd: float = 1.0) -> float:
        """Box-Muller normal draw (cosine branch only, two uniforms per draw)."""
        u1 = ((self.next_u64() >> 11) + 1) * 2.0**-53  # in (0, 1]
        u2 = self.random()
        return mean + sd * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
