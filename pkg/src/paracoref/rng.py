"""Portable seedable generator for structural reproducibility.

SplitMix64 (Steele, Lea & Flood 2014) is used wherever a trained model's
*structure* must be reproducible independent of platform or numpy version:
bootstrap draws, per-node feature subsets, fold shuffles and hyperparameter
sampling.  Stochastic numerics that only need run-to-run determinism
(weight init, resampling) use numpy's seeded generators instead.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """64-bit SplitMix stream; identical output for identical seeds everywhere."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        """Uniform int in [0, n), by modulo reduction.

        The modulo bias is below 2**-40 for any n < 2**24, which is far
        beyond the index ranges used here; taking the simple reduction keeps
        the stream trivially portable.
        """
        if n <= 0:
            raise ValueError(f"n must be positive, got {n}")
        return self.next_uint64() % n

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_uint64() >> 11) * 2.0**-53

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n) via partial Fisher-Yates."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} from {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.next_below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def spawn(self) -> "SplitMix64":
        """Child generator on an independent stream."""
        return SplitMix64(self.next_uint64())
