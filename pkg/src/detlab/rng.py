"""Seeded splitmix64 stream and Fisher-Yates shuffle.

Pinned so random entry sets are reproducible from ``(q, size, seed)``
alone, independent of numpy's generator versions.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Integer in [0, n) as next() mod n."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next() % n

    def between(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi], both ends included."""
        return lo + self.below(hi - lo + 1)


def shuffle(items: list, rng: SplitMix64) -> list:
    """Fisher-Yates: for i = n-1 down to 1 swap items[i] with items[j], j = next() mod (i+1)."""
    items = list(items)
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def sample(n: int, size: int, rng: SplitMix64) -> list[int]:
    """First `size` entries of a shuffled range(n), sorted."""
    if not 0 <= size <= n:
        raise ValueError(f"cannot draw {size} distinct values from {n}")
    return sorted(shuffle(list(range(n)), rng)[:size])
