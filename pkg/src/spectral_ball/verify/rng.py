"""SplitMix64, the seeded generator behind every sampled check.

The algorithm (Steele, Lea & Flood 2014) is fixed so that seeds reproduce
bit-for-bit in any language:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic modulo 2**64. Uniform doubles take the top 53 bits:
``(z >> 11) * 2**-53``. Independent streams are keyed by
``(seed, index, salt)``: the stream seed is
``mix64(seed ^ mix64(index * GOLDEN + salt))`` where ``mix64`` is the output
function above applied to its argument as ``z``.
"""

from __future__ import annotations

import cmath
import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_range(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def in_disc(self, radius: float) -> complex:
        """Uniform point in the closed disc ``|z| <= radius``."""
        r = radius * math.sqrt(self.uniform())
        return cmath.rect(r, 2 * math.pi * self.uniform())

    def in_square(self, half_width: float) -> complex:
        return complex(self.uniform_range(-half_width, half_width),
                       self.uniform_range(-half_width, half_width))


def substream(seed: int, index: int, salt: int = 0) -> SplitMix64:
    return SplitMix64(mix64((seed & MASK64) ^ mix64(index * GOLDEN + salt)))
