"""Seeded sampling of the spectral ball along similarity orbits.

A sample is ``q T q^{-1}`` with ``T`` upper triangular: its eigenvalues are
drawn uniformly in the disc of radius ``eigenvalue_radius_cap`` and its
corner entry uniformly in the disc of radius ``nilpotent_scale``. The
conjugator ``q`` has real and imaginary parts uniform in
``[-conjugator_entry_scale, conjugator_entry_scale]`` and is redrawn until
``|det q| >= 0.1``.

Samples are produced in fixed-size batches; batch ``b`` draws from its own
stream ``substream(seed, b)``. Sample ``k`` therefore does not depend on how
batches are spread across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..matrix_core import Mat2, det, in_spectral_ball, inverse2
from .rng import SplitMix64, substream

BATCH_SIZE = 250
MIN_CONJUGATOR_DET = 0.1
MAX_REDRAWS = 10_000

SALT_BALL = 0
SALT_CONJUGATOR = 1


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 42
    count: int = 1000
    eigenvalue_radius_cap: float = 0.9
    conjugator_entry_scale: float = 0.35
    nilpotent_scale: float = 0.25

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if not 0 < self.eigenvalue_radius_cap < 1:
            raise ValueError("eigenvalue_radius_cap must lie in (0, 1)")
        if not self.conjugator_entry_scale > 0:
            raise ValueError("conjugator_entry_scale must be positive")
        if not self.nilpotent_scale >= 0:
            raise ValueError("nilpotent_scale must be nonnegative")

    def n_batches(self) -> int:
        return -(-self.count // BATCH_SIZE)

    def batch_range(self, b: int) -> range:
        return range(b * BATCH_SIZE, min((b + 1) * BATCH_SIZE, self.count))


def random_conjugator(rng: SplitMix64, scale: float) -> Mat2:
    for _ in range(MAX_REDRAWS):
        q = Mat2(rng.in_square(scale), rng.in_square(scale),
                 rng.in_square(scale), rng.in_square(scale))
        if abs(det(q)) >= MIN_CONJUGATOR_DET:
            return q
    raise ValueError(
        f"conjugator_entry_scale={scale} cannot reach |det q| >= {MIN_CONJUGATOR_DET}")


def _one_sample(rng: SplitMix64, cfg: SamplerConfig) -> Mat2:
    while True:
        q = random_conjugator(rng, cfg.conjugator_entry_scale)
        t = Mat2(rng.in_disc(cfg.eigenvalue_radius_cap),
                 rng.in_disc(cfg.nilpotent_scale),
                 0j,
                 rng.in_disc(cfg.eigenvalue_radius_cap))
        x = q @ t @ inverse2(q)
        # only a cap within round-off of 1 can fail here
        if in_spectral_ball(x, 1e-9):
            return x


def sample_batch(cfg: SamplerConfig, b: int) -> list[Mat2]:
    rng = substream(cfg.seed, b, SALT_BALL)
    return [_one_sample(rng, cfg) for _ in cfg.batch_range(b)]


def sample_ball(cfg: SamplerConfig) -> list[Mat2]:
    out: list[Mat2] = []
    for b in range(cfg.n_batches()):
        out.extend(sample_batch(cfg, b))
    return out


def sample_pairs(cfg: SamplerConfig) -> list[tuple[Mat2, Mat2]]:
    """``cfg.count`` pairs ``(x, q)`` with ``x`` in the ball and ``q`` invertible."""
    pairs = []
    for b in range(cfg.n_batches()):
        rng = substream(cfg.seed, b, SALT_CONJUGATOR)
        xs = sample_batch(cfg, b)
        pairs.extend((x, random_conjugator(rng, cfg.conjugator_entry_scale)) for x in xs)
    return pairs
