"""Sampled property checks for the automorphism laws.

Each check returns the largest deviation it saw; the caller decides what
tolerance counts as a pass. Samples are processed in fixed batches so that a
thread pool of any size produces the same maximum.
"""

from __future__ import annotations

import cmath
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TypeVar

from ..automorphisms import (
    Compose,
    DiagConj,
    EntirePoly,
    InvariantFunction,
    Moebius,
    MoebiusParams,
    Transpose,
    TwistFunction,
    Automorphism,
    LowerTwist,
    CONJUGATION_FORMS,
    apply,
    commutation_conjugate,
    conjugator,
    invert,
)
from ..errors import VanishingConjugator, WrongForm
from ..matrix_core import (
    Mat2,
    det,
    eigen_distance,
    eigenvalues2,
    frobenius_norm,
    in_spectral_ball,
    similarity,
    trace,
)
from .rng import SplitMix64
from .sampling import BATCH_SIZE, SamplerConfig, sample_pairs

T = TypeVar("T")


def batched_max(fn: Callable[[T], float], items: Sequence[T], workers: int = 1) -> float:
    """``max(fn(item))`` over ``items``, evaluated batch-wise on ``workers`` threads."""
    chunks = [items[i:i + BATCH_SIZE] for i in range(0, len(items), BATCH_SIZE)]

    def run(chunk):
        return max((fn(item) for item in chunk), default=0.0)

    if workers <= 1 or len(chunks) <= 1:
        results = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))
    return max(results, default=0.0)


def _is_spectrum_preserving(f: Automorphism) -> bool:
    if isinstance(f, Compose):
        return all(_is_spectrum_preserving(s) for s in f.steps)
    return isinstance(f, CONJUGATION_FORMS + (Transpose,))


def check_spectrum_preservation(f: Automorphism, samples: Sequence[Mat2],
                                workers: int = 1) -> float:
    if not _is_spectrum_preserving(f):
        raise WrongForm(f"{type(f).__name__} does not preserve spectra")
    return batched_max(
        lambda x: eigen_distance(eigenvalues2(x), eigenvalues2(apply(f, x))),
        samples, workers)


def check_moebius_spectral_mapping(params: MoebiusParams, samples: Sequence[Mat2],
                                   workers: int = 1) -> float:
    mob = Moebius(params)

    def deviation(x: Mat2) -> float:
        l1, l2 = eigenvalues2(x)
        return eigen_distance((params.scalar(l1), params.scalar(l2)),
                              eigenvalues2(apply(mob, x)))

    return batched_max(deviation, samples, workers)


def check_roundtrip(f: Automorphism, samples: Sequence[Mat2], workers: int = 1) -> float:
    """Max of ``||f^{-1}(f(x)) - x||_F / (1 + ||x||_F)``."""
    g = invert(f)
    return batched_max(
        lambda x: frobenius_norm(apply(g, apply(f, x)) - x) / (1 + frobenius_norm(x)),
        samples, workers)


def check_commutation(u: Automorphism, m: MoebiusParams, samples: Sequence[Mat2],
                      workers: int = 1) -> float:
    """Max distance between ``u(M(x))`` and ``M(u'(x))``, ``u' = commutation_conjugate(u, m)``."""
    lhs = Compose((Moebius(m), u))
    rhs = Compose((commutation_conjugate(u, m), Moebius(m)))
    return batched_max(lambda x: frobenius_norm(apply(lhs, x) - apply(rhs, x)),
                       samples, workers)


def check_lower_twist_invariance(a: TwistFunction, samples: Sequence[Mat2],
                                 workers: int = 1) -> float:
    """Max change of x12, tr and det under the lower twist."""
    f = LowerTwist(a)

    def deviation(x: Mat2) -> float:
        y = apply(f, x)
        return max(abs(y.x12 - x.x12), abs(trace(y) - trace(x)), abs(det(y) - det(x)))

    return batched_max(deviation, samples, workers)


def check_conjugate_invariance(u: Automorphism, cfg: SamplerConfig, workers: int = 1) -> float:
    """Max of ``||U(q^{-1} x q) - U(x)||_F`` for the conjugator map ``U`` of ``u``."""
    return batched_max(
        lambda pair: frobenius_norm(conjugator(u, similarity(pair[1], pair[0]))
                                    - conjugator(u, pair[0])),
        sample_pairs(cfg), workers)


def diag_conj_roundtrip(a: InvariantFunction, samples: Sequence[Mat2],
                        workers: int = 1) -> float:
    """Round trip of ``diag(a, 1/a)`` conjugation against the one with ``1/a``.

    ``x11``, ``x22`` and ``x12 x21`` are fixed by the map, so conjugating
    back with ``a`` replaced by ``1/a`` (evaluated at the image) undoes it.
    """
    forward = DiagConj(a)
    backward = DiagConj(a, power=-1)

    def deviation(x: Mat2) -> float:
        if not abs(a(x)) >= 1e-6:
            raise VanishingConjugator(f"|a(x)| = {abs(a(x)):.3g}")
        y = apply(backward, apply(forward, x))
        return frobenius_norm(y - x) / (1 + frobenius_norm(x))

    return batched_max(deviation, samples, workers)


# --------------------------------------------------------------------------
# Non-injectivity witness for a diagonal conjugator depending on x12 alone
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CollisionReport:
    found: bool
    x: Optional[Mat2]
    y: Optional[Mat2]
    deviation: float
    trials: int


def x12_diag_conj(g: EntirePoly, x: Mat2) -> Mat2:
    """``diag(a, 1/a) x diag(a, 1/a)^{-1}`` with ``a = e^{g(x12)}``."""
    s2 = cmath.exp(2 * g(x.x12))
    return Mat2(x.x11, s2 * x.x12, x.x21 / s2, x.x22)


def diag_conj_collision_search(g: EntirePoly, seed: int = 0,
                               budget: int = 100_000) -> CollisionReport:
    """Look for ``x != y`` in the ball with the same image under :func:`x12_diag_conj`.

    A collision needs ``z != z'`` with ``z e^{2g(z)} = z' e^{2g(z')}``; each
    trial picks ``z`` and runs Newton on that scalar equation from a random
    start. The witness pair is ``[[0, z], [c, 0]]`` and ``[[0, z'], [c', 0]]``
    with ``c z = c' z' = 0.01`` so both have spectral radius 0.1.
    """
    if not g.is_nonconstant():
        # z -> e^{2c} z is injective, nothing to find
        return CollisionReport(False, None, None, float("nan"), 0)
    rng = SplitMix64(seed)
    dg = g.derivative()
    for trial in range(1, budget + 1):
        z = rng.in_disc(2.0)
        start = z + rng.in_disc(3.0)
        if abs(z) < 1e-3:
            continue
        try:
            w = z * cmath.exp(2 * g(z))
            zeta = start
            for _ in range(60):
                e = cmath.exp(2 * g(zeta))
                h = zeta * e - w
                dh = e * (1 + 2 * zeta * dg(zeta))
                if dh == 0:
                    break
                zeta -= h / dh
            resid = abs(zeta * cmath.exp(2 * g(zeta)) - w)
        except (OverflowError, ZeroDivisionError):
            continue
        if not (resid <= 1e-12 * (1 + abs(w)) and abs(zeta - z) > 1e-3 and abs(zeta) > 1e-3):
            continue
        x = Mat2(0j, z, 0.01 / z, 0j)
        c = 0.01 / z * cmath.exp(2 * (g(zeta) - g(z)))
        y = Mat2(0j, zeta, c, 0j)
        if not (in_spectral_ball(x) and in_spectral_ball(y)):
            continue
        fx, fy = x12_diag_conj(g, x), x12_diag_conj(g, y)
        dev = frobenius_norm(fx - fy) / (1 + frobenius_norm(fx))
        if dev <= 1e-9:
            return CollisionReport(True, x, y, dev, trial)
    return CollisionReport(False, None, None, float("nan"), budget)
