"""Numerical non-conjugacy certificates on the fiber {det x = 0, tr x = 1/2}.

The fiber is parametrised by ``lam -> [[lam, lam], [1/2 - lam, 1/2 - lam]]``;
every point has eigenvalues {0, 1/2} and so lies in the ball for all ``lam``.

Two independent routes show that a twist with non-constant ``phi`` does not
act on the fiber as a fixed similarity ``x -> n x n^{-1}``:

* :func:`fit_constant_conjugation` minimises ``sum ||f(x_k) n - n x_k||_F^2``
  over unit-norm ``n`` (a 4x4 Hermitian eigenproblem), and
* :func:`fiber_affine_test` fits ``e^{phi(lam(1/2 - lam))} lam`` by an affine
  function of ``lam`` on growing circles and watches the residual blow up.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..automorphisms import EXP_GUARD, Automorphism, EntirePoly, apply
from ..errors import DegenerateFit, OverflowGuard
from ..matrix_core import Mat2, frobenius_norm, inverse2, singular_values2
from .hermitian import hermitian4_min_eigenpair

FOUND_RESIDUAL = 1e-6
FOUND_HOLDOUT = 1e-6
MAX_CONDITION = 1e6
# DiagTwist(phi(t) = t) on 64 points of |lam| = 2 fits with residual
# 10.675319754100444; the threshold is half of that.
NOT_A_CONJUGATION_RESIDUAL = 5.337659877050222

DEFAULT_FIBER_RADIUS = 2.0
DEFAULT_FIBER_COUNT = 64


class Verdict(str, enum.Enum):
    CONJUGATION_FOUND = "ConjugationFound"
    NOT_A_CONJUGATION = "NotAConjugation"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class FiberPoint:
    lam: complex
    matrix: Mat2


def fiber_point(lam: complex) -> FiberPoint:
    """Fiber matrix at ``lam``.

    ``lam`` is first replaced by ``1/2 - (1/2 - lam)``, a shift of at most one
    ulp, which makes the floating-point trace exactly 1/2.
    """
    lam = 0.5 - (0.5 - complex(lam))
    mu = 0.5 - lam
    return FiberPoint(lam, Mat2(lam, lam, mu, mu))


def circle_points(radius: float, count: int, phase: float = 0.0) -> list[complex]:
    return [cmath.rect(radius, phase + 2 * math.pi * k / count) for k in range(count)]


def fiber_points_on_circle(radius: float, count: int, phase: float = 0.0) -> list[Mat2]:
    return [fiber_point(lam).matrix for lam in circle_points(radius, count, phase)]


def fiber_image(phi: EntirePoly, lam: complex) -> Mat2:
    """``[[lam, e^{-phi(s)} lam], [e^{phi(s)} (1/2 - lam), 1/2 - lam]]``, ``s = lam(1/2 - lam)``."""
    p = fiber_point(lam)
    lam, mu = p.matrix.x11, p.matrix.x22
    exponent = phi(lam * mu)
    if not abs(exponent.real) <= EXP_GUARD:
        raise OverflowGuard(f"|Re phi| = {abs(exponent.real):.6g} exceeds {EXP_GUARD:g}")
    e = cmath.exp(exponent)
    return Mat2(lam, lam / e, mu * e, mu)


# --------------------------------------------------------------------------
# Constant-conjugation fit
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FitReport:
    residual: float
    best_conjugator: Mat2
    conjugator_condition: float
    holdout_error: float
    verdict: Verdict


def commutator_operator(y: Mat2, x: Mat2) -> np.ndarray:
    """4x4 matrix of ``n -> y n - n x`` on row-major ``vec(n)``."""
    ym = np.array(y.rows(), dtype=complex)
    xm = np.array(x.rows(), dtype=complex)
    eye = np.eye(2)
    # row-major vec: vec(A N B) = (A kron B^T) vec(N)
    return np.kron(ym, eye) - np.kron(eye, xm.T)


def normal_operator(pairs: Sequence[tuple[Mat2, Mat2]]) -> np.ndarray:
    a = np.zeros((4, 4), dtype=complex)
    for y, x in pairs:
        op = commutator_operator(y, x)
        a += op.conj().T @ op
    return a


def verdict_for(residual: float, holdout_error: float,
                threshold: float = NOT_A_CONJUGATION_RESIDUAL) -> Verdict:
    if residual <= FOUND_RESIDUAL and holdout_error <= FOUND_HOLDOUT:
        return Verdict.CONJUGATION_FOUND
    if residual >= threshold:
        return Verdict.NOT_A_CONJUGATION
    return Verdict.INCONCLUSIVE


def fit_constant_conjugation(f: Automorphism, points: Sequence[Mat2],
                             holdout: Sequence[Mat2] = (),
                             threshold: float = NOT_A_CONJUGATION_RESIDUAL) -> FitReport:
    """Best unit-norm ``n`` with ``f(x) n ~ n x`` over ``points``.

    The residual is ``sqrt(lambda_min / sum ||x_k||_F^2)``, with
    ``lambda_min`` evaluated as the objective at the minimizing ``n``. When ``n`` has
    condition number at most 1e6 the nonlinear error
    ``||f(x) - n x n^{-1}||_F / (1 + ||x||_F)`` is measured on ``holdout``
    (``inf`` otherwise).
    """
    if not points:
        raise DegenerateFit("no points to fit")
    images = [apply(f, x) for x in points]
    if not all(y.is_finite() for y in images):
        raise DegenerateFit("non-finite image")
    mass = sum(frobenius_norm(x) ** 2 for x in points)
    if mass == 0.0:
        raise DegenerateFit("all points are zero")
    _, vec = hermitian4_min_eigenpair(normal_operator(list(zip(images, points))))
    n = Mat2(*vec)
    # fix the global phase: largest entry real positive
    big = max(vec, key=abs)
    n = n * (abs(big) / big)
    # v^H A v evaluated term by term: same value as lambda_min, but accurate
    # to round-off instead of to its square root
    residual = math.sqrt(sum(frobenius_norm(y @ n - n @ x) ** 2 for y, x in zip(images, points))
                         / mass)
    s_max, s_min = singular_values2(n)
    condition = s_max / s_min if s_min > 0 else math.inf
    holdout_error = math.inf
    if condition <= MAX_CONDITION:
        n_inv = inverse2(n)
        holdout_error = max(
            (frobenius_norm(apply(f, x) - n @ x @ n_inv) / (1 + frobenius_norm(x))
             for x in holdout),
            default=0.0,
        )
    return FitReport(residual, n, condition, holdout_error,
                     verdict_for(residual, holdout_error, threshold))


def residual_contributions(f: Automorphism, points: Sequence[Mat2], n: Mat2) -> list[float]:
    """Per-point share of the squared fit residual; they sum to ``residual**2``."""
    mass = sum(frobenius_norm(x) ** 2 for x in points)
    return [frobenius_norm(apply(f, x) @ n - n @ x) ** 2 / mass for x in points]


# --------------------------------------------------------------------------
# Affine fit of the twisted fiber coordinate
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineFitReport:
    """Least-squares fit ``g(lam) ~ alpha lam + beta`` on ``|lam| = sample_radius``.

    ``coeff_alpha``, ``coeff_beta`` and ``residual`` are expressed in units of
    ``e^{log_scale}``; ``log_scale`` is 0 unless the unscaled values would
    leave the guarded exponential range. ``log_residual`` is the natural log
    of the true residual.
    """

    coeff_alpha: complex
    coeff_beta: complex
    residual: float
    sample_radius: float
    log_scale: float = 0.0

    @property
    def log_residual(self) -> float:
        return (math.log(self.residual) if self.residual > 0 else -math.inf) + self.log_scale


def affine_fit(lams: Sequence[complex], values: Sequence[complex]) -> tuple[complex, complex, float]:
    """Solve the 2x2 complex normal equations; return (alpha, beta, rms residual)."""
    n = len(lams)
    s_ll = sum(abs(l) ** 2 for l in lams)
    s_l = sum(l.conjugate() for l in lams)
    s_lg = sum(l.conjugate() * g for l, g in zip(lams, values))
    s_g = sum(values)
    # [[s_ll, s_l], [conj(s_l), n]] [alpha, beta]^T = [s_lg, s_g]^T
    d = s_ll * n - abs(s_l) ** 2
    alpha = (n * s_lg - s_l * s_g) / d
    beta = (s_ll * s_g - s_l.conjugate() * s_lg) / d
    rms = math.sqrt(sum(abs(g - alpha * l - beta) ** 2 for l, g in zip(lams, values)) / n)
    return alpha, beta, rms


def fiber_affine_test(phi: EntirePoly, radii: Sequence[float],
                      samples_per_radius: int = DEFAULT_FIBER_COUNT) -> list[AffineFitReport]:
    """Fit ``e^{phi(lam(1/2 - lam))} lam`` by ``alpha lam + beta`` on each circle.

    Values whose exponent exceeds the guarded range are handled by factoring
    out ``e^{L}``, ``L`` the largest real part of the log-values, so no
    intermediate overflows. Raises OverflowGuard only if ``phi`` itself is
    not finite at a sample point.
    """
    if samples_per_radius < 3:
        raise ValueError("need at least 3 samples per radius")
    reports = []
    for radius in radii:
        if not radius > 0:
            raise ValueError("radii must be positive")
        lams = circle_points(radius, samples_per_radius)
        exponents = [phi(l * (0.5 - l)) for l in lams]
        if not all(cmath.isfinite(z) for z in exponents):
            raise OverflowGuard(f"phi is not finite on |lam| = {radius}")
        top = max(z.real for z in exponents) + math.log(radius)
        shift = top if top > EXP_GUARD else 0.0
        values = [cmath.exp(z - shift) * l for z, l in zip(exponents, lams)]
        alpha, beta, rms = affine_fit(lams, values)
        reports.append(AffineFitReport(alpha, beta, rms, radius, shift))
    return reports
