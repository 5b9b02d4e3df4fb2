"""Closed-form 2x2 complex linear algebra and spectral ball membership.

Everything here works on :class:`Mat2`, an immutable row-major 2x2 complex
matrix. No iterative solvers are involved: eigenvalues come from the
characteristic quadratic, inverses from the adjugate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import SingularMatrix

SINGULAR_DET = 1e-300
DEFAULT_MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class Mat2:
    x11: complex
    x12: complex
    x21: complex
    x22: complex

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]]) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(complex(a), complex(b), complex(c), complex(d))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def zero(cls) -> "Mat2":
        return cls(0j, 0j, 0j, 0j)

    @classmethod
    def diag(cls, a: complex, b: complex) -> "Mat2":
        return cls(complex(a), 0j, 0j, complex(b))

    def rows(self) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
        return ((self.x11, self.x12), (self.x21, self.x22))

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.x11, self.x12, self.x21, self.x22)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.x11 + other.x11, self.x12 + other.x12,
                    self.x21 + other.x21, self.x22 + other.x22)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.x11 - other.x11, self.x12 - other.x12,
                    self.x21 - other.x21, self.x22 - other.x22)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.x11, -self.x12, -self.x21, -self.x22)

    def __mul__(self, c: complex) -> "Mat2":
        return Mat2(c * self.x11, c * self.x12, c * self.x21, c * self.x22)

    __rmul__ = __mul__

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.x11 * o.x11 + self.x12 * o.x21,
            self.x11 * o.x12 + self.x12 * o.x22,
            self.x21 * o.x11 + self.x22 * o.x21,
            self.x21 * o.x12 + self.x22 * o.x22,
        )

    @property
    def T(self) -> "Mat2":
        return Mat2(self.x11, self.x21, self.x12, self.x22)

    def conj_transpose(self) -> "Mat2":
        return Mat2(self.x11.conjugate(), self.x21.conjugate(),
                    self.x12.conjugate(), self.x22.conjugate())

    def is_finite(self) -> bool:
        return all(cmath.isfinite(v) for v in self.entries())


def trace(x: Mat2) -> complex:
    return x.x11 + x.x22


# -- error-free transformations -------------------------------------------
# Used only when a plain evaluation cancels badly: every product is split
# into an exact pair of doubles and the pieces are summed by math.fsum.

_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 2.0**996
CANCELLATION_RATIO = 8.0


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float, out: list[float]) -> None:
    p = a * b
    if not (abs(a) < _SPLIT_LIMIT and abs(b) < _SPLIT_LIMIT and math.isfinite(p)):
        out.append(p)
        return
    ah, al = _split(a)
    bh, bl = _split(b)
    out.append(p)
    out.append(((ah * bh - p) + ah * bl + al * bh) + al * bl)


def _two_diff(a: float, b: float) -> tuple[float, float]:
    s = a - b
    bb = s - a
    return s, (a - (s - bb)) - (b + bb)


def _cmul_exact(z: complex, w: complex, re: list[float], im: list[float]) -> None:
    _two_prod(z.real, w.real, re)
    _two_prod(-z.imag, w.imag, re)
    _two_prod(z.real, w.imag, im)
    _two_prod(z.imag, w.real, im)


def _det_exact(x: Mat2) -> complex:
    re: list[float] = []
    im: list[float] = []
    _cmul_exact(complex(x.x11), complex(x.x22), re, im)
    _cmul_exact(-complex(x.x12), complex(x.x21), re, im)
    return complex(math.fsum(re), math.fsum(im))


def _discriminant_exact(x: Mat2) -> complex:
    a, b = complex(x.x11), complex(x.x22)
    rh, rl = _two_diff(a.real, b.real)
    ih, il = _two_diff(a.imag, b.imag)
    hi, lo = complex(rh, ih), complex(rl, il)
    re: list[float] = []
    im: list[float] = []
    _cmul_exact(hi, hi, re, im)
    _cmul_exact(2 * hi, lo, re, im)
    _cmul_exact(lo, lo, re, im)
    _cmul_exact(4 * complex(x.x12), complex(x.x21), re, im)
    return complex(math.fsum(re), math.fsum(im))


def det(x: Mat2) -> complex:
    """x11 x22 - x12 x21, recomputed exactly rounded when the two products nearly cancel."""
    p, q = x.x11 * x.x22, x.x12 * x.x21
    d = p - q
    if CANCELLATION_RATIO * abs(d) < abs(p) + abs(q):
        return _det_exact(x)
    return d


def inverse2(x: Mat2) -> Mat2:
    """Inverse via the adjugate; raises SingularMatrix when |det| <= 1e-300."""
    d = det(x)
    if not abs(d) > SINGULAR_DET:
        raise SingularMatrix(f"|det| = {abs(d):.3g} at or below {SINGULAR_DET:g}")
    return Mat2(x.x22 / d, -x.x12 / d, -x.x21 / d, x.x11 / d)


def eigenvalues2(x: Mat2) -> tuple[complex, complex]:
    """Both roots of t^2 - tr(x) t + det(x), as an unordered pair.

    The discriminant is formed as (x11 - x22)^2 + 4 x12 x21, which avoids
    cancelling tr^2 against 4 det, and is recomputed exactly rounded when
    its two terms still nearly cancel (large entries, small spectrum). The
    larger root takes the sign that matches the trace, the smaller comes
    from the product of the roots.
    """
    tr = x.x11 + x.x22
    diff = x.x11 - x.x22
    sq, cross = diff * diff, 4 * x.x12 * x.x21
    disc = sq + cross
    if CANCELLATION_RATIO * abs(disc) < abs(sq) + abs(cross):
        disc = _discriminant_exact(x)
    root = cmath.sqrt(disc)
    if (tr.conjugate() * root).real >= 0:
        big = 0.5 * (tr + root)
    else:
        big = 0.5 * (tr - root)
    if big == 0:
        return 0j, 0j
    return big, det(x) / big


def spectral_radius(x: Mat2) -> float:
    a, b = eigenvalues2(x)
    return max(abs(a), abs(b))


def in_spectral_ball(x: Mat2, tol: float = DEFAULT_MEMBERSHIP_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    # NaN entries make the comparison False
    return spectral_radius(x) < 1.0 - tol


def similarity(q: Mat2, x: Mat2) -> Mat2:
    """q^{-1} x q."""
    return inverse2(q) @ x @ q


def frobenius_norm(x: Mat2) -> float:
    return math.hypot(abs(x.x11), abs(x.x12), abs(x.x21), abs(x.x22))


def singular_values2(x: Mat2) -> tuple[float, float]:
    """Singular values (largest first) from the 2x2 closed form."""
    fro2 = frobenius_norm(x) ** 2
    ad = abs(det(x))
    gap = math.sqrt(max(fro2 * fro2 - 4 * ad * ad, 0.0))
    big = math.sqrt(0.5 * (fro2 + gap))
    small = ad / big if big > 0 else 0.0
    return big, small


def eigen_distance(a: tuple[complex, complex], b: tuple[complex, complex]) -> float:
    """Matching distance between two unordered eigenvalue pairs."""
    straight = max(abs(a[0] - b[0]), abs(a[1] - b[1]))
    crossed = max(abs(a[0] - b[1]), abs(a[1] - b[0]))
    return min(straight, crossed)


def mat2_to_json(x: Mat2) -> list:
    """Nested ``[[[re, im], [re, im]], [[re, im], [re, im]]]`` encoding."""
    return [[[complex(v).real, complex(v).imag] for v in row] for row in x.rows()]


def mat2_from_json(data) -> Mat2:
    try:
        rows = [[complex(float(re), float(im)) for re, im in row] for row in data]
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError
    except (TypeError, ValueError):
        raise ValueError("expected a 2x2 nested array of [re, im] pairs") from None
    x = Mat2.from_rows(rows)
    if not x.is_finite():
        raise ValueError("matrix entries must be finite")
    return x
