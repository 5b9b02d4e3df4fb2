"""Automorphism families of the 2x2 spectral ball as a small composable AST.

Families:

* :class:`Transpose` -- ``x -> x^t``.
* :class:`Moebius` -- ``x -> gamma (x - alpha)(1 - conj(alpha) x)^{-1}``.
* :class:`DiagTwist` -- off-diagonal entries scaled by ``e^{-phi(x12 x21)}``
  and ``e^{phi(x12 x21)}``; diagonal and the product ``x12 x21`` untouched.
* :class:`LowerTwist` -- ``x -> u x u^{-1}`` with ``u = [[1, 0], [a, 1]]`` and
  ``a`` a polynomial in ``(x12, tr x, det x)``.
* :class:`DiagConj` -- ``x -> d x d^{-1}`` with ``d = diag(a, 1/a)`` and ``a``
  a function of ``(x11, x22, x12 x21)``.
* :class:`GeneralConj` -- ``x -> u(x)^{-1} x u(x)`` for an opaque ``u``.
* :class:`Compose` -- steps applied left to right: ``Compose((f, g))`` is
  "f first, then g".

Equality of automorphisms is structural. Entire functions are represented by
polynomials; the exponential is taken at evaluation time.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .errors import (
    NotInvertibleForm,
    NotOriginFixing,
    OutsideDomain,
    OverflowGuard,
    VanishingConjugator,
    WrongForm,
)
from .matrix_core import (
    DEFAULT_MEMBERSHIP_TOL,
    Mat2,
    det,
    frobenius_norm,
    in_spectral_ball,
    inverse2,
    trace,
)

EXP_GUARD = 300.0
MAX_MONOMIAL_DEGREE = 8
FD_STEP = 1e-5
VANISHING_A = 1e-6


def _guarded_exp(z: complex) -> complex:
    if not abs(z.real) <= EXP_GUARD:
        raise OverflowGuard(f"|Re exponent| = {abs(z.real):.6g} exceeds {EXP_GUARD:g}")
    return cmath.exp(z)


# --------------------------------------------------------------------------
# Scalar function representations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EntirePoly:
    """Polynomial with complex coefficients in ascending degree order.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``.
    """

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        cs = [complex(c) for c in self.coeffs]
        if not all(cmath.isfinite(c) for c in cs):
            raise ValueError("polynomial coefficients must be finite")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs: complex) -> "EntirePoly":
        return cls(tuple(coeffs))

    def __call__(self, t: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __neg__(self) -> "EntirePoly":
        return EntirePoly(tuple(-c for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_nonconstant(self) -> bool:
        return any(c != 0 for c in self.coeffs[1:])

    def derivative(self) -> "EntirePoly":
        return EntirePoly(tuple(k * c for k, c in enumerate(self.coeffs) if k))


def eval_poly(p: EntirePoly, t: complex) -> complex:
    return p(t)


Monomial = tuple[int, int, int]


@dataclass(frozen=True)
class MonomialFunction:
    """Polynomial in three variables ``(u, v, w)``, optionally exponentiated.

    ``terms`` maps exponent triples ``(i, j, k)`` to coefficients of
    ``u^i v^j w^k``. Duplicate monomials are summed and zero coefficients
    dropped, so two functions with the same values compare equal.
    When ``exponential`` is set the function evaluates to ``e^{poly}``.
    """

    terms: tuple[tuple[Monomial, complex], ...] = ()
    exponential: bool = False
    max_degree: int = MAX_MONOMIAL_DEGREE

    def __post_init__(self):
        merged: dict[Monomial, complex] = {}
        for mono, c in self.terms:
            i, j, k = (int(e) for e in mono)
            if min(i, j, k) < 0:
                raise ValueError(f"negative exponent in monomial {mono}")
            if i + j + k > self.max_degree:
                raise ValueError(f"monomial {mono} exceeds max total degree {self.max_degree}")
            c = complex(c)
            if not cmath.isfinite(c):
                raise ValueError("monomial coefficients must be finite")
            merged[(i, j, k)] = merged.get((i, j, k), 0j) + c
        canon = tuple(sorted((m, c) for m, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", canon)

    @classmethod
    def from_dict(cls, terms: dict[Monomial, complex], **kw) -> "MonomialFunction":
        return cls(tuple(terms.items()), **kw)

    @classmethod
    def constant(cls, c: complex, **kw) -> "MonomialFunction":
        return cls((((0, 0, 0), c),), **kw)

    def poly(self, u: complex, v: complex, w: complex) -> complex:
        return sum((c * u**i * v**j * w**k for (i, j, k), c in self.terms), 0j)

    def evaluate(self, u: complex, v: complex, w: complex) -> complex:
        value = self.poly(u, v, w)
        return _guarded_exp(value) if self.exponential else value

    def __neg__(self):
        return replace(self, terms=tuple((m, -c) for m, c in self.terms))

    def variables(self, x: Mat2) -> tuple[complex, complex, complex]:
        raise NotImplementedError

    def __call__(self, x: Mat2) -> complex:
        return self.evaluate(*self.variables(x))


class TwistFunction(MonomialFunction):
    """``a(x12, tr x, det x)``; monomial ``(i, j, k)`` is ``x12^i tr^j det^k``."""

    def variables(self, x: Mat2) -> tuple[complex, complex, complex]:
        return x.x12, trace(x), det(x)


class InvariantFunction(MonomialFunction):
    """``a(x11, x22, x12 x21)``; monomial ``(i, j, k)`` is ``x11^i x22^j (x12 x21)^k``."""

    def variables(self, x: Mat2) -> tuple[complex, complex, complex]:
        return x.x11, x.x22, x.x12 * x.x21


# --------------------------------------------------------------------------
# Automorphism AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MoebiusParams:
    alpha: complex
    gamma: complex

    def __post_init__(self):
        alpha, gamma = complex(self.alpha), complex(self.gamma)
        if not abs(alpha) < 1:
            raise ValueError(f"|alpha| = {abs(alpha)} must be < 1")
        if abs(abs(gamma) - 1) > 1e-12:
            raise ValueError(f"|gamma| = {abs(gamma)} must be 1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma", gamma)

    def is_identity(self) -> bool:
        return self.alpha == 0 and self.gamma == 1

    def scalar(self, z: complex) -> complex:
        return self.gamma * (z - self.alpha) / (1 - self.alpha.conjugate() * z)

    def inverse(self) -> "MoebiusParams":
        # w = g(z - a)/(1 - conj(a) z)  <=>  z = conj(g)(w + g a)/(1 + conj(g a) w)
        return MoebiusParams(-self.gamma * self.alpha, self.gamma.conjugate())


class Automorphism:
    """Base class of the AST. Subclasses implement ``_map`` and ``inverse``."""

    def _map(self, x: Mat2) -> Mat2:
        raise NotImplementedError

    def inverse(self) -> "Automorphism":
        raise NotInvertibleForm(f"{type(self).__name__} has no closed-form inverse")

    def __call__(self, x: Mat2) -> Mat2:
        return apply(self, x)


@dataclass(frozen=True)
class Transpose(Automorphism):
    def _map(self, x: Mat2) -> Mat2:
        return x.T

    def inverse(self) -> "Transpose":
        return self


@dataclass(frozen=True)
class Moebius(Automorphism):
    params: MoebiusParams

    def _map(self, x: Mat2) -> Mat2:
        a, g = self.params.alpha, self.params.gamma
        ac = a.conjugate()
        num = Mat2(x.x11 - a, x.x12, x.x21, x.x22 - a)
        den = Mat2(1 - ac * x.x11, -ac * x.x12, -ac * x.x21, 1 - ac * x.x22)
        return (num @ inverse2(den)) * g

    def inverse(self) -> "Moebius":
        return Moebius(self.params.inverse())


@dataclass(frozen=True)
class DiagTwist(Automorphism):
    phi: EntirePoly

    def factor(self, x: Mat2) -> complex:
        """``e^{phi(x12 x21)}``, the (2,2) entry of the conjugator diag(1, e^phi)."""
        return _guarded_exp(self.phi(x.x12 * x.x21))

    def _map(self, x: Mat2) -> Mat2:
        e = self.factor(x)
        return Mat2(x.x11, x.x12 / e, x.x21 * e, x.x22)

    def inverse(self) -> "DiagTwist":
        return DiagTwist(-self.phi)


@dataclass(frozen=True)
class LowerTwist(Automorphism):
    a: TwistFunction

    def _map(self, x: Mat2) -> Mat2:
        s = self.a(x)
        # u x u^{-1} with u = [[1, 0], [s, 1]], multiplied out
        return Mat2(
            x.x11 - s * x.x12,
            x.x12,
            s * x.x11 + x.x21 - s * (s * x.x12 + x.x22),
            s * x.x12 + x.x22,
        )

    def inverse(self) -> "LowerTwist":
        # u(f(x)) = u(x), and u^{-1} = [[1, 0], [-a, 1]]
        return LowerTwist(-self.a)


@dataclass(frozen=True)
class DiagConj(Automorphism):
    """Conjugation by ``diag(a^power, a^-power)``.

    ``pullback`` lists Moebius maps applied to ``x`` (in order) before ``a``
    is evaluated; it is produced by :func:`commutation_conjugate`.
    """

    a: InvariantFunction
    power: int = 1
    pullback: tuple[MoebiusParams, ...] = ()

    def __post_init__(self):
        if self.power not in (1, -1):
            raise ValueError("power must be 1 or -1")

    def scalar(self, x: Mat2) -> complex:
        y = x
        for m in self.pullback:
            y = Moebius(m)._map(y)
        value = self.a(y)
        if not abs(value) >= VANISHING_A:
            raise VanishingConjugator(f"|a(x)| = {abs(value):.3g} below {VANISHING_A:g}")
        return value if self.power == 1 else 1 / value

    def _map(self, x: Mat2) -> Mat2:
        s = self.scalar(x)
        s2 = s * s
        return Mat2(x.x11, s2 * x.x12, x.x21 / s2, x.x22)

    def inverse(self) -> "DiagConj":
        if self.pullback:
            raise NotInvertibleForm("DiagConj with a Moebius pullback has no closed-form inverse")
        if self.a.exponential:
            return DiagConj(-self.a, self.power)
        return DiagConj(self.a, -self.power)


@dataclass(frozen=True)
class MatrixFunction:
    """A 2x2 matrix whose entries are monomial functions of (x12, tr, det).

    This gives GeneralConj a serializable conjugator.
    """

    entries: tuple[TwistFunction, TwistFunction, TwistFunction, TwistFunction]

    def __call__(self, x: Mat2) -> Mat2:
        return Mat2(*(e(x) for e in self.entries))


@dataclass(frozen=True)
class GeneralConj(Automorphism):
    """``x -> u(x)^{-1} x u(x)``; ``u`` must be a pure function."""

    u: Callable[[Mat2], Mat2]

    def _map(self, x: Mat2) -> Mat2:
        q = self.u(x)
        return inverse2(q) @ x @ q


@dataclass(frozen=True)
class Compose(Automorphism):
    steps: tuple[Automorphism, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("Compose needs at least one step")

    def inverse(self) -> "Compose":
        return Compose(tuple(invert(f) for f in reversed(self.steps)))


CONJUGATION_FORMS = (DiagTwist, LowerTwist, DiagConj, GeneralConj)


def apply(f: Automorphism, x: Mat2, tol: float = DEFAULT_MEMBERSHIP_TOL) -> Mat2:
    """Evaluate ``f`` at ``x``; every step checks that its input lies in the ball."""
    if isinstance(f, Compose):
        for step in f.steps:
            x = apply(step, x, tol)
        return x
    if not in_spectral_ball(x, tol):
        raise OutsideDomain("input matrix is not in the spectral ball")
    return f._map(x)


def invert(f: Automorphism) -> Automorphism:
    return f.inverse()


def compose(*steps: Automorphism) -> Compose:
    return Compose(tuple(steps))


# --------------------------------------------------------------------------
# Conjugators and the lower-twist helpers
# --------------------------------------------------------------------------


def lower_twist_u(a: TwistFunction, x: Mat2) -> Mat2:
    return Mat2(1 + 0j, 0j, a(x), 1 + 0j)


def lower_twist_x12_invariance(a: TwistFunction, x: Mat2) -> tuple[complex, complex]:
    return apply(LowerTwist(a), x).x12, x.x12


def conjugator(f: Automorphism, x: Mat2) -> Mat2:
    """The matrix-valued conjugator attached to a conjugation form at ``x``.

    DiagTwist gives ``diag(1, e^{phi(x12 x21)})``, LowerTwist ``[[1,0],[a,1]]``,
    DiagConj ``diag(a, 1/a)``, GeneralConj ``u(x)``.
    """
    if isinstance(f, DiagTwist):
        return Mat2.diag(1, f.factor(x))
    if isinstance(f, LowerTwist):
        return lower_twist_u(f.a, x)
    if isinstance(f, DiagConj):
        s = f.scalar(x)
        return Mat2.diag(s, 1 / s)
    if isinstance(f, GeneralConj):
        return f.u(x)
    raise WrongForm(f"{type(f).__name__} is not a conjugation form")


def commutation_conjugate(u_desc: Automorphism, m: MoebiusParams) -> Automorphism:
    """Precompose the conjugator of ``u_desc`` with the Moebius map ``m``.

    With left-to-right composition, ``Compose((Moebius(m), u_desc))`` equals
    ``Compose((commutation_conjugate(u_desc, m), Moebius(m)))``.
    """
    if not isinstance(u_desc, (DiagConj, GeneralConj)):
        raise WrongForm("expected DiagConj or GeneralConj")
    if m.is_identity():
        return u_desc
    if isinstance(u_desc, DiagConj):
        return replace(u_desc, pullback=(m,) + u_desc.pullback)
    u, mob = u_desc.u, Moebius(m)
    return GeneralConj(lambda x: u(mob._map(x)))


# --------------------------------------------------------------------------
# Linearisation at the origin
# --------------------------------------------------------------------------

UNITS = (
    Mat2(1 + 0j, 0j, 0j, 0j),
    Mat2(0j, 1 + 0j, 0j, 0j),
    Mat2(0j, 0j, 1 + 0j, 0j),
    Mat2(0j, 0j, 0j, 1 + 0j),
)


@dataclass(frozen=True)
class LinearMap2:
    """Linear map on 2x2 matrices, stored as the images of E11, E12, E21, E22."""

    images: tuple[Mat2, Mat2, Mat2, Mat2]

    @classmethod
    def from_function(cls, fn: Callable[[Mat2], Mat2]) -> "LinearMap2":
        return cls(tuple(fn(e) for e in UNITS))

    def __call__(self, x: Mat2) -> Mat2:
        out = Mat2.zero()
        for coeff, img in zip(x.entries(), self.images):
            out = out + img * coeff
        return out

    def distance(self, other: "LinearMap2") -> float:
        return max(frobenius_norm(a - b) for a, b in zip(self.images, other.images))


def conjugation_map(m: Mat2) -> LinearMap2:
    """``x -> m x m^{-1}``."""
    m_inv = inverse2(m)
    return LinearMap2.from_function(lambda e: m @ e @ m_inv)


def derivative_at_zero(f: Automorphism, eps: float = FD_STEP) -> LinearMap2:
    """Central finite-difference derivative of an origin-fixing ``f`` at 0."""
    at_zero = apply(f, Mat2.zero())
    if frobenius_norm(at_zero) > 1e-12:
        raise NotOriginFixing(f"f(0) has norm {frobenius_norm(at_zero):.3g}")
    return LinearMap2(tuple(
        (apply(f, e * eps) - apply(f, e * -eps)) * (1 / (2 * eps)) for e in UNITS
    ))


# --------------------------------------------------------------------------
# Pipeline JSON
# --------------------------------------------------------------------------


def _complex(pair) -> complex:
    re, im = pair
    z = complex(float(re), float(im))
    if not cmath.isfinite(z):
        raise ValueError("non-finite number in pipeline")
    return z


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _monomials(spec: dict, cls: type[MonomialFunction]) -> MonomialFunction:
    terms = [((m["i"], m["j"], m["k"]), _complex(m["c"])) for m in spec["monomials"]]
    return cls(tuple(terms), exponential=bool(spec.get("exponential", False)))


def parse_step(step: dict) -> Automorphism:
    op = step["op"]
    if op == "transpose":
        return Transpose()
    if op == "moebius":
        return Moebius(MoebiusParams(_complex(step["alpha"]), _complex(step["gamma"])))
    if op == "diag_twist":
        return DiagTwist(EntirePoly(tuple(_complex(c) for c in step["phi"])))
    if op == "lower_twist":
        return LowerTwist(_monomials(step["a"], TwistFunction))
    if op == "diag_conj":
        return DiagConj(_monomials(step["a"], InvariantFunction))
    if op == "general_conj":
        (a, b), (c, d) = step["u"]
        return GeneralConj(MatrixFunction(tuple(_monomials(e, TwistFunction) for e in (a, b, c, d))))
    raise ValueError(f"unknown op {op!r}")


def parse_pipeline(data: Sequence[dict]) -> Compose:
    """Build a left-to-right :class:`Compose` from the pipeline JSON list."""
    if not isinstance(data, list):
        raise ValueError("pipeline must be a JSON list")
    try:
        return Compose(tuple(parse_step(s) for s in data))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed pipeline step: {exc}") from None


def _dump_monomials(fn: MonomialFunction) -> dict:
    out: dict = {"monomials": [
        {"i": i, "j": j, "k": k, "c": _pair(c)} for (i, j, k), c in fn.terms
    ]}
    if fn.exponential:
        out["exponential"] = True
    return out


def dump_step(f: Automorphism) -> dict:
    if isinstance(f, Transpose):
        return {"op": "transpose"}
    if isinstance(f, Moebius):
        return {"op": "moebius", "alpha": _pair(f.params.alpha), "gamma": _pair(f.params.gamma)}
    if isinstance(f, DiagTwist):
        return {"op": "diag_twist", "phi": [_pair(c) for c in f.phi.coeffs]}
    if isinstance(f, LowerTwist):
        return {"op": "lower_twist", "a": _dump_monomials(f.a)}
    if isinstance(f, DiagConj) and f.power == 1 and not f.pullback:
        return {"op": "diag_conj", "a": _dump_monomials(f.a)}
    if isinstance(f, GeneralConj) and isinstance(f.u, MatrixFunction):
        e = [_dump_monomials(t) for t in f.u.entries]
        return {"op": "general_conj", "u": [e[:2], e[2:]]}
    raise WrongForm(f"{f!r} has no pipeline JSON encoding")


def dump_pipeline(f: Automorphism) -> list[dict]:
    steps: Iterable[Automorphism] = f.steps if isinstance(f, Compose) else (f,)
    return [dump_step(s) for s in steps]
