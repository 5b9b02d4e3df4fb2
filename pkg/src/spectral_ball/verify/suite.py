"""The default verification suite and its JSON report records."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Callable

from ..automorphisms import (
    Automorphism,
    DiagConj,
    DiagTwist,
    EntirePoly,
    GeneralConj,
    InvariantFunction,
    LowerTwist,
    Moebius,
    MoebiusParams,
    Transpose,
    TwistFunction,
    conjugation_map,
    derivative_at_zero,
)
from ..matrix_core import Mat2
from .checks import (
    check_commutation,
    check_conjugate_invariance,
    check_lower_twist_invariance,
    check_moebius_spectral_mapping,
    check_roundtrip,
    check_spectrum_preservation,
    diag_conj_collision_search,
    diag_conj_roundtrip,
)
from .rng import substream
from .sampling import SamplerConfig, sample_ball

SPECTRUM_TOL = 1e-10
ROUNDTRIP_TOL = 1e-9
MOEBIUS_TOL = 1e-10
COMMUTATION_TOL = 1e-9
INVARIANCE_TOL = 1e-12
DIAG_CONJ_TOL = 1e-9
INVARIANT_CONJUGATOR_TOL = 1e-10
NON_INVARIANT_MIN = 0.01
LINEARIZATION_TOL = 1e-7

SALT_MOEBIUS = 2

PHI_CORPUS: dict[str, EntirePoly] = {
    "t": EntirePoly.of(0, 1),
    "t^2": EntirePoly.of(0, 0, 1),
    "3t+it^3": EntirePoly.of(0, 3, 0, 1j),
}

LOWER_CORPUS: dict[str, TwistFunction] = {
    "x12": TwistFunction.from_dict({(1, 0, 0): 1}),
    "tr*x12": TwistFunction.from_dict({(1, 1, 0): 1}),
    "x12*det": TwistFunction.from_dict({(1, 0, 1): 1}),
}

DIAG_CONJ_CORPUS: dict[str, InvariantFunction] = {
    "exp(x11)": InvariantFunction.from_dict({(1, 0, 0): 1}, exponential=True),
    "exp(x12*x21)": InvariantFunction.from_dict({(0, 0, 1): 1}, exponential=True),
}

ROUNDTRIP_MOEBIUS = MoebiusParams(0.3 + 0.2j, cmath.exp(1j * math.pi / 3))


def _upper_shear(x: Mat2) -> Mat2:
    return Mat2(1 + 0j, x.x21, 0j, 1 + 0j)


COMMUTATION_CORPUS: list[tuple[str, Automorphism, MoebiusParams]] = [
    ("diag_conj[x11+x12*x21]",
     DiagConj(InvariantFunction.from_dict({(1, 0, 0): 1, (0, 0, 1): 1})),
     MoebiusParams(0.3, cmath.exp(1j * math.pi / 4))),
    ("diag_conj[exp(x12*x21)]",
     DiagConj(DIAG_CONJ_CORPUS["exp(x12*x21)"]),
     MoebiusParams(-0.2 + 0.4j, cmath.exp(-1j * math.pi / 3))),
    ("general_conj[[1,x21],[0,1]]",
     GeneralConj(_upper_shear),
     MoebiusParams(0.5j, 1)),
]

INVARIANT_CONJUGATORS: dict[str, Automorphism] = {
    "diag_conj[det]": DiagConj(InvariantFunction.from_dict({(1, 1, 0): 1, (0, 0, 1): -1})),
    "diag_conj[exp(tr)]": DiagConj(
        InvariantFunction.from_dict({(1, 0, 0): 1, (0, 1, 0): 1}, exponential=True)),
}

NON_INVARIANT_CONJUGATORS: dict[str, Automorphism] = {
    "diag_conj[x12*x21]": DiagConj(InvariantFunction.from_dict({(0, 0, 1): 1})),
    "diag_twist[t]": DiagTwist(PHI_CORPUS["t"]),
}


def conjugation_corpus() -> dict[str, Automorphism]:
    forms: dict[str, Automorphism] = {}
    forms.update({f"diag_twist[{k}]": DiagTwist(p) for k, p in PHI_CORPUS.items()})
    forms.update({f"lower_twist[{k}]": LowerTwist(a) for k, a in LOWER_CORPUS.items()})
    forms.update({f"diag_conj[{k}]": DiagConj(a) for k, a in DIAG_CONJ_CORPUS.items()})
    return forms


def roundtrip_corpus() -> dict[str, Automorphism]:
    forms = conjugation_corpus()
    forms["transpose"] = Transpose()
    forms["moebius[0.3+0.2i,e^(i*pi/3)]"] = Moebius(ROUNDTRIP_MOEBIUS)
    return forms


def seeded_moebius_pairs(seed: int, count: int = 5) -> list[MoebiusParams]:
    rng = substream(seed, 0, SALT_MOEBIUS)
    pairs = []
    for _ in range(count):
        alpha = rng.in_disc(0.8)
        gamma = cmath.exp(2j * math.pi * rng.uniform())
        pairs.append(MoebiusParams(alpha, gamma))
    return pairs


def diag_twist_linearization_error(phi: EntirePoly) -> float:
    m = Mat2.diag(1, cmath.exp(phi(0)))
    return derivative_at_zero(DiagTwist(phi)).distance(conjugation_map(m))


@dataclass
class Report:
    check: str
    passed: bool
    max_deviation: float
    samples: int
    seed: int
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"check": self.check, "pass": self.passed,
                "max_deviation": self.max_deviation, "samples": self.samples,
                "seed": self.seed, "details": self.details}


def run_default_suite(seed: int = 42, samples: int = 1000, tol: float = 1e-9,
                      workers: int = 1) -> list[Report]:
    """Run every default check; reports come back sorted by check name.

    Each check has its own pinned tolerance; ``tol`` can only tighten it.
    """
    cfg = SamplerConfig(seed=seed, count=samples)
    xs = sample_ball(cfg)
    reports: list[Report] = []

    def at_most(name: str, limit: float, run: Callable[[], float], n: int = samples,
                **details):
        limit = min(limit, tol)
        dev = run()
        reports.append(Report(name, dev <= limit, dev, n, seed, {"tol": limit, **details}))

    for name, f in conjugation_corpus().items():
        at_most(f"spectrum_preservation/{name}", SPECTRUM_TOL,
                lambda: check_spectrum_preservation(f, xs, workers))
    for name, f in roundtrip_corpus().items():
        at_most(f"roundtrip/{name}", ROUNDTRIP_TOL, lambda: check_roundtrip(f, xs, workers))
    for k, params in enumerate(seeded_moebius_pairs(seed)):
        at_most(f"moebius_spectral_mapping/{k}", MOEBIUS_TOL,
                lambda: check_moebius_spectral_mapping(params, xs, workers),
                alpha=[params.alpha.real, params.alpha.imag],
                gamma=[params.gamma.real, params.gamma.imag])
    head = xs[:500]
    for name, u, m in COMMUTATION_CORPUS:
        at_most(f"commutation/{name}", COMMUTATION_TOL,
                lambda: check_commutation(u, m, head, workers), n=len(head))
    for name, a in LOWER_CORPUS.items():
        at_most(f"lower_twist_invariance/{name}", INVARIANCE_TOL,
                lambda: check_lower_twist_invariance(a, xs, workers))
    for name, a in DIAG_CONJ_CORPUS.items():
        at_most(f"diag_conj_roundtrip/{name}", DIAG_CONJ_TOL,
                lambda: diag_conj_roundtrip(a, xs, workers))
    for name, u in INVARIANT_CONJUGATORS.items():
        at_most(f"conjugate_invariance/{name}", INVARIANT_CONJUGATOR_TOL,
                lambda: check_conjugate_invariance(u, cfg, workers), invariant=True)
    for name, u in NON_INVARIANT_CONJUGATORS.items():
        dev = check_conjugate_invariance(u, cfg, workers)
        reports.append(Report(f"conjugate_invariance/{name}", dev > NON_INVARIANT_MIN, dev,
                              samples, seed, {"min": NON_INVARIANT_MIN, "invariant": False}))
    for name, phi in PHI_CORPUS.items():
        at_most(f"linearization/diag_twist[{name}]", LINEARIZATION_TOL,
                lambda: diag_twist_linearization_error(phi), n=4)

    witness = diag_conj_collision_search(EntirePoly.of(0, 1), seed=seed)
    reports.append(Report(
        "non_injectivity/diag_conj[exp(x12)]", True,
        witness.deviation if witness.found else 0.0, witness.trials, seed,
        {"verdict": "WitnessFound" if witness.found else "Inconclusive"}))

    return sorted(reports, key=lambda r: r.check)
