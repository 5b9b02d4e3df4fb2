"""Acceptance gate: ten criteria, each at its stated tolerance.

Every criterion prints one ``PASS``/``FAIL`` line. Run directly with
``python tests/test_acceptance.py`` for just the summary.
"""

from __future__ import annotations

import contextlib
import functools
import io
import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import hermitian_eigenvalues_charpoly  # noqa: E402
from spectral_ball.automorphisms import (  # noqa: E402
    DiagTwist,
    EntirePoly,
    LowerTwist,
    apply,
    lower_twist_u,
)
from spectral_ball.cli import main as cli_main  # noqa: E402
from spectral_ball.matrix_core import Mat2, frobenius_norm, inverse2  # noqa: E402
from spectral_ball.verify.checks import (  # noqa: E402
    check_commutation,
    check_conjugate_invariance,
    check_moebius_spectral_mapping,
    check_roundtrip,
    check_spectrum_preservation,
)
from spectral_ball.verify.falsifier import (  # noqa: E402
    NOT_A_CONJUGATION_RESIDUAL,
    Verdict,
    fiber_affine_test,
    fiber_points_on_circle,
    fit_constant_conjugation,
)
from spectral_ball.verify.hermitian import hermitian4_min_eigenpair  # noqa: E402
from spectral_ball.verify.sampling import SamplerConfig, sample_ball  # noqa: E402
from spectral_ball.verify.suite import (  # noqa: E402
    COMMUTATION_CORPUS,
    INVARIANT_CONJUGATORS,
    LOWER_CORPUS,
    NON_INVARIANT_CONJUGATORS,
    PHI_CORPUS,
    conjugation_corpus,
    diag_twist_linearization_error,
    roundtrip_corpus,
    seeded_moebius_pairs,
)

SEED = 42
BIG = 10_000


@functools.lru_cache(maxsize=None)
def big_samples() -> tuple[Mat2, ...]:
    return tuple(sample_ball(SamplerConfig(seed=SEED, count=BIG)))


def report(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def criterion_1():
    start = time.perf_counter()
    xs = sample_ball(SamplerConfig(seed=SEED, count=BIG))
    worst = max(check_spectrum_preservation(f, xs) for f in conjugation_corpus().values())
    elapsed = time.perf_counter() - start
    return worst <= 1e-10 and elapsed < 5.0, \
        f"spectrum preservation, 8 forms x {BIG}: max {worst:.3g} <= 1e-10, {elapsed:.2f} s < 5 s"


def criterion_2():
    xs = big_samples()
    worst = max(check_roundtrip(f, xs) for f in roundtrip_corpus().values())
    # the inverse of a lower twist written out as u^{-1} y u
    explicit = 0.0
    for a in LOWER_CORPUS.values():
        f = LowerTwist(a)
        for x in xs:
            y = apply(f, x)
            u = lower_twist_u(a, y)
            explicit = max(explicit, frobenius_norm(inverse2(u) @ y @ u - x) / (1 + frobenius_norm(x)))
    ok = worst <= 1e-9 and explicit <= 1e-9
    return ok, f"round trips, 10 forms x {BIG}: max {worst:.3g}, explicit u^-1 y u {explicit:.3g} <= 1e-9"


def criterion_3():
    xs = big_samples()
    worst = max(check_moebius_spectral_mapping(m, xs) for m in seeded_moebius_pairs(SEED))
    return worst <= 1e-10, f"Moebius spectral mapping, 5 pairs x {BIG}: max {worst:.3g} <= 1e-10"


def criterion_4():
    head = big_samples()[:500]
    worst = max(check_commutation(u, m, head) for _, u, m in COMMUTATION_CORPUS)
    return worst <= 1e-9, f"commutation, 3 pairs x 500: max {worst:.3g} <= 1e-9"


def criterion_5():
    start = time.perf_counter()
    fit = fit_constant_conjugation(DiagTwist(PHI_CORPUS["t"]), fiber_points_on_circle(2.0, 64))
    c = 0.3
    control = fit_constant_conjugation(DiagTwist(EntirePoly.of(c)), fiber_points_on_circle(2.0, 64),
                                       fiber_points_on_circle(1.0, 16, 0.1))
    elapsed = time.perf_counter() - start
    m = Mat2.diag(1, math.exp(c))
    m = m * (1 / frobenius_norm(m))
    n = control.best_conjugator
    n = n * (abs(n.x11) / n.x11)
    gap = frobenius_norm(n - m)
    ok = (fit.verdict is Verdict.NOT_A_CONJUGATION and fit.residual >= NOT_A_CONJUGATION_RESIDUAL
          and control.verdict is Verdict.CONJUGATION_FOUND and control.residual <= 1e-8
          and gap <= 1e-6 and elapsed < 1.0)
    return ok, (f"falsifier: phi=t residual {fit.residual:.6g} >= theta {NOT_A_CONJUGATION_RESIDUAL:.6g} "
                f"({fit.verdict.value}); phi=0.3 residual {control.residual:.3g} <= 1e-8 "
                f"({control.verdict.value}), conjugator gap {gap:.3g} <= 1e-6; {elapsed:.3f} s < 1 s")


def criterion_6():
    parts, ok = [], True
    for name, phi in PHI_CORPUS.items():
        logs = [r.log_residual for r in fiber_affine_test(phi, [1, 2, 4])]
        grows = logs[0] < logs[1] < logs[2]
        ok &= grows
        parts.append(f"{name}: log-res {logs[0]:.3g} < {logs[1]:.3g} < {logs[2]:.4g}")
    const = max(r.residual for r in fiber_affine_test(EntirePoly.of(0.3), [1, 2, 4]))
    ok &= const <= 1e-10
    parts.append(f"constant: {const:.3g} <= 1e-10")
    return ok, "affine test, " + "; ".join(parts)


def criterion_7():
    cfg = SamplerConfig(seed=SEED, count=1000)
    inv = max(check_conjugate_invariance(u, cfg) for u in INVARIANT_CONJUGATORS.values())
    non = check_conjugate_invariance(NON_INVARIANT_CONJUGATORS["diag_conj[x12*x21]"], cfg)
    return inv <= 1e-10 and non > 0.01, \
        f"conjugate invariance, 1000 pairs: tr/det {inv:.3g} <= 1e-10, x12*x21 {non:.4g} > 0.01"


def criterion_8():
    worst = max(diag_twist_linearization_error(phi) for phi in PHI_CORPUS.values())
    return worst <= 1e-7, f"linearization at 0 (eps 1e-5), 3 phi: max {worst:.3g} <= 1e-7"


def criterion_9():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = (z + z.conj().T) / 2
        lam, _ = hermitian4_min_eigenpair(h)
        ref = hermitian_eigenvalues_charpoly(h)[0]
        worst = max(worst, abs(lam - ref) / abs(ref))
    return worst <= 1e-9, f"Jacobi vs char-poly roots, 100 matrices: max rel {worst:.3g} <= 1e-9"


def criterion_10():
    with tempfile.TemporaryDirectory() as d:
        outs = []
        for k, workers in enumerate((1, 1, 4)):
            path = Path(d) / f"r{k}.jsonl"
            with contextlib.redirect_stdout(io.StringIO()):
                cli_main(["verify", "--seed", str(SEED), "--workers", str(workers), "--out", str(path)])
            outs.append(path.read_bytes())
    ok = outs[0] == outs[1] == outs[2] and len(outs[0]) > 0
    return ok, f"verify reports byte-identical across runs and workers 1/4: {ok}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number - 1]()
    with capsys.disabled():
        print()
        report(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        report(k, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
