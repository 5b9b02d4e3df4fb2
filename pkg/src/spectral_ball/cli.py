"""Command-line front end.

Subcommands::

    spectral-ball verify     --out reports.jsonl [--seed N] [--samples N] [--tol T] [--workers W]
    spectral-ball falsify    [--phi JSON] [--radius R] [--count N] [--out PATH]
    spectral-ball fiber-scan --out scan.csv [--phi JSON] [--radius R] [--count N]
    spectral-ball apply      --pipeline P.json --input X.json [--check-roundtrip] [--tol T]

Exit codes: 0 success, 1 failed check or domain error, 2 usage error.
Every float is written with ``%.17g``; non-finite floats become ``null`` in
JSON and ``inf``/``nan`` in CSV.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence, TextIO

from .automorphisms import (
    DiagTwist,
    EntirePoly,
    apply,
    invert,
    parse_pipeline,
)
from .errors import NotInvertibleForm, OverflowGuard, SpectralBallError
from .matrix_core import Mat2, frobenius_norm, mat2_from_json, mat2_to_json
from .verify.falsifier import (
    DEFAULT_FIBER_COUNT,
    DEFAULT_FIBER_RADIUS,
    AffineFitReport,
    FitReport,
    Verdict,
    circle_points,
    fiber_affine_test,
    fiber_image,
    fiber_point,
    fiber_points_on_circle,
    fit_constant_conjugation,
    residual_contributions,
)
from .verify.suite import run_default_suite

SEED_ENV = "SPECTRAL_BALL_SEED"
DEFAULT_SEED = 42
AFFINE_RADII = (1.0, 2.0, 4.0)
CSV_HEADER = "re_lambda,im_lambda,re_f12,im_f12,re_f21,im_f21,residual_contrib"


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    return "%.17g" % v


def dumps(obj: Any) -> str:
    """Compact JSON with ``%.17g`` floats and ``null`` for non-finite values."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def fit_report_dict(r: FitReport) -> dict:
    return {
        "residual": r.residual,
        "best_conjugator": mat2_to_json(r.best_conjugator),
        "conjugator_condition": r.conjugator_condition,
        "holdout_error": r.holdout_error,
        "verdict": r.verdict.value,
    }


def affine_report_dict(r: AffineFitReport) -> dict:
    return {
        "coeff_alpha": r.coeff_alpha,
        "coeff_beta": r.coeff_beta,
        "residual": r.residual,
        "sample_radius": r.sample_radius,
        "log_scale": r.log_scale,
        "log_residual": r.log_residual,
    }


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _phi(text: str) -> EntirePoly:
    """``--phi`` takes a JSON list of coefficients, each a number or ``[re, im]``."""
    try:
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError
        coeffs = [complex(*c) if isinstance(c, list) else complex(c) for c in data]
        return EntirePoly(tuple(coeffs))
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"--phi must be a JSON coefficient list, got {text!r}") from None


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return _u64(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}") from None


def build_parser(default_seed: int = DEFAULT_SEED) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-ball",
        description="Automorphisms of the 2x2 spectral ball and numerical checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=default_seed)
    common.add_argument("--tol", type=_nonneg_float, default=1e-9)
    common.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("verify", parents=[common], help="run the default property suite")
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--out", type=Path, required=True)

    fiber = argparse.ArgumentParser(add_help=False)
    fiber.add_argument("--phi", type=_phi, default=EntirePoly.of(0, 1))
    fiber.add_argument("--radius", type=_positive_float, default=DEFAULT_FIBER_RADIUS)
    fiber.add_argument("--count", type=_positive_int, default=DEFAULT_FIBER_COUNT)

    p = sub.add_parser("falsify", parents=[common, fiber],
                       help="fit a constant conjugation to a twist on the fiber")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("fiber-scan", parents=[common, fiber], help="write the fiber scan CSV")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("apply", parents=[common], help="apply a pipeline to a matrix")
    p.add_argument("--pipeline", type=Path, required=True)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--check-roundtrip", action="store_true")
    return parser


@contextlib.contextmanager
def _open_out(path: Optional[Path]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    if not path.parent.is_dir():
        raise UsageError(f"output directory does not exist: {path.parent}")
    with open(path, "w", newline="") as fh:
        yield fh


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    if not args.out.parent.is_dir():
        raise UsageError(f"output directory does not exist: {args.out.parent}")
    reports = run_default_suite(args.seed, args.samples, args.tol, args.workers)
    with _open_out(args.out) as out:
        for r in reports:
            out.write(dumps(r.to_dict()) + "\n")
    failed = [r.check for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    for name in failed:
        print(f"FAIL {name}", file=sys.stderr)
    return 1 if failed else 0


def cmd_falsify(args: argparse.Namespace) -> int:
    phi: EntirePoly = args.phi
    f = DiagTwist(phi)
    points = fiber_points_on_circle(args.radius, args.count)
    holdout = fiber_points_on_circle(0.5 * args.radius, 16, phase=0.1)
    try:
        fit = fit_constant_conjugation(f, points, holdout)
        affine = fiber_affine_test(phi, AFFINE_RADII, DEFAULT_FIBER_COUNT)
    except OverflowGuard as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return 1
    doc = {
        "phi": [complex(c) for c in phi.coeffs],
        "radius": args.radius,
        "count": args.count,
        "fit": fit_report_dict(fit),
        "affine": [affine_report_dict(r) for r in affine],
    }
    with _open_out(args.out) as out:
        out.write(dumps(doc) + "\n")
    expected = Verdict.NOT_A_CONJUGATION if phi.is_nonconstant() else Verdict.CONJUGATION_FOUND
    return 0 if fit.verdict is expected else 1


def fiber_scan_rows(phi: EntirePoly, radius: float, count: int) -> tuple[list[list[str]], int]:
    """CSV rows for the scan plus the number of rows that hit the overflow guard."""
    f = DiagTwist(phi)
    lams = [fiber_point(lam).lam for lam in circle_points(radius, count)]
    images: list[Optional[Mat2]] = []
    for lam in lams:
        try:
            images.append(fiber_image(phi, lam))
        except OverflowGuard:
            images.append(None)
    good = [fiber_point(lam).matrix for lam, img in zip(lams, images) if img is not None]
    contribs = iter([])
    if good:
        fit = fit_constant_conjugation(f, good)
        contribs = iter(residual_contributions(f, good, fit.best_conjugator))
    rows, overflow = [], 0
    for lam, img in zip(lams, images):
        if img is None:
            overflow += 1
            rows.append([fmt(lam.real), fmt(lam.imag), "nan", "nan", "nan", "nan", "inf"])
        else:
            rows.append([fmt(lam.real), fmt(lam.imag),
                         fmt(img.x12.real), fmt(img.x12.imag),
                         fmt(img.x21.real), fmt(img.x21.imag),
                         fmt(next(contribs))])
    return rows, overflow


def cmd_fiber_scan(args: argparse.Namespace) -> int:
    rows, overflow = fiber_scan_rows(args.phi, args.radius, args.count)
    with _open_out(args.out) as out:
        out.write(CSV_HEADER + "\n")
        for row in rows:
            out.write(",".join(row) + "\n")
    print(f"rows={len(rows)} overflow_rows={overflow}")
    return 0


def cmd_apply(args: argparse.Namespace) -> int:
    try:
        pipeline = parse_pipeline(_read_json(args.pipeline))
        x = mat2_from_json(_read_json(args.input))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        y = apply(pipeline, x)
    except SpectralBallError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    status = 0
    with _open_out(args.out) as out:
        out.write(dumps(mat2_to_json(y)) + "\n")
        if args.check_roundtrip:
            try:
                back = apply(invert(pipeline), y)
            except NotInvertibleForm as exc:
                print(f"NotInvertibleForm: {exc}", file=sys.stderr)
                return 1
            except SpectralBallError as exc:
                print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
                return 1
            err = frobenius_norm(back - x) / (1 + frobenius_norm(x))
            ok = err <= args.tol
            out.write(dumps({"roundtrip_error": err, "tol": args.tol, "pass": ok}) + "\n")
            status = 0 if ok else 1
    return status


COMMANDS = {
    "verify": cmd_verify,
    "falsify": cmd_falsify,
    "fiber-scan": cmd_fiber_scan,
    "apply": cmd_apply,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
