"""Command-line front end.

Exit codes: 0 success (all checks pass), 1 a mathematical check failed,
2 usage, parse or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .boundary import StolzSector, sample_path
from .errors import PoissonStieltjesError, SpecError
from .family import CoefficientSequence, SeriesSolution, evaluate_series
from .hp import integral_mean
from .measure import AngularMeasure, Atom, DensityPiece
from .poisson import DiskPoint, SolutionEvaluator, poisson_kernel
from .verify import DEFAULT_APERTURE, DEFAULT_RADII, DEFAULT_TOL, SUITES, run_suite

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


# ---------------------------------------------------------------- spec parsing

def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(field, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise SpecError(field, "must be finite")
    return value


def _check_keys(obj: Any, allowed: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise SpecError(where, "expected a JSON object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise SpecError(f"{where}.{unknown[0]}" if where else unknown[0], "unknown key")
    return obj


def measure_from_json(doc: Any) -> AngularMeasure:
    """Build an :class:`AngularMeasure` from the measure JSON schema."""
    doc = _check_keys(doc, {"atoms", "cantor_weight", "density"}, "")
    atoms = []
    for i, a in enumerate(doc.get("atoms", [])):
        where = f"atoms[{i}]"
        a = _check_keys(a, {"theta", "weight"}, where)
        for key in ("theta", "weight"):
            if key not in a:
                raise SpecError(f"{where}.{key}", "missing")
        atoms.append(Atom(_number(a["theta"], f"{where}.theta"),
                          _number(a["weight"], f"{where}.weight")))
    cantor = _number(doc.get("cantor_weight", 0.0), "cantor_weight")
    pieces = []
    for i, d in enumerate(doc.get("density", [])):
        where = f"density[{i}]"
        d = _check_keys(d, {"from", "to", "value"}, where)
        for key in ("from", "to", "value"):
            if key not in d:
                raise SpecError(f"{where}.{key}", "missing")
        start, stop = _number(d["from"], f"{where}.from"), _number(d["to"], f"{where}.to")
        if not (0.0 <= start < stop <= 2 * math.pi):
            raise SpecError(where, f"interval [{start}, {stop}] must satisfy 0 <= from < to <= 2pi")
        pieces.append(DensityPiece(start, stop, _number(d["value"], f"{where}.value")))
    try:
        return AngularMeasure(tuple(atoms), cantor, tuple(pieces))
    except PoissonStieltjesError as exc:
        raise SpecError("density", str(exc)) from exc


def coefficients_from_json(doc: Any) -> CoefficientSequence:
    doc = _check_keys(doc, {"entries", "geometric"}, "")
    if ("entries" in doc) == ("geometric" in doc):
        raise SpecError("entries", "give exactly one of 'entries' or 'geometric'")
    if "entries" in doc:
        if not isinstance(doc["entries"], list):
            raise SpecError("entries", "expected a list")
        return CoefficientSequence.finite(
            [_number(v, f"entries[{i}]") for i, v in enumerate(doc["entries"])]
        )
    geo = _check_keys(doc["geometric"], {"ratio", "scale"}, "geometric")
    if "ratio" not in geo:
        raise SpecError("geometric.ratio", "missing")
    ratio = _number(geo["ratio"], "geometric.ratio")
    if not (0.0 < ratio < 1.0):
        raise SpecError("geometric.ratio", "must lie in (0, 1)")
    return CoefficientSequence.geometric(ratio, _number(geo.get("scale", 1.0), "geometric.scale"))


def _load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(str(path), f"cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(str(path), f"malformed JSON: {exc}") from exc


def parse_specs(measure_path=None, coeff_path=None):
    """Load the measure and/or coefficient documents named on the command line."""
    measure = measure_from_json(_load_json(measure_path)) if measure_path else None
    coeffs = coefficients_from_json(_load_json(coeff_path)) if coeff_path else None
    return measure, coeffs


# ---------------------------------------------------------------- output

def _fmt(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def emit_csv(rows: Iterable[Sequence[Any]], header: Sequence[str], output_path: str | None) -> None:
    """Write rows as CSV with 17 significant digits; ``-`` or None means stdout."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError("row width does not match the header")
        writer.writerow([_fmt(v) for v in row])
    _write_text(buf.getvalue(), output_path)


def _write_text(text: str, output_path: str | None) -> None:
    if output_path in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- commands

def _cmd_eval(args) -> int:
    measure, _ = parse_specs(args.measure)
    ev = SolutionEvaluator(measure, args.tol)
    rows = []
    for r in args.r:
        for t in args.theta:
            rows.append((r, t, ev(DiskPoint(r, t))))
    emit_csv(rows, ("r", "theta", "u"), args.out)
    return EXIT_OK


def _cmd_boundary(args) -> int:
    measure, _ = parse_specs(args.measure)
    ev = SolutionEvaluator(measure, args.tol)
    pts, truncated = sample_path(StolzSector(args.Theta, args.c, args.r_start), args.count, args.zigzag)
    if truncated:
        print(f"path truncated at {len(pts)} points (near-boundary cutoff)", file=sys.stderr)
    vals = ev.evaluate(np.array([p.r for p in pts]), np.array([p.theta for p in pts]))
    rows = [(p.r, p.theta, float(u), 1.0 - p.r) for p, u in zip(pts, vals)]
    emit_csv(rows, ("r", "theta", "u", "one_minus_r"), args.out)
    return EXIT_OK


def _cmd_family(args) -> int:
    _, coeffs = parse_specs(coeff_path=args.coeffs)
    s = SeriesSolution(coeffs)
    rows = []
    for r in args.r:
        for t in args.theta:
            value, m = evaluate_series(s, DiskPoint(r, t), args.tol)
            rows.append((r, t, value, m))
    emit_csv(rows, ("r", "theta", "u", "m_used"), args.out)
    return EXIT_OK


def _cmd_means(args) -> int:
    measure, _ = parse_specs(args.measure)
    ev = SolutionEvaluator(measure, args.tol)
    rows = [(p, r, integral_mean(ev, p, r)) for p in args.p for r in args.r]
    emit_csv(rows, ("p", "r", "M_p"), args.out)
    return EXIT_OK


def _corrupted_kernel(r, theta):
    return poisson_kernel(r, theta) * (1.0 + 1e-3)


def _cmd_verify(args) -> int:
    measure, _ = parse_specs(args.measure)
    kernel = _corrupted_kernel if args.corrupt_kernel else poisson_kernel
    results = run_suite(args.suite, measure, args.tol, args.c, args.seed, kernel)
    defaults = {
        "suite": args.suite, "tol": args.tol, "aperture": args.c, "seed": args.seed,
        "r_grid": list(DEFAULT_RADII), "measure": args.measure or "example-1 atom (pi/2, 2pi)",
    }
    summary = []
    for res in results:
        d = res.as_dict()
        d["parameters"] = {**defaults, **d["parameters"]}
        summary.append(d)
    _write_text(json.dumps(summary, indent=2) + "\n", args.out)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.check}: worst={res.worst_value:.3e} threshold={res.threshold:.3e}",
              file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="poisson-stieltjes",
        description="Harmonic functions on the unit disk from singular boundary data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, need_measure=True):
        if need_measure:
            p.add_argument("--measure", required=True, metavar="JSON")
        p.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
        p.add_argument("--out", default="-", metavar="PATH")

    p = sub.add_parser("eval", help="Evaluate u on an (r, theta) grid.")
    common(p)
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.add_argument("--theta", type=float, nargs="+", required=True, help="radians")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("boundary", help="Sample u along a nontangential path.")
    common(p)
    p.add_argument("--Theta", type=float, required=True, help="boundary angle, radians")
    p.add_argument("--c", type=_positive, default=DEFAULT_APERTURE)
    p.add_argument("--count", type=int, default=24)
    p.add_argument("--r-start", type=float, default=0.5)
    p.add_argument("--zigzag", action="store_true")
    p.set_defaults(func=_cmd_boundary)

    p = sub.add_parser("family", help="Evaluate the series sum gamma_n u_n.")
    common(p, need_measure=False)
    p.add_argument("--coeffs", required=True, metavar="JSON")
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.add_argument("--theta", type=float, nargs="+", required=True, help="radians")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("means", help="Integral means M_p(u, r).")
    common(p)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--r", type=float, nargs="+", default=list(DEFAULT_RADII))
    p.set_defaults(func=_cmd_means)

    p = sub.add_parser("verify", help="Run the verification suite.")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--measure", default=None, metavar="JSON")
    p.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
    p.add_argument("--c", type=_positive, default=DEFAULT_APERTURE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-", metavar="PATH")
    p.add_argument("--corrupt-kernel", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (PoissonStieltjesError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
