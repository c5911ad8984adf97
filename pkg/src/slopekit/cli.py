"""Command-line front end.

Exit codes: 0 success, 1 a verified property failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import harness
from .bounds import (
    B_function,
    T_function,
    chord_findings,
    closed_form_c,
    critical_slope_c,
    iq_bound_paper,
    n_alpha,
    shape_from_profile,
    sigma_profile,
)
from .linalg import IntegerMatrix, QuotientShape, char_poly, quotient_shape
from .newton import NewtonPolygon, newton_polygon, slope_multiplicities
from .rational import fmt_q, parse_q
from .valuation import Prime

SVG_SCALE = 40
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        return int(Prime(int(text)))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _shape_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; expected e.g. 3,2,1") from None


def _rational(text: str) -> Fraction:
    try:
        return parse_q(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}; expected num/den") from None


def _add_shape_flags(sp, n_required=False):
    sp.add_argument("--d", type=int, help="tensor arity of the sigma profile")
    sp.add_argument("--h", type=int, help="multiplier of the sigma profile")
    sp.add_argument("--n", type=int, required=n_required, help="depth n")
    sp.add_argument("--shape", type=_shape_list, help="explicit exponents a_1,...,a_t")
    sp.add_argument("--t", type=int, help="rank t (pads the shape with zeros)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slopekit", description="Newton polygon slope bounds and their verification")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("polygon", help="Newton polygon of a matrix's characteristic polynomial")
    sp.add_argument("matrix", help="matrix file (JSON: {t, entries})")
    sp.add_argument("--p", type=_prime, required=True)
    _add_shape_flags(sp)
    sp.add_argument("--format", choices=("text", "json", "csv", "svg"), default="text")
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="run a seeded verification campaign")
    sp.add_argument("kind", choices=harness.KINDS)
    sp.add_argument("--p", type=_prime, default=3)
    _add_shape_flags(sp)
    sp.add_argument("--t-prime", type=int, dest="t_prime")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--entry-bound", type=int, dest="entry_bound")
    sp.add_argument("--format", choices=("json",), default="json")
    sp.add_argument("--out")

    sp = sub.add_parser("bounds", help="bound functions, critical slope and chord bounds")
    _add_shape_flags(sp)
    sp.add_argument("--alpha", type=_rational)
    sp.add_argument("--iq", action="store_true", help="imaginary-quadratic chord comparison")
    sp.add_argument("--m", type=int, help="number of generators for --iq")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")

    sp = sub.add_parser("shape", help="quotient shape from a lattice basis or a sigma profile")
    sp.add_argument("matrix", nargs="?", help="matrix file whose columns span K inside L")
    sp.add_argument("--p", type=_prime, default=3)
    _add_shape_flags(sp)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")
    return ap


def resolve_shape(args, t_default=None) -> QuotientShape | None:
    """Shape from ``--shape`` or ``--d/--h/--n``, padded to ``--t`` (or ``t_default``)."""
    t = args.t if args.t is not None else t_default
    if args.shape is not None:
        a = tuple(sorted(args.shape, reverse=True))
        n = args.n if args.n is not None else max(a, default=0)
        shape = QuotientShape(n, a)
        return shape.padded(t) if t is not None else shape
    if args.d is not None or args.h is not None:
        if args.d is None or args.h is None or args.n is None:
            raise UsageError("a sigma profile needs all of --d, --h and --n")
        prof = sigma_profile(args.d, args.h, args.n)
        return shape_from_profile(prof, t if t is not None else prof.total + 1)
    return None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _slope_str(mults: dict) -> str:
    return " ".join(f"{s}:{m}" for s, m in sorted(mults.items()))


# ---- polygon ---------------------------------------------------------------


def render_svg(poly: NewtonPolygon, shape: QuotientShape | None, scale: int = SVG_SCALE) -> str:
    """Polygon, B and T as polylines; coordinates are exact values times ``scale``."""
    t = poly.degree
    series = [("polygon", "black", [(Fraction(x), Fraction(y)) for x, y in poly.vertices])]
    if shape is not None:
        B, T = B_function(shape), T_function(shape)
        for name, f, colour in (("B", B, "blue"), ("T", T, "red")):
            xs = sorted({Fraction(x) for x in f.breakpoints if x <= t} | {Fraction(0), Fraction(t)})
            series.append((name, colour, [(x, f(x)) for x in xs]))
    ymax = max(y for _, _, pts in series for _, y in pts)
    width = int(t * scale) + 2 * scale
    height = int(ymax * scale) + 2 * scale

    def xy(x, y):
        return f"{fmt_num(scale + x * scale)},{fmt_num(scale + (ymax - y) * scale)}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" data-scale="{scale}">',
        f"<!-- coordinates are exact values scaled by {scale}, y axis flipped -->",
    ]
    for name, colour, pts in series:
        coords = " ".join(xy(x, y) for x, y in pts)
        lines.append(f'<polyline id="{name}" fill="none" stroke="{colour}" points="{coords}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def fmt_num(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{float(x):.6f}"


def cmd_polygon(args) -> int:
    try:
        A = IntegerMatrix.load(args.matrix)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read matrix: {exc}") from None
    shape = resolve_shape(args, t_default=A.t)
    if shape is not None and shape.t != A.t:
        raise UsageError(f"shape has rank {shape.t}, matrix has rank {A.t}")
    poly = newton_polygon(char_poly(A), args.p)
    mults = slope_multiplicities(poly)
    if args.format == "csv":
        if args.out:
            out = Path(args.out)
            out.write_text(poly.points_csv())
            out.with_suffix(".vertices.csv").write_text(poly.vertices_csv())
        else:
            sys.stdout.write(poly.points_csv() + "\n" + poly.vertices_csv())
        return EXIT_OK
    if args.format == "svg":
        _emit(render_svg(poly, shape), args.out)
        return EXIT_OK
    if args.format == "json":
        doc = {
            "p": args.p,
            "t": A.t,
            "vertices": [list(v) for v in poly.vertices],
            "slopes": {fmt_q(s): m for s, m in sorted(mults.items())},
            "kernel_multiplicity": poly.kernel_multiplicity,
        }
        _emit(json.dumps(doc, indent=1, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    text = [
        "vertices: " + " ".join(f"({x},{y})" for x, y in poly.vertices),
        "slopes: " + _slope_str(mults),
        f"kernel multiplicity: {poly.kernel_multiplicity}",
    ]
    _emit("\n".join(text) + "\n", args.out)
    return EXIT_OK


# ---- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    shape = resolve_shape(args)
    if shape is None:
        raise UsageError("verify needs --shape or --d/--h/--n")
    try:
        config = harness.TrialConfig(
            shape, args.p, args.seed, entry_bound=args.entry_bound, trials=args.trials, t_prime=args.t_prime
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = harness.run_campaign(args.kind, config)
    _emit(report.dumps(), args.out)
    print(
        f"{report.kind}: {report.trials_run} trials, {len(report.failures)} failures",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_FAIL


# ---- bounds ----------------------------------------------------------------


def _bound_rows(f) -> list[list[str]]:
    return [[fmt_q(x), fmt_q(v), fmt_q(s)] for x, v, s in f.table()]


def cmd_bounds(args) -> int:
    doc: dict = {}
    if args.iq:
        if args.m is None or args.alpha is None:
            raise UsageError("--iq needs --m and --alpha")
        if args.m < 1 or args.alpha < 0:
            raise UsageError("--m must be >= 1 and --alpha >= 0")
        rows, findings = chord_findings([args.m], [args.alpha])
        doc["iq"] = {
            "m": args.m,
            "alpha": fmt_q(args.alpha),
            "closed_form_bound": iq_bound_paper(args.m, args.alpha),
            "chord_bound": rows[0]["chord"],
            "findings": findings,
        }
    else:
        if args.alpha is not None and args.d is not None and args.h is not None:
            if args.alpha < 0:
                raise UsageError("--alpha must be >= 0")
            doc["n_alpha"] = n_alpha(args.alpha, args.d, args.h)
            doc["alpha"] = fmt_q(args.alpha)
        if args.n is not None or args.shape is not None:
            shape = resolve_shape(args)
            if shape is None:
                raise UsageError("--n alone does not define a shape; add --d/--h or --shape")
            doc["shape"] = {"n": shape.n, "a": list(shape.a)}
            if args.d is not None:
                doc["sigma"] = list(sigma_profile(args.d, args.h, args.n).sigma)
                cf = closed_form_c(args.d, args.h, args.n)
                doc["closed_form"] = {"c1": cf.c1, "c1_n_term": cf.c1_term, "c": cf.c}
            doc["B"] = _bound_rows(B_function(shape))
            doc["T"] = _bound_rows(T_function(shape))
            doc["c"] = fmt_q(critical_slope_c(shape))
            if "closed_form" in doc:
                doc["closed_form"]["exact_over_closed"] = float(critical_slope_c(shape)) / doc["closed_form"]["c"]
        if not doc:
            raise UsageError("bounds needs --d/--h/--n, --shape, --d/--h/--alpha, or --iq --m --alpha")
    if args.format == "json":
        _emit(json.dumps(doc, indent=1, sort_keys=True) + "\n", args.out)
    else:
        _emit(_bounds_text(doc), args.out)
    return EXIT_OK


def _bounds_text(doc: dict) -> str:
    out = []
    if "sigma" in doc:
        out.append("sigma = [" + ",".join(map(str, doc["sigma"])) + "]")
    if "shape" in doc:
        out.append(f"shape = {','.join(map(str, doc['shape']['a']))} (n={doc['shape']['n']})")
    for name in ("B", "T"):
        if name in doc:
            out.append(f"{name}: breakpoint value slope")
            out.extend(f"  {x} {v} {s}" for x, v, s in doc[name])
    if "c" in doc:
        out.append(f"c = {doc['c']}")
    if "closed_form" in doc:
        cf = doc["closed_form"]
        out.append(f"closed form: c1 = {cf['c1']:.6f}, min(c1 n^(1/(d+1)), n) = {cf['c']:.6f}")
        out.append(f"exact c / closed form = {cf['exact_over_closed']:.6f}")
    if "n_alpha" in doc:
        out.append(f"n(alpha) = {doc['n_alpha']} for alpha = {doc['alpha']}")
    if "iq" in doc:
        iq = doc["iq"]
        out.append(f"closed-form bound = {iq['closed_form_bound']}")
        out.append(f"chord bound = {iq['chord_bound']}")
        for f in iq["findings"]:
            out.append(f"FINDING {f['kind']}: chord {f['chord']} > {f['closed_form']}")
    return "\n".join(out) + "\n"


# ---- shape -----------------------------------------------------------------


def cmd_shape(args) -> int:
    if args.matrix:
        if args.n is None:
            raise UsageError("shape from a matrix needs --n")
        try:
            K = IntegerMatrix.load(args.matrix)
            shape = quotient_shape(K, args.p, args.n)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    else:
        shape = resolve_shape(args)
        if shape is None:
            raise UsageError("shape needs a matrix file or --d/--h/--n")
    if args.format == "json":
        _emit(json.dumps({"n": shape.n, "a": list(shape.a)}) + "\n", args.out)
    else:
        _emit(f"{shape}\n", args.out)
    return EXIT_OK


COMMANDS = {"polygon": cmd_polygon, "verify": cmd_verify, "bounds": cmd_bounds, "shape": cmd_shape}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
