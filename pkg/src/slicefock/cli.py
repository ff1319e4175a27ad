"""Command-line front end: norms, convergence sweeps, multiplier tables,
smoothness moduli, best approximation, growth reports, and kernel fits.

Sweeps are emitted as CSV (header row, '.' decimal separator, one leading
timestamp comment line); single reports as JSON with deterministic key
order.  Exit codes: 0 success, 1 argument or parse errors, 2 when a norm
diverges ("not in space").
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import approx, kernels, operators, spaces
from .errors import NotInSpaceError, SliceFockError
from .quaternion import ImaginaryUnit, Quaternion, UNIT_I, UNIT_J, UNIT_K
from .series import (
    SliceSeries,
    exp_series,
    from_generator,
    gauss_series,
    monomial,
    prepared_for_radius,
    random_series,
    read_coefficients,
    taylor_truncate,
)


class CliError(Exception):
    """Bad command line or bad spec string; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def parse_function(spec: str) -> SliceSeries:
    """Function specs: exp | gauss:<beta> | mono:<k> | poly:<path> |
    random:<deg>:<seed> | kernel-section:<w>,<x>,<y>,<z>,<alpha>."""
    try:
        if spec == "exp":
            return exp_series()
        if spec.startswith("gauss:"):
            return gauss_series(float(spec.split(":", 1)[1]))
        if spec.startswith("mono:"):
            return monomial(int(spec.split(":", 1)[1]))
        if spec.startswith("poly:"):
            return read_coefficients(spec.split(":", 1)[1])
        if spec.startswith("random:"):
            _, deg, seed = spec.split(":")
            return random_series(int(deg), int(seed))
        if spec.startswith("kernel-section:"):
            return from_generator(spec)
    except CliError:
        raise
    except Exception as exc:
        raise CliError(f"bad function spec {spec!r}: {exc}") from exc
    raise CliError(f"unknown function spec {spec!r}")


def parse_slice(spec: str):
    """Slice specs: i | j | k | x,y,z | sup:<M>.  Returns an imaginary unit
    or ("sup", M)."""
    named = {"i": UNIT_I, "j": UNIT_J, "k": UNIT_K}
    if spec in named:
        return named[spec]
    if spec.startswith("sup:"):
        try:
            m = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise CliError(f"bad sup sample count in {spec!r}") from exc
        if m < 1:
            raise CliError("sup sample count must be positive")
        return ("sup", m)
    parts = spec.split(",")
    if len(parts) == 3:
        try:
            return ImaginaryUnit.from_vector([float(p) for p in parts])
        except ValueError as exc:
            raise CliError(f"bad slice vector {spec!r}: {exc}") from exc
    raise CliError(f"unknown slice spec {spec!r}")


def parse_centers(spec: str) -> list[Quaternion]:
    """Comma-separated centers; each one either a bare real or a colon-joined
    4-tuple w:x:y:z."""
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            if ":" in tok:
                parts = [float(p) for p in tok.split(":")]
                if len(parts) != 4:
                    raise ValueError("need exactly four components")
                out.append(Quaternion(*parts))
            else:
                out.append(Quaternion(float(tok)))
        except ValueError as exc:
            raise CliError(f"bad center {tok!r}: {exc}") from exc
    if not out:
        raise CliError("no centers given")
    return out


def _norm_spec(args) -> spaces.NormSpec:
    if args.kind == "first":
        return spaces.NormSpec("first", args.p, args.alpha)
    sl = parse_slice(args.slice)
    if isinstance(sl, tuple):
        return spaces.NormSpec("second", args.p, args.alpha, sup_samples=sl[1])
    return spaces.NormSpec("second", args.p, args.alpha, slice_unit=sl)


def _grid_for(args, spec: spaces.NormSpec):
    return spaces.default_grid(spec, n_radial=args.quad_radial,
                               n_angular=args.quad_angular,
                               n_sphere=args.quad_sphere)


def _slice_unit(args) -> ImaginaryUnit:
    sl = parse_slice(args.slice)
    if isinstance(sl, tuple):
        raise CliError("this command needs a concrete slice, not a sup policy")
    return sl


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    buf.write(f"# generated-at {stamp}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float)
                         else str(v) for v in row])
    return buf.getvalue()


def _json_text(record) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def _format_rows(args, header, rows, record):
    if args.format == "csv":
        _emit(args, _csv_text(header, rows))
    else:
        _emit(args, _json_text(record))


# ---------------------------------------------------------------------------
# subcommands

def cmd_norm(args) -> int:
    f = parse_function(args.fn)
    spec = _norm_spec(args)
    report = spaces.norm_report(f, spec, _grid_for(args, spec))
    _emit(args, _json_text(report.to_record()))
    return 0


def cmd_converge(args) -> int:
    f = parse_function(args.fn)
    spec = _norm_spec(args)
    if spec.kind != "second" or spec.sup_samples is not None:
        raise CliError("converge works on a concrete second-kind slice")
    unit = spec.slice_unit
    grid = _grid_for(args, spec)
    n_list = _parse_int_list(args.n_list)
    rows = []
    for n in n_list:
        if args.operator == "taylor":
            fe, _ = prepared_for_radius(f, grid.max_radius)
            err = spaces.norm(fe - taylor_truncate(fe, n), spec, grid)
            rows.append((n, err, None, None))
        elif args.operator == "fejer":
            diff = approx.operator_error_series(operators.fejer_op(n), f,
                                                grid.max_radius)
            rows.append((n, spaces.norm(diff, spec, grid), None, None))
        elif args.operator == "vdp":
            rep = approx.verify_vdp(f, n, args.p, args.alpha, unit, grid)
            rows.append((n, rep.lhs, rep.rhs, rep.slack))
        elif args.operator == "jackson":
            rep = approx.verify_jackson(f, n, args.m, args.p, args.alpha, unit,
                                        grid)
            rows.append((n, rep.lhs, rep.rhs, None))
        else:
            raise CliError(f"unknown operator {args.operator!r}")
    record = {"operator": args.operator, "fn": args.fn,
              "rows": [{"n": r[0], "error": r[1], "bound": r[2], "slack": r[3]}
                       for r in rows]}
    _format_rows(args, ("n", "error", "bound", "slack"), rows, record)
    return 0


def cmd_multipliers(args) -> int:
    if args.family == "fejer":
        op = operators.fejer_op(args.n)
    elif args.family == "vdp":
        op = operators.vdp_op(args.n)
    elif args.family == "jackson":
        op = operators.jackson_op(args.n, args.m, args.p)
    else:
        raise CliError(f"unknown multiplier family {args.family!r}")
    rows = [(k, float(r), args.family, args.n,
             args.m if args.family == "jackson" else None,
             operators.jackson_rule_r(args.m, args.p)
             if args.family == "jackson" else None)
            for k, r in enumerate(op.rho)]
    record = {"family": args.family, "n": args.n,
              "rho": [float(r) for r in op.rho],
              "degree_bound": op.degree_bound}
    _format_rows(args, ("k", "rho_k", "family", "n", "m", "r"), rows, record)
    return 0


def cmd_smoothness(args) -> int:
    f = parse_function(args.fn)
    unit = _slice_unit(args)
    deltas = _parse_float_list(args.delta_list)
    rows = []
    for d in deltas:
        query = approx.ModulusQuery(k=args.k, delta=d, p=args.p,
                                    alpha=args.alpha, unit=unit,
                                    h_grid=args.h_grid)
        rows.append((d, approx.modulus(f, query)))
    record = {"fn": args.fn, "k": args.k,
              "rows": [{"delta": r[0], "omega": r[1]} for r in rows]}
    _format_rows(args, ("delta", "omega"), rows, record)
    return 0


def cmd_bestapprox(args) -> int:
    f = parse_function(args.fn)
    rows = []
    for n in _parse_int_list(args.n_list):
        if args.kind == "first":
            res = approx.best_approx_first(f, n, args.alpha)
        elif args.p == 2.0:
            res = approx.best_approx_second(f, n, args.alpha, _slice_unit(args))
        else:
            res = approx.best_approx_lp(f, n, args.p, args.alpha,
                                        _slice_unit(args))
        rows.append((n, res.value, res.method))
    record = {"fn": args.fn,
              "rows": [{"n": r[0], "value": r[1], "method": r[2]} for r in rows]}
    _format_rows(args, ("n", "value", "method"), rows, record)
    return 0


def cmd_growth(args) -> int:
    f = parse_function(args.fn)
    radii = np.geomspace(args.r_min, args.r_max, args.radii)
    rep = spaces.order_type(f, radii)
    record = {
        "fn": args.fn,
        "order_estimate": rep.order_estimate,
        "type_estimate": rep.type_estimate,
        "radii": [float(r) for r in rep.radii],
        "log_max_modulus": [float(v) for v in rep.log_max_modulus],
        "residual": rep.residual,
    }
    _emit(args, _json_text(record))
    return 0


def cmd_kernel_fit(args) -> int:
    f = parse_function(args.fn)
    if args.p != 2.0:
        raise CliError("kernel fits are least squares: use --p 2")
    centers = parse_centers(args.centers)
    rows = []
    for count in range(1, len(centers) + 1):
        fit = kernels.fit_with_sections(f, centers[:count], args.alpha,
                                        _slice_unit(args))
        rows.append((count, fit.residual, fit.condition))
    record = {"fn": args.fn, "alpha": args.alpha,
              "rows": [{"centers": r[0], "residual": r[1], "condition": r[2]}
                       for r in rows]}
    _format_rows(args, ("centers", "residual", "condition"), rows, record)
    return 0


# ---------------------------------------------------------------------------

def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise CliError(f"bad integer list {text!r}") from exc


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise CliError(f"bad float list {text!r}") from exc


def canonical_argv(args: argparse.Namespace) -> list[str]:
    """Rebuild a canonical command line from a parsed configuration.

    Parsing the result reproduces an identical namespace, so configurations
    round-trip; unknown flags are rejected by the parser itself.
    """
    out = [args.command]
    skip = {"command", "func"}
    for key in sorted(vars(args)):
        if key in skip:
            continue
        value = getattr(args, key)
        if value is None:
            continue
        flag = "--" + key.replace("_", "-")
        out.extend([flag, str(value)])
    return out


def build_parser() -> _Parser:
    parser = _Parser(prog="slicefock", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fn=True):
        if fn:
            p.add_argument("--fn", required=True, help="function spec")
        p.add_argument("--p", type=float, default=2.0)
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--kind", choices=("first", "second"), default="second")
        p.add_argument("--slice", default="i",
                       help="i | j | k | x,y,z | sup:<M>")
        p.add_argument("--quad-radial", type=int, default=None)
        p.add_argument("--quad-angular", type=int, default=None)
        p.add_argument("--quad-sphere", type=int, default=None)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("norm", help="weighted norm with stability evidence")
    common(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("converge", help="operator error sweep over degrees")
    common(p)
    p.add_argument("--operator", required=True,
                   choices=("taylor", "fejer", "vdp", "jackson"))
    p.add_argument("--n-list", default="2,4,8,16")
    p.add_argument("--m", type=int, default=0, help="difference order (jackson)")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("multipliers", help="dump multiplier tables")
    common(p, fn=False)
    p.add_argument("--family", required=True, choices=("fejer", "vdp", "jackson"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.set_defaults(func=cmd_multipliers)

    p = sub.add_parser("smoothness", help="modulus of smoothness sweep")
    common(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--delta-list", default="0.5,0.25,0.125,0.0625")
    p.add_argument("--h-grid", type=int, default=16)
    p.set_defaults(func=cmd_smoothness)

    p = sub.add_parser("bestapprox", help="best polynomial approximation sweep")
    common(p)
    p.add_argument("--n-list", default="0,1,2,3,4")
    p.set_defaults(func=cmd_bestapprox)

    p = sub.add_parser("growth", help="entire-function order/type report")
    common(p)
    p.add_argument("--r-min", type=float, default=2.0)
    p.add_argument("--r-max", type=float, default=16.0)
    p.add_argument("--radii", type=int, default=10)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("kernel-fit", help="least-squares fit by kernel sections")
    common(p)
    p.add_argument("--centers", required=True,
                   help="comma-separated centers; real or w:x:y:z tuples")
    p.set_defaults(func=cmd_kernel_fit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NotInSpaceError as exc:
        print(f"not in space: {exc}", file=sys.stderr)
        return 2
    except SliceFockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
