"""Command-line front end.

Subcommands:
  solve         run the successive-approximation engine on a problem file
  pantograph    closed-form pantograph series from flags
  ambartsumian  closed-form Ambartsumian series from flags
  system        closed-form series for a commensurate linear system file
  stability     sum criterion and frozen-delay characteristic-root test
  compare       evaluate a series against a reference, emit error table

Series dumps are JSON (rationals as "p/q" strings); evaluation tables are
CSV with floats in shortest round-trip form.  Reports and warnings go to
stderr; exit code 0 covers warned outcomes, 2 means bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import closedform, data, sam, stability
from .errors import FormatError, ProdelayError
from .series import PowerSeries, VectorSeries, as_scalar
from .specfun import mittag_leffler


def _fmt(x) -> str:
    return repr(float(x))


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-start", type=float, default=None, help="grid start")
    parser.add_argument("--t-end", type=float, default=None, help="grid end (inclusive)")
    parser.add_argument("--t-step", type=float, default=None, help="grid step (> 0)")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dump", metavar="PATH", default=None,
                        help="write the series JSON here (default: stdout)")
    parser.add_argument("--csv", metavar="PATH", default=None,
                        help="write the evaluation CSV here (default: stdout)")


def _grid(args, default: tuple[float, float, float] | None = None) -> list[float] | None:
    given = [v is not None for v in (args.t_start, args.t_end, args.t_step)]
    if not any(given):
        if default is None:
            return None
        start, end, step = default
    elif all(given):
        start, end, step = args.t_start, args.t_end, args.t_step
    else:
        raise FormatError("t-start/t-end/t-step must be given together")
    if step <= 0:
        raise FormatError(f"t-step: must be positive, got {step}")
    if start > end:
        raise FormatError(f"t-start: must not exceed t-end, got {start} > {end}")
    ts = []
    i = 0
    while True:
        t = start + i * step
        if t > end + step * 1e-9:
            break
        ts.append(min(t, end))
        i += 1
    return ts


def _check_grid_domain(ts: list[float], alpha) -> None:
    if alpha != 1 and ts and ts[0] < 0:
        raise FormatError("t-start: fractional-order series are undefined for t < 0")


def _dump_series(args, series) -> None:
    _write_text(args.dump, json.dumps(series.to_json()) + "\n")


def _series_csv(ts: list[float], series: PowerSeries) -> str:
    lines = ["t,y"]
    for t in ts:
        lines.append(f"{_fmt(t)},{_fmt(series.eval(t))}")
    return "\n".join(lines) + "\n"


def _vector_csv(ts: list[float], series: VectorSeries) -> str:
    header = "t," + ",".join(f"y{i + 1}" for i in range(series.dim))
    lines = [header]
    for t in ts:
        vals = series.eval(t)
        lines.append(_fmt(t) + "," + ",".join(_fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


# -- solve ---------------------------------------------------------------


def _cmd_solve(args) -> int:
    doc = _load_json(args.input)
    spec = sam.problem_from_json(doc)
    if args.trunc is not None or args.iters is not None:
        spec = sam.ProblemSpec(
            rhs=spec.rhs, alpha=spec.alpha, y0=spec.y0,
            trunc=args.trunc if args.trunc is not None else spec.trunc,
            iters=args.iters if args.iters is not None else spec.iters,
        )
    result = sam.solve(spec)

    rect = sam.Rectangle(as_scalar(args.rect_t), as_scalar(args.rect_y))
    bounds = sam.bounds_report(spec, rect)
    print(
        f"bounds: M={_fmt(bounds.M)} L1={_fmt(bounds.L1)} L2={_fmt(bounds.L2)} "
        f"zeta={_fmt(bounds.zeta)}"
        + (" (fractional error bound extrapolated from the integer-order proof)"
           if spec.alpha != 1 else ""),
        file=sys.stderr,
    )
    residual = sam.residual_check(result.series, spec)
    if residual.clean:
        print(f"residual: clean through order {spec.trunc}", file=sys.stderr)
    else:
        print(
            f"residual: first nonzero coefficient at order {residual.first_order} "
            f"(max |coeff| = {_fmt(residual.max_abs)})",
            file=sys.stderr,
        )
    if not result.stabilized:
        print(
            f"warning: not stabilized after {result.iterations} iterations; "
            "coefficients above the settled orders are still moving",
            file=sys.stderr,
        )

    _dump_series(args, result.series)
    ts = _grid(args)
    if ts is not None:
        _check_grid_domain(ts, spec.alpha)
        _write_text(args.csv, _series_csv(ts, result.series))
    return 0


# -- closed-form commands --------------------------------------------------


def _cmd_pantograph(args) -> int:
    params = closedform.PantographParams(
        a=as_scalar(args.a), b=as_scalar(args.b), q=as_scalar(args.q),
        alpha=as_scalar(args.alpha), y0=as_scalar(args.y0),
    )
    series = closedform.pantograph_series(params, args.terms)
    if params.a >= 0 and params.b >= 0:
        report = closedform.sandwich_check(params, args.terms)
        if report.ok:
            print(
                f"sandwich: coefficient bounds hold for all orders < {args.terms}",
                file=sys.stderr,
            )
        else:
            print(
                f"sandwich: first violation at order {report.first_violation}",
                file=sys.stderr,
            )
    _dump_series(args, series)
    ts = _grid(args)
    if ts is not None:
        _check_grid_domain(ts, series.alpha)
        _write_text(args.csv, _series_csv(ts, series))
    return 0


def _cmd_ambartsumian(args) -> int:
    params = closedform.AmbartsumianParams(
        q=as_scalar(args.q), alpha=as_scalar(args.alpha), lam=as_scalar(args.lam),
    )
    series = closedform.ambartsumian_series(params, args.terms)
    _dump_series(args, series)
    ts = _grid(args)
    if ts is not None:
        _check_grid_domain(ts, series.alpha)
        _write_text(args.csv, _series_csv(ts, series))
    return 0


def _cmd_system(args) -> int:
    doc = closedform.system_from_json(_load_json(args.matrix))
    if args.equation == "pantograph":
        if "A" not in doc:
            raise FormatError("A: missing (required for a pantograph system)")
        series = closedform.pantograph_system_series(
            doc["A"], doc["B"], doc["q"], doc["alpha"], doc["lambda"], args.terms,
            paper_literal=args.paper_literal,
        )
    else:
        series = closedform.ambartsumian_system_series(
            doc["B"], doc["q"], doc["alpha"], doc["lambda"], args.terms,
        )
    _dump_series(args, series)
    ts = _grid(args)
    if ts is not None:
        _check_grid_domain(ts, series.alpha)
        _write_text(args.csv, _vector_csv(ts, series))
    return 0


# -- stability -------------------------------------------------------------


def _cmd_stability(args) -> int:
    a = float(as_scalar(args.a))
    b = float(as_scalar(args.b))
    sum_stable = stability.pantograph_stable(a, b)
    verdict = "stable" if sum_stable else "not concluded"
    print(f"sum criterion (a+b<0, sufficient only): {verdict} (a+b = {_fmt(a + b)})")
    doc: dict = {"sum_criterion": {"stable": sum_stable, "sum": a + b,
                                   "note": "sufficient condition only"}}
    if args.tau is not None:
        query = stability.StabilityQuery(a=a, b=b, tau_star=float(as_scalar(args.tau)))
        report = stability.char_root_rightmost(query)
        if report.stable is None:
            print(f"characteristic root (tau={_fmt(query.tau_star)}): inconclusive "
                  f"at scan resolution")
        else:
            root = report.rightmost_root
            print(
                f"characteristic root (tau={_fmt(query.tau_star)}): method={report.method} "
                f"rightmost={_fmt(root.real)}{'+' if root.imag >= 0 else '-'}"
                f"{_fmt(abs(root.imag))}j margin={_fmt(report.margin)} "
                f"verdict={'stable' if report.stable else 'unstable'}"
            )
        doc["char_root"] = {
            "tau_star": query.tau_star,
            "method": report.method,
            "stable": report.stable,
            "rightmost_root": (
                None if report.rightmost_root is None
                else [report.rightmost_root.real, report.rightmost_root.imag]
            ),
            "margin": report.margin,
            "note": report.note,
        }
    if args.json is not None:
        _write_text(args.json, json.dumps(doc) + "\n")
    return 0


# -- compare ----------------------------------------------------------------


def _reference(spec: str):
    """Reference factory: name -> (label, callable t -> value)."""
    if spec == "sin":
        return "sin", math.sin
    if spec == "adm-vim-ham":
        series = data.adm_vim_ham_series()
        return "adm-vim-ham", series.eval
    if spec.startswith("exp:"):
        rate = float(as_scalar(spec[4:]))
        return spec, lambda t: math.exp(rate * t)
    if spec.startswith("ml:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise FormatError(f"ref: expected ml:ALPHA:RATE, got {spec!r}")
        alpha = float(as_scalar(parts[1]))
        rate = float(as_scalar(parts[2]))
        return spec, lambda t: mittag_leffler(alpha, rate * t ** alpha, terms=200).value
    if spec.startswith("file:"):
        series = PowerSeries.from_json(_load_json(spec[5:]))
        return spec, series.eval
    raise FormatError(
        f"ref: unknown reference {spec!r} "
        "(expected sin, exp:RATE, ml:ALPHA:RATE, file:PATH or adm-vim-ham)"
    )


def _cmd_compare(args) -> int:
    if (args.series is None) == (args.input is None):
        raise FormatError("compare needs exactly one of --series or --input")
    if args.series is not None:
        series = PowerSeries.from_json(_load_json(args.series))
    else:
        spec = sam.problem_from_json(_load_json(args.input))
        result = sam.solve(spec)
        if not result.stabilized:
            print(
                f"warning: not stabilized after {result.iterations} iterations",
                file=sys.stderr,
            )
        series = result.series
    _, ref = _reference(args.ref)
    ts = _grid(args, default=(0.0, 1.0, 0.01))
    _check_grid_domain(ts, series.alpha)
    lines = ["t,y,ref,abs_err"]
    max_err = 0.0
    for t in ts:
        y = float(series.eval(t))
        r = float(ref(t))
        err = abs(y - r)
        max_err = max(max_err, err)
        lines.append(f"{_fmt(t)},{_fmt(y)},{_fmt(r)},{_fmt(err)}")
    _write_text(args.csv, "\n".join(lines) + "\n")
    print(f"max_abs_err={_fmt(max_err)}")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prodelay",
        description="Series solutions and stability checks for proportional-delay equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the successive-approximation engine")
    p.add_argument("--input", required=True, help="problem JSON file")
    p.add_argument("--trunc", type=int, default=None, help="override truncation order")
    p.add_argument("--iters", type=int, default=None, help="override iteration cap")
    p.add_argument("--rect-t", default="1", help="rectangle t radius for the bounds report")
    p.add_argument("--rect-y", default="1", help="rectangle y radius for the bounds report")
    _add_output_flags(p)
    _add_grid_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("pantograph", help="closed-form pantograph series")
    p.add_argument("--a", required=True, help="coefficient of y(t); accepts p/q")
    p.add_argument("--b", required=True, help="coefficient of y(q t); accepts p/q")
    p.add_argument("--q", required=True, help="delay factor in (0,1); accepts p/q")
    p.add_argument("--alpha", default="1", help="derivative order in (0,1]")
    p.add_argument("--y0", default="1", help="initial value")
    p.add_argument("--terms", type=int, default=30, help="number of series coefficients")
    _add_output_flags(p)
    _add_grid_flags(p)
    p.set_defaults(func=_cmd_pantograph)

    p = sub.add_parser("ambartsumian", help="closed-form Ambartsumian series")
    p.add_argument("--q", required=True, help="delay parameter > 1; accepts p/q")
    p.add_argument("--alpha", default="1", help="derivative order in (0,1]")
    p.add_argument("--lambda", dest="lam", default="1", help="initial value")
    p.add_argument("--terms", type=int, default=30, help="number of series coefficients")
    _add_output_flags(p)
    _add_grid_flags(p)
    p.set_defaults(func=_cmd_ambartsumian)

    p = sub.add_parser("system", help="closed-form series for a linear system")
    p.add_argument("--matrix", required=True, help="system JSON file (A, B, lambda, q, alpha)")
    p.add_argument("--equation", choices=("pantograph", "ambartsumian"),
                   default="pantograph")
    p.add_argument("--terms", type=int, default=30)
    p.add_argument("--paper-literal", action="store_true",
                   help="keep the literal printed exponent orientation (diverges for q<1)")
    _add_output_flags(p)
    _add_grid_flags(p)
    p.set_defaults(func=_cmd_system)

    p = sub.add_parser("stability", help="stability predicates")
    p.add_argument("--a", required=True, help="df/dy at equilibrium")
    p.add_argument("--b", required=True, help="df/dyq at equilibrium")
    p.add_argument("--tau", default=None, help="frozen delay tau* = (1-q) t0")
    p.add_argument("--json", metavar="PATH", default=None, help="also write a JSON report")
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("compare", help="compare a series against a reference")
    p.add_argument("--series", default=None, help="series JSON file to evaluate")
    p.add_argument("--input", default=None, help="problem JSON file to solve first")
    p.add_argument("--ref", required=True,
                   help="sin | exp:RATE | ml:ALPHA:RATE | file:PATH | adm-vim-ham")
    p.add_argument("--csv", metavar="PATH", default=None,
                   help="write the error table here (default: stdout)")
    _add_grid_flags(p)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ProdelayError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
