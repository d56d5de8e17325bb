"""Command-line entry point: ``frenet4 {analyze,reconstruct,synthesize,check}``.

Exit status: 0 success, 1 battery disagreement (``check`` only), 2 input,
I/O or format problems, 3 numerical preconditions violated (vanishing
curvature, too coarse a grid, square root of a negative number).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from .battery import DEFAULT_H, DEFAULT_N, build_battery, evaluate_apparatus, format_report, run_battery
from .curve_core import CurveSample, apparatus_stride, frenet_apparatus, wcurve_points
from .errors import (
    CurvatureVanishes,
    Frenet4Error,
    ParamOutOfRange,
    ProfileTooCoarse,
    SquareRootDomain,
    UnknownFamily,
)
from .frenet_ode import builtin_profile, reconstruct_curve, scalar_family
from .quadrature import SampledFunction
from .slant_helix import (
    TOL_AXIS,
    TOL_CONST,
    TOL_RES,
    Verdict,
    b2_slant_invariant,
    coefficients,
    constancy_residual,
    cylindrical_helix_invariant,
    synthesize_slant_profile,
)

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Frenet4Error):
    pass


def parse_family(text: str) -> tuple[str, list[float]]:
    """``name:p1,p2,...`` -> (name, [p1, p2, ...])."""
    name, _, rest = text.partition(":")
    try:
        params = [float(x) for x in rest.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad parameter list in {text!r}") from exc
    return name.strip(), params


def _floats(text: str, count: int, what: str) -> np.ndarray:
    try:
        values = np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"{what}: expected {count} comma-separated numbers") from exc
    if values.size != count:
        raise UsageError(f"{what}: expected {count} numbers, got {values.size}")
    return values


def _grid(args):
    return args.s0, args.h, args.n


def _wants(args, kind):
    return args.format in ("all", kind)


def _tolerances(args):
    return dict(tol_const=args.tol_const, tol_res=args.tol_res, tol_axis=args.tol_axis,
                kappa_min=args.kappa_min)


# ---------------------------------------------------------------------------


def builtin_curve(text: str, grid) -> CurveSample:
    name, params = parse_family(text)
    s0, h, n = grid
    if name != "wcurve":
        raise UnknownFamily(f"unknown builtin curve {name!r} (available: wcurve)")
    if len(params) != 4 or min(params) <= 0:
        raise ParamOutOfRange("wcurve takes four positive numbers a,p,b,q")
    a, p, b, q = params
    # common rescaling of the radii makes the curve unit speed
    scale = 1.0 / np.sqrt(a * a * p * p + b * b * q * q)
    s = s0 + h * np.arange(n)
    return CurveSample(s0, h, wcurve_points(a * scale, p, b * scale, q, s))


def cmd_analyze(args) -> int:
    if (args.input is None) == (args.builtin is None):
        raise UsageError("analyze needs exactly one of a curve CSV or --builtin")
    curve = fio.load_curve(args.input) if args.input else builtin_curve(args.builtin, _grid(args))
    app = frenet_apparatus(curve, kappa_min=args.kappa_min)
    stride = apparatus_stride(curve.h, curve.n)
    coarse = app.decimate(stride)
    tol = _tolerances(args)
    diag, fc, ic = evaluate_apparatus(coarse, **tol)
    res, scale = constancy_residual(coarse, diag.c0, args.kappa_min)
    cyl = cylindrical_helix_invariant(coarse, args.kappa_min)
    b2 = b2_slant_invariant(coarse, args.kappa_min)
    out = Path(args.out)

    document = {
        "input": args.input or f"builtin {args.builtin}",
        "grid": {"s0": curve.s0, "h": curve.h, "n": curve.n},
        "analysis_grid": {"s0": coarse.s0, "h": coarse.h, "n": coarse.n, "stride": stride},
        "tolerances": tol,
        "verdicts": {
            "detect_slant": str(diag.verdict),
            "f_function_check": str(Verdict.SLANT if fc.passed else Verdict.NOT_SLANT),
            "integral_characterization_check":
                str(Verdict.SLANT if ic.passed else Verdict.NOT_SLANT),
        },
        "verdict": str(diag.verdict),
        "theta": diag.theta,
        "tan2_theta": float(np.tan(diag.theta) ** 2),
        "c0": diag.c0,
        "axis": diag.axisU,
        "axis_spread": diag.axis_spread,
        "invariant": {"mean": diag.constancy.mean, "std": diag.constancy.std,
                      "max_dev": diag.constancy.max_dev},
        "f_check": {"max_residual": float(np.max(np.abs(fc.residual.values)))},
        "integral_check": {"A": ic.A, "B": ic.B, "std_m": float(np.std(ic.m.values)),
                           "std_n": float(np.std(ic.n.values)),
                           "max_residual": float(np.max(np.abs(ic.residual.values)))},
        "residual_scaled": float(np.max(np.abs(res.values)) / scale),
        "cylindrical_helix_invariant": {"mean": float(np.mean(cyl.values)),
                                        "std": float(np.std(cyl.values))},
        "b2_slant_invariant": {"mean": float(np.mean(b2.values)),
                               "std": float(np.std(b2.values))},
    }
    if _wants(args, "text"):
        fio.write_json(out / "diagnostics.json", document)
    if _wants(args, "csv"):
        fio.write_apparatus_csv(out / "apparatus.csv", app)
        columns = [diag.invariant.s, diag.invariant.values, fc.f.values, ic.m.values, ic.n.values]
        header = ["s", "C", "f", "m", "n"]
        if 0.0 < diag.theta < np.pi / 2:
            co = coefficients(coarse, diag.theta, diag.c0, args.kappa_min)
            columns += [co.a1.values, co.a2.values, co.a3.values, co.a4.values]
            header += ["a1", "a2", "a3", "a4"]
        fio.write_table(out / "series.csv", header, columns)
        fio.write_table(out / "companions.csv", ["s", "cylindrical", "b2slant"],
                        [cyl.s, cyl.values, b2.values])
    print(f"verdict: {diag.verdict}  theta = {diag.theta:.10g}  "
          f"std(C) = {diag.constancy.std:.3e}  axis spread = {diag.axis_spread:.3e}")
    return EXIT_OK


def _profile_from_args(args):
    if (args.input is None) == (args.builtin is None):
        raise UsageError("need exactly one of a profile CSV or --builtin")
    if args.input:
        return fio.read_profile_csv(args.input)
    name, params = parse_family(args.builtin)
    return builtin_profile(name, params, _grid(args))


def cmd_reconstruct(args) -> int:
    profile = _profile_from_args(args)
    frame0 = _floats(args.frame0, 16, "--frame0").reshape(4, 4) if args.frame0 else None
    p0 = _floats(args.p0, 4, "--p0") if args.p0 else None
    result = reconstruct_curve(profile, frame0, p0, kappa_min=args.kappa_min)
    out = Path(args.out)
    if _wants(args, "csv"):
        fio.write_curve_csv(out / "curve.csv", result.curve)
        fio.write_apparatus_csv(out / "apparatus.csv", result.apparatus)
    if _wants(args, "text"):
        fio.write_json(out / "reconstruct.json", {
            "grid": {"s0": profile.s0, "h": profile.h, "n": profile.n},
            "family": profile.family,
            "drift": result.drift,
            "step_defect": result.step_defect,
            "end_point": result.curve.points[-1],
        })
    print(f"drift = {result.drift:.3e}  step defect = {result.step_defect:.3e}")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    s0, h, n = _grid(args)
    s = s0 + h * np.arange(n)
    fams = {}
    for key in ("kappa2", "kappa3"):
        name, params = parse_family(getattr(args, key))
        fams[key] = (name, params)
    k2 = SampledFunction(s0, h, scalar_family(*fams["kappa2"], s))
    k3 = SampledFunction(s0, h, scalar_family(*fams["kappa3"], s))
    profile, record = synthesize_slant_profile(k2, k3, args.A, args.B, args.D)
    out = Path(args.out)
    if _wants(args, "csv"):
        fio.write_profile_csv(out / "profile.csv", profile)
    if _wants(args, "text"):
        fio.write_json(out / "provenance.json", {
            "kappa2": args.kappa2, "kappa3": args.kappa3,
            "grid": {"s0": s0, "h": h, "n": n},
            "A": record.A, "B": record.B, "D": record.D,
            "c_bar": record.c_bar, "C": record.C, "theta": record.theta,
        })
    print(f"C = {record.C:.12g}  theta = {record.theta:.12g}  c_bar = {record.c_bar:.12g}")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.slant < 0 or args.nonslant < 0:
        raise UsageError("battery sizes must be non-negative")
    if args.slant + args.nonslant == 0:
        print("empty battery", file=sys.stderr)
        return EXIT_INPUT
    items = build_battery(args.slant, args.nonslant, seed=args.seed, h=args.h, n=args.n,
                          s0=args.s0)
    results = run_battery(items, **_tolerances(args))
    report = format_report(results)
    out = Path(args.out)
    if _wants(args, "text"):
        fio.atomic_write_text(out / "check.txt", report + "\n")
        fio.write_json(out / "check.json", {
            "seed": args.seed,
            "grid": {"s0": args.s0, "h": args.h, "n": args.n},
            "tolerances": _tolerances(args),
            "agreement": sum(r.agree for r in results),
            "total": len(results),
            "items": [{
                "name": r.item.name,
                "expected": str(r.expected),
                "detect_slant": str(r.detect),
                "f_function_check": str(r.f_check),
                "integral_characterization_check": str(r.integral_check),
                "std_C": r.diagnostics.constancy.std,
                "mean_C": r.diagnostics.constancy.mean,
                "theta": r.diagnostics.theta,
                "residual_scaled": r.residual_scaled,
                "agree": r.agree,
            } for r in results],
        })
    if _wants(args, "csv"):
        fio.atomic_write_text(out / "check.csv", "name,expected,detect,f_check,integral,agree\n" + "".join(
            f"{r.item.name},{r.expected},{r.detect},{r.f_check},{r.integral_check},{int(r.agree)}\n"
            for r in results))
    print(report)
    return EXIT_OK if all(r.agree for r in results) else EXIT_DISAGREE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s0", type=float, default=0.0, help="grid origin")
    common.add_argument("--h", type=float, default=DEFAULT_H, help="grid step")
    common.add_argument("--n", type=int, default=DEFAULT_N, help="number of samples")
    common.add_argument("--tol-const", type=float, default=TOL_CONST)
    common.add_argument("--tol-res", type=float, default=TOL_RES)
    common.add_argument("--tol-axis", type=float, default=TOL_AXIS)
    common.add_argument("--kappa-min", type=float, default=None,
                        help="curvature floor (default 1e-8/h)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--format", choices=("all", "csv", "text"), default="all")

    parser = argparse.ArgumentParser(prog="frenet4", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="frame, curvatures and slant tests of a curve")
    p.add_argument("input", nargs="?", help="curve CSV (s,x,y,z,w)")
    p.add_argument("--builtin", help="builtin curve, e.g. wcurve:a,p,b,q")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reconstruct", parents=[common], help="integrate a curvature profile")
    p.add_argument("input", nargs="?", help="profile CSV (s,k1,k2,k3)")
    p.add_argument("--builtin", help="builtin profile, e.g. constant:1,1,1")
    p.add_argument("--frame0", help="16 numbers: rows T,N,B1,B2 of the initial frame")
    p.add_argument("--p0", help="4 numbers: initial point")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("synthesize", parents=[common], help="build a slant-helix profile")
    p.add_argument("--kappa2", required=True, help="const:c or sine:m,a,w[,phase]")
    p.add_argument("--kappa3", required=True, help="const:c or sine:m,a,w[,phase]")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--D", type=float, required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("check", parents=[common], help="three-way equivalence battery")
    p.add_argument("--slant", type=int, default=20, help="number of slant profiles")
    p.add_argument("--nonslant", type=int, default=20, help="number of non-slant profiles")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CurvatureVanishes as exc:
        print(f"error: {exc} (sample index {exc.sample})", file=sys.stderr)
        return EXIT_NUMERIC
    except SquareRootDomain as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ProfileTooCoarse as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (Frenet4Error, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
