"""Command-line front end.

Subcommands::

    exp-transform   extended Cauchy / exponential transform of a density
    elimination     elimination polynomial of a rational map and its reflection
    schwarz         Schwarz-function branches (ellipse or oval level family)
    classify        regime of a level of the oval family
    levelcurve      sampled level curve as CSV or JSON
    quadrature      quadrature-identity check
    verify-theorem  numerical check of the exponential-transform identity
    verify-disk     unit-disk closed forms in all four regimes

Complex numbers are written ``2.0+3.0i`` (``j`` also works, ``inf`` is the
point at infinity). Exit codes: 0 success, 2 invalid input, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import __version__, errors
from .cpoly import ComplexPoly
from .errors import NumericalError, QdtkError, ValidationError
from .neumann import (QUADRATURE_KINDS, EllipseParams, check_quadrature, classify, joukowski, levelcurve)
from .quad2d import QuadConfig
from .schwarz import ellipse_schwarz, neumann_rho, qalpha_branches, schwarz_value
from .sphere import INF, RationalMap, conjugate_map, elimination_Q
from .transforms import (Density, TransformPoint, disk_extended_closed_form, ellipse_density,
                         extended_cauchy_result)
from .neumann import neumann_density
from .verify import TheoremCase, verify_disk_closed_form, verify_many, verify_theorem

JSON_SCHEMA_VERSION = 1


def parse_complex(text: str) -> complex:
    """Parse ``2.0+3.0i``, ``-1.5i``, ``4`` or ``inf``."""
    s = text.strip().replace(" ", "").lower()
    if s in ("inf", "infinity", "oo"):
        return INF
    s = s.replace("i", "j")
    if s.endswith("j") and (s == "j" or s[-2] in "+-"):
        s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}") from None


def parse_coeffs(text: str) -> list[complex]:
    """Comma-separated complex coefficients, lowest degree first."""
    parts = [p for p in re.split(r"[,;]", text) if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty coefficient list")
    return [parse_complex(p) for p in parts]


def _c(v):
    if v is None:
        return None
    if v is INF:
        return "inf"
    v = complex(v)
    return [float(v.real), float(v.imag)]


_TEST_FUNCTIONS = ("one", "z", "z2", "pole", "pole2")


def sample_function(name: str, pole: complex):
    """The small menu of test functions accepted by ``quadrature``."""
    if name == "one":
        return lambda z: np.ones_like(np.asarray(z, dtype=complex))
    if name == "z":
        return lambda z: np.asarray(z, dtype=complex)
    if name == "z2":
        return lambda z: np.asarray(z, dtype=complex) ** 2
    if name == "pole":
        return lambda z: 1.0 / (np.asarray(z, dtype=complex) - pole)
    if name == "pole2":
        return lambda z: 1.0 / (np.asarray(z, dtype=complex) - pole) ** 2
    raise ValidationError(f"unknown test function {name!r}")


# ---------------------------------------------------------------- density / generator selection


def _density(args) -> Density:
    kind = args.density
    if kind == "disk":
        return Density.disk(args.center, args.radius)
    if kind == "plane":
        return Density.whole_plane()
    if kind == "ellipse":
        return ellipse_density(args.a, args.b, args.inside, args.outside)
    if kind == "neumann":
        return neumann_density(args.r, args.alpha, args.circle)
    raise ValidationError(f"unknown density {kind!r}")


def _rational_map(args) -> RationalMap:
    if args.map == "identity":
        return RationalMap.identity()
    if args.map == "joukowski":
        return joukowski(EllipseParams(args.a, args.b))
    if args.num is None:
        raise ValidationError("--map custom needs --num (and optionally --den)")
    return RationalMap(ComplexPoly(args.num), ComplexPoly(args.den or [1.0]))


# ---------------------------------------------------------------- subcommands


def cmd_exp_transform(args) -> dict:
    pts = TransformPoint(args.z, args.w, args.pa, args.pb)
    rho = _density(args)
    res = extended_cauchy_result(rho, pts, args.tol, _config(args))
    out = {
        "density": args.density,
        "points": [_c(p) for p in pts.as_tuple()],
        "cauchy": _c(res.value),
        "exponential": _c(np.exp(res.value)),
        "error_estimate": res.error_estimate,
        "cells_used": res.cells_used,
    }
    finite = all(p is not INF for p in pts.as_tuple())
    if args.density == "disk" and args.center == 0 and args.radius == 1 and finite:
        out["closed_form"] = _c(disk_extended_closed_form(*pts.as_tuple()))
    return out


def cmd_elimination(args) -> dict:
    f = _rational_map(args)
    g = conjugate_map(f) if args.g_num is None else RationalMap(ComplexPoly(args.g_num), ComplexPoly(args.g_den or [1.0]))
    el = elimination_Q(f, g)
    out = {
        "Q": [[_c(v) for v in row] for row in el.Q.coeffs],
        "Q_layout": "Q[i][j] multiplies z^i w^j",
        "P": [_c(v) for v in el.P.coeffs],
        "R": [_c(v) for v in el.R.coeffs],
        "determinate": el.determinate,
    }
    if args.z is not None and args.w is not None:
        out["value"] = _c(el(args.z, args.w))
    return out


def cmd_schwarz(args) -> dict:
    z = args.z
    if args.family == "ellipse":
        vals = [ellipse_schwarz(args.a, args.b, z, s) for s in (1, -1)]
        return {"family": "ellipse", "z": _c(z), "branches": {"plus": _c(vals[0]), "minus": _c(vals[1])}}
    br = qalpha_branches(args.r, args.alpha, z)
    out = {"family": "qalpha", "z": _c(z), "branches": {"plus": _c(br.plus), "minus": _c(br.minus)},
           "branch_points": [_c(p) for p in br.branch_points.roots]}
    try:
        rho = neumann_rho(args.r, args.alpha, z, args.circle)
    except ValidationError as exc:
        out["rho"] = None
        out["note"] = str(exc)
        return out
    out["rho"] = rho
    if rho == 1:
        out["selected"] = _c(schwarz_value(args.r, args.alpha, z, args.circle))
    return out


def cmd_classify(args) -> dict:
    rep = classify(args.r, args.alpha).to_json()
    if args.components:
        try:
            rep["traced_components"] = levelcurve(args.r, args.alpha, 200).component_count
        except QdtkError:
            rep["traced_components"] = 0
    return rep


def cmd_levelcurve(args):
    sample = levelcurve(args.r, args.alpha, args.n)
    if args.format == "csv":
        return sample.to_csv()
    return sample.to_json()


def cmd_quadrature(args) -> dict:
    h = sample_function(args.h, args.pole)
    params = EllipseParams(args.a, args.b) if args.kind != "twopoint" else None
    chk = check_quadrature(args.kind, h, r=args.r, params=params, domain=args.domain, tol=args.tol,
                           config=_config(args))
    return {"kind": args.kind, "h": args.h, "lhs": _c(chk.lhs), "rhs": _c(chk.rhs), "defect": chk.defect,
            "error_estimate": chk.error_estimate}


def _case_from(entry: dict, tol: float) -> TheoremCase:
    pts = [parse_complex(entry[k]) if isinstance(entry[k], str) else complex(entry[k]) for k in ("z", "w", "a", "b")]
    fam = entry.get("family", "disk")
    if fam == "disk":
        return TheoremCase.disk(*pts, tol=tol)
    if fam == "joukowski":
        p = EllipseParams(float(entry.get("ea", 2.0)), float(entry.get("eb", 1.0)))
        return TheoremCase.joukowski(p, *pts, domain=entry.get("domain", "exterior"), tol=tol)
    if fam == "neumann":
        return TheoremCase.neumann(float(entry["r"]), float(entry["alpha"]), *pts, circle=int(entry.get("circle", 1)),
                                   tol=tol)
    raise ValidationError(f"unknown family {fam!r}")


def _report(rep, timings: bool) -> dict:
    d = rep.to_json()
    if not timings:
        d.pop("timings", None)
    return d


def cmd_verify_theorem(args):
    if args.cases:
        with open(args.cases) as fh:
            entries = json.load(fh)
        cases = [_case_from(s, args.tol) for s in entries]
    else:
        entry = {"family": args.family, "z": args.z, "w": args.w, "a": args.pa, "b": args.pb,
                "ea": args.a, "eb": args.b, "domain": args.domain, "r": args.r, "alpha": args.alpha,
                "circle": args.circle}
        if any(entry[k] is None for k in "zwab"):
            raise ValidationError("verify-theorem needs --z, --w, --pa and --pb (or --cases)")
        cases = [_case_from(entry, args.tol)]
    cfg = _config(args)
    if len(cases) == 1:
        reports = [verify_theorem(cases[0], cfg, pullback=not args.no_pullback)]
    else:
        reports = verify_many(cases, 1 if args.serial else None, cfg)
    out = [_report(r, args.timings) for r in reports]
    return out if args.cases else out[0]


def cmd_verify_disk(args) -> dict:
    rep = verify_disk_closed_form(args.tol, _config(args))
    return _report(rep, args.timings)


# ---------------------------------------------------------------- argument parsing


def _config(args) -> QuadConfig | None:
    if getattr(args, "max_cells", None):
        return QuadConfig(max_cells=args.max_cells)
    return None


def _add_points(p, required=True):
    p.add_argument("--z", type=parse_complex, required=required)
    p.add_argument("--w", type=parse_complex, required=required)
    p.add_argument("--pa", type=parse_complex, default=INF if required else None, help="point a (default inf)")
    p.add_argument("--pb", type=parse_complex, default=INF if required else None, help="point b (default inf)")


def _add_common(p, tol):
    p.add_argument("--tol", type=float, default=tol)
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.add_argument("--max-cells", type=int, help="integration budget (overrides QDTK_MAX_CELLS)")
    p.add_argument("--serial", action="store_true", help="single-threaded, deterministic order")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in reports")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdtk", description="Exponential transforms of multi-sheeted algebraic domains.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exp-transform", help="extended exponential transform of a density")
    _add_points(p)
    p.add_argument("--density", choices=("disk", "plane", "ellipse", "neumann"), default="disk")
    p.add_argument("--center", type=parse_complex, default=0j)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--a", type=float, default=2.0, help="ellipse semi-axis")
    p.add_argument("--b", type=float, default=1.0, help="ellipse semi-axis")
    p.add_argument("--inside", type=int, default=2)
    p.add_argument("--outside", type=int, default=1)
    p.add_argument("--r", type=float, default=math.sqrt(2))
    p.add_argument("--alpha", type=float, default=-0.5)
    p.add_argument("--circle", type=int, choices=(1, -1), default=1)
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_exp_transform)

    p = sub.add_parser("elimination", help="elimination polynomial of (f, f*) or (f, g)")
    p.add_argument("--map", choices=("identity", "joukowski", "custom"), default="identity")
    p.add_argument("--num", type=parse_coeffs, help="numerator coefficients, lowest degree first")
    p.add_argument("--den", type=parse_coeffs)
    p.add_argument("--g-num", type=parse_coeffs, help="second map (default: the reflection f*)")
    p.add_argument("--g-den", type=parse_coeffs)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--z", type=parse_complex)
    p.add_argument("--w", type=parse_complex)
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_elimination)

    p = sub.add_parser("schwarz", help="Schwarz-function branches")
    p.add_argument("--family", choices=("ellipse", "qalpha"), default="qalpha")
    p.add_argument("--z", type=parse_complex, required=True)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--r", type=float, default=math.sqrt(2))
    p.add_argument("--alpha", type=float, default=-0.5)
    p.add_argument("--circle", type=int, choices=(1, -1), default=1)
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_schwarz)

    p = sub.add_parser("classify", help="regime of a level of the oval family")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--components", action="store_true", help="also trace the level curve and count components")
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("levelcurve", help="sample the level curve Q(z, zbar) = alpha")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_levelcurve)

    p = sub.add_parser("quadrature", help="check a quadrature identity")
    p.add_argument("--kind", choices=QUADRATURE_KINDS, required=True)
    p.add_argument("--h", choices=_TEST_FUNCTIONS, default="one")
    p.add_argument("--pole", type=parse_complex, default=3 + 0j, help="pole of the 'pole'/'pole2' test functions")
    p.add_argument("--r", type=float, default=math.sqrt(2))
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--domain", choices=("disk", "exterior"), default="exterior")
    _add_common(p, 1e-10)
    p.set_defaults(func=cmd_quadrature)

    p = sub.add_parser("verify-theorem", help="compare both sides of the transform identity")
    p.add_argument("--family", choices=("disk", "joukowski", "neumann"), default="disk")
    _add_points(p, required=False)
    p.add_argument("--a", type=float, default=2.0, help="ellipse semi-axis (joukowski)")
    p.add_argument("--b", type=float, default=1.0, help="ellipse semi-axis (joukowski)")
    p.add_argument("--domain", choices=("disk", "exterior"), default="exterior")
    p.add_argument("--r", type=float, default=math.sqrt(2))
    p.add_argument("--alpha", type=float, default=-0.5)
    p.add_argument("--circle", type=int, choices=(1, -1), default=1)
    p.add_argument("--cases", help="JSON file with a list of case objects")
    p.add_argument("--no-pullback", action="store_true", help="skip the parameter-plane integral")
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("verify-disk", help="unit-disk closed forms")
    _add_common(p, 1e-11)
    p.set_defaults(func=cmd_verify_disk)
    return ap


def _emit(result, args):
    if isinstance(result, str):
        text = result
    else:
        body = {"schema_version": JSON_SCHEMA_VERSION, "command": args.command, "result": result}
        text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except NumericalError as exc:
        print(f"qdtk: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ValueError, OSError, KeyError) as exc:
        print(f"qdtk: invalid input: {exc}", file=sys.stderr)
        return 2
    _emit(result, args)
    return _report_exit_code(result)


def _report_exit_code(result) -> int:
    """Reports are emitted even when a step failed; the first recorded error sets the exit code."""
    reps = result if isinstance(result, list) else [result]
    for r in reps:
        if not isinstance(r, dict):
            continue
        for e in r.get("errors", []):
            name = e.split(":")[1].strip() if e.count(":") >= 2 else ""
            cls = getattr(errors, name, None)
            if isinstance(cls, type) and issubclass(cls, NumericalError):
                return 3
            return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
