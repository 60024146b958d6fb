"""Command-line front end.

Subcommands: validate, dim, czeros, tube, scan, selftest.  All numeric
output uses 17 significant digits so values round-trip exactly.  Exit
codes: 0 success, 2 configuration/validation/domain error, 3 numerical
non-convergence, 4 resource guard (selftest failures exit 1).
"""

from __future__ import annotations

import argparse
import math
import sys

from . import presets
from .complexdims import find_complex_dimensions
from .direct import direct_tube_volume
from .errors import ConfigError, SprayValidationError, TubeforgeError
from .model import load_spray, validate_spray
from .moran import similarity_dimension
from .tubeformula import (
    compare,
    inverse_mellin_numeric,
    tube_volume_residues,
    window_for_pairs,
)

CSV_HEADER = "# tubeforge-csv v1"
CSV_COLUMNS = "epsilon,direct,residues,abs_err,rel_err,pairs_used,im_leakage"


def fmt(x: float) -> str:
    """Full round-trip decimal formatting (17 significant digits)."""
    return f"{x:.17g}"


def _json_render(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        body = ",\n".join(
            f'{pad}  "{k}": {_json_render(v, indent + 1).lstrip()}'
            for k, v in obj.items()
        )
        return f"{pad}{{\n{body}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return f"{pad}[]"
        body = ",\n".join(_json_render(v, indent + 1) for v in obj)
        return f"{pad}[\n{body}\n{pad}]"
    if isinstance(obj, bool):
        return pad + ("true" if obj else "false")
    if isinstance(obj, float):
        if math.isnan(obj):
            return pad + "NaN"
        return pad + fmt(obj)
    if isinstance(obj, int):
        return pad + str(obj)
    escaped = str(obj).replace("\\", "\\\\").replace('"', '\\"')
    return f'{pad}"{escaped}"'


def _emit(text: str, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_validated(args):
    model = load_spray(args.config)
    if not getattr(args, "skip_validation", False):
        report = validate_spray(
            model, check_monotonic=not getattr(args, "skip_monotonicity", False)
        )
        if not report.ok:
            raise SprayValidationError("; ".join(report.failures))
    return model


def _parse_grid(spec: str):
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(
            f"grid must be start:stop:count[:linear|log], got {spec!r}"
        )
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {spec!r}: {exc}") from exc
    spacing = parts[3] if len(parts) == 4 else "linear"
    if spacing not in ("linear", "log"):
        raise ConfigError(f"grid spacing must be 'linear' or 'log', got {spacing!r}")
    if count < 1:
        raise ConfigError("grid count must be at least 1")
    if not (start > 0.0 and stop > 0.0):
        raise ConfigError("grid endpoints must be strictly positive")
    if count == 1:
        return [start]
    if spacing == "linear":
        step = (stop - start) / (count - 1)
        return [start + k * step for k in range(count)]
    lo, hi = math.log(start), math.log(stop)
    step = (hi - lo) / (count - 1)
    grid = [math.exp(lo + k * step) for k in range(count)]
    # Endpoints exact despite log/exp round-trip.
    grid[0], grid[-1] = start, stop
    return grid


def _cmd_validate(args) -> int:
    model = load_spray(args.config)
    report = validate_spray(model, check_monotonic=not args.skip_monotonicity)
    if report.ok:
        print("PASS: all spray invariants hold")
        return 0
    for failure in report.failures:
        print(f"FAIL: {failure}")
    return 2


def _cmd_dim(args) -> int:
    model = _load_validated(args)
    dim = similarity_dimension(model.ratios)
    print(f"D {fmt(dim.value)}")
    print(f"residual {fmt(dim.residual)}")
    return 0


def _cmd_czeros(args) -> int:
    model = _load_validated(args)
    zeros = find_complex_dimensions(model, args.T, re_floor=args.re_floor)
    records = [
        {
            "re": z.omega.real,
            "im": z.omega.imag,
            "multiplicity": z.multiplicity,
            "residual": z.residual,
        }
        for z in zeros
    ]
    _emit(_json_render(records) + "\n", args.output)
    return 0


def _cmd_tube(args) -> int:
    model = _load_validated(args)
    lines = []
    if args.method in ("direct", "both"):
        lines.append(f"direct {fmt(direct_tube_volume(model, args.eps))}")
    if args.method in ("residues", "both"):
        window = args.T if args.T is not None else window_for_pairs(
            model.ratios, args.pairs
        )
        ev = tube_volume_residues(model, args.eps, args.pairs, window)
        lines.append(f"residues {fmt(ev.residue_value)}")
        if args.method == "both":
            lines.append(f"abs_err {fmt(ev.abs_error)}")
            lines.append(f"rel_err {fmt(ev.rel_error)}")
    if args.method == "invmellin":
        half = args.T if args.T is not None else 200.0
        value = inverse_mellin_numeric(model, args.eps, c=args.c, half_length=half)
        lines.append(f"invmellin {fmt(value)}")
    _emit("".join(line + "\n" for line in lines), args.output)
    return 0


def _cmd_scan(args) -> int:
    model = _load_validated(args)
    grid = _parse_grid(args.grid)
    window = args.T if args.T is not None else window_for_pairs(
        model.ratios, args.pairs
    )
    entries = compare(model, grid, args.pairs, window)
    if args.format == "json":
        records = [
            {
                "epsilon": e.eps,
                "direct": e.direct,
                "residues": e.residues,
                "abs_err": e.abs_error,
                "rel_err": e.rel_error,
                "pairs_used": e.pairs_used,
                "im_leakage": e.imag_leakage,
                "error": e.error,
            }
            for e in entries
        ]
        _emit(_json_render(records) + "\n", args.output)
        return 0
    rows = [CSV_HEADER, CSV_COLUMNS]
    for e in entries:
        rows.append(
            ",".join(
                [
                    fmt(e.eps),
                    fmt(e.direct),
                    fmt(e.residues),
                    fmt(e.abs_error),
                    fmt(e.rel_error),
                    str(e.pairs_used),
                    fmt(e.imag_leakage),
                ]
            )
        )
    _emit("".join(r + "\n" for r in rows), args.output)
    return 0


def _selftest_checks():
    """(name, callable) pairs; each callable returns (ok, detail)."""
    cantor = presets.cantor_spray()
    square = presets.square_spray()

    def moran_cantor():
        d = similarity_dimension(cantor.ratios).value
        ref = math.log(2.0) / math.log(3.0)
        return abs(d - ref) < 1e-10, f"D {fmt(d)} vs {fmt(ref)}"

    def moran_golden():
        from .model import RatioList

        d = similarity_dimension(RatioList([0.5, 0.25])).value
        ref = math.log2((1.0 + math.sqrt(5.0)) / 2.0)
        return abs(d - ref) < 1e-10, f"D {fmt(d)} vs {fmt(ref)}"

    def lattice_cantor():
        zeros = find_complex_dimensions(cantor, 30.0)
        if len(zeros) != 11:
            return False, f"expected 11 zeros, got {len(zeros)}"
        ref_d = math.log(2.0) / math.log(3.0)
        period = 2.0 * math.pi / math.log(3.0)
        worst = max(
            abs(z.omega - complex(ref_d, k * period))
            for z, k in zip(zeros, range(-5, 6))
        )
        return worst < 1e-9, f"worst deviation {fmt(worst)}"

    def constant_regime():
        worst = 0.0
        for model, total in ((cantor, 1.0), (square, 144.0 / 83.0)):
            g = model.generator.inradius
            for eps in (g, 2.0 * g, 10.0 * g):
                worst = max(worst, abs(direct_tube_volume(model, eps) / total - 1.0))
        return worst < 1e-12, f"worst relative deviation {fmt(worst)}"

    def functional_equation():
        from .direct import functional_equation_residual

        import numpy as np

        rng = np.random.default_rng(20260826)
        worst = 0.0
        for model in (cantor, square):
            g = model.generator.inradius
            for eps in rng.uniform(1e-3 * g, 10.0 * g, size=20):
                res = functional_equation_residual(model, float(eps))
                worst = max(worst, abs(res) / direct_tube_volume(model, float(eps)))
        return worst < 1e-12, f"worst relative residual {fmt(worst)}"

    def residue_cantor():
        window = window_for_pairs(cantor.ratios, 500)
        zeros = find_complex_dimensions(cantor, window)
        worst = 0.0
        for eps in (0.1, 1.0 / 18.0):
            ev = tube_volume_residues(cantor, eps, 500, window, zeros=zeros)
            worst = max(worst, ev.abs_error, ev.imag_leakage)
        return worst < 1e-3, f"worst error {fmt(worst)}"

    def czeros_nonlattice():
        from .complexdims import count_zeros_rectangle, zero_free_abscissa
        from .model import RatioList
        from .moran import similarity_dimension as simdim

        ratios = RatioList([0.5, 1.0 / 3.0])
        model_ratios = ratios
        from .model import MonophaseGenerator, SprayModel

        model = SprayModel(model_ratios, MonophaseGenerator(1, [2.0], 0.5, 1.0))
        zeros = find_complex_dimensions(model, 20.0)
        sigma = zero_free_abscissa(ratios)
        right = simdim(ratios).value + 0.5
        total = count_zeros_rectangle(ratios, (sigma, right, -20.0, 20.0))
        mult = sum(z.multiplicity for z in zeros)
        worst = max(z.residual for z in zeros)
        ok = mult == total and worst < 1e-10
        return ok, f"count {mult} vs winding {total}, worst residual {fmt(worst)}"

    def residue_square():
        window = window_for_pairs(square.ratios, 20)
        eps = square.generator.inradius / 2.0
        ev = tube_volume_residues(square, eps, 20, window)
        return ev.rel_error < 5e-2, f"relative error {fmt(ev.rel_error)}"

    def invmellin_cantor():
        value = inverse_mellin_numeric(cantor, 0.1)
        direct = direct_tube_volume(cantor, 0.1)
        err = abs(value - direct)
        return err < 1e-2, f"|invmellin - direct| {fmt(err)}"

    return [
        ("moran-cantor", moran_cantor),
        ("moran-golden", moran_golden),
        ("lattice-zeros-cantor", lattice_cantor),
        ("constant-regime", constant_regime),
        ("functional-equation", functional_equation),
        ("residue-sum-cantor", residue_cantor),
        ("czeros-nonlattice", czeros_nonlattice),
        ("residue-sum-square", residue_square),
        ("inverse-mellin-cantor", invmellin_cantor),
    ]


def _cmd_selftest(_args) -> int:
    checks = _selftest_checks()
    passed = 0
    for name, check in checks:
        try:
            ok, detail = check()
        except TubeforgeError as exc:
            ok, detail = False, f"error: {exc}"
        if ok:
            passed += 1
            print(f"PASS {name}: {detail}")
        else:
            print(f"FAIL {name}: {detail}")
    print(f"selftest: {passed}/{len(checks)} passed")
    return 0 if passed == len(checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubeforge",
        description="Inner tube volumes of self-similar sprays: exact direct "
        "evaluation and the residue-sum tube formula over complex dimensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("config", help="spray configuration JSON file")
        p.add_argument("--skip-validation", action="store_true",
                       help="skip the standing-assumption checks")
        p.add_argument("--skip-monotonicity", action="store_true",
                       help="skip the tube-polynomial monotonicity spot check")
        p.add_argument("--output", "-o", default=None, help="write output to file")

    p = sub.add_parser("validate", help="check every spray invariant")
    p.add_argument("config")
    p.add_argument("--skip-monotonicity", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("dim", help="similarity dimension from the Moran equation")
    add_model_flags(p)
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser("czeros", help="complex dimensions in a window")
    add_model_flags(p)
    p.add_argument("--T", type=float, required=True,
                   help="imaginary window half-height")
    p.add_argument("--re-floor", type=float, default=None,
                   help="override the left search boundary")
    p.set_defaults(func=_cmd_czeros)

    p = sub.add_parser("tube", help="tube volume at one eps")
    add_model_flags(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--method", required=True,
                   choices=["direct", "residues", "both", "invmellin"])
    p.add_argument("--pairs", type=int, default=100,
                   help="conjugate pairs in the residue truncation")
    p.add_argument("--T", type=float, default=None,
                   help="imaginary window (residues) or integral half-length "
                        "(invmellin)")
    p.add_argument("--c", type=float, default=None,
                   help="inversion abscissa, default midpoint of (D, n)")
    p.set_defaults(func=_cmd_tube)

    p = sub.add_parser("scan", help="direct-vs-residues table over an eps grid")
    add_model_flags(p)
    p.add_argument("--grid", required=True,
                   help="start:stop:count[:linear|log]")
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("selftest", help="built-in acceptance suite")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TubeforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
