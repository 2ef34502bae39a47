"""Command-line interface.

Exit codes: 0 pass, 1 usage or parse error, 2 verification failure or
non-convergence, 3 inputs not comparable (different gains).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .delay import energy_curve, verify_energy_delay
from .errors import (
    BoundaryDegenerateError,
    ConvergenceError,
    MinDelayError,
    NotComparableError,
)
from .io import FileFormatError, FilterFile, RunConfig, dumps_filter, read_config, read_filter
from .matrix import (
    factorization_residual,
    inner_quotient_matrix,
    outer_certificate,
    para_hermitian_product,
    spectral_factor_outer,
)
from .scalar import minimum_phase_equivalent, optimality_gap
from .sweep import run_sweep

EXIT_PASS, EXIT_USAGE, EXIT_FAIL, EXIT_NOT_COMPARABLE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _num(x: float) -> str:
    return f"{x:.17g}"


def _load(path, dim):
    try:
        ff = read_filter(path)
    except (OSError, FileFormatError) as exc:
        raise _Failure(EXIT_USAGE, f"cannot read {path}: {exc}") from exc
    if dim is not None and ff.dim != dim:
        raise _Failure(EXIT_USAGE, f"{path}: expected dim {dim}, file has dim {ff.dim}")
    return ff


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_minphase(args) -> int:
    ff = _load(args.input, args.dim)
    p = ff.to_poly()
    if ff.dim == 1:
        q = minimum_phase_equivalent(p)
        before, after = optimality_gap(p, args.grid), optimality_gap(q, args.grid)
        report = (
            f"input:  |f(0)| = {_num(before.lhs)}  exp(mean log|f*|) = {_num(before.rhs)}  outer = {before.is_outer}\n"
            f"output: |f(0)| = {_num(after.lhs)}  exp(mean log|f*|) = {_num(after.rhs)}  outer = {after.is_outer}\n"
        )
    else:
        S = para_hermitian_product(p, args.grid)
        try:
            q = spectral_factor_outer(S, p.degree)
        except BoundaryDegenerateError as exc:
            raise _Failure(EXIT_FAIL, f"degenerate density: {exc}") from exc
        except ConvergenceError as exc:
            raise _Failure(EXIT_FAIL, f"factorization did not converge: {exc}") from exc
        lhs, rhs = outer_certificate(q, S)
        report = (
            f"output: |det F(0)| = {_num(lhs)}  exp(mean log|det F*|) = {_num(rhs)}\n"
            f"residual: {_num(factorization_residual(q, S))}\n"
        )
    text = dumps_filter(FilterFile.from_poly(q, ff.label))
    if args.out is None:
        sys.stdout.write(text)
        sys.stderr.write(report)
    else:
        Path(args.out).write_text(text)
        sys.stdout.write(report)
    return EXIT_PASS


def _pair(args):
    f = _load(args.f, args.dim)
    g = _load(args.g, args.dim)
    if f.dim != g.dim:
        raise _Failure(EXIT_USAGE, f"dimensions differ: {f.dim} vs {g.dim}")
    return f.to_poly(), g.to_poly()


def cmd_verify(args) -> int:
    f, g = _pair(args)
    try:
        rep = verify_energy_delay(f, g, tol=args.tol, M=args.grid)
    except NotComparableError as exc:
        raise _Failure(EXIT_NOT_COMPARABLE, f"not comparable: {exc}") from exc
    rows = ["N,E_f,E_g,margin"]
    for n, (a, b, m) in enumerate(zip(rep.curve_f, rep.curve_g, rep.margins)):
        rows.append(f"{n},{_num(a)},{_num(b)},{_num(m)}")
    _emit("\n".join(rows) + "\n", args.out)
    sys.stderr.write(
        f"verdict: {rep.verdict}  min_margin = {_num(rep.min_margin)}  total_gap = {_num(rep.total_gap)}"
        f"  tol = {_num(rep.tol)}  f_is_outer = {rep.f_is_outer}\n"
    )
    if not rep.passed and rep.f_is_outer is False:
        sys.stderr.write("first filter is not outer: hypothesis violated, not a counterexample\n")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_quotient(args) -> int:
    f, g = _pair(args)
    try:
        cert = inner_quotient_matrix(f, g, args.grid)
    except NotComparableError as exc:
        raise _Failure(EXIT_NOT_COMPARABLE, f"not comparable: {exc}") from exc
    ok = cert.passes()
    sys.stdout.write(
        f"max_unitarity_defect,{_num(cert.max_unitarity_defect)}\n"
        f"analytic_defect,{_num(cert.analytic_defect)}\n"
        f"inner,{str(ok).lower()}\n"
    )
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_energy(args) -> int:
    p = _load(args.input, args.dim).to_poly()
    rows = ["N,E"] + [f"{n},{_num(e)}" for n, e in enumerate(energy_curve(p))]
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_PASS


def cmd_sweep(args) -> int:
    try:
        cfg = read_config(args.config) if args.config else RunConfig()
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.tol is not None:
            overrides["scalar_tol"] = overrides["matrix_tol"] = args.tol
        if args.grid is not None:
            overrides["grid_size"] = args.grid
        if args.dim:
            overrides["matrix_dims"] = args.dim
        if args.cases is not None:
            overrides["scalar_cases"] = overrides["matrix_cases"] = args.cases
        if args.out is not None:
            overrides["out"] = args.out
        cfg = RunConfig.from_dict({**cfg.to_dict(), **overrides})
    except (OSError, FileFormatError, TypeError) as exc:
        raise _Failure(EXIT_USAGE, f"bad configuration: {exc}") from exc
    summary = run_sweep(cfg)
    text = json.dumps(summary, indent=2, default=float) + "\n"
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(text)
    sys.stdout.write(text)
    ok = summary["passes"] == summary["cases"] and not summary["nonconverged"]
    return EXIT_PASS if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mindelay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, tol=False):
        p.add_argument("--grid", type=int, default=None, help="unit-circle grid size (power of two)")
        p.add_argument("--out", default=None, help="output path")
        if tol:
            p.add_argument("--tol", type=float, default=None, help="absolute energy tolerance")

    p = sub.add_parser("minphase", help="write the minimum-phase (outer) equivalent")
    p.add_argument("input")
    p.add_argument("--dim", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_minphase)

    for name, func, helptext in (
        ("verify", cmd_verify, "compare partial-energy curves of an equal-gain pair"),
        ("quotient", cmd_quotient, "certify that F^-1 G is inner"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("f")
        p.add_argument("g")
        p.add_argument("--dim", type=int, default=None)
        common(p, tol=name == "verify")
        p.set_defaults(func=func)

    p = sub.add_parser("energy", help="print the partial-energy curve")
    p.add_argument("input")
    p.add_argument("--dim", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("sweep", help="run seeded energy delay sweeps")
    p.add_argument("--config", default=None, help="JSON file with RunConfig fields")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cases", type=int, default=None, help="cases per sweep (scalar and matrix)")
    p.add_argument("--dim", type=int, action="append", default=None, help="matrix dimension (repeatable)")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--tol", type=float, default=None, help="relative tolerance for both sweeps")
    p.add_argument("--out", default=None, help="directory for summary.json")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "grid", None) is not None:
        g = args.grid
        if g < 2 or g & (g - 1):
            sys.stderr.write(f"mindelay: --grid must be a power of two, got {g}\n")
            return EXIT_USAGE
    try:
        return args.func(args)
    except _Failure as exc:
        sys.stderr.write(f"mindelay: {exc}\n")
        return exc.code
    except MinDelayError as exc:
        sys.stderr.write(f"mindelay: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
