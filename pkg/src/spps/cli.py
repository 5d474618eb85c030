"""Command-line front end.

Commands
    solve      run the eigenvalue sweep and print a result table
    landscape  export -log|Phi| on a grid around a center
    count      count zeros inside a disk by the argument principle
    verify     compare solve output against a reference table
    powers     print formal power values at a point (debug surface)

Exit codes: 0 success, 2 malformed input, 3 solver failure.  All tabular
output is comma-separated UTF-8 with metadata on leading ``#`` lines and
numbers printed to 16 significant digits.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .basis import build_basis
from .errors import InputError, SolverError
from .problems import (
    format_complex,
    load_problem,
    load_reference,
    match_reference,
    parse_complex,
    prepare,
    with_overrides,
)
from .shooting import shoot
from .spectral import (
    assemble_characteristic,
    count_zeros,
    landscape,
    sweep_eigenvalues,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3


def _fmt(value):
    return f"{value:.16g}"


def _add_common_overrides(parser):
    parser.add_argument("problem", help="problem definition file")
    parser.add_argument("--n-powers", type=int, default=None, help="series truncation N")
    parser.add_argument("--mesh", type=int, default=None, help="requested subinterval count M")
    parser.add_argument("--delta", default=None, help="center displacement per step (complex)")
    parser.add_argument(
        "--policy",
        default=None,
        choices=["always_previous", "previous_if_upper_half", "fixed_center"],
        help="shift schedule policy",
    )
    parser.add_argument("--max-eigs", type=int, default=None, help="stop after this many eigenvalues")
    parser.add_argument("--threshold", type=float, default=None, help="validation residual threshold")


def _load_with_overrides(args):
    problem = load_problem(args.problem)
    overrides = {}
    if args.n_powers is not None:
        overrides["n_terms"] = args.n_powers
    if args.mesh is not None:
        overrides["mesh_m"] = args.mesh
    if getattr(args, "delta", None) is not None:
        overrides["delta"] = parse_complex(args.delta)
    if getattr(args, "policy", None) is not None:
        overrides["policy"] = args.policy
    if getattr(args, "max_eigs", None) is not None:
        overrides["max_eigenvalues"] = args.max_eigs
    if getattr(args, "threshold", None) is not None:
        overrides["accept_threshold"] = args.threshold
    return with_overrides(problem, **overrides) if overrides else problem


def _result_lines(problem, records, elapsed):
    from .mesh import build_mesh

    mesh = build_mesh(problem.interval, problem.pieces, problem.solver.mesh_m)
    lines = [
        f"# n_powers={problem.solver.n_terms} mesh_effective={mesh.n_subintervals} "
        f"runtime_s={elapsed:.3f}",
        "n,re_lambda,im_lambda,residual,center",
    ]
    for rec in records:
        lines.append(
            f"{rec.index},{_fmt(rec.lam.real)},{_fmt(rec.lam.imag)},"
            f"{_fmt(rec.validation_residual)},{format_complex(rec.center_used)}"
        )
    return lines


def _emit(lines, out):
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text, encoding="utf-8")


def cmd_solve(args):
    problem = _load_with_overrides(args)
    start = time.perf_counter()
    records = sweep_eigenvalues(problem)
    elapsed = time.perf_counter() - start
    _emit(_result_lines(problem, records, elapsed), args.out)
    return EXIT_OK


def cmd_landscape(args):
    problem = _load_with_overrides(args)
    center = parse_complex(args.center)
    matrix, meta = landscape(
        problem, center=center, radius=args.radius, grid=args.grid
    )
    lines = [
        f"# center={format_complex(meta['center'])} radius={_fmt(meta['radius'])} "
        f"grid={meta['grid']} trust_radius={_fmt(meta['trust_radius'])} "
        f"outside_trust_fraction={_fmt(meta['outside_trust_fraction'])}"
    ]
    for row in matrix:
        lines.append(",".join(_fmt(v) for v in row))
    _emit(lines, args.out)
    return EXIT_OK


def cmd_count(args):
    problem = _load_with_overrides(args)
    center = parse_complex(args.center)
    config, samples, bc_left, bc_right, particular = prepare(problem, None, None)
    basis = build_basis(particular, samples, config.n_terms)
    phi = assemble_characteristic(basis, bc_left, bc_right)
    n = count_zeros(phi.evaluate, center, args.radius, samples=args.samples)
    sys.stdout.write(f"{n}\n")
    return EXIT_OK


def cmd_verify(args):
    problem = _load_with_overrides(args)
    references = load_reference(args.reference)
    records = sweep_eigenvalues(problem)
    if not records:
        sys.stdout.write("no eigenvalues computed\n")
        return EXIT_SOLVER
    report = match_reference([rec.lam for rec in records], references)
    lines = ["n,reference,computed,abs_error,tolerance,status"]
    for n_ref, value, best, err, tol, ok in report:
        lines.append(
            f"{n_ref},{format_complex(value)},{format_complex(best)},"
            f"{_fmt(err)},{_fmt(tol)},{'pass' if ok else 'FAIL'}"
        )
    _emit(lines, args.out)
    return EXIT_OK if all(row[-1] for row in report) else EXIT_SOLVER


def cmd_powers(args):
    problem = _load_with_overrides(args)
    config, samples, _, _, particular = prepare(problem, None, None)
    basis = build_basis(particular, samples, config.n_terms)
    fp = basis.powers
    if not 0 <= args.n <= fp.n_max:
        raise InputError(f"power index must be in 0..{fp.n_max}")
    slot = samples.mesh.slot_of(args.at)
    x = samples.mesh.xs[slot]
    sys.stdout.write(
        f"x={_fmt(x)} tilde_{args.n}={format_complex(fp.tilde[args.n][slot])} "
        f"plain_{args.n}={format_complex(fp.plain[args.n][slot])}\n"
    )
    return EXIT_OK


def cmd_shoot(args):
    problem = _load_with_overrides(args)
    lam = parse_complex(args.lam)
    result = shoot(problem, lam, steps_per_piece=args.steps)
    sys.stdout.write(
        f"mismatch={format_complex(result.mismatch)} steps={result.step_count}\n"
    )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spps",
        description="Sturm-Liouville eigenvalue solver based on spectral parameter power series",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute eigenvalues and print a table")
    _add_common_overrides(p_solve)
    p_solve.add_argument("--out", default=None, help="also write the table to this file")
    p_solve.set_defaults(func=cmd_solve)

    p_land = sub.add_parser("landscape", help="export -log|Phi| on a grid")
    _add_common_overrides(p_land)
    p_land.add_argument("--center", default="0", help="disk center (complex)")
    p_land.add_argument("--radius", type=float, required=True, help="disk radius")
    p_land.add_argument("--grid", type=int, default=64, help="grid points per side")
    p_land.add_argument("--out", default=None, help="also write the matrix to this file")
    p_land.set_defaults(func=cmd_landscape)

    p_count = sub.add_parser("count", help="count zeros in a disk (argument principle)")
    _add_common_overrides(p_count)
    p_count.add_argument("--center", default="0", help="disk center (complex)")
    p_count.add_argument("--radius", type=float, required=True, help="disk radius")
    p_count.add_argument("--samples", type=int, default=512, help="initial contour samples")
    p_count.set_defaults(func=cmd_count)

    p_verify = sub.add_parser("verify", help="check solve output against a reference table")
    _add_common_overrides(p_verify)
    p_verify.add_argument("reference", help="reference file with rows 'n,value,tolerance'")
    p_verify.add_argument("--out", default=None, help="also write the report to this file")
    p_verify.set_defaults(func=cmd_verify)

    p_powers = sub.add_parser("powers", help="print formal power values at a mesh node")
    _add_common_overrides(p_powers)
    p_powers.add_argument("--n", type=int, required=True, help="power index")
    p_powers.add_argument("--at", type=float, required=True, help="evaluation point (mesh node)")
    p_powers.set_defaults(func=cmd_powers)

    # maintenance-only shooting surface, hidden from the overview
    p_shoot = sub.add_parser("shoot", help=argparse.SUPPRESS)
    _add_common_overrides(p_shoot)
    p_shoot.add_argument("--lambda", dest="lam", required=True, help="spectral parameter (complex)")
    p_shoot.add_argument("--steps", type=int, default=1000, help="RK4 steps per piece")
    p_shoot.set_defaults(func=cmd_shoot)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
