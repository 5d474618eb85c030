"""Problem definitions and the problem-file format.

A problem file is line-oriented text with ``[section]`` headers and
``key = value`` lines.  ``#`` starts a comment, blank lines are ignored,
and sections may repeat where that makes sense (one ``[piece]`` per
coefficient piece).  Expressions are double-quoted strings in the
expression grammar; scalars accept the complex literal form ``a+bi``.

    [interval]
    a = -1
    b = 1

    [piece]                  # repeated, in left-to-right order
    from = -1
    to = 0
    p = "-1"
    q = "-1"
    r = "1"
    f = "cos(x)"             # optional particular solution (all pieces or none)
    f_prime = "-sin(x)"      # or pf_prime = "..."

    [bc_left]                # lambda-polynomial boundary condition
    alpha = 0, 1             # coefficients, lowest degree first
    beta = 1
    derivative = u_prime     # or p_u_prime

    [bc_right]
    alpha = 0, 1
    beta = -1
    derivative = u_prime

    [solver]
    n_powers = 60            # series truncation N
    mesh = 50000             # requested subinterval count M
    delta = 0                # center displacement per step
    policy = always_previous # or previous_if_upper_half, fixed_center
    max_eigenvalues = 11
    accept_threshold = 1e-8

Bundled fixtures for the reference problems live under
``spps/fixtures`` and can be located with :func:`fixture_path`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import expressions
from .basis import build_seed_solution, particular_from_samples
from .errors import ExpressionError, ProblemFormatError
from .mesh import Interval, Piece, ProblemSamples, build_mesh, sample_coefficients, sample_piecewise
from .spectral import POLICIES, BoundaryCondition

__all__ = [
    "SolverConfig",
    "ParticularPiece",
    "Problem",
    "parse_problem",
    "load_problem",
    "problem_to_text",
    "save_problem",
    "sample_problem",
    "particular_for",
    "prepare",
    "with_overrides",
    "fixture_path",
    "load_reference",
    "match_reference",
    "parse_complex",
    "format_complex",
]


@dataclass(frozen=True)
class SolverConfig:
    n_terms: int = 40
    mesh_m: int = 2000
    delta: complex = 0.0
    policy: str = "always_previous"
    max_eigenvalues: int = 10
    accept_threshold: float = 1e-8

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ProblemFormatError(f"unknown policy {self.policy!r}; pick one of {POLICIES}")
        if self.n_terms < 0:
            raise ProblemFormatError("n_powers must be nonnegative")
        if self.accept_threshold <= 0:
            raise ProblemFormatError("accept_threshold must be positive")


@dataclass(frozen=True)
class ParticularPiece:
    """Per-piece expressions for a user-supplied particular solution."""

    f: expressions.Expression
    f_prime: expressions.Expression | None = None
    pf_prime: expressions.Expression | None = None

    def __post_init__(self):
        if (self.f_prime is None) == (self.pf_prime is None):
            raise ProblemFormatError(
                "give exactly one of f_prime or pf_prime with a particular solution"
            )


@dataclass(frozen=True)
class Problem:
    interval: Interval
    pieces: tuple
    bc_left: BoundaryCondition
    bc_right: BoundaryCondition
    particular: tuple | None = None
    solver: SolverConfig = SolverConfig()

    def __post_init__(self):
        if self.particular is not None and len(self.particular) != len(self.pieces):
            raise ProblemFormatError(
                "particular solution needs one expression set per piece"
            )


# ---------------------------------------------------------------------------
# Complex token helpers


def parse_complex(text):
    """Parse a scalar like ``-0.5``, ``1e-3``, ``2i`` or ``0.47+0.34i``."""
    try:
        expr = expressions.parse(text)
        return expressions.const_value(expr)
    except ExpressionError as exc:
        raise ProblemFormatError(f"bad numeric value {text!r}: {exc}") from exc


def format_complex(z):
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.17g}"
    if z.real == 0.0:
        return f"{z.imag:.17g}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"


def _parse_real(text, what):
    z = parse_complex(text)
    if z.imag != 0.0:
        raise ProblemFormatError(f"{what} must be real, got {text!r}")
    return z.real


# ---------------------------------------------------------------------------
# File parsing


def _split_sections(text):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = (line[1:-1].strip().lower(), [])
            sections.append(current)
            continue
        if current is None:
            raise ProblemFormatError(f"line {lineno}: content before any [section]")
        if "=" not in line:
            raise ProblemFormatError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = line.split("=", 1)
        current[1].append((lineno, key.strip().lower(), value.strip()))
    return sections


def _as_dict(name, items):
    out = {}
    for lineno, key, value in items:
        if key in out:
            raise ProblemFormatError(f"line {lineno}: duplicate key {key!r} in [{name}]")
        out[key] = value
    return out


def _quoted_expression(value, where):
    value = value.strip()
    if len(value) < 2 or value[0] != '"' or value[-1] != '"':
        raise ProblemFormatError(f"{where}: expressions must be double-quoted, got {value!r}")
    try:
        return expressions.parse(value[1:-1])
    except ExpressionError as exc:
        raise ProblemFormatError(f"{where}: {exc}") from exc


def _coeff_list(value, where):
    try:
        return np.array([parse_complex(tok) for tok in value.split(",")], dtype=np.complex128)
    except ProblemFormatError as exc:
        raise ProblemFormatError(f"{where}: {exc}") from exc


def parse_problem(text):
    """Parse problem-file text into a :class:`Problem`."""
    sections = _split_sections(text)
    names = [name for name, _ in sections]
    for required in ("interval", "piece", "bc_left", "bc_right"):
        if required not in names:
            raise ProblemFormatError(f"missing [{required}] section")

    interval = None
    pieces = []
    particulars = []
    bcs = {}
    solver_kwargs = {}

    for name, items in sections:
        if name == "interval":
            data = _as_dict(name, items)
            _require_keys(name, data, {"a", "b"})
            interval = Interval(_parse_real(data["a"], "a"), _parse_real(data["b"], "b"))
        elif name == "piece":
            data = _as_dict(f"piece {len(pieces)}", items)
            _require_keys("piece", data, {"from", "to", "p", "q", "r"}, optional={"f", "f_prime", "pf_prime"})
            where = f"piece {len(pieces)}"
            pieces.append(
                Piece(
                    lo=_parse_real(data["from"], "from"),
                    hi=_parse_real(data["to"], "to"),
                    p=_quoted_expression(data["p"], f"{where} p"),
                    q=_quoted_expression(data["q"], f"{where} q"),
                    r=_quoted_expression(data["r"], f"{where} r"),
                )
            )
            if "f" in data:
                particulars.append(
                    ParticularPiece(
                        f=_quoted_expression(data["f"], f"{where} f"),
                        f_prime=_quoted_expression(data["f_prime"], f"{where} f_prime")
                        if "f_prime" in data
                        else None,
                        pf_prime=_quoted_expression(data["pf_prime"], f"{where} pf_prime")
                        if "pf_prime" in data
                        else None,
                    )
                )
            elif "f_prime" in data or "pf_prime" in data:
                raise ProblemFormatError(f"{where}: f_prime/pf_prime without f")
            else:
                particulars.append(None)
        elif name in ("bc_left", "bc_right"):
            if name in bcs:
                raise ProblemFormatError(f"duplicate [{name}] section")
            data = _as_dict(name, items)
            _require_keys(name, data, {"alpha", "beta"}, optional={"derivative"})
            try:
                bcs[name] = BoundaryCondition(
                    endpoint=name.removeprefix("bc_"),
                    alpha=_coeff_list(data["alpha"], f"{name} alpha"),
                    beta=_coeff_list(data["beta"], f"{name} beta"),
                    derivative_form=data.get("derivative", "u_prime"),
                )
            except ValueError as exc:
                raise ProblemFormatError(f"[{name}]: {exc}") from exc
        elif name == "solver":
            data = _as_dict(name, items)
            _require_keys(
                name,
                data,
                set(),
                optional={"n_powers", "mesh", "delta", "policy", "max_eigenvalues", "accept_threshold"},
            )
            if "n_powers" in data:
                solver_kwargs["n_terms"] = int(_parse_real(data["n_powers"], "n_powers"))
            if "mesh" in data:
                solver_kwargs["mesh_m"] = int(_parse_real(data["mesh"], "mesh"))
            if "delta" in data:
                solver_kwargs["delta"] = parse_complex(data["delta"])
            if "policy" in data:
                solver_kwargs["policy"] = data["policy"]
            if "max_eigenvalues" in data:
                solver_kwargs["max_eigenvalues"] = int(
                    _parse_real(data["max_eigenvalues"], "max_eigenvalues")
                )
            if "accept_threshold" in data:
                solver_kwargs["accept_threshold"] = float(
                    _parse_real(data["accept_threshold"], "accept_threshold")
                )
        else:
            raise ProblemFormatError(f"unknown section [{name}]")

    have_particular = [p is not None for p in particulars]
    if any(have_particular) and not all(have_particular):
        raise ProblemFormatError("particular solution must cover all pieces or none")

    try:
        return Problem(
            interval=interval,
            pieces=tuple(pieces),
            bc_left=bcs["bc_left"],
            bc_right=bcs["bc_right"],
            particular=tuple(particulars) if all(have_particular) else None,
            solver=SolverConfig(**solver_kwargs),
        )
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc


def _require_keys(section, data, required, optional=frozenset()):
    missing = required - data.keys()
    if missing:
        raise ProblemFormatError(f"[{section}] missing key(s): {', '.join(sorted(missing))}")
    unknown = data.keys() - required - set(optional)
    if unknown:
        raise ProblemFormatError(f"[{section}] unknown key(s): {', '.join(sorted(unknown))}")


def load_problem(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc}") from exc
    return parse_problem(text)


# ---------------------------------------------------------------------------
# Serialization


def problem_to_text(problem):
    lines = ["[interval]", f"a = {problem.interval.a:.17g}", f"b = {problem.interval.b:.17g}", ""]
    for i, piece in enumerate(problem.pieces):
        lines += [
            "[piece]",
            f"from = {piece.lo:.17g}",
            f"to = {piece.hi:.17g}",
            f'p = "{expressions.to_string(piece.p)}"',
            f'q = "{expressions.to_string(piece.q)}"',
            f'r = "{expressions.to_string(piece.r)}"',
        ]
        if problem.particular is not None:
            pp = problem.particular[i]
            lines.append(f'f = "{expressions.to_string(pp.f)}"')
            if pp.f_prime is not None:
                lines.append(f'f_prime = "{expressions.to_string(pp.f_prime)}"')
            else:
                lines.append(f'pf_prime = "{expressions.to_string(pp.pf_prime)}"')
        lines.append("")
    for name, bc in (("bc_left", problem.bc_left), ("bc_right", problem.bc_right)):
        lines += [
            f"[{name}]",
            "alpha = " + ", ".join(format_complex(c) for c in bc.alpha),
            "beta = " + ", ".join(format_complex(c) for c in bc.beta),
            f"derivative = {bc.derivative_form}",
            "",
        ]
    s = problem.solver
    lines += [
        "[solver]",
        f"n_powers = {s.n_terms}",
        f"mesh = {s.mesh_m}",
        f"delta = {format_complex(s.delta)}",
        f"policy = {s.policy}",
        f"max_eigenvalues = {s.max_eigenvalues}",
        f"accept_threshold = {s.accept_threshold:.17g}",
    ]
    return "\n".join(lines) + "\n"


def save_problem(problem, path):
    Path(path).write_text(problem_to_text(problem), encoding="utf-8")


# ---------------------------------------------------------------------------
# Sampling and solver preparation


def sample_problem(problem, m=None):
    """Mesh the problem and sample its coefficient triple."""
    m = problem.solver.mesh_m if m is None else m
    mesh = build_mesh(problem.interval, problem.pieces, m)
    p, q, r = sample_coefficients(problem.pieces, mesh)
    return ProblemSamples(mesh=mesh, p=p, q=q, r=r)


def particular_for(problem, samples):
    """The user-supplied particular solution sampled on the mesh, or None."""
    if problem.particular is None:
        return None
    mesh = samples.mesh
    f = sample_piecewise([pp.f for pp in problem.particular], mesh)
    if all(pp.pf_prime is not None for pp in problem.particular):
        pf = sample_piecewise([pp.pf_prime for pp in problem.particular], mesh)
    else:
        fprime = sample_piecewise([pp.f_prime for pp in problem.particular], mesh)
        pf = type(f)(mesh, samples.p.values * fprime.values)
    return particular_from_samples(samples, f, pf)


def prepare(problem, config=None, particular=None):
    """Resolve config, sample coefficients, and obtain a starting solution.

    ``particular`` overrides both the problem file's expressions and the
    seed construction (used by tests exercising scaling invariance).
    """
    config = problem.solver if config is None else config
    samples = sample_problem(problem, config.mesh_m)
    start = particular
    if start is None:
        start = particular_for(problem, samples)
    if start is None:
        start = build_seed_solution(samples, config.n_terms)
    return config, samples, problem.bc_left, problem.bc_right, start


def with_overrides(problem, **overrides):
    """Copy of the problem with solver fields replaced."""
    return replace(problem, solver=replace(problem.solver, **overrides))


def fixture_path(name):
    """Filesystem path of a bundled fixture (e.g. ``example1.prob``)."""
    return Path(str(resources.files("spps") / "fixtures" / name))


# ---------------------------------------------------------------------------
# Reference tables (used by the verify command and the acceptance suite)


def load_reference(path):
    """Rows (n, value, tolerance) from a reference table file."""
    rows = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [tok.strip() for tok in line.split(",")]
        if len(parts) != 3:
            raise ProblemFormatError(
                f"{path}:{lineno}: expected 'n,value,tolerance', got {raw!r}"
            )
        try:
            rows.append((int(parts[0]), parse_complex(parts[1]), float(parts[2])))
        except (ValueError, ProblemFormatError) as exc:
            raise ProblemFormatError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise ProblemFormatError(f"{path}: reference file has no rows")
    return rows


def match_reference(computed, rows):
    """Match eigenvalues to a reference table by value proximity.

    Returns (index, reference, best_match, error, tolerance, passed) per
    row.  Proximity matching tolerates tables with index gaps and sweeps
    that discover eigenvalues a table does not list.
    """
    if not computed:
        raise ValueError("no computed eigenvalues to match")
    report = []
    for n_ref, value, tol in rows:
        best = min(computed, key=lambda lam: abs(lam - value))
        err = abs(best - value)
        report.append((n_ref, value, best, err, tol, err <= tol))
    return report
