"""Sturm-Liouville eigensolver built on spectral parameter power series.

Solves (p u')' + q u = lambda r u on a finite interval with
piecewise-continuous (possibly complex) coefficients and
lambda-polynomial two-point boundary conditions.  Solutions are
represented as power series in the spectral parameter whose coefficient
functions are recursively computed iterated integrals; eigenvalues are
roots of a truncated characteristic polynomial, refined and validated by
recentring the series (spectral shift).
"""

from .basis import (
    ParticularSolution,
    SolutionSample,
    SppsBasis,
    build_basis,
    build_seed_solution,
    evaluate_solution,
    shift_basis,
    truncation_residual,
)
from .errors import (
    InputError,
    SolverError,
    SppsError,
)
from .mesh import (
    Interval,
    Mesh,
    Piece,
    ProblemSamples,
    SampledFunction,
    build_mesh,
    sample_coefficients,
)
from .powers import (
    BoundConstants,
    FormalPowerSet,
    check_bounds,
    compute_formal_powers,
)
from .problems import (
    ParticularPiece,
    Problem,
    SolverConfig,
    fixture_path,
    load_problem,
    parse_problem,
    problem_to_text,
    sample_problem,
)
from .quadrature import (
    PanelWeights,
    derive_partial_weights,
    indefinite_integral,
    l1_norm,
)
from .shooting import ShootingResult, refine_root, shoot
from .spectral import (
    BoundaryCondition,
    CharacteristicPolynomial,
    EigenvalueRecord,
    ShiftSchedule,
    assemble_characteristic,
    count_zeros,
    landscape,
    roots_of,
    sweep_eigenvalues,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Interval",
    "Piece",
    "Mesh",
    "SampledFunction",
    "ProblemSamples",
    "build_mesh",
    "sample_coefficients",
    "PanelWeights",
    "derive_partial_weights",
    "indefinite_integral",
    "l1_norm",
    "FormalPowerSet",
    "BoundConstants",
    "compute_formal_powers",
    "check_bounds",
    "ParticularSolution",
    "SppsBasis",
    "SolutionSample",
    "build_seed_solution",
    "build_basis",
    "evaluate_solution",
    "shift_basis",
    "truncation_residual",
    "BoundaryCondition",
    "CharacteristicPolynomial",
    "ShiftSchedule",
    "EigenvalueRecord",
    "assemble_characteristic",
    "roots_of",
    "count_zeros",
    "sweep_eigenvalues",
    "landscape",
    "Problem",
    "SolverConfig",
    "ParticularPiece",
    "parse_problem",
    "load_problem",
    "problem_to_text",
    "sample_problem",
    "fixture_path",
    "ShootingResult",
    "shoot",
    "refine_root",
    "SppsError",
    "InputError",
    "SolverError",
]
