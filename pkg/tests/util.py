"""Shared problem builders for the test suite.

Small, fast configurations of the bundled reference problems; the
full-resolution settings live in the fixture files and are exercised by
the acceptance tests.
"""

import numpy as np

from spps.expressions import parse
from spps.mesh import Interval, Piece, ProblemSamples, build_mesh, sample_coefficients
from spps.problems import ParticularPiece, Problem, SolverConfig
from spps.spectral import BoundaryCondition


def step_potential_problem(n_terms=40, m=2000, max_eigs=5, with_particular=True,
                           delta=0.0):
    """-u'' + q u = lam u, q = (-1, -2) split at 0, lambda-dependent conditions."""
    particular = (
        ParticularPiece(f=parse("cos(x)"), f_prime=parse("-sin(x)")),
        ParticularPiece(f=parse("cos(sqrt(2)*x)"), f_prime=parse("-sqrt(2)*sin(sqrt(2)*x)")),
    ) if with_particular else None
    return Problem(
        interval=Interval(-1.0, 1.0),
        pieces=(
            Piece(-1.0, 0.0, parse("-1"), parse("-1"), parse("1")),
            Piece(0.0, 1.0, parse("-1"), parse("-2"), parse("1")),
        ),
        bc_left=BoundaryCondition("left", [0, 1], [1], "u_prime"),
        bc_right=BoundaryCondition("right", [0, 1], [-1], "u_prime"),
        particular=particular,
        solver=SolverConfig(n_terms=n_terms, mesh_m=m, delta=delta,
                            max_eigenvalues=max_eigs),
    )


def layered_problem(complex_params=False, n_terms=60, m=3000, max_eigs=4, delta=0.5,
                    policy="always_previous"):
    """Three constant layers with Dirichlet ends (heat-conduction example)."""
    if complex_params:
        p_vals = ["-11-1i", "-0.5-2i", "-22-1i"]
        r_vals = ["3+2i", "7+1i", "1-2i"]
    else:
        p_vals = ["-11", "-0.5", "-22"]
        r_vals = ["3", "7", "1"]
    bps = [-4.0, -2.0, 0.0, 2.0]
    pieces = tuple(
        Piece(bps[i], bps[i + 1], parse(p), parse("0"), parse(r))
        for i, (p, r) in enumerate(zip(p_vals, r_vals))
    )
    return Problem(
        interval=Interval(-4.0, 2.0),
        pieces=pieces,
        bc_left=BoundaryCondition("left", [1], [0], "p_u_prime"),
        bc_right=BoundaryCondition("right", [1], [0], "p_u_prime"),
        solver=SolverConfig(n_terms=n_terms, mesh_m=m, delta=delta, policy=policy,
                            max_eigenvalues=max_eigs),
    )


def vanishing_weight_problem(n_terms=40, m=3000, max_eigs=3):
    """-u'' + u = lam r u with r = 0 on the left half, Dirichlet ends."""
    return Problem(
        interval=Interval(0.0, 1.0),
        pieces=(
            Piece(0.0, 0.5, parse("-1"), parse("1"), parse("0")),
            Piece(0.5, 1.0, parse("-1"), parse("1"), parse("1")),
        ),
        bc_left=BoundaryCondition("left", [1], [0], "p_u_prime"),
        bc_right=BoundaryCondition("right", [1], [0], "p_u_prime"),
        solver=SolverConfig(n_terms=n_terms, mesh_m=m, max_eigenvalues=max_eigs),
    )


def plain_problem(n_terms=20, m=200):
    """u'' = lam u on [0,1] with Dirichlet ends and unit coefficients."""
    return Problem(
        interval=Interval(0.0, 1.0),
        pieces=(Piece(0.0, 1.0, parse("1"), parse("0"), parse("1")),),
        bc_left=BoundaryCondition("left", [1], [0], "p_u_prime"),
        bc_right=BoundaryCondition("right", [1], [0], "p_u_prime"),
        particular=(ParticularPiece(f=parse("1"), f_prime=parse("0")),),
        solver=SolverConfig(n_terms=n_terms, mesh_m=m, max_eigenvalues=2),
    )


def unit_samples(m=200, a=0.0, b=1.0):
    """Samples of p = q... = 1, q = 0, r = 1 on a single piece."""
    piece = Piece(a, b, parse("1"), parse("0"), parse("1"))
    mesh = build_mesh(Interval(a, b), [piece], m)
    p, q, r = sample_coefficients([piece], mesh)
    return ProblemSamples(mesh=mesh, p=p, q=q, r=r)


TABLE1 = np.array([
    -0.8838501773806790, 0.33593977069858758, 3.18616750501251774,
    10.4888366560518901, 22.7582649977549487, 40.0145357092335736,
    62.2048900366600122, 89.3430782636483577, 121.412971555997595,
    158.423147639717927, 200.365776764230126,
])

TABLE2 = np.array([
    0.1537166881459068, 0.6040510821002027, 1.3001446415922297,
    2.1131346987303714, 3.0657222557870770, 4.3891432656424323,
    6.0755689904595746, 8.0532227313898138, 10.263818816222202,
    12.662474776451201, 15.226226392993377,
])

TABLE3 = np.array([
    0.469982057297078 + 0.337010475999479j,
    1.453180135224583 + 0.455435050626238j,
    1.931066258100073 + 1.957548941283227j,
    2.769261458131468 + 4.456326784352162j,
    3.315488435122103 + 8.156636278096363j,
    4.745130735885916 + 11.83858259923195j,
])

TABLE4 = np.array([
    -1.00143294415521698407, 2.4057972392439196797808, 9.1124600099908036194275,
    21.519631798576724032730, 38.723530941627280094388, 60.956434348891755464346,
])

TABLE5 = np.array([
    17.89793137541756, 98.16027543604447, 256.2710801437674,
    493.2013196148296, 809.0540168683802, 1203.851208314645,
])
