"""Eigenvalues of a step-potential problem with spectral-parameter conditions.

The equation -u'' + q u = lambda u on [-1, 1] has a potential that jumps
from -1 to -2 at the origin, and boundary conditions in which lambda
itself appears:

    lambda u(-1) + u'(-1) = 0,      lambda u(1) - u'(1) = 0.

The solver builds the two series solutions around lambda = 0 from a known
nonvanishing solution, assembles the characteristic polynomial, and walks
the spectrum by recentring at every accepted eigenvalue.  A reduced mesh
keeps this demo fast; the bundled fixture file carries production
settings.
"""

import time

from spps import load_problem, sweep_eigenvalues
from spps.problems import fixture_path, load_reference, match_reference, with_overrides

problem = load_problem(fixture_path("example1.prob"))
problem = with_overrides(problem, mesh_m=5000)  # demo speed; fixture uses 50000

print("interval:", problem.interval)
print("pieces:")
for piece in problem.pieces:
    print(f"  [{piece.lo:+.0f}, {piece.hi:+.0f}]  p = {piece.p}, q = {piece.q}, r = {piece.r}")
print("series terms N =", problem.solver.n_terms, " mesh M =", problem.solver.mesh_m)
print()

start = time.perf_counter()
records = sweep_eigenvalues(problem)
elapsed = time.perf_counter() - start

print(f"found {len(records)} eigenvalues in {elapsed:.1f} s")
print(f"{'n':>3} {'lambda':>22} {'validation residual':>20} {'center used':>14}")
for rec in records:
    print(f"{rec.index:>3} {rec.lam.real:>22.15f} {rec.validation_residual:>20.2e} "
          f"{rec.center_used.real:>14.6f}")

print()
print("comparison against the bundled reference table:")
rows = load_reference(fixture_path("table1.ref"))
report = match_reference([rec.lam for rec in records], rows)
for n_ref, value, best, err, tol, ok in report:
    print(f"  n = {n_ref:2d}: |computed - reference| = {err:.2e}  "
          f"({'ok' if ok else 'MISS'} at tolerance {tol:g})")
