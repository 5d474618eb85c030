"""Cross-checking series eigenvalues with an independent shooting method.

The shooting backend propagates (u, p u') with fixed-step RK4 directly
from the coefficient expressions -- no shared code with the series
machinery -- and reports the right-boundary mismatch of the solution that
satisfies the left condition.  Eigenvalues are zeros of that mismatch, so
secant refinement starting from a series eigenvalue should barely move.
"""

from spps import load_problem, refine_root, shoot, sweep_eigenvalues
from spps.problems import fixture_path, with_overrides

problem = with_overrides(
    load_problem(fixture_path("example4.prob")),
    mesh_m=6000,  # demo speed; fixture uses 30000
    max_eigenvalues=4,
)

print("the weight r vanishes on [0, 1/2] and is 1 on (1/2, 1]")
print()

records = sweep_eigenvalues(problem)
print(f"{'series lambda':>20} {'oracle lambda':>20} {'gap':>12}")
for rec in records:
    oracle = refine_root(problem, rec.lam, steps_per_piece=4000)
    gap = abs(rec.lam - oracle)
    print(f"{rec.lam.real:>20.12f} {oracle.real:>20.12f} {gap:>12.2e}")

print()
print("the mismatch changes sign across the first eigenvalue:")
for lam in (17.0, 18.0, 19.0):
    mism = shoot(problem, lam, steps_per_piece=2000).mismatch
    print(f"  mismatch({lam:.1f}) = {mism.real:+.6f}")
