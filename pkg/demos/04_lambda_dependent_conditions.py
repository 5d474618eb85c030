"""Boundary conditions that are polynomials in the spectral parameter.

The problem -u'' + q u = lambda u with q = -2 on [-1, 0] and q = x on
(0, 1] carries the conditions u(+-1) + lambda u'(+-1) = 0.  Such problems
are not self-adjoint, and this one genuinely has a complex-conjugate pair
of eigenvalues alongside the real branch -- the solver finds both.

The supplied particular solution is pieced together from a cosine on the
left and an Airy combination on the right (the potential is linear there),
matching value and slope at the junction.  Its equation residual is
checked before any series is built.
"""

from spps import load_problem, sweep_eigenvalues
from spps.basis import particular_residual
from spps.problems import (
    fixture_path,
    particular_for,
    sample_problem,
    with_overrides,
)

problem = with_overrides(
    load_problem(fixture_path("example3.prob")),
    mesh_m=6000,  # demo speed; fixture uses 30000
)

print("particular solution expressions per piece:")
for piece, pp in zip(problem.pieces, problem.particular):
    print(f"  on [{piece.lo:+.0f}, {piece.hi:+.0f}]: f = {pp.f}")
print()

samples = sample_problem(problem)
ps = particular_for(problem, samples)
residual, scale = particular_residual(samples, ps)
print(f"equation residual of the supplied solution: {residual:.2e} "
      f"(scale {scale:.2e}) -- accepted")
print(f"min |f| over the mesh: {ps.min_abs:.4f} (must stay well above zero)")
print()

records = sweep_eigenvalues(problem)
print("spectrum (sorted by real part; note the complex pair):")
for rec in records:
    tag = "" if abs(rec.lam.imag) < 1e-8 else "   <- complex pair member"
    print(f"  {rec.lam.real:+.12f} {rec.lam.imag:+.12f}i{tag}")
