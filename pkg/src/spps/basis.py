"""Particular solutions, series bases, spectral shifts.

A basis bundles a nonvanishing particular solution f at center lambda*
with the formal powers built from it.  The two series solutions and their
quasi-derivatives are

    u1  = f * sum mu^k T(2k)          p u1' = pf' * sum mu^k T(2k) + (1/f) * sum mu^k T(2k-1)
    u2  = f * sum mu^k P(2k+1)        p u2' = pf' * sum mu^k P(2k+1) + (1/f) * sum mu^k P(2k)

with mu = lambda - lambda*, T the first family and P the second.  The
quasi-derivative p*u' is the object carried everywhere: it stays
continuous across coefficient jumps while u' itself may not.

The seed construction solves the lambda*=0 equation by running the same
recursion with f == 1 and -q in place of r, evaluating both series at
lambda = 1, and mixing them so the combination never vanishes.  Shifting
to a new center evaluates the current basis there, picks a nonvanishing
combination, and rebuilds the powers on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NonvanishingError,
    ParticularResidualError,
    SeedFailureError,
    ShiftFailureError,
)
from .mesh import ProblemSamples, SampledFunction, constant_function
from .powers import FormalPowerSet, compute_formal_powers
from .quadrature import indefinite_integral

__all__ = [
    "ParticularSolution",
    "SppsBasis",
    "SolutionSample",
    "particular_residual",
    "verify_particular",
    "build_seed_solution",
    "particular_from_samples",
    "build_basis",
    "evaluate_solution",
    "shift_basis",
    "truncation_residual",
]

# combinations (c1, c2) tried when mixing the two series solutions into a
# nonvanishing f; (1, i) is the stock choice for real coefficients
_SEED_COMBINATIONS = ((1.0, 1.0j), (1.0, -1.0j), (1.0, 1.0), (1.0, -1.0))
_SHIFT_COMBINATIONS = _SEED_COMBINATIONS + ((1.0, 0.0), (0.0, 1.0))

# f values below EPS_F_FACTOR * max|f| make 1/f amplify noise beyond
# double-precision usefulness
EPS_F_FACTOR = 1e-10

RESIDUAL_TOL_FACTOR = 1e-9


@dataclass(frozen=True)
class ParticularSolution:
    """Nonvanishing solution f of (p f')' + q f = lambda* r f."""

    f: SampledFunction
    pf_prime: SampledFunction
    lambda_star: complex
    min_abs: float


@dataclass(frozen=True)
class SppsBasis:
    particular: ParticularSolution
    powers: FormalPowerSet
    center: complex
    n_terms: int
    samples: ProblemSamples


@dataclass(frozen=True)
class SolutionSample:
    """One series solution evaluated at a fixed lambda."""

    u: SampledFunction
    pu_prime: SampledFunction
    lam: complex
    truncation_tail: float


def particular_residual(samples, ps):
    """Max-node magnitude of pf'(x) - pf'(a) + int_a^x (q - lambda* r) f dt.

    Zero (up to quadrature error) exactly when f solves its equation with
    the quasi-derivative it claims.  Also returns the scale max|pf'|.
    """
    integrand = (samples.q.values - ps.lambda_star * samples.r.values) * ps.f.values
    acc = indefinite_integral(SampledFunction(samples.mesh, integrand), 0)
    res = ps.pf_prime.values - ps.pf_prime.values[0] + acc.values
    scale = float(np.abs(ps.pf_prime.values).max())
    return float(np.abs(res).max()), scale


def verify_particular(samples, ps, tol_factor=RESIDUAL_TOL_FACTOR):
    residual, scale = particular_residual(samples, ps)
    if residual > tol_factor * scale + 1e-300:
        raise ParticularResidualError(
            f"particular solution residual {residual:.3e} exceeds "
            f"{tol_factor:.0e} * scale (scale={scale:.3e}, center={ps.lambda_star})"
        )
    return residual


def _reconciled(mesh, values, what, tol=1e-9):
    """Force two-sided breakpoint samples of a continuous function to agree.

    Expression-supplied data can disagree across a breakpoint by roundoff;
    downstream continuity invariants want bit-equal slots.  A genuine jump
    is an input error.
    """
    out = values.copy()
    scale = float(np.abs(values).max()) or 1.0
    for left, right in mesh.breakpoint_slots:
        gap = abs(out[left] - out[right])
        if gap > tol * scale:
            raise ParticularResidualError(
                f"{what} jumps by {gap:.3e} at breakpoint x={mesh.xs[left]}; "
                "a particular solution and its quasi-derivative must be continuous"
            )
        out[right] = out[left]
    return out


def particular_from_samples(samples, f, pf_prime, lambda_star=0.0):
    """Wrap sampled f, pf' into a verified ParticularSolution."""
    mesh = samples.mesh
    fv = _reconciled(mesh, f.values, "particular solution")
    pv = _reconciled(mesh, pf_prime.values, "quasi-derivative")
    ps = ParticularSolution(
        f=SampledFunction(mesh, fv),
        pf_prime=SampledFunction(mesh, pv),
        lambda_star=complex(lambda_star),
        min_abs=float(np.abs(fv).min()),
    )
    if ps.min_abs <= EPS_F_FACTOR * float(np.abs(fv).max()):
        k = int(np.argmin(np.abs(fv)))
        raise NonvanishingError(
            f"particular solution nearly vanishes at x={mesh.xs[k]} (|f|={ps.min_abs:.3e})"
        )
    verify_particular(samples, ps)
    return ps


def build_seed_solution(samples, n_terms):
    """Construct a nonvanishing solution of the lambda=0 equation.

    Runs the power recursion with f == 1 and -q in place of r, sums both
    series at lambda = 1, and returns the first stock combination
    c1*y1 + c2*y2 whose modulus stays above EPS_F_FACTOR * max|f|.
    """
    mesh = samples.mesh
    ones = constant_function(mesh, 1.0)
    zeros = constant_function(mesh, 0.0)
    seed_r = SampledFunction(mesh, -samples.q.values)
    fp = compute_formal_powers(ones, zeros, samples.p, seed_r, 0, n_terms)

    # series sums at lambda = 1: plain Kahan-free sums are fine, the terms
    # decay factorially
    y1 = fp.tilde[0::2].sum(axis=0)
    py1 = fp.tilde[1::2][: n_terms].sum(axis=0)
    y2 = fp.plain[1::2].sum(axis=0)
    py2 = fp.plain[0::2].sum(axis=0)

    tail = float(np.abs(fp.tilde[2 * n_terms][[0, -1]]).max())
    head = float(np.abs(y1[[0, -1]]).max()) or 1.0

    last_error = None
    for c1, c2 in _SEED_COMBINATIONS:
        fv = c1 * y1 + c2 * y2
        max_abs = float(np.abs(fv).max())
        if float(np.abs(fv).min()) <= EPS_F_FACTOR * max_abs:
            continue
        ps = ParticularSolution(
            f=SampledFunction(mesh, fv),
            pf_prime=SampledFunction(mesh, c1 * py1 + c2 * py2),
            lambda_star=0.0,
            min_abs=float(np.abs(fv).min()),
        )
        try:
            verify_particular(samples, ps)
            return ps
        except ParticularResidualError as exc:
            last_error = exc
    if last_error is not None:
        raise SeedFailureError(
            f"seed series did not converge (last term/partial sum = {tail / head:.2e}); "
            f"increase the power count or supply a particular solution: {last_error}"
        )
    raise SeedFailureError(
        "no stock combination yields a nonvanishing seed solution; "
        "supply a particular solution or start from a nonzero shift"
    )


def build_basis(particular, samples, n_terms):
    """Formal powers on weights r f^2 and 1/(p f^2), centred at lambda*."""
    verify_particular(samples, particular)
    powers = compute_formal_powers(
        particular.f, particular.pf_prime, samples.p, samples.r, 0, n_terms
    )
    return SppsBasis(
        particular=particular,
        powers=powers,
        center=particular.lambda_star,
        n_terms=n_terms,
        samples=samples,
    )


def _horner_rows(rows, mu, count):
    """sum_{k<count} mu^k rows[k] over the row axis, by Horner."""
    acc = rows[count - 1].copy()
    for k in range(count - 2, -1, -1):
        acc *= mu
        acc += rows[k]
    return acc


def evaluate_solution(basis, lam, which="first", n_terms=None):
    """Evaluate u and p*u' of one basis solution at lambda.

    Any complex lambda is accepted; accuracy degrades away from the center
    and is reported through ``truncation_tail`` (magnitude of the last
    retained series term at the right endpoint, relative to the sum).
    """
    n = basis.n_terms if n_terms is None else n_terms
    if not 0 <= n <= basis.n_terms:
        raise ValueError(f"n_terms must be in 0..{basis.n_terms}")
    mu = complex(lam) - basis.center
    fp = basis.powers
    fv = basis.particular.f.values
    pfv = basis.particular.pf_prime.values

    if which == "first":
        even = _horner_rows(fp.tilde[0::2], mu, n + 1)
        u = fv * even
        pu = pfv * even
        if n >= 1:
            odd = _horner_rows(fp.tilde[1::2], mu, n)
            pu = pu + (mu / fv) * odd
        last = fp.tilde[2 * n]
        series_sum = even
    elif which == "second":
        odd = _horner_rows(fp.plain[1::2], mu, n + 1)
        even = _horner_rows(fp.plain[0::2], mu, n + 1)
        u = fv * odd
        pu = pfv * odd + even / fv
        last = fp.plain[2 * n + 1]
        series_sum = odd
    else:
        raise ValueError(f"which must be 'first' or 'second', got {which!r}")

    tail = _tail_indicator(mu, n, last, series_sum)
    mesh = fp.mesh
    return SolutionSample(
        u=SampledFunction(mesh, u),
        pu_prime=SampledFunction(mesh, pu),
        lam=complex(lam),
        truncation_tail=tail,
    )


def _tail_indicator(mu, n, last_row, series_sum):
    """|mu|^n * sup|last term| / sup|partial sum|.

    The sup-norms make the indicator meaningful even where the sum itself
    has a zero (e.g. the second solution at a Dirichlet eigenvalue).
    """
    amp = float(np.abs(last_row).max())
    ref = float(np.abs(series_sum).max())
    if amp == 0.0:
        return 0.0
    if mu == 0:
        return 0.0 if n > 0 else amp / max(ref, 1e-300)
    # log-space to survive |mu|^n for large shifts
    log_tail = n * math.log(abs(mu)) + math.log(amp) - math.log(max(ref, 1e-300))
    if log_tail > 700.0:
        return math.inf
    return math.exp(log_tail)


TRUST_TAIL_LIMIT = 1e-10


def shift_basis(basis, new_center, combination=None):
    """Recentre the basis at ``new_center``.

    Evaluates both solutions there, picks the combination c1*u1 + c2*u2
    maximising min|f*|/max|f*| (or uses ``combination`` verbatim), verifies
    the recentred particular solution, and rebuilds the powers with it.
    """
    new_center = complex(new_center)
    s1 = evaluate_solution(basis, new_center, "first")
    s2 = evaluate_solution(basis, new_center, "second")
    tail = max(s1.truncation_tail, s2.truncation_tail)
    if tail > TRUST_TAIL_LIMIT:
        raise ShiftFailureError(
            f"shift from {basis.center} to {new_center} leaves the trust region "
            f"(series tail {tail:.2e} > {TRUST_TAIL_LIMIT:.0e}); use a smaller step "
            "or more series terms"
        )

    candidates = [tuple(map(complex, combination))] if combination is not None else list(
        _SHIFT_COMBINATIONS
    )
    best = None
    best_ratio = -1.0
    for c1, c2 in candidates:
        fv = c1 * s1.u.values + c2 * s2.u.values
        max_abs = float(np.abs(fv).max())
        if max_abs == 0.0:
            continue
        ratio = float(np.abs(fv).min()) / max_abs
        if ratio > best_ratio:
            best_ratio = ratio
            best = (c1, c2, fv)
    if best is None or best_ratio <= EPS_F_FACTOR:
        raise ShiftFailureError(
            f"no combination yields a nonvanishing solution at center {new_center} "
            f"(best min/max ratio {best_ratio:.2e}); try a smaller displacement"
        )
    c1, c2, fv = best
    pfv = c1 * s1.pu_prime.values + c2 * s2.pu_prime.values

    mesh = basis.samples.mesh
    ps = ParticularSolution(
        f=SampledFunction(mesh, fv),
        pf_prime=SampledFunction(mesh, pfv),
        lambda_star=new_center,
        min_abs=float(np.abs(fv).min()),
    )
    try:
        verify_particular(basis.samples, ps)
    except ParticularResidualError as exc:
        # the recentred solution does not satisfy its equation to tolerance:
        # the shift itself failed (accumulated roundoff or resolution limit)
        raise ShiftFailureError(
            f"shift from {basis.center} to {new_center} lost accuracy: {exc}; "
            "use a smaller displacement, more series terms, or a finer mesh"
        ) from exc
    return build_basis(ps, basis.samples, basis.n_terms)


def truncation_residual(basis, lam, which="first"):
    """Integrated-equation residual of the N-term partial sum.

    With u_N and u_{N-1} the partial sums with N and N-1 terms, the exact
    identity (p u_N')' = mu r u_{N-1} - (q - center r) u_N holds term by
    term, so the integrated residual vanishes up to quadrature error plus
    the single dropped term.
    """
    n = basis.n_terms
    full = evaluate_solution(basis, lam, which, n_terms=n)
    prev = evaluate_solution(basis, lam, which, n_terms=n - 1) if n >= 1 else full
    mu = complex(lam) - basis.center
    samples = basis.samples
    integrand = mu * samples.r.values * prev.u.values - (
        samples.q.values - basis.center * samples.r.values
    ) * full.u.values
    acc = indefinite_integral(SampledFunction(samples.mesh, integrand), 0)
    res = full.pu_prime.values - full.pu_prime.values[0] - acc.values
    return float(np.abs(res).max())
