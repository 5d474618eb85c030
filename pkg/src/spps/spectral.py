"""Characteristic polynomial assembly, root finding, and the eigenvalue sweep.

For two-point conditions B_E[u] = alpha_E(lambda) u(E) + beta_E(lambda) d(E)
(with d either u' or p u'), the eigenvalues are the zeros of

    Phi = B_L[u1] B_R[u2] - B_L[u2] B_R[u1].

Both basis solutions are power series in mu = lambda - center with known
endpoint coefficients, so Phi becomes a polynomial in mu: the boundary
polynomials are recentred at the series center and multiplied in by
convolution.  Roots come from the companion matrix of the significant part
of that polynomial and are polished by a few Newton steps.

The sweep walks the spectrum: find the nearest new root, validate it by
recentring the basis there (a true eigenvalue makes the recentred
polynomial vanish at its own center), then move the center according to
the shift schedule and repeat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import build_basis, evaluate_solution, shift_basis
from .errors import (
    ConfigurationError,
    ContourError,
    DegeneratePolynomialError,
    ParticularResidualError,
    ShiftFailureError,
    SolverError,
    SweepStalledError,
)

__all__ = [
    "BoundaryCondition",
    "CharacteristicPolynomial",
    "ShiftSchedule",
    "EigenvalueRecord",
    "assemble_characteristic",
    "roots_of",
    "count_zeros",
    "sweep_eigenvalues",
    "landscape",
    "landscape_of",
    "is_real_problem",
]

POLICIES = ("always_previous", "previous_if_upper_half", "fixed_center")

# coefficients below this (relative to the largest) add nothing inside the
# trust region; used for the trust-radius estimate
COEFF_SIGNIFICANCE = 1e-14
# trailing coefficients are dropped before the companion-matrix root solve
# only when keeping them would overflow the c_k/c_D scaling.  The factorially
# small high-order coefficients carry *relative* accuracy and must stay:
# dropping them at 1e-14 * scale was measured to cost six digits in roots a
# distance ~10 from the center.
ROOT_STRIP_FACTOR = 1e-250
DEDUPE_FACTOR = 1e-6
LANDSCAPE_CAP = 308.0
MAX_CONTOUR_SAMPLES = 2**18


@dataclass(frozen=True, eq=False)
class BoundaryCondition:
    """alpha(lambda) * u + beta(lambda) * derivative = 0 at one endpoint.

    ``alpha`` and ``beta`` are polynomial coefficient arrays in lambda,
    lowest degree first.  ``derivative_form`` selects whether beta
    multiplies u' or the quasi-derivative p*u'.
    """

    endpoint: str  # "left" | "right"
    alpha: np.ndarray
    beta: np.ndarray
    derivative_form: str = "u_prime"

    def __eq__(self, other):
        if not isinstance(other, BoundaryCondition):
            return NotImplemented
        return (
            self.endpoint == other.endpoint
            and self.derivative_form == other.derivative_form
            and np.array_equal(self.alpha, other.alpha)
            and np.array_equal(self.beta, other.beta)
        )

    def __hash__(self):
        return hash((self.endpoint, self.derivative_form, self.alpha.tobytes(), self.beta.tobytes()))

    def __post_init__(self):
        if self.endpoint not in ("left", "right"):
            raise ValueError(f"endpoint must be 'left' or 'right', got {self.endpoint!r}")
        if self.derivative_form not in ("u_prime", "p_u_prime"):
            raise ValueError(f"unknown derivative_form {self.derivative_form!r}")
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=np.complex128))
        beta = np.atleast_1d(np.asarray(self.beta, dtype=np.complex128))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        alpha.flags.writeable = False
        beta.flags.writeable = False
        if not (np.any(alpha != 0) or np.any(beta != 0)):
            raise ValueError("alpha and beta cannot both be identically zero")

    @property
    def degree(self):
        return max(_poly_degree(self.alpha), _poly_degree(self.beta))


@dataclass(frozen=True)
class CharacteristicPolynomial:
    """Truncated series of Phi around ``center``: sum c_k (lambda-center)^k."""

    coeffs: np.ndarray
    center: complex
    degree_from_bc: int
    scale: float = field(init=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        object.__setattr__(self, "coeffs", coeffs)
        coeffs.flags.writeable = False
        object.__setattr__(self, "scale", float(np.abs(coeffs).max()) if coeffs.size else 0.0)

    def evaluate(self, lam):
        """Horner evaluation at scalar or array lambda."""
        mu = np.asarray(lam, dtype=np.complex128) - self.center
        acc = np.full_like(mu, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * mu + c
        if np.ndim(lam) == 0:
            return complex(acc[()])
        return acc

    def trust_radius(self, rel=1e-6):
        """Rough radius where the truncated tail stays below ``rel`` * scale."""
        significant = np.flatnonzero(np.abs(self.coeffs) >= COEFF_SIGNIFICANCE * self.scale)
        if significant.size == 0:
            return 0.0
        d = int(significant[-1])
        if d == 0:
            return math.inf
        top = abs(self.coeffs[d])
        return (rel * self.scale / top) ** (1.0 / d)


@dataclass(frozen=True)
class ShiftSchedule:
    """How the series center moves after each accepted eigenvalue."""

    delta: complex = 0.0
    policy: str = "always_previous"
    max_eigenvalues: int = 10

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.policy!r}")

    def next_center(self, found, current):
        """Center for the next step given eigenvalues found so far."""
        if self.policy == "fixed_center" or not found:
            return current
        if self.policy == "always_previous":
            return found[-1] + self.delta
        # previous_if_upper_half: stay on the last eigenvalue while its
        # imaginary part is positive, otherwise fall back one more
        if found[-1].imag > 0 or len(found) < 2:
            return found[-1] + self.delta
        return found[-2] + self.delta


@dataclass(frozen=True)
class EigenvalueRecord:
    index: int
    lam: complex
    center_used: complex
    validation_residual: float
    tail_indicator: float


def _poly_degree(coeffs):
    nz = np.flatnonzero(coeffs != 0)
    return int(nz[-1]) if nz.size else 0


def _recenter_poly(coeffs, center):
    """Rewrite sum a_k lambda^k as a polynomial in mu = lambda - center."""
    if center == 0:
        return np.array(coeffs, dtype=np.complex128)
    out = np.zeros_like(coeffs)
    for j in range(len(coeffs)):
        acc = 0.0 + 0.0j
        binom = 1.0
        for k in range(j, len(coeffs)):
            if k > j:
                binom = binom * k / (k - j)
            acc += coeffs[k] * binom * center ** (k - j)
        out[j] = acc
    return out


def _conv_trunc(a, b, length):
    full = np.convolve(a, b)[:length]
    if full.size < length:
        full = np.concatenate([full, np.zeros(length - full.size, dtype=np.complex128)])
    return full


def assemble_characteristic(basis, bc_left, bc_right):
    """Build the characteristic polynomial from endpoint series data.

    Requires the power anchor at the left endpoint so that u1, u2 have the
    known initial data there.
    """
    if basis.powers.anchor_slot != 0:
        raise ConfigurationError(
            "characteristic assembly requires the series anchored at the left endpoint"
        )
    if bc_left.endpoint != "left" or bc_right.endpoint != "right":
        raise ConfigurationError("boundary conditions must be one left, one right")

    n = basis.n_terms
    fp = basis.powers
    f_a = basis.particular.f.at_a
    f_b = basis.particular.f.at_b
    pf_a = basis.particular.pf_prime.at_a
    pf_b = basis.particular.pf_prime.at_b
    tilde_b = fp.tilde[:, -1]
    plain_b = fp.plain[:, -1]

    ks = np.arange(n + 1)
    u1_b = f_b * tilde_b[2 * ks]
    pu1_b = pf_b * tilde_b[2 * ks]
    pu1_b[1:] += tilde_b[2 * ks[1:] - 1] / f_b
    u2_b = f_b * plain_b[2 * ks + 1]
    pu2_b = pf_b * plain_b[2 * ks + 1] + plain_b[2 * ks] / f_b

    one = np.ones(1, dtype=np.complex128)
    left = {
        "u1": (f_a * one, pf_a * one),
        "u2": (np.zeros(1, dtype=np.complex128), (1.0 / f_a) * one),
    }
    right = {"u1": (u1_b, pu1_b), "u2": (u2_b, pu2_b)}

    def beta_effective(bc, p_end):
        if bc.derivative_form == "p_u_prime":
            return bc.beta
        if p_end == 0:
            raise ConfigurationError(
                "derivative_form 'u_prime' needs p nonzero at the endpoint"
            )
        return bc.beta / p_end

    p_a = basis.samples.p.values[0]
    p_b = basis.samples.p.values[-1]
    alpha_l = _recenter_poly(bc_left.alpha, basis.center)
    beta_l = _recenter_poly(beta_effective(bc_left, p_a), basis.center)
    alpha_r = _recenter_poly(bc_right.alpha, basis.center)
    beta_r = _recenter_poly(beta_effective(bc_right, p_b), basis.center)

    d_total = n + bc_left.degree + bc_right.degree
    length = d_total + 1

    def apply_bc(alpha, beta, pair):
        u, pu = pair
        return _conv_trunc(alpha, u, length) + _conv_trunc(beta, pu, length)

    bl_u1 = apply_bc(alpha_l, beta_l, left["u1"])
    bl_u2 = apply_bc(alpha_l, beta_l, left["u2"])
    br_u1 = apply_bc(alpha_r, beta_r, right["u1"])
    br_u2 = apply_bc(alpha_r, beta_r, right["u2"])

    coeffs = _conv_trunc(bl_u1, br_u2, length) - _conv_trunc(bl_u2, br_u1, length)
    return CharacteristicPolynomial(
        coeffs=coeffs,
        center=basis.center,
        degree_from_bc=bc_left.degree + bc_right.degree,
    )


def roots_of(phi):
    """All roots of the computable part of the polynomial.

    Trailing coefficients so small that normalizing by them would overflow
    the companion matrix are stripped; everything else stays, because even
    factorially tiny coefficients still steer roots far from the center.
    Each root is polished by at most 5 Newton steps.
    """
    if phi.scale == 0.0:
        raise DegeneratePolynomialError("characteristic polynomial is identically zero")
    keep = np.flatnonzero(np.abs(phi.coeffs) >= ROOT_STRIP_FACTOR * phi.scale)
    top = int(keep[-1])
    if top == 0:
        return np.empty(0, dtype=np.complex128)
    c = phi.coeffs[: top + 1]
    mu = np.roots(c[::-1])

    dc = c[1:] * np.arange(1, len(c))
    for _ in range(5):
        val = _polyval_ascending(c, mu)
        der = _polyval_ascending(dc, mu)
        ok = der != 0
        step = np.zeros_like(mu)
        step[ok] = val[ok] / der[ok]
        new = mu - step
        improved = np.abs(_polyval_ascending(c, new)) <= np.abs(val)
        mu = np.where(improved, new, mu)
        if np.all(np.abs(step[improved]) <= 1e-15 * (1.0 + np.abs(mu[improved]))):
            break

    return phi.center + mu


def _polyval_ascending(c, z):
    acc = np.full_like(z, c[-1])
    for coef in c[-2::-1]:
        acc = acc * z + coef
    return acc


def count_zeros(phi_evaluator, center, radius, samples=512):
    """Winding number of Phi along the circle |lambda - center| = radius.

    Sums principal-branch phase increments between consecutive samples;
    any increment near +-pi is ambiguous and triggers doubling of the
    sample count (up to 2^18).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = max(int(samples), 256)
    while True:
        theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        z = center + radius * np.exp(1j * theta)
        vals = np.asarray(phi_evaluator(z), dtype=np.complex128)
        if not np.all(np.isfinite(vals)):
            raise ContourError("characteristic function not finite on the contour")
        if np.any(vals == 0):
            k = int(np.argmin(np.abs(vals)))
            raise ContourError(f"zero lies on the contour at lambda={z[k]:.6g}")
        # distance of the nearest zero from the contour is roughly |phi|/|phi'|;
        # estimate phi' from neighbouring samples
        dphi = np.abs(np.roll(vals, -1) - vals)
        dz = 2.0 * math.pi * radius / n
        near = dphi > 0
        dist = np.abs(vals[near]) * dz / dphi[near]
        if dist.size and float(dist.min()) < 1e-6 * radius:
            k = int(np.flatnonzero(near)[int(np.argmin(dist))])
            raise ContourError(
                f"contour passes too close to a zero near lambda={z[k]:.6g}; "
                "change the radius"
            )
        ratios = np.roll(vals, -1) / vals
        incr = np.angle(ratios)
        if np.abs(incr).max() < 0.9 * math.pi:
            total = float(incr.sum())
            winding = total / (2.0 * math.pi)
            nearest = round(winding)
            if abs(winding - nearest) > 0.25:
                raise ContourError(
                    f"winding number {winding:.3f} is not close to an integer"
                )
            return int(nearest)
        if n >= MAX_CONTOUR_SAMPLES:
            raise ContourError(
                f"phase increments stay ambiguous at {n} samples; "
                "a zero probably sits on the contour"
            )
        n *= 2


def is_real_problem(samples, bc_left, bc_right, delta=0.0):
    """True when all inputs are real, so the spectrum is conjugate-symmetric."""
    return (
        float(np.abs(samples.p.values.imag).max()) == 0.0
        and float(np.abs(samples.q.values.imag).max()) == 0.0
        and float(np.abs(samples.r.values.imag).max()) == 0.0
        and float(np.abs(bc_left.alpha.imag).max()) == 0.0
        and float(np.abs(bc_left.beta.imag).max()) == 0.0
        and float(np.abs(bc_right.alpha.imag).max()) == 0.0
        and float(np.abs(bc_right.beta.imag).max()) == 0.0
        and complex(delta).imag == 0.0
    )


def _is_duplicate(candidate, found):
    return any(
        abs(candidate - lam) <= DEDUPE_FACTOR * (1.0 + abs(candidate)) for lam in found
    )


def sweep_eigenvalues(problem, config=None, particular=None):
    """Walk the spectrum, validating each candidate by recentring.

    Returns EigenvalueRecords.  For problems with entirely real data the
    records are sorted by real part and reindexed; otherwise they stay in
    discovery order.
    """
    from .problems import prepare  # local import keeps module layers acyclic

    config, samples, bc_left, bc_right, start = prepare(problem, config, particular)
    if config.max_eigenvalues <= 0:
        return []

    schedule = ShiftSchedule(
        delta=config.delta,
        policy=config.policy,
        max_eigenvalues=config.max_eigenvalues,
    )
    basis = build_basis(start, samples, config.n_terms)

    records = []
    found = []
    validated_basis = None
    while len(records) < config.max_eigenvalues:
        phi = assemble_characteristic(basis, bc_left, bc_right)
        candidates = roots_of(phi)
        order = np.argsort(np.abs(candidates - basis.center))
        failures = 0
        accepted = None
        for idx in order:
            cand = complex(candidates[idx])
            if _is_duplicate(cand, found):
                continue
            try:
                vbasis = shift_basis(basis, cand)
                vphi = assemble_characteristic(vbasis, bc_left, bc_right)
                residual = abs(vphi.coeffs[0]) / vphi.scale
            except (ShiftFailureError, ParticularResidualError, SolverError):
                failures += 1
                if failures >= 3:
                    raise SweepStalledError(
                        f"three consecutive candidates failed validation near center "
                        f"{basis.center}; increase the power count or the mesh resolution",
                        last_good_center=basis.center,
                    ) from None
                continue
            if residual > config.accept_threshold:
                failures += 1
                if failures >= 3:
                    raise SweepStalledError(
                        f"three consecutive candidates failed validation near center "
                        f"{basis.center} (last residual {residual:.2e}); "
                        "increase the power count or the mesh resolution",
                        last_good_center=basis.center,
                    )
                continue
            lam = _refine_in_frame(vphi, cand)
            tail = max(
                evaluate_solution(basis, cand, "first").truncation_tail,
                evaluate_solution(basis, cand, "second").truncation_tail,
            )
            accepted = EigenvalueRecord(
                index=len(records),
                lam=lam,
                center_used=basis.center,
                validation_residual=abs(vphi.evaluate(lam)) / vphi.scale,
                tail_indicator=tail,
            )
            validated_basis = vbasis
            break
        if accepted is None:
            raise SweepStalledError(
                f"no further candidate root could be validated from center {basis.center}",
                last_good_center=basis.center,
            )
        records.append(accepted)
        found.append(accepted.lam)
        if len(records) >= config.max_eigenvalues:
            break
        next_center = schedule.next_center(found, basis.center)
        try:
            if next_center == validated_basis.center:
                basis = validated_basis
            elif schedule.policy == "fixed_center":
                pass  # keep the current basis
            else:
                basis = shift_basis(validated_basis, next_center)
        except ShiftFailureError:
            break  # cannot continue the walk; report what was found

    if is_real_problem(samples, bc_left, bc_right, config.delta):
        records.sort(key=lambda rec: rec.lam.real)
        records = [
            EigenvalueRecord(
                index=i,
                lam=rec.lam,
                center_used=rec.center_used,
                validation_residual=rec.validation_residual,
                tail_indicator=rec.tail_indicator,
            )
            for i, rec in enumerate(records)
        ]
    return records


def _refine_in_frame(vphi, cand):
    """Nudge the accepted root using the recentred polynomial.

    In the validation frame the eigenvalue sits at the series center, where
    the polynomial is most accurate; its nearest root is a strictly better
    estimate as long as the correction is tiny.
    """
    try:
        mu = roots_of(vphi) - vphi.center
    except DegeneratePolynomialError:
        return cand
    if mu.size == 0:
        return cand
    step = mu[np.argmin(np.abs(mu))]
    if abs(step) <= 1e-3 * (1.0 + abs(cand)):
        return cand + complex(step)
    return cand


def landscape(problem, config=None, center=0.0, radius=10.0, grid=64, particular=None):
    """Sample -log|Phi| on a grid covering the disk's bounding square.

    Rows are ordered by decreasing imaginary part.  Points where Phi
    underflows to zero are clamped to LANDSCAPE_CAP.  Returns the matrix
    and a metadata dict including the trust radius and how much of the
    grid lies beyond it.
    """
    from .problems import prepare

    if grid < 16:
        raise ValueError("grid must be at least 16")
    config, samples, bc_left, bc_right, start = prepare(problem, config, particular)
    basis = build_basis(start, samples, config.n_terms)
    center = complex(center)
    if center != basis.center:
        basis = shift_basis(basis, center)
    phi = assemble_characteristic(basis, bc_left, bc_right)
    return landscape_of(phi, center, radius, grid)


def landscape_of(phi, center, radius, grid):
    """Landscape from an already assembled polynomial (see ``landscape``)."""
    center = complex(center)
    re = np.linspace(center.real - radius, center.real + radius, grid)
    im = np.linspace(center.imag + radius, center.imag - radius, grid)
    z = re[None, :] + 1j * im[:, None]
    vals = phi.evaluate(z)
    with np.errstate(divide="ignore"):
        height = -np.log(np.abs(vals))
    height[~np.isfinite(height)] = LANDSCAPE_CAP
    trust = phi.trust_radius()
    outside = float(np.mean(np.abs(z - center) > trust))
    meta = {
        "center": center,
        "radius": float(radius),
        "grid": int(grid),
        "trust_radius": float(trust),
        "outside_trust_fraction": outside,
    }
    return height, meta
