"""Closed-form calculus of motion reversals for the Dahl map (gamma == 1).

Everything here is derived for the ascending branch (positive velocity)
in the frame whose origin is the force zero crossing; descending
half-cycles are obtained by mirroring (f -> -f, x -> -x), which the
branch map permits because it is odd-symmetric under that flip.

The central objects are:

- the branch geometry: ``reversal_coordinate`` / ``zero_crossing`` place a
  reversal with force f_i relative to the zero crossing;
- the energies: ``energy_antiderivative`` accumulates restoring-force work
  along the branch and ``potential_energy`` is the recoverable energy of a
  reversal state, bounded by ``potential_energy_bound``;
- the next-reversal predictors: ``next_reversal_exact`` solves the energy
  balance by bracketed bisection, ``next_reversal_approx`` uses the
  linearized decay factor (two published variants, see below);
- ``reversal_chain`` iterates predictor and branch map into the full
  sequence of decaying half-cycle energies.

The linearized predictor exists in two algebraic variants that disagree
by a stiffness-ratio factor inside the denominator; the source material
is internally inconsistent about which is meant. Both are implemented
("printed" and "rederived") and the validation suite measures each
against the exact root instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from ._csv import write_csv
from .errors import ConvergenceError, DomainError
from .hysteresis import FrictionParams

__all__ = [
    "ReversalChainEntry",
    "OmegaApprox",
    "zero_crossing",
    "reversal_coordinate",
    "energy_antiderivative",
    "potential_energy",
    "potential_energy_bound",
    "omega",
    "omega_approx",
    "next_reversal_exact",
    "next_reversal_approx",
    "next_reversal_force",
    "reversal_chain",
    "write_chain_csv",
]

# exponent of the slope correction in the linearized decay factor; a fixed
# model constant, not a tunable
SLOPE_EXPONENT = 0.6

ApproxForm = Literal["printed", "rederived"]


@dataclass(frozen=True)
class OmegaApprox:
    """Linear stand-in for the branch decay factor: value(x) = 1 - k_slope*x."""

    k_slope: float

    def value(self, x: float) -> float:
        return 1.0 - self.k_slope * x


@dataclass(frozen=True)
class ReversalChainEntry:
    """One reversal of the recursive half-cycle chain.

    n    step index (0 is the seed reversal).
    f_n  signed restoring force at reversal n; alternates sign.
    x_n  reversal coordinate in the frame of the branch leaving reversal n
         (force zero crossing at the origin); mirrors sign with f_n.
    e_p  recoverable potential energy at reversal n.
    e_d  energy dissipated on the half-cycle from reversal n to n+1.
    """

    n: int
    f_n: float
    x_n: float
    e_p: float
    e_d: float


def _check_reversal_force(f_i: float, p: FrictionParams, allow_zero: bool = False) -> None:
    hi_ok = (f_i <= 0.0) if allow_zero else (f_i < 0.0)
    if not (-p.f_c <= f_i and hi_ok):
        upper = "0]" if allow_zero else "0)"
        raise DomainError(
            f"reversal force f_i={f_i} outside admissible range [-f_c, {upper} "
            f"with f_c={p.f_c}"
        )


def _log_force_ratio(f_i: float, p: FrictionParams) -> float:
    # ln(f_c / (f_c - f_i)), evaluated stably for f_i near 0
    return -math.log1p(-f_i / p.f_c)


def zero_crossing(x_i: float, f_i: float, p: FrictionParams) -> float:
    """Displacement where the ascending branch from (x_i, f_i < 0) crosses zero force.

    x_0 = x_i - (f_c/sigma) * ln(f_c / (f_c - f_i)); always ahead of x_i.
    """
    p.require_gamma_one()
    _check_reversal_force(f_i, p)
    return x_i - (p.f_c / p.sigma) * _log_force_ratio(f_i, p)


def reversal_coordinate(f_i: float, p: FrictionParams) -> float:
    """Reversal displacement in the frame with the force zero crossing at 0.

    x_i = (f_c/sigma) * ln(f_c / (f_c - f_i)) < 0 for admissible f_i in
    [-f_c, 0).
    """
    p.require_gamma_one()
    _check_reversal_force(f_i, p)
    return (p.f_c / p.sigma) * _log_force_ratio(f_i, p)


def energy_antiderivative(x: float, p: FrictionParams) -> float:
    """Restoring-force work accumulated along the ascending branch.

    In the zero-crossing frame the branch is f(x) = f_c*(1 - exp(-(sigma/f_c)*x))
    and its antiderivative, anchored to 0 at the origin, is
    f_c*x + (f_c^2/sigma)*(exp(-(sigma/f_c)*x) - 1). Evaluated with expm1 so
    the quadratic small-x behavior keeps full relative precision.
    """
    p.require_gamma_one()
    scale = p.f_c / p.sigma
    return p.f_c * x + p.f_c * scale * math.expm1(-x / scale)


def potential_energy(f_i: float, p: FrictionParams) -> float:
    """Recoverable potential energy of a reversal with force f_i in [-f_c, 0].

    E_p = (f_c^2/sigma) * (ln(f_c/(f_c - f_i)) - f_i/f_c) >= 0, zero only
    at f_i = 0. This also equals the peak kinetic energy of the following
    half-cycle, attained at the force zero crossing.
    """
    p.require_gamma_one()
    _check_reversal_force(f_i, p, allow_zero=True)
    return (p.f_c**2 / p.sigma) * (_log_force_ratio(f_i, p) - f_i / p.f_c)


def potential_energy_bound(p: FrictionParams) -> float:
    """Largest recoverable energy of any reversal state: (1 - ln 2) * f_c^2/sigma."""
    p.require_gamma_one()
    return (1.0 - math.log(2.0)) * p.f_c**2 / p.sigma


def omega(x: float, p: FrictionParams) -> float:
    """Exponential decay factor of the ascending branch: exp(-(sigma/f_c)*x)."""
    return math.exp(-(p.sigma / p.f_c) * x)


def omega_approx(f_i: float, p: FrictionParams) -> OmegaApprox:
    """Linear approximation of the decay factor, anchored at value 1 at x = 0.

    The slope K = (sigma/f_c) * (f_c/(f_c - f_i))**0.6 folds in the
    reversal state so the chord stays close to the exponential over the
    upcoming half-cycle.
    """
    p.require_gamma_one()
    _check_reversal_force(f_i, p)
    k = (p.sigma / p.f_c) * math.exp(SLOPE_EXPONENT * _log_force_ratio(f_i, p))
    return OmegaApprox(k_slope=k)


def next_reversal_exact(f_i: float, p: FrictionParams, tol: float = 1e-12) -> float:
    """Next reversal displacement from the energy balance, solved numerically.

    Finds the unique x > 0 (zero-crossing frame) where the work absorbed by
    the ascending branch equals the potential energy released since the
    last reversal: energy_antiderivative(x) == potential_energy(f_i). The
    unknown appears both linearly and inside the exponential, so there is
    no explicit solution; a bracket [0, x_hi] is grown geometrically until
    the residual changes sign and then bisected until
    |residual| < tol * potential_energy(f_i).
    """
    p.require_gamma_one()
    _check_reversal_force(f_i, p)
    e_p = potential_energy(f_i, p)

    def residual(x: float) -> float:
        return energy_antiderivative(x, p) - e_p

    x_hi = max(e_p / p.f_c, p.f_c / p.sigma)
    for _ in range(200):
        if residual(x_hi) > 0.0:
            break
        x_hi *= 2.0
    else:
        raise ConvergenceError(
            f"could not bracket the next reversal for f_i={f_i}"
        )

    lo, hi = 0.0, x_hi
    mid = 0.5 * (lo + hi)
    for _ in range(256):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        r = residual(mid)
        if abs(r) <= tol * e_p:
            return mid
        if r < 0.0:
            lo = mid
        else:
            hi = mid
    return mid


def next_reversal_approx(f_i: float, p: FrictionParams, *, form: ApproxForm) -> float:
    """Next reversal displacement from the linearized energy balance.

    Substituting the linear decay factor into the energy balance makes it
    explicitly solvable. Two variants are shipped:

    - "printed": x = (E_p/f_c) / (1 - (f_c/sigma)*(f_c/(f_c-f_i))**0.6),
      the formula as published;
    - "rederived": x = (E_p/f_c) / (1 - (f_c/(f_c-f_i))**0.6), what the
      substitution of the linear slope actually yields.

    The two agree only at sigma == f_c. Neither is endorsed here; the
    validation suite quantifies both against next_reversal_exact. Raises
    on a non-positive denominator ("printed" degenerates once
    sigma/f_c drops below the slope correction).
    """
    p.require_gamma_one()
    _check_reversal_force(f_i, p)
    e_p = potential_energy(f_i, p)
    correction = math.exp(SLOPE_EXPONENT * _log_force_ratio(f_i, p))
    if form == "printed":
        denom = 1.0 - (p.f_c / p.sigma) * correction
    elif form == "rederived":
        denom = 1.0 - correction
    else:
        raise DomainError(f"unknown approximation form {form!r}")
    if denom <= 0.0:
        raise DomainError(
            f"degenerate denominator {denom} for form={form!r}, f_i={f_i}, "
            f"sigma/f_c={p.ratio}"
        )
    return (e_p / p.f_c) / denom


def next_reversal_force(x_next: float, f_i: float, p: FrictionParams) -> float:
    """Restoring force where the ascending branch from f_i reaches x_next.

    x_next is given in the zero-crossing frame (same frame as the
    predictors); it must not lie behind the reversal coordinate of f_i.
    """
    p.require_gamma_one()
    _check_reversal_force(f_i, p)
    x_i = reversal_coordinate(f_i, p)
    if x_next < x_i:
        raise DomainError(
            f"x_next={x_next} lies behind the reversal coordinate {x_i}"
        )
    return p.f_c - (p.f_c - f_i) * math.exp(-(p.sigma / p.f_c) * (x_next - x_i))


def reversal_chain(
    f_0: float,
    n_steps: int,
    p: FrictionParams,
    mode: Literal["exact", "approx"] = "exact",
    tol: float = 1e-12,
    approx_form: ApproxForm = "rederived",
) -> list[ReversalChainEntry]:
    """Iterate the half-cycle recursion from a seed reversal force f_0 < 0.

    Each step maps the current reversal force to the next reversal
    displacement (exact energy balance or the linearized predictor, per
    `mode`) and evaluates the branch there for the next force. Descending
    half-cycles are handled by sign mirroring, so recorded forces
    alternate sign while their magnitudes decay strictly.

    Returns n_steps fully populated entries (n = 0 .. n_steps-1); the
    dissipated energy of the last entry uses one extra prediction beyond
    it. Partial sums of e_d telescope to e_p(0) - e_p(n_steps).
    """
    p.require_gamma_one()
    _check_reversal_force(f_0, p)
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps}")
    if mode not in ("exact", "approx"):
        raise DomainError(f"unknown chain mode {mode!r}")

    entries: list[ReversalChainEntry] = []
    f_signed = f_0
    for n in range(n_steps):
        f_up = -abs(f_signed)  # ascending-frame force of this half-cycle
        e_p_n = potential_energy(f_up, p)
        x_frame = reversal_coordinate(f_up, p)
        x_n = x_frame if f_signed < 0.0 else -x_frame
        if mode == "exact":
            x_next = next_reversal_exact(f_up, p, tol=tol)
        else:
            x_next = next_reversal_approx(f_up, p, form=approx_form)
        f_next_mag = next_reversal_force(x_next, f_up, p)
        e_p_next = potential_energy(-f_next_mag, p)
        entries.append(
            ReversalChainEntry(n=n, f_n=f_signed, x_n=x_n, e_p=e_p_n, e_d=e_p_n - e_p_next)
        )
        f_signed = f_next_mag if f_signed < 0.0 else -f_next_mag
    return entries


def write_chain_csv(entries: list[ReversalChainEntry], path) -> int:
    """Serialize a reversal chain; returns the number of data rows."""
    return write_csv(
        path,
        ["n", "F_n", "x_n", "E_p", "E_d"],
        ((e.n, e.f_n, e.x_n, e.e_p, e.e_d) for e in entries),
    )
