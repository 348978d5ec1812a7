"""Restoring-force maps with memory.

Two rate-independent force-displacement maps are implemented:

- the Dahl friction model, in its differential form (``dahl_rate``, any
  shape exponent gamma >= 0) and in its algebraic branch form
  (``dahl_branch_force``, gamma == 1 only), and
- the saturating linear spring (``stop_spring_force``), the piecewise
  affine stop-type map that serves as the zero-dissipation reference.

A hysteresis branch is the curve traced after one velocity reversal; it
is fully described by the reversal point, the force there, and the
motion direction (``BranchState``). All values are immutable and all
operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .oracle import integrate

__all__ = [
    "FrictionParams",
    "BranchState",
    "LinearSpringParams",
    "dahl_rate",
    "dahl_branch_force",
    "reverse_branch",
    "stop_spring_force",
    "loop_dissipation",
]


@dataclass(frozen=True)
class FrictionParams:
    """Dahl model constants.

    f_c    Coulomb friction level, the saturation magnitude of the force (> 0).
    sigma  rest stiffness, the force-displacement slope at zero force (> 0).
    gamma  dimensionless shape exponent (>= 0). The closed-form branch and
           energy formulas require gamma == 1 exactly; the differential
           form accepts any value.
    mass   oscillating point mass (> 0).
    """

    f_c: float
    sigma: float
    gamma: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not self.f_c > 0:
            raise DomainError(f"f_c must be > 0, got {self.f_c}")
        if not self.sigma > 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if not self.mass > 0:
            raise DomainError(f"mass must be > 0, got {self.mass}")

    @property
    def ratio(self) -> float:
        """Stiffness-to-friction ratio sigma/f_c, the shape parameter of decay."""
        return self.sigma / self.f_c

    def require_gamma_one(self) -> None:
        if self.gamma != 1.0:
            raise DomainError(
                f"closed-form branch operations require gamma == 1, got {self.gamma}"
            )


@dataclass(frozen=True)
class BranchState:
    """Memory of one hysteresis branch: last reversal point and direction.

    x_rev      displacement of the last reversal.
    f_rev      restoring force at that reversal (|f_rev| <= f_c is checked
               against the governing FrictionParams at use sites).
    direction  sign of velocity on the branch, exactly +1 or -1.
    """

    x_rev: float
    f_rev: float
    direction: int

    def __post_init__(self) -> None:
        if self.direction not in (+1, -1):
            raise DomainError(f"direction must be +1 or -1, got {self.direction}")

    def shifted(self, dx: float) -> "BranchState":
        """Same branch translated by dx along the displacement axis."""
        return BranchState(self.x_rev + dx, self.f_rev, self.direction)


@dataclass(frozen=True)
class LinearSpringParams:
    """Saturating linear spring: stiffness k, saturation force f_c (both > 0)."""

    k: float
    f_c: float

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise DomainError(f"k must be > 0, got {self.k}")
        if not self.f_c > 0:
            raise DomainError(f"f_c must be > 0, got {self.f_c}")


def dahl_rate(f: float, v: float, p: FrictionParams) -> float:
    """Force-displacement slope dF/dx of the Dahl model (differential form).

    Returns sigma * (1 - (f/f_c)*sgn(v))**gamma. For v == 0 the force does
    not evolve and the rate is 0. The force must lie inside the admissible
    band |f| <= f_c; outside it the simplified power form is invalid and a
    DomainError is raised (an integrator driving the state there took too
    large a step).
    """
    if v == 0.0:
        return 0.0
    if abs(f) > p.f_c:
        raise DomainError(
            f"|f|={abs(f)} escaped the admissible band f_c={p.f_c}; "
            "integration step too large"
        )
    s = 1.0 if v > 0.0 else -1.0
    base = 1.0 - (f / p.f_c) * s
    if base >= 0.0:
        return p.sigma * base**p.gamma
    # unreachable under the |f| <= f_c precondition; kept as the defensive
    # full differential form (magnitude to the gamma, times the sign)
    return -p.sigma * (-base) ** p.gamma


def _check_branch(x: float, b: BranchState, f_c: float) -> None:
    if abs(b.f_rev) > f_c:
        raise DomainError(f"|f_rev|={abs(b.f_rev)} exceeds f_c={f_c}")
    if (x - b.x_rev) * b.direction < 0.0:
        raise DomainError(
            f"x={x} lies behind the reversal point x_rev={b.x_rev} "
            f"for direction {b.direction:+d}"
        )


def dahl_branch_force(x: float, b: BranchState, p: FrictionParams) -> float:
    """Dahl restoring force along one branch (algebraic form, gamma == 1).

    F(x) = d*(f_c - (f_c - d*f_rev)*exp(-d*(sigma/f_c)*(x - x_rev))) with
    d = b.direction. Defined only forward of the reversal point; querying
    behind it raises (the branch has no physical meaning there). The result
    is bounded, |F| <= f_c, and tends monotonically to direction*f_c.
    """
    p.require_gamma_one()
    _check_branch(x, b, p.f_c)
    if x == b.x_rev:
        return b.f_rev  # exact pass-through of the initial condition
    d = float(b.direction)
    expo = math.exp(-d * (p.sigma / p.f_c) * (x - b.x_rev))
    return d * (p.f_c - (p.f_c - d * b.f_rev) * expo)


def reverse_branch(b: BranchState, x_new: float, p: FrictionParams) -> BranchState:
    """Branch bookkeeping at a motion reversal.

    Evaluates the current branch at x_new and returns the new branch that
    starts there with flipped direction. Pure; b is unchanged.
    """
    f_new = dahl_branch_force(x_new, b, p)
    return BranchState(x_new, f_new, -b.direction)


def stop_spring_force(x: float, b: BranchState, sp: LinearSpringParams) -> float:
    """Saturating linear spring force with memory (stop-type map).

    F = clamp(f_rev + k*(x - x_rev), -f_c, +f_c). Inside the band the map
    is exactly affine, so closed unsaturated cycles are conservative.
    """
    f = b.f_rev + sp.k * (x - b.x_rev)
    return min(max(f, -sp.f_c), sp.f_c)


def loop_dissipation(
    b_up: BranchState,
    b_down: BranchState,
    x_lo: float,
    x_hi: float,
    force_map,
    params,
    rel_tol: float = 1e-10,
) -> float:
    """Area between an ascending and a descending branch over [x_lo, x_hi].

    Net dissipated energy of one cycle: integral of
    (force_map(x, b_up) - force_map(x, b_down)) dx, computed by adaptive
    quadrature to relative tolerance rel_tol. For a clockwise hysteresis
    map the ascending branch lies above the descending one and the result
    is >= 0; for the unsaturated linear spring it vanishes.

    force_map is one of dahl_branch_force / stop_spring_force; params is
    the matching parameter object.
    """
    if x_lo > x_hi:
        raise DomainError(f"x_lo={x_lo} must not exceed x_hi={x_hi}")
    if x_lo == x_hi:
        return 0.0
    if b_up.direction != +1:
        raise DomainError("b_up must be an ascending branch (direction +1)")
    if b_down.direction != -1:
        raise DomainError("b_down must be a descending branch (direction -1)")
    if b_up.x_rev > x_lo:
        raise DomainError("b_up must ascend from at or below x_lo")
    if b_down.x_rev < x_hi:
        raise DomainError("b_down must descend from at or above x_hi")

    def gap(x: float) -> float:
        return force_map(x, b_up, params) - force_map(x, b_down, params)

    return integrate(gap, x_lo, x_hi, rel_tol=rel_tol).value
