"""Independent brute-force numerical kernels.

Adaptive quadrature, bracketed bisection, central finite differences and
reference fine-step integration. These are the certification tools for
every closed-form result in the package: they deliberately share no code
with the analytic branch/energy formulas, so agreement between the two
routes is evidence rather than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadResult",
    "integrate",
    "find_root",
    "derivative",
    "reference_integrate",
]

_MAX_DEPTH = 50


@dataclass(frozen=True)
class QuadResult:
    """Adaptive quadrature outcome: value, error estimate, evaluation count."""

    value: float
    error_estimate: float
    evaluations: int


def integrate(f: Callable[[float], float], a: float, b: float, rel_tol: float = 1e-10) -> QuadResult:
    """Adaptive Simpson quadrature of f over [a, b].

    Recursion depth is capped at 50; exceeding it raises ConvergenceError.
    On smooth integrands the result satisfies
    |value - truth| <= rel_tol*|value| + 1e-15. Simpson's rule is exact on
    cubics per panel, so polynomial integrands terminate immediately.
    """
    if a > b:
        raise DomainError(f"integration bounds reversed: a={a} > b={b}")
    if a == b:
        return QuadResult(0.0, 0.0, 3)

    evals = [0]

    def ev(x: float) -> float:
        evals[0] += 1
        return f(x)

    m = 0.5 * (a + b)
    fa, fm, fb = ev(a), ev(m), ev(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    eps = rel_tol * abs(whole) + 1e-15

    def recurse(lo, mid, hi, flo, fmid, fhi, s, eps_local, depth):
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm, frm = ev(lm), ev(rm)
        s_left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        s_right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        s2 = s_left + s_right
        err = (s2 - s) / 15.0
        if abs(s2 - s) <= 15.0 * eps_local:
            return s2 + err, abs(err)
        if depth <= 0:
            raise ConvergenceError(
                f"adaptive Simpson exceeded depth cap {_MAX_DEPTH} on "
                f"[{lo}, {hi}]"
            )
        v1, e1 = recurse(lo, lm, mid, flo, flm, fmid, s_left, 0.5 * eps_local, depth - 1)
        v2, e2 = recurse(mid, rm, hi, fmid, frm, fhi, s_right, 0.5 * eps_local, depth - 1)
        return v1 + v2, e1 + e2

    value, err = recurse(a, m, b, fa, fm, fb, whole, eps, _MAX_DEPTH)
    return QuadResult(value, err, evals[0])


def find_root(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    """Bisection root of f on [a, b]; requires a sign change on the bracket.

    Bisects until the bracket width drops below tol and returns the
    midpoint.
    """
    if a > b:
        raise DomainError(f"bracket reversed: a={a} > b={b}")
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise DomainError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    while (b - a) >= tol:
        m = 0.5 * (a + b)
        if m == a or m == b:
            break  # bracket at floating-point resolution
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def derivative(f: Callable[[float], float], x: float, h: float | None = None) -> float:
    """Central finite difference (f(x+h) - f(x-h)) / (2h).

    Default h = max(1e-6, 1e-6*|x|) balances truncation against rounding
    for double precision.
    """
    if h is None:
        h = max(1e-6, 1e-6 * abs(x))
    if not h > 0:
        raise DomainError(f"step h must be > 0, got {h}")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def reference_integrate(cfg, refinement: int):
    """Re-run a simulation with the step size divided by `refinement`.

    The returned fine trajectory acts as the convergence oracle for the
    fixed-step integrator (a 4th-order method shrinks its global error by
    ~refinement**4). refinement must be >= 2.
    """
    if refinement < 2:
        raise DomainError(f"refinement must be >= 2, got {refinement}")
    # local import keeps this module free of analytic/simulation imports
    # at load time (oracle sits below everything else in the dependency order)
    from dataclasses import replace

    from .oscillator import simulate

    return simulate(replace(cfg, dt=cfg.effective_dt() / refinement))
