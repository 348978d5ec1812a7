"""Oracle-backed validation checks behind the `validate` CLI command.

Each check pits a closed-form result against an independent numerical
route (quadrature, finite differences, fine-step simulation) or asserts a
structural property of the model. Results carry the measured error and
the tolerance it was judged against, so the emitted report doubles as a
numerical audit trail.

Frozen regression constants (measured once with the oracle, then pinned):

- OMEGA_ENVELOPE_BOUND: worst |omega - omega_approx| over the standard
  ratio/force grid (measured 0.0659);
- APPROX_REDERIVED_BOUND: worst relative deviation of the "rederived"
  linearized predictor from the exact root over the audit grids
  (measured 0.1211);
- SERIES_99PCT_STEPS: half-cycles needed to dissipate 99% of the seed
  energy at sigma/f_c = 10 from a fully saturated reversal (measured 18).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hysteresis import (
    BranchState,
    FrictionParams,
    LinearSpringParams,
    dahl_branch_force,
    dahl_rate,
    loop_dissipation,
    reverse_branch,
    stop_spring_force,
)
from .oracle import derivative, integrate
from .oscillator import SimConfig, Trajectory, restoring_energy_between, simulate
from .reversal import (
    next_reversal_approx,
    next_reversal_exact,
    omega,
    omega_approx,
    potential_energy,
    reversal_chain,
    reversal_coordinate,
)
from .errors import DomainError

__all__ = [
    "CheckResult",
    "ValidationReport",
    "run_all",
    "approx_form_audit",
    "omega_envelope_deviation",
    "AUDIT_HEADER",
    "OMEGA_ENVELOPE_BOUND",
    "APPROX_REDERIVED_BOUND",
    "SERIES_99PCT_STEPS",
]

OMEGA_ENVELOPE_BOUND = 0.07
APPROX_REDERIVED_BOUND = 0.13
SERIES_99PCT_STEPS = 18

# standard grids reused by several checks
RATIO_GRID_WIDE = (1.0, 10.0, 100.0, 1000.0)
RATIO_GRID_APPROX = (1.0, 2.0, 8.0)
FORCE_FRACTIONS = (0.2, 0.4, 0.6, 0.8, 1.0)
FC_VALUES = (1.0, 1.5, 2.0)

AUDIT_HEADER = [
    "grid",
    "ratio",
    "F_i_over_Fc",
    "x_next_exact",
    "x_next_printed",
    "x_next_rederived",
    "rel_dev_printed",
    "rel_dev_rederived",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult]
    audit_rows: list[tuple]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _sim(ratio: float, max_reversals: int = 12) -> Trajectory:
    p = FrictionParams(f_c=1.0, sigma=ratio)
    cfg = SimConfig(params=p, x0=0.0, v0=0.5, max_reversals=max_reversals, t_max=200.0)
    return simulate(cfg)


def check_max_potential_energy() -> CheckResult:
    """E_p at a saturated reversal vs the stated 0.3069*f_c^2/sigma maximum."""
    worst = 0.0
    for f_c, sigma in ((1.0, 1.0), (2.0, 5.0), (0.5, 40.0)):
        p = FrictionParams(f_c=f_c, sigma=sigma)
        stated = 0.3069 * f_c**2 / sigma
        worst = max(worst, abs(potential_energy(-f_c, p) - stated) / stated)
    return CheckResult("max-potential-energy", worst < 5e-4, worst, 5e-4)


def check_quadrature_equivalence() -> CheckResult:
    """Closed-form reversal energy vs adaptive quadrature of the branch force."""
    worst = 0.0
    for ratio in RATIO_GRID_WIDE:
        p = FrictionParams(f_c=1.0, sigma=ratio)
        for u in np.arange(0.1, 1.0001, 0.1):
            f_i = -u * p.f_c
            x_i = reversal_coordinate(f_i, p)
            branch = BranchState(x_rev=x_i, f_rev=f_i, direction=+1)
            quad = integrate(
                lambda x: dahl_branch_force(x, branch, p), x_i, 0.0, rel_tol=1e-12
            )
            e_ref = -quad.value
            rel = abs(potential_energy(f_i, p) - e_ref) / e_ref
            worst = max(worst, rel)
    return CheckResult("quadrature-equivalence", worst < 1e-8, worst, 1e-8)


def check_form_consistency() -> CheckResult:
    """Finite-difference slope of the algebraic branch vs the differential form."""
    worst = 0.0
    for ratio in (1.0, 10.0, 100.0):
        p = FrictionParams(f_c=1.0, sigma=ratio)
        branch = BranchState(x_rev=0.0, f_rev=-p.f_c, direction=+1)
        for f_target in np.linspace(-0.9, 0.9, 10):
            x = (p.f_c / p.sigma) * math.log(2.0 / (1.0 - f_target))
            slope_fd = derivative(lambda q: dahl_branch_force(q, branch, p), x)
            slope_model = dahl_rate(dahl_branch_force(x, branch, p), +1.0, p)
            rel = abs(slope_fd - slope_model) / abs(slope_model)
            worst = max(worst, rel)
    return CheckResult("form-consistency", worst < 1e-6, worst, 1e-6)


def check_stop_spring_conservative() -> CheckResult:
    """Unsaturated linear-spring cycle dissipates nothing."""
    sp = LinearSpringParams(k=2.0, f_c=1.0)
    x_amp = 0.35
    b_up = BranchState(x_rev=0.0, f_rev=-0.4, direction=+1)
    f_hi = stop_spring_force(x_amp, b_up, sp)
    b_down = BranchState(x_rev=x_amp, f_rev=f_hi, direction=-1)
    delta = loop_dissipation(b_up, b_down, 0.0, x_amp, stop_spring_force, sp)
    tol = 1e-10 * sp.k * x_amp**2
    return CheckResult("stop-spring-conservative", abs(delta) < tol, abs(delta), tol)


def check_clockwise_dissipation(n_cycles: int = 20) -> CheckResult:
    """Randomized admissible (closed) Dahl cycles all dissipate (fixed seed).

    A Dahl cycle closes exactly when the two reversal forces are opposite
    (f_hi = -f_lo); those are the paths the closed-cycle dissipation result
    is stated for, so admissible cycles are drawn from that family.
    """
    rng = np.random.default_rng(20230901)
    min_delta = math.inf
    for _ in range(n_cycles):
        f_c = float(rng.uniform(0.5, 2.0))
        sigma = f_c * float(rng.uniform(1.0, 100.0))
        p = FrictionParams(f_c=f_c, sigma=sigma)
        c = float(rng.uniform(0.1, 0.95))
        x_lo = float(rng.uniform(-1.0, 1.0))
        x_hi = x_lo + (f_c / sigma) * math.log((1.0 + c) / (1.0 - c))
        b_up = BranchState(x_rev=x_lo, f_rev=-c * f_c, direction=+1)
        b_down = reverse_branch(b_up, x_hi, p)
        delta = loop_dissipation(b_up, b_down, x_lo, x_hi, dahl_branch_force, p)
        min_delta = min(min_delta, delta)
    return CheckResult(
        "clockwise-dissipation", min_delta > 0.0, min_delta, 0.0,
        detail=f"min loop area over {n_cycles} closed cycles",
    )


def check_energy_balance(traj: Trajectory, label: str) -> list[CheckResult]:
    """Conserved sum (m/2)v^2 + e_f along the trajectory; |v| ~ 0 at reversals."""
    cfg = traj.config
    m = cfg.params.mass
    e0 = 0.5 * m * cfg.v0**2
    drift = float(np.max(np.abs(0.5 * m * traj.v**2 + traj.e_f_cum - e0)) / e0)
    v_rev = 0.0
    for r in traj.reversals:
        k = int(np.searchsorted(traj.t, r.t_i))
        v_rev = max(v_rev, abs(float(traj.v[k])))
    return [
        CheckResult(f"energy-balance-drift-{label}", drift < 1e-6, drift, 1e-6),
        CheckResult(f"reversal-speed-{label}", v_rev < 1e-9, v_rev, 1e-9),
    ]


def check_equal_areas(traj: Trajectory) -> CheckResult:
    """Restoring-force work between consecutive reversals cancels."""
    worst = 0.0
    for i in range(len(traj.reversals) - 1):
        r0, r1 = traj.reversals[i], traj.reversals[i + 1]
        total = restoring_energy_between(traj, r0.t_i, r1.t_i)
        worst = max(worst, abs(total) / r0.e_p)
    return CheckResult("equal-areas", worst < 1e-5, worst, 1e-5)


def check_chain_vs_simulation(traj: Trajectory, n: int = 10) -> CheckResult:
    """Analytic reversal recursion vs simulated reversal forces."""
    p = traj.config.params
    seed = -abs(traj.reversals[0].f_i)
    chain = reversal_chain(seed, n, p, mode="exact")
    worst = 0.0
    for entry, record in zip(chain, traj.reversals[:n]):
        worst = max(worst, abs(abs(entry.f_n) - abs(record.f_i)) / abs(record.f_i))
    return CheckResult("chain-vs-simulation", worst < 1e-3, worst, 1e-3)


def check_series_convergence() -> list[CheckResult]:
    """Partial dissipation sums: monotone, bounded by E_p(0), 99% by the frozen N."""
    p = FrictionParams(f_c=1.0, sigma=10.0)
    chain = reversal_chain(-p.f_c, 60, p, mode="exact")
    e_p0 = chain[0].e_p
    partial = np.cumsum([e.e_d for e in chain])
    monotone = bool(np.all(np.diff(partial) > 0.0))
    bounded = bool(np.all(partial < e_p0))
    frac_at_frozen = float(partial[SERIES_99PCT_STEPS - 1] / e_p0)
    return [
        CheckResult(
            "series-monotone-bounded", monotone and bounded,
            float(partial[-1] / e_p0), 1.0,
            detail="partial sums increase and stay below E_p(0)",
        ),
        CheckResult(
            "series-99pct-at-frozen-N", frac_at_frozen >= 0.99, frac_at_frozen, 0.99,
            detail=f"fraction of E_p(0) dissipated after {SERIES_99PCT_STEPS} half-cycles",
        ),
    ]


def check_monotone_decay(trajs: list[Trajectory]) -> CheckResult:
    """Strict decay of reversal energies and forces, and positivity, everywhere."""
    ok = True
    min_ep = math.inf
    for ratio in (10.0, 100.0, 1000.0):
        p = FrictionParams(f_c=1.0, sigma=ratio)
        chain = reversal_chain(-p.f_c, 40, p, mode="exact")
        for a, b in zip(chain, chain[1:]):
            ok = ok and b.e_p < a.e_p and abs(b.f_n) < abs(a.f_n)
        ok = ok and all(e.e_p > 0.0 for e in chain)
        min_ep = min(min_ep, chain[-1].e_p)
    for traj in trajs:
        recs = traj.reversals
        for a, b in zip(recs, recs[1:]):
            ok = ok and b.e_p < a.e_p and abs(b.f_i) < abs(a.f_i)
        ok = ok and all(r.e_p > 0.0 for r in recs)
        min_ep = min(min_ep, recs[-1].e_p)
    return CheckResult(
        "monotone-decay", ok, min_ep, 0.0,
        detail="E_p and |F| strictly decreasing, E_p > 0 at every finite reversal",
    )


def check_reversal_frequency_trend(trajs: list[Trajectory]) -> CheckResult:
    """Mean inter-reversal time strictly decreases with sigma/f_c."""
    means = []
    for traj in trajs:
        times = [r.t_i for r in traj.reversals]
        means.append(float(np.mean(np.diff(times))))
    ok = all(b < a for a, b in zip(means, means[1:]))
    return CheckResult(
        "reversal-frequency-trend", ok, means[-1], means[0],
        detail="mean inter-reversal times " + ", ".join(f"{m:.5f}" for m in means),
    )


def approx_form_audit() -> tuple[list[tuple], float, float, int]:
    """Compare both linearized-predictor forms to the exact root.

    Returns (rows, max_dev_printed, max_dev_rederived, n_degenerate_printed)
    over the two standard grids: ratio sweep at fixed f_c, and f_c sweep at
    fixed sigma = 1 (where the printed form degenerates for f_c > sigma).
    """
    rows: list[tuple] = []
    devs = {"printed": 0.0, "rederived": 0.0}
    n_degenerate = 0
    grids = [("ratio-sweep", [FrictionParams(1.0, r) for r in RATIO_GRID_APPROX])]
    grids.append(("fc-sweep", [FrictionParams(fc, 1.0) for fc in FC_VALUES]))
    for grid_name, param_list in grids:
        for p in param_list:
            for u in FORCE_FRACTIONS:
                f_i = -u * p.f_c
                x_exact = next_reversal_exact(f_i, p)
                x_by_form = {}
                dev_by_form = {}
                for form in ("printed", "rederived"):
                    try:
                        x_a = next_reversal_approx(f_i, p, form=form)
                        x_by_form[form] = x_a
                        dev_by_form[form] = abs(x_a - x_exact) / x_exact
                        devs[form] = max(devs[form], dev_by_form[form])
                    except DomainError:
                        x_by_form[form] = math.nan
                        dev_by_form[form] = math.nan
                        n_degenerate += 1
                rows.append(
                    (
                        grid_name,
                        p.ratio,
                        u,
                        x_exact,
                        x_by_form["printed"],
                        x_by_form["rederived"],
                        dev_by_form["printed"],
                        dev_by_form["rederived"],
                    )
                )
    return rows, devs["printed"], devs["rederived"], n_degenerate


def check_approx_forms() -> tuple[list[CheckResult], list[tuple]]:
    rows, dev_printed, dev_rederived, n_degen = approx_form_audit()
    checks = [
        CheckResult(
            "approx-rederived-bound",
            dev_rederived <= APPROX_REDERIVED_BOUND,
            dev_rederived,
            APPROX_REDERIVED_BOUND,
            detail="max relative deviation of the rederived form from the exact root",
        ),
        CheckResult(
            "approx-printed-recorded", True, dev_printed, math.inf,
            detail=f"informational; {n_degen} grid points degenerate for the printed form",
        ),
        CheckResult(
            "approx-better-form",
            dev_rederived <= dev_printed,
            dev_rederived,
            dev_printed,
            detail="the rederived form wins on every audited grid",
        ),
    ]
    return checks, rows


def omega_envelope_deviation(exponent: float = 0.6) -> float:
    """Worst |omega - linearized omega| over the standard grid.

    The exponent parameter exists so the check's sensitivity can be
    demonstrated: nudging it off 0.6 must push the deviation past the
    frozen bound.
    """
    worst = 0.0
    for ratio in RATIO_GRID_APPROX:
        p = FrictionParams(f_c=1.0, sigma=ratio)
        for u in FORCE_FRACTIONS:
            f_i = -u * p.f_c
            x_next = next_reversal_exact(f_i, p)
            k = (p.sigma / p.f_c) * (p.f_c / (p.f_c - f_i)) ** exponent
            xs = np.linspace(0.0, x_next, 201)
            dev = float(np.max(np.abs(np.exp(-(p.sigma / p.f_c) * xs) - (1.0 - k * xs))))
            worst = max(worst, dev)
    return worst


def check_omega_envelope() -> CheckResult:
    worst = omega_envelope_deviation()
    # sanity: the linear factor must reproduce the exact construction
    p = FrictionParams(f_c=1.0, sigma=2.0)
    assert abs(omega_approx(-1.0, p).k_slope - 2.0 * 0.5**0.6) < 1e-15
    assert omega(0.0, p) == 1.0
    return CheckResult(
        "omega-envelope", worst <= OMEGA_ENVELOPE_BOUND, worst, OMEGA_ENVELOPE_BOUND,
        detail="max |exact - linearized| decay factor over the standard grid",
    )


def check_determinism() -> CheckResult:
    """Two builds of the same figure dataset are byte-identical."""
    from .figures import fig3_table
    from ._csv import format_value

    base = FrictionParams(f_c=1.0, sigma=1.0)

    def render() -> str:
        _, rows = fig3_table(base, RATIO_GRID_WIDE)
        return "\n".join(",".join(format_value(v) for v in row) for row in rows)

    same = render() == render()
    return CheckResult(
        "determinism-fig3", same, 0.0 if same else 1.0, 0.0,
        detail="two in-process builds render identical bytes",
    )


def run_all() -> ValidationReport:
    """Run the full oracle suite and collect the report."""
    trajs = [_sim(ratio) for ratio in (10.0, 100.0, 1000.0)]
    checks: list[CheckResult] = [
        check_max_potential_energy(),
        check_quadrature_equivalence(),
        check_form_consistency(),
        check_stop_spring_conservative(),
        check_clockwise_dissipation(),
    ]
    checks += check_energy_balance(trajs[0], "r10")
    checks += check_energy_balance(trajs[1], "r100")
    checks.append(check_equal_areas(trajs[0]))
    checks.append(check_chain_vs_simulation(trajs[0]))
    checks += check_series_convergence()
    checks.append(check_monotone_decay(trajs))
    checks.append(check_reversal_frequency_trend(trajs))
    approx_checks, audit_rows = check_approx_forms()
    checks += approx_checks
    checks.append(check_omega_envelope())
    checks.append(check_determinism())
    return ValidationReport(checks=checks, audit_rows=audit_rows)
