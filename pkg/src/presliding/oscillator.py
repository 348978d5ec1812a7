"""Unforced oscillator with a Dahl restoring force.

The simulated system is m*x'' + F = 0 with the friction force F carried
as a third state via the chain rule dF/dt = dahl_rate(F, v) * v, plus the
accumulated restoring-force work e_f = integral of F*v dt. So the full
state is (x, v, F, e_f) and the exact dynamics conserve
(m/2)*v^2 + e_f along the whole trajectory.

Integration is classical fixed-step 4th order. Velocity-sign changes
(motion reversals) are localized by bisecting on the step size and
re-integrating from the last accepted state, which keeps the event
machinery deterministic. At each reversal the simulator re-arms the
hysteresis branch from the *integrated* state rather than from the
algebraic branch formula; that keeps simulation and closed-form analysis
independent of each other, so their agreement is evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._csv import write_csv
from .errors import ConfigError, ConvergenceError, DomainError, StepRejectionError
from .hysteresis import FrictionParams, dahl_rate

__all__ = [
    "OscState",
    "SimConfig",
    "ReversalRecord",
    "Trajectory",
    "step",
    "locate_reversal",
    "simulate",
    "kinetic_energy",
    "restoring_energy_between",
    "peak_velocity_between_reversals",
    "write_trajectory_csv",
    "write_reversals_csv",
]

# force may overshoot the saturation band by at most this relative amount
# before a step is rejected
_CLAMP_REL_TOL = 1e-12

# reversal event tolerance: |v| < _TOL_V_REL * max(|v0|, 1)
_TOL_V_REL = 1e-9

_MAX_BISECTIONS = 100


@dataclass(frozen=True)
class OscState:
    """Instantaneous simulation state.

    e_f_cum is the running integral of F*v dt from t = 0; together with
    the kinetic energy it is conserved: (m/2)*v^2 + e_f_cum = (m/2)*v0^2
    up to integrator tolerance.
    """

    t: float
    x: float
    v: float
    f: float
    e_f_cum: float


@dataclass(frozen=True)
class SimConfig:
    """Simulation setup.

    dt defaults to (1/200)*sqrt(mass*f_c/sigma), a fraction of the
    characteristic period right after a reversal where the local branch
    stiffness is ~2*sigma. stop_energy defaults to 1e-12 times the initial
    kinetic energy and is compared against the recoverable energy of each
    completed reversal (the only instants where the energy balance is
    meaningful); the dynamics never reach zero in finite time, so an
    explicit threshold is required.
    """

    params: FrictionParams
    x0: float
    v0: float
    f0: float = 0.0
    dt: Optional[float] = None
    t_max: float = 100.0
    max_reversals: Optional[int] = None
    stop_energy: Optional[float] = None

    def __post_init__(self) -> None:
        if self.v0 == 0.0:
            raise ConfigError("v0 must be nonzero (the motion starts mid-swing)")
        if abs(self.f0) > self.params.f_c:
            raise ConfigError(
                f"|f0|={abs(self.f0)} exceeds the friction level f_c={self.params.f_c}"
            )
        if self.dt is not None and not self.dt > 0.0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if not self.t_max > 0.0:
            raise ConfigError(f"t_max must be > 0, got {self.t_max}")
        if self.max_reversals is not None and self.max_reversals < 1:
            raise ConfigError(f"max_reversals must be >= 1, got {self.max_reversals}")
        if self.stop_energy is not None and self.stop_energy < 0.0:
            raise ConfigError(f"stop_energy must be >= 0, got {self.stop_energy}")

    def effective_dt(self) -> float:
        if self.dt is not None:
            return self.dt
        p = self.params
        return 0.005 * math.sqrt(p.mass * p.f_c / p.sigma)

    def effective_stop_energy(self) -> float:
        if self.stop_energy is not None:
            return self.stop_energy
        return 1e-12 * 0.5 * self.params.mass * self.v0**2

    def event_tol_v(self) -> float:
        return _TOL_V_REL * max(abs(self.v0), 1.0)


@dataclass(frozen=True)
class ReversalRecord:
    """One completed motion reversal.

    e_p is the recoverable potential energy, measured from the trajectory
    as the peak kinetic energy of the following half-cycle (the recoverable
    part converts fully into kinetic energy at the force zero crossing).
    e_d_halfcycle is the energy dissipated since the previous reversal,
    e_p(previous) - e_p(this); it is 0 by convention for the first record,
    which has no predecessor.
    """

    index: int
    t_i: float
    x_i: float
    f_i: float
    e_p: float
    e_d_halfcycle: float


@dataclass
class Trajectory:
    """Ordered simulation samples plus the completed reversal records.

    Samples are stored as parallel arrays (t, x, v, f, e_f_cum), strictly
    increasing in t; `state(i)` reassembles sample i as an OscState.
    Immutable by convention after simulate() returns.
    """

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    f: np.ndarray
    e_f_cum: np.ndarray
    reversals: list[ReversalRecord] = field(default_factory=list)
    config: Optional[SimConfig] = None

    def __len__(self) -> int:
        return len(self.t)

    def state(self, i: int) -> OscState:
        return OscState(
            float(self.t[i]), float(self.x[i]), float(self.v[i]),
            float(self.f[i]), float(self.e_f_cum[i]),
        )


def _rk4(s: OscState, dt: float, p: FrictionParams) -> tuple[float, float, float, float]:
    """One classical 4th-order step of (x, v, f, e_f); returns the raw new state."""
    inv_m = 1.0 / p.mass

    def rhs(x, v, f):
        return v, -f * inv_m, dahl_rate(f, v, p) * v, f * v

    k1 = rhs(s.x, s.v, s.f)
    k2 = rhs(s.x + 0.5 * dt * k1[0], s.v + 0.5 * dt * k1[1], s.f + 0.5 * dt * k1[2])
    k3 = rhs(s.x + 0.5 * dt * k2[0], s.v + 0.5 * dt * k2[1], s.f + 0.5 * dt * k2[2])
    k4 = rhs(s.x + dt * k3[0], s.v + dt * k3[1], s.f + dt * k3[2])
    c = dt / 6.0
    return (
        s.x + c * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s.v + c * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        s.f + c * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        s.e_f_cum + c * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
    )


def step(s: OscState, dt: float, p: FrictionParams) -> OscState:
    """Advance the oscillator one fixed step of size dt.

    The force is kept inside the saturation band: an overshoot below
    1e-12*f_c (roundoff at the band edge) is clamped, anything larger
    raises StepRejectionError because the step cannot resolve the branch
    stiffness.
    """
    if abs(s.f) > p.f_c:
        raise DomainError(f"|f|={abs(s.f)} already outside the band f_c={p.f_c}")
    if not dt > 0.0:
        raise DomainError(f"dt must be > 0, got {dt}")
    try:
        x, v, f, e_f = _rk4(s, dt, p)
    except DomainError as exc:
        raise StepRejectionError(
            f"force escaped the band inside a step of dt={dt}: {exc}"
        ) from exc
    over = abs(f) - p.f_c
    if over > 0.0:
        if over > _CLAMP_REL_TOL * p.f_c:
            raise StepRejectionError(
                f"force overshoot {over} exceeds the clamp tolerance at dt={dt}; "
                f"reduce dt for sigma/f_c={p.ratio}"
            )
        f = math.copysign(p.f_c, f)
    return OscState(s.t + dt, x, v, f, e_f)


def locate_reversal(
    s_before: OscState, s_after: OscState, p: FrictionParams, tol_v: float
) -> OscState:
    """Pin down the state where the velocity crosses zero.

    Bisects on the step size within (s_before.t, s_after.t], re-integrating
    from s_before, until |v| < tol_v. If either endpoint already satisfies
    the tolerance it is returned unchanged. Raises ConvergenceError after
    100 bisections without hitting the tolerance.
    """
    if abs(s_before.v) <= tol_v:
        return s_before
    if abs(s_after.v) <= tol_v:
        return s_after
    if (s_before.v > 0.0) == (s_after.v > 0.0):
        raise DomainError("no velocity sign change between the bracketing states")
    sign_before = 1.0 if s_before.v > 0.0 else -1.0
    lo, hi = 0.0, s_after.t - s_before.t
    for _ in range(_MAX_BISECTIONS):
        h = 0.5 * (lo + hi)
        s_mid = step(s_before, h, p)
        if abs(s_mid.v) <= tol_v:
            return s_mid
        if (s_mid.v > 0.0) == (sign_before > 0.0):
            lo = h
        else:
            hi = h
    raise ConvergenceError(
        f"reversal not localized to |v| < {tol_v} after {_MAX_BISECTIONS} bisections"
    )


def simulate(cfg: SimConfig) -> Trajectory:
    """Run the oscillator until t_max, max_reversals or the energy floor.

    Reversal bookkeeping: a record is *completed* once the next reversal is
    found, because its recoverable energy is measured as the peak kinetic
    energy of the half-cycle in between. The returned trajectory therefore
    contains only completed records (max_reversals counts those), and the
    trailing partially-observed reversal, if any, is dropped.
    """
    p = cfg.params
    dt = cfg.effective_dt()
    tol_v = cfg.event_tol_v()
    stop_energy = cfg.effective_stop_energy()

    state = OscState(0.0, cfg.x0, cfg.v0, cfg.f0, 0.0)
    cols = {k: [getattr(state, k)] for k in ("t", "x", "v", "f", "e_f_cum")}

    def record_sample(s: OscState) -> None:
        for k in cols:
            cols[k].append(getattr(s, k))

    records: list[ReversalRecord] = []
    pending: Optional[tuple[int, float, float, float]] = None  # (index, t, x, f)
    v_peak = 0.0
    direction = 1.0 if cfg.v0 > 0.0 else -1.0
    last_event_t = -math.inf

    while state.t < cfg.t_max:
        h = min(dt, cfg.t_max - state.t)
        if state.t + h <= state.t:
            break
        new = step(state, h, p)
        reversed_now = (new.v > 0.0 and direction < 0.0) or (
            new.v < 0.0 and direction > 0.0
        )
        if not reversed_now:
            record_sample(new)
            state = new
            v_peak = max(v_peak, abs(new.v))
            continue

        s_rev = locate_reversal(state, new, p, tol_v)
        if s_rev.t <= last_event_t:
            raise StepRejectionError(
                f"consecutive reversals inside one step at t={s_rev.t}; "
                f"dt={dt} cannot resolve the oscillation"
            )
        last_event_t = s_rev.t
        if s_rev.t > state.t:
            record_sample(s_rev)
        done = False
        if pending is not None:
            idx, t_i, x_i, f_i = pending
            e_p = 0.5 * p.mass * v_peak**2
            e_d = records[-1].e_p - e_p if records else 0.0
            records.append(ReversalRecord(idx, t_i, x_i, f_i, e_p, e_d))
            if cfg.max_reversals is not None and len(records) >= cfg.max_reversals:
                done = True
            if e_p < stop_energy:
                done = True
        if done:
            state = s_rev
            break
        next_index = pending[0] + 1 if pending is not None else 0
        pending = (next_index, s_rev.t, s_rev.x, s_rev.f)
        v_peak = 0.0
        direction = -direction
        state = s_rev

    traj = Trajectory(
        t=np.asarray(cols["t"]),
        x=np.asarray(cols["x"]),
        v=np.asarray(cols["v"]),
        f=np.asarray(cols["f"]),
        e_f_cum=np.asarray(cols["e_f_cum"]),
        reversals=records,
        config=cfg,
    )
    return traj


def kinetic_energy(s: OscState, p: FrictionParams) -> float:
    """(m/2) * v^2 of a state."""
    return 0.5 * p.mass * s.v**2


def restoring_energy_between(traj: Trajectory, t_a: float, t_b: float) -> float:
    """Restoring-force work over [t_a, t_b]: e_f_cum(t_b) - e_f_cum(t_a).

    Linear interpolation of the accumulated integral between samples; the
    two endpoints must lie inside the trajectory's time span.
    """
    t0, t1 = float(traj.t[0]), float(traj.t[-1])
    for t_q in (t_a, t_b):
        if not (t0 <= t_q <= t1):
            raise DomainError(f"time {t_q} outside the trajectory span [{t0}, {t1}]")
    e_a, e_b = np.interp([t_a, t_b], traj.t, traj.e_f_cum)
    return float(e_b - e_a)


def peak_velocity_between_reversals(traj: Trajectory, i: int) -> tuple[float, float]:
    """Sample-level maximizer of |v| between reversals i and i+1.

    Returns (t_0, v_peak) with v_peak signed. The restoring force vanishes
    there (peak speed coincides with the force zero crossing), which the
    caller can verify against |f| at t_0.
    """
    if i < 0 or i + 1 >= len(traj.reversals):
        raise IndexError(
            f"need reversal records {i} and {i + 1}, have {len(traj.reversals)}"
        )
    t_lo = traj.reversals[i].t_i
    t_hi = traj.reversals[i + 1].t_i
    mask = (traj.t >= t_lo) & (traj.t <= t_hi)
    idx = np.nonzero(mask)[0]
    k = idx[np.argmax(np.abs(traj.v[idx]))]
    return float(traj.t[k]), float(traj.v[k])


def write_trajectory_csv(traj: Trajectory, path) -> int:
    """Serialize samples as t,x,v,F,E_k,E_f_cum; returns the data row count."""
    m = traj.config.params.mass if traj.config is not None else 1.0
    rows = (
        (traj.t[i], traj.x[i], traj.v[i], traj.f[i], 0.5 * m * traj.v[i] ** 2, traj.e_f_cum[i])
        for i in range(len(traj))
    )
    return write_csv(path, ["t", "x", "v", "F", "E_k", "E_f_cum"], rows)


def write_reversals_csv(traj: Trajectory, path) -> int:
    """Serialize reversal records as i,t_i,x_i,F_i,E_p,E_d_halfcycle."""
    rows = (
        (r.index, r.t_i, r.x_i, r.f_i, r.e_p, r.e_d_halfcycle)
        for r in traj.reversals
    )
    return write_csv(path, ["i", "t_i", "x_i", "F_i", "E_p", "E_d_halfcycle"], rows)
