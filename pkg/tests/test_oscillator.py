"""Tests of the oscillator integrator, event detection and energy accounting."""

import math
from dataclasses import replace

import numpy as np
import pytest

from presliding import (
    ConfigError,
    DomainError,
    FrictionParams,
    OscState,
    SimConfig,
    StepRejectionError,
    kinetic_energy,
    locate_reversal,
    peak_velocity_between_reversals,
    potential_energy,
    reference_integrate,
    restoring_energy_between,
    simulate,
    step,
    write_reversals_csv,
    write_trajectory_csv,
)

P1 = FrictionParams(f_c=1.0, sigma=1.0)
P10 = FrictionParams(f_c=1.0, sigma=10.0)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def test_config_rejects_zero_initial_velocity():
    with pytest.raises(ConfigError):
        SimConfig(params=P1, x0=0.0, v0=0.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"f0": 1.5},
        {"dt": 0.0},
        {"t_max": 0.0},
        {"max_reversals": 0},
        {"stop_energy": -1.0},
    ],
)
def test_config_invariants(kwargs):
    with pytest.raises(ConfigError):
        SimConfig(params=P1, x0=0.0, v0=1.0, **kwargs)


def test_default_step_size_scales_with_stiffness():
    c = SimConfig(params=FrictionParams(1.0, 100.0, mass=4.0), x0=0.0, v0=1.0)
    assert c.effective_dt() == pytest.approx(0.005 * math.sqrt(4.0 / 100.0))
    c2 = SimConfig(params=P1, x0=0.0, v0=1.0, dt=1e-4)
    assert c2.effective_dt() == 1e-4


def test_default_stop_energy():
    c = SimConfig(params=P1, x0=0.0, v0=2.0)
    assert c.effective_stop_energy() == pytest.approx(1e-12 * 2.0)


# ---------------------------------------------------------------------------
# single step
# ---------------------------------------------------------------------------

def test_step_rest_state_is_equilibrium():
    s = OscState(0.0, 0.4, 0.0, 0.0, 0.0)
    s1 = step(s, 1e-3, P1)
    assert (s1.x, s1.v, s1.f, s1.e_f_cum) == (0.4, 0.0, 0.0, 0.0)
    assert s1.t == pytest.approx(1e-3)


def test_step_taylor_expansion():
    # leading-order growth from (x=0, v=1, F=0): x ~ dt, F ~ sigma*dt,
    # v ~ 1 - sigma*dt^2/2
    s = OscState(0.0, 0.0, 1.0, 0.0, 0.0)
    s1 = step(s, 1e-3, P1)
    assert s1.x == pytest.approx(1e-3, abs=1e-9)
    assert s1.f == pytest.approx(1e-3, abs=1e-6)
    assert s1.v == pytest.approx(1.0 - 5e-7, abs=1e-9)
    # against a 10x finer reference over the same horizon
    fine = s
    for _ in range(10):
        fine = step(fine, 1e-4, P1)
    assert s1.x == pytest.approx(fine.x, abs=1e-15)
    assert s1.v == pytest.approx(fine.v, abs=1e-15)
    assert s1.f == pytest.approx(fine.f, abs=1e-15)


def test_step_rejects_band_escape():
    s = OscState(0.0, 0.0, 1.0, 0.999, 0.0)
    with pytest.raises(StepRejectionError):
        step(s, 5.0, FrictionParams(1.0, 1000.0))


def test_step_rejects_invalid_entry_state():
    with pytest.raises(DomainError):
        step(OscState(0.0, 0.0, 1.0, 1.5, 0.0), 1e-3, P1)


def test_fourth_order_convergence():
    # halving dt cuts the endpoint error ~16x on a smooth (reversal-free) arc
    cfg = SimConfig(params=P1, x0=0.0, v0=1.0, dt=0.02, t_max=0.5)
    ref = reference_integrate(cfg, 64)

    def end(c):
        tr = simulate(c)
        return np.array([tr.x[-1], tr.v[-1], tr.f[-1], tr.e_f_cum[-1]])

    ref_end = np.array([ref.x[-1], ref.v[-1], ref.f[-1], ref.e_f_cum[-1]])
    err_coarse = np.abs(end(cfg) - ref_end)
    err_half = np.abs(end(replace(cfg, dt=0.01)) - ref_end)
    ratios = err_coarse / err_half
    assert np.all(ratios > 10.0) and np.all(ratios < 24.0)


# ---------------------------------------------------------------------------
# event localization
# ---------------------------------------------------------------------------

def test_locate_returns_exact_zero_sample():
    s0 = OscState(0.0, 0.1, 0.0, 0.5, 0.0)
    s1 = OscState(0.01, 0.1, -0.01, 0.5, 0.0)
    assert locate_reversal(s0, s1, P1, tol_v=1e-9) is s0


def test_locate_bisection_contract():
    p = P10
    cfg = SimConfig(params=p, x0=0.0, v0=0.5, t_max=100.0)
    s = OscState(0.0, 0.0, 0.5, 0.0, 0.0)
    dt = cfg.effective_dt()
    prev = s
    while True:
        nxt = step(prev, dt, p)
        if nxt.v < 0.0:
            break
        prev = nxt
    rev = locate_reversal(prev, nxt, p, tol_v=1e-9)
    assert abs(rev.v) <= 1e-9
    assert prev.t < rev.t <= nxt.t


def test_locate_requires_bracket():
    s0 = OscState(0.0, 0.0, 0.5, 0.0, 0.0)
    s1 = OscState(0.01, 0.005, 0.4, 0.01, 0.0)
    with pytest.raises(DomainError):
        locate_reversal(s0, s1, P1, tol_v=1e-12)


def test_first_reversal_self_consistency():
    # event location agrees with a 100x finer reference run
    cfg = SimConfig(params=P10, x0=0.0, v0=1.0, max_reversals=1, t_max=10.0)
    x_coarse = simulate(cfg).reversals[0].x_i
    x_fine = reference_integrate(cfg, 100).reversals[0].x_i
    assert abs(x_coarse - x_fine) < 1e-6


# ---------------------------------------------------------------------------
# full simulation
# ---------------------------------------------------------------------------

def test_simulate_undamped_spring_amplitudes_constant():
    # gamma = 0 with an unreachable saturation level is the unsaturated
    # linear spring: a conservative harmonic oscillation
    k = 4.0
    p = FrictionParams(f_c=100.0, sigma=k, gamma=0.0)
    cfg = SimConfig(
        params=p, x0=0.0, v0=1.0, dt=math.pi / 2000.0, t_max=50.0, max_reversals=8
    )
    traj = simulate(cfg)
    amps = np.array([abs(r.x_i) for r in traj.reversals])
    assert len(amps) == 8
    assert np.all(np.abs(amps - 0.5) < 1e-6 * 0.5)


def test_simulate_same_side_amplitudes_decay(traj10):
    # reversal displacements on the initial side shrink monotonically
    xs = [traj10.reversals[i].x_i for i in (0, 2, 4)]
    assert xs[0] > xs[1] > xs[2] > 0.0


def test_simulate_max_reversals_counts_complete_records(traj10):
    assert len(traj10.reversals) == 12
    assert all(np.isfinite(r.e_p) and r.e_p > 0.0 for r in traj10.reversals)
    assert traj10.reversals[0].e_d_halfcycle == 0.0
    for prev, cur in zip(traj10.reversals, traj10.reversals[1:]):
        assert cur.e_d_halfcycle == pytest.approx(prev.e_p - cur.e_p, rel=1e-12)


def test_simulate_stop_energy_threshold():
    cfg = SimConfig(params=P10, x0=0.0, v0=0.5, t_max=200.0, stop_energy=1e-3)
    traj = simulate(cfg)
    assert traj.reversals[-1].e_p < 1e-3
    assert all(r.e_p >= 1e-3 for r in traj.reversals[:-1])


def test_simulate_time_strictly_increasing(traj10):
    assert np.all(np.diff(traj10.t) > 0.0)


def test_simulate_reversals_interleave_with_velocity_signs(traj10):
    # between consecutive reversal records, v keeps one sign (post-event)
    recs = traj10.reversals
    for r0, r1 in zip(recs, recs[1:]):
        mask = (traj10.t > r0.t_i + 1e-12) & (traj10.t < r1.t_i - 1e-12)
        vs = traj10.v[mask]
        vs = vs[np.abs(vs) > 1e-9]
        assert np.all(vs > 0) or np.all(vs < 0)


def test_simulate_energy_conservation(traj10, traj100):
    for traj in (traj10, traj100):
        m = traj.config.params.mass
        e0 = 0.5 * m * traj.config.v0**2
        drift = np.abs(0.5 * m * traj.v**2 + traj.e_f_cum - e0) / e0
        assert drift.max() < 1e-6


def test_simulate_amplitude_bounded(traj10):
    cfg = traj10.config
    e0 = 0.5 * cfg.params.mass * cfg.v0**2
    # farthest excursion: the initial slide absorbs all of e0 within
    # e0/f_c + f_c/sigma of travel; later half-cycles only shrink
    bound = 1.25 * (abs(cfg.x0) + e0 / cfg.params.f_c + cfg.params.f_c / cfg.params.sigma)
    assert np.max(np.abs(traj10.x)) <= bound
    # with no pre-stored elastic energy, kinetic energy never exceeds the
    # initial supply
    assert np.max(0.5 * cfg.params.mass * traj10.v**2) <= e0 * (1.0 + 1e-9)


def test_simulate_asymptotic_positivity(traj10, traj100, traj1000):
    for traj in (traj10, traj100, traj1000):
        assert traj.reversals[-1].e_p > 0.0


def test_simulate_rescaled_mass_matches():
    # doubling the mass at fixed (f_c, sigma) stretches time by sqrt(2)
    # but leaves the reversal displacements and forces unchanged
    c1 = SimConfig(params=P10, x0=0.0, v0=0.5, max_reversals=4, t_max=100.0)
    p_heavy = FrictionParams(1.0, 10.0, mass=2.0)
    c2 = SimConfig(params=p_heavy, x0=0.0, v0=0.5 / math.sqrt(2.0),
                   max_reversals=4, t_max=100.0)
    r1 = simulate(c1).reversals
    r2 = simulate(c2).reversals
    for a, b in zip(r1, r2):
        assert b.t_i == pytest.approx(a.t_i * math.sqrt(2.0), rel=1e-6)
        assert b.x_i == pytest.approx(a.x_i, rel=1e-6)
        assert b.f_i == pytest.approx(a.f_i, rel=1e-6)


# ---------------------------------------------------------------------------
# energy queries
# ---------------------------------------------------------------------------

def test_kinetic_energy_values():
    assert kinetic_energy(OscState(0, 0, 0.0, 0, 0), P1) == 0.0
    assert kinetic_energy(OscState(0, 0, 2.0, 0, 0), P1) == 2.0
    p2 = FrictionParams(1.0, 1.0, mass=2.0)
    assert kinetic_energy(OscState(0, 0, 3.0, 0, 0), p2) == 9.0


def test_restoring_energy_zero_interval(traj10):
    t = float(traj10.t[100])
    assert restoring_energy_between(traj10, t, t) == 0.0


def test_restoring_energy_reversal_to_reversal_cancels(traj10):
    for i in range(len(traj10.reversals) - 1):
        r0, r1 = traj10.reversals[i], traj10.reversals[i + 1]
        total = restoring_energy_between(traj10, r0.t_i, r1.t_i)
        assert abs(total) < 1e-5 * r0.e_p


def test_restoring_energy_reversal_to_peak_is_released_potential(traj10):
    p = traj10.config.params
    for i in range(4):
        r = traj10.reversals[i]
        t_0, _ = peak_velocity_between_reversals(traj10, i)
        released = restoring_energy_between(traj10, r.t_i, t_0)
        analytic = potential_energy(-abs(r.f_i), p)
        assert released == pytest.approx(-analytic, rel=1e-3)


def test_restoring_energy_out_of_range(traj10):
    with pytest.raises(DomainError):
        restoring_energy_between(traj10, -1.0, 1.0)
    with pytest.raises(DomainError):
        restoring_energy_between(traj10, 0.0, float(traj10.t[-1]) + 1.0)


def test_peak_velocity_at_force_zero_crossing(traj10):
    p = traj10.config.params
    for i in range(4):
        t_0, v_pk = peak_velocity_between_reversals(traj10, i)
        k = int(np.searchsorted(traj10.t, t_0))
        assert abs(traj10.f[k]) < 1e-3 * p.f_c
        assert 0.5 * p.mass * v_pk**2 == pytest.approx(traj10.reversals[i].e_p, rel=1e-12)
        analytic = potential_energy(-abs(traj10.reversals[i].f_i), p)
        assert 0.5 * p.mass * v_pk**2 == pytest.approx(analytic, rel=1e-3)


def test_peak_velocity_symmetric_spring():
    k = 4.0
    p = FrictionParams(f_c=100.0, sigma=k, gamma=0.0)
    cfg = SimConfig(params=p, x0=0.0, v0=1.0, dt=math.pi / 2000.0, t_max=20.0,
                    max_reversals=3)
    traj = simulate(cfg)
    t_0, v_pk = peak_velocity_between_reversals(traj, 0)
    r0, r1 = traj.reversals[0], traj.reversals[1]
    assert t_0 == pytest.approx(0.5 * (r0.t_i + r1.t_i), abs=2e-3)
    assert abs(v_pk) == pytest.approx(1.0, rel=1e-6)


def test_peak_velocity_missing_index(traj10):
    with pytest.raises(IndexError):
        peak_velocity_between_reversals(traj10, len(traj10.reversals) - 1)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_trajectory_csv(tmp_path, traj10):
    path = tmp_path / "traj.csv"
    n = write_trajectory_csv(traj10, path)
    assert n == len(traj10)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x,v,F,E_k,E_f_cum"
    back = np.genfromtxt(path, delimiter=",", names=True)
    # 17 significant digits round-trip exactly
    assert back["x"][5] == traj10.x[5]
    assert back["E_k"][10] == pytest.approx(0.5 * traj10.v[10] ** 2, rel=1e-16)


def test_reversals_csv(tmp_path, traj10):
    path = tmp_path / "rev.csv"
    n = write_reversals_csv(traj10, path)
    assert n == len(traj10.reversals)
    assert path.read_text().splitlines()[0] == "i,t_i,x_i,F_i,E_p,E_d_halfcycle"
