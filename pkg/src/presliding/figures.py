"""Builders for the CSV datasets behind the reference plots.

Every builder returns plain (header, rows) pairs so the CLI can write
them deterministically; nothing here touches the filesystem. Reversal
forces on an ascending branch are negative; the tables store their
normalized magnitude |F_i|/f_c, which is the axis the plots use.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .hysteresis import FrictionParams
from .oscillator import Trajectory
from .reversal import (
    next_reversal_approx,
    next_reversal_exact,
    next_reversal_force,
    omega,
    omega_approx,
    potential_energy,
    reversal_chain,
    reversal_coordinate,
)

__all__ = [
    "fig3_table",
    "fig4_table",
    "fig5_tables",
    "fig6_table",
    "fig7_energy_magnitude",
    "fig7_envelope",
    "FIG7_README",
]

FORCE_FRACTIONS = (0.2, 0.4, 0.6, 0.8, 1.0)

FIG7_README = """\
fig7_traj_ratio<R>.csv
    t                 simulation time
    energy_magnitude  |e_f_cum(t) - e_f_cum(t_rev0)|, the magnitude of the
                      restoring-force energy integral measured relative to
                      the first detected reversal. After that reversal this
                      equals the instantaneous kinetic energy, so the signal
                      oscillates between ~0 (at reversals) and the
                      recoverable energy of the current half-cycle.

fig7_envelope_ratio<R>.csv
    i    reversal index
    t_i  reversal instant
    E_p  recoverable potential energy at that reversal (the envelope of the
         energy_magnitude peaks; one peak per half-cycle)

<R> is the stiffness-to-friction ratio sigma/f_c of the run.
"""


def _params_for_ratio(base: FrictionParams, ratio: float) -> FrictionParams:
    return FrictionParams(f_c=base.f_c, sigma=ratio * base.f_c, gamma=1.0, mass=base.mass)


def fig3_table(
    base: FrictionParams, ratios, n_points: int = 100
) -> tuple[list[str], list[tuple]]:
    """Recoverable reversal energy over a force grid, one series per ratio."""
    header = ["F_i_over_Fc", "ratio", "E_p"]
    rows = []
    grid = np.linspace(0.01, 1.0, n_points)
    for ratio in ratios:
        p = _params_for_ratio(base, ratio)
        for u in grid:
            rows.append((float(u), float(ratio), potential_energy(-u * p.f_c, p)))
    return header, rows


def fig4_table(
    base: FrictionParams, ratios, fractions=FORCE_FRACTIONS, n_x: int = 101
) -> tuple[list[str], list[tuple]]:
    """Exact vs linearized branch decay factor up to the next reversal."""
    header = ["ratio", "F_i_over_Fc", "x", "omega", "omega_star"]
    rows = []
    for ratio in ratios:
        p = _params_for_ratio(base, ratio)
        for u in fractions:
            f_i = -u * p.f_c
            x_next = next_reversal_exact(f_i, p)
            approx = omega_approx(f_i, p)
            for x in np.linspace(0.0, x_next, n_x):
                rows.append((float(ratio), float(u), float(x), omega(float(x), p), approx.value(float(x))))
    return header, rows


def fig5_tables(
    sigma: float, f_c_values, mass: float = 1.0, n_x: int = 201
) -> list[tuple[str, list[str], list[tuple]]]:
    """Force-displacement curve of one half-cycle per friction level.

    The curve starts at a saturated reversal (force -f_c) and runs to the
    exactly predicted next reversal; a companion table records where the
    exact and both linearized predictors put that reversal. Degenerate
    predictor points are stored as nan.
    """
    curve_header = ["F_c", "x", "F"]
    curve_rows = []
    pred_header = [
        "F_c",
        "E_p",
        "x_next_exact",
        "x_next_printed",
        "x_next_rederived",
        "F_next_exact",
        "F_next_printed",
        "F_next_rederived",
    ]
    pred_rows = []
    for f_c in f_c_values:
        p = FrictionParams(f_c=f_c, sigma=sigma, gamma=1.0, mass=mass)
        f_i = -p.f_c
        x_i = reversal_coordinate(f_i, p)
        x_next = next_reversal_exact(f_i, p)
        for x in np.linspace(x_i, x_next, n_x):
            curve_rows.append((float(f_c), float(x), next_reversal_force(float(x), f_i, p)))
        row = [float(f_c), potential_energy(f_i, p), x_next]
        forces = [next_reversal_force(x_next, f_i, p)]
        for form in ("printed", "rederived"):
            try:
                x_a = next_reversal_approx(f_i, p, form=form)
                row.append(x_a)
                forces.append(next_reversal_force(x_a, f_i, p))
            except DomainError:
                row.append(math.nan)
                forces.append(math.nan)
        pred_rows.append(tuple(row + forces))
    return [
        ("fig5.csv", curve_header, curve_rows),
        ("fig5_predictions.csv", pred_header, pred_rows),
    ]


def fig6_table(
    base: FrictionParams, ratios, n_steps: int, mode: str = "exact"
) -> tuple[list[str], list[tuple]]:
    """Reversal-chain energies per stiffness ratio, seeded at saturation."""
    header = ["ratio", "n", "F_n", "x_n", "E_p", "E_d"]
    rows = []
    for ratio in ratios:
        p = _params_for_ratio(base, ratio)
        for e in reversal_chain(-p.f_c, n_steps, p, mode=mode):
            rows.append((float(ratio), e.n, e.f_n, e.x_n, e.e_p, e.e_d))
    return header, rows


def fig7_energy_magnitude(traj: Trajectory) -> tuple[list[str], list[tuple]]:
    """Restoring-force energy magnitude relative to the first reversal."""
    e_ref = 0.0
    if traj.reversals:
        k = int(np.searchsorted(traj.t, traj.reversals[0].t_i))
        e_ref = float(traj.e_f_cum[k])
    rows = [
        (float(traj.t[i]), abs(float(traj.e_f_cum[i]) - e_ref)) for i in range(len(traj))
    ]
    return ["t", "energy_magnitude"], rows


def fig7_envelope(traj: Trajectory) -> tuple[list[str], list[tuple]]:
    """Envelope points: recoverable energy at each detected reversal instant."""
    rows = [(r.index, r.t_i, r.e_p) for r in traj.reversals]
    return ["i", "t_i", "E_p"], rows
