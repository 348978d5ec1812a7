"""Pre-sliding friction hysteresis: Dahl oscillator, reversal energy calculus,
decay-cycle prediction, and the brute-force oracles that certify them."""

from .errors import ConfigError, ConvergenceError, DomainError, StepRejectionError
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
from .oracle import QuadResult, derivative, find_root, integrate, reference_integrate
from .oscillator import (
    OscState,
    ReversalRecord,
    SimConfig,
    Trajectory,
    kinetic_energy,
    locate_reversal,
    peak_velocity_between_reversals,
    restoring_energy_between,
    simulate,
    step,
    write_reversals_csv,
    write_trajectory_csv,
)
from .reversal import (
    OmegaApprox,
    ReversalChainEntry,
    energy_antiderivative,
    next_reversal_approx,
    next_reversal_exact,
    next_reversal_force,
    omega,
    omega_approx,
    potential_energy,
    potential_energy_bound,
    reversal_chain,
    reversal_coordinate,
    write_chain_csv,
    zero_crossing,
)

__version__ = "0.1.0"
