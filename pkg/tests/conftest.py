"""Shared fixtures: the standard oscillator runs reused across test modules."""

import pytest

from presliding import FrictionParams, SimConfig, simulate


def standard_run(ratio: float, max_reversals: int = 12):
    p = FrictionParams(f_c=1.0, sigma=ratio)
    cfg = SimConfig(params=p, x0=0.0, v0=0.5, max_reversals=max_reversals, t_max=200.0)
    return simulate(cfg)


@pytest.fixture(scope="session")
def traj10():
    return standard_run(10.0)


@pytest.fixture(scope="session")
def traj100():
    return standard_run(100.0)


@pytest.fixture(scope="session")
def traj1000():
    return standard_run(1000.0)
