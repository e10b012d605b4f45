import numpy as np
import pytest

from morseosc import MorseParams, PhaseState, Regime, classify_energy, hamiltonian

STD = dict(D=10.0, alpha=1.0, m=8.0)


@pytest.fixture
def params():
    return MorseParams(**STD)


@pytest.fixture
def forced():
    return MorseParams(epsilon=1.0, omega=1.0, **STD)


def random_bounded_states(params, n, seed=0):
    """Rejection-sample n phase states classified as Bounded."""
    rng = np.random.default_rng(seed)
    states = []
    while len(states) < n:
        q = rng.uniform(-0.65, 3.0)
        p = rng.uniform(-12.0, 12.0)
        s = PhaseState(q, p)
        if classify_energy(params, hamiltonian(params, s)).tag is Regime.BOUNDED:
            states.append(s)
    return states
