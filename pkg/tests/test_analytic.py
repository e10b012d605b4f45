import math

import numpy as np
import pytest

import morseosc as mo
from morseosc import ActionAngle, DomainError, PhaseState

from conftest import random_bounded_states

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# period
# ---------------------------------------------------------------------------

def test_period_values(params):
    assert mo.period(params, 6.0) == pytest.approx(TWO_PI, rel=1e-15)
    assert mo.period(params, 0.0) == pytest.approx(4.0 * math.pi / math.sqrt(10.0), rel=1e-15)


def test_period_diverges_near_separatrix(params):
    assert mo.period(params, params.D - 1e-12) > 1e5 * mo.period(params, 0.0)


def test_period_monotone(params):
    hs = np.linspace(0.0, 9.9, 34)
    Ts = [mo.period(params, h) for h in hs]
    assert all(b > a for a, b in zip(Ts, Ts[1:]))


def test_period_domain(params):
    with pytest.raises(DomainError):
        mo.period(params, 10.0)
    with pytest.raises(DomainError):
        mo.period(params, 12.0)
    with pytest.raises(DomainError):
        mo.period(params, -0.5)


# ---------------------------------------------------------------------------
# bounded trajectory
# ---------------------------------------------------------------------------

def test_bounded_trajectory_turning_points(params):
    q_minus, q_plus = mo.turning_points(params, 6.0)
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    assert s0.q == pytest.approx(q_plus, rel=1e-14)
    assert s0.p == 0.0
    half = mo.bounded_trajectory(params, 6.0, mo.period(params, 6.0) / 2.0)
    assert half.q == pytest.approx(q_minus, rel=1e-13)
    assert abs(half.p) < 1e-12


def test_bounded_trajectory_periodicity(params):
    for h in (1.0, 5.0, 9.0):
        T = mo.period(params, h)
        for t in (0.0, 0.37, 1.9):
            a = mo.bounded_trajectory(params, h, t)
            b = mo.bounded_trajectory(params, h, t + T)
            assert b.q == pytest.approx(a.q, abs=1e-9)
            assert b.p == pytest.approx(a.p, abs=1e-9)


def test_bounded_trajectory_energy_conservation(params):
    rng = np.random.default_rng(42)
    for _ in range(1000):
        h = rng.uniform(0.05, 9.9)
        t = rng.uniform(-50.0, 50.0)
        s = mo.bounded_trajectory(params, h, t)
        assert mo.hamiltonian(params, s) == pytest.approx(h, rel=1e-10)


def test_bounded_trajectory_regime_errors(params):
    with pytest.raises(DomainError):
        mo.bounded_trajectory(params, 0.0, 1.0)
    with pytest.raises(DomainError):
        mo.bounded_trajectory(params, 10.0, 1.0)
    with pytest.raises(DomainError):
        mo.bounded_trajectory(params, 11.0, 1.0)
    with pytest.raises(DomainError):  # inside the near-separatrix guard band
        mo.bounded_trajectory(params, 10.0 - 1e-13, 1.0)


def test_momentum_matches_position_derivative(params):
    # hard-coded dq/dt formulas vs central differences of q
    d = 1e-6
    for h, ts in ((2.0, (0.3, 1.1)), (6.0, (0.5, 2.7)), (9.0, (1.3, 4.0))):
        for t in ts:
            p = mo.bounded_trajectory(params, h, t).p
            qd = (mo.bounded_trajectory(params, h, t + d).q
                  - mo.bounded_trajectory(params, h, t - d).q) / (2.0 * d)
            assert p == pytest.approx(params.m * qd, rel=1e-6)
    for t in (0.5, 1.5, 3.0):
        p = mo.homoclinic_orbit(params, t).p
        qd = (mo.homoclinic_orbit(params, t + d).q
              - mo.homoclinic_orbit(params, t - d).q) / (2.0 * d)
        assert p == pytest.approx(params.m * qd, rel=1e-6)
    for t in (0.2, 1.0, 2.0):
        p = mo.unbounded_trajectory(params, 12.0, t).p
        qd = (mo.unbounded_trajectory(params, 12.0, t + d).q
              - mo.unbounded_trajectory(params, 12.0, t - d).q) / (2.0 * d)
        assert p == pytest.approx(params.m * qd, rel=1e-6)


# ---------------------------------------------------------------------------
# homoclinic orbit
# ---------------------------------------------------------------------------

def test_homoclinic_at_zero(params):
    s = mo.homoclinic_orbit(params, 0.0)
    assert s.q == -math.log(2.0)
    assert s.p == 0.0


def test_homoclinic_at_one(params):
    s = mo.homoclinic_orbit(params, 1.0)
    assert s.q == pytest.approx(math.log(1.75), rel=1e-15)
    assert s.p == pytest.approx(320.0 / 28.0, rel=1e-15)
    assert mo.hamiltonian(params, s) == pytest.approx(10.0, rel=1e-12)


def test_homoclinic_parity(params):
    for t in (0.1, 1.7, 23.0):
        a = mo.homoclinic_orbit(params, t)
        b = mo.homoclinic_orbit(params, -t)
        assert a.q == b.q
        assert a.p == -b.p


def test_homoclinic_on_separatrix(params):
    for t in np.linspace(-100.0, 100.0, 401):
        s = mo.homoclinic_orbit(params, t)
        assert abs(mo.hamiltonian(params, s) - params.D) <= 1e-10


def test_homoclinic_asymptotics(params):
    far = mo.homoclinic_orbit(params, 1e6)
    assert far.q > 20.0
    assert abs(far.p) < 1e-4


def test_bounded_limit_approaches_homoclinic(params):
    h = params.D * (1.0 - 1e-8)
    inner = mo.bounded_trajectory(params, h, mo.period(params, h) / 2.0)
    assert inner.q == pytest.approx(mo.homoclinic_orbit(params, 0.0).q, abs=1e-3)


# ---------------------------------------------------------------------------
# unbounded regime
# ---------------------------------------------------------------------------

def test_unbounded_initial_point(params):
    q_minus, _ = mo.turning_points(params, 12.0)
    s = mo.unbounded_trajectory(params, 12.0, 0.0)
    assert s.q == pytest.approx(q_minus, rel=1e-13)
    assert s.p == 0.0


def test_unbounded_energy_conservation(params):
    for t in (-3.0, 0.5, 2.0, 6.0):
        s = mo.unbounded_trajectory(params, 12.0, t)
        assert mo.hamiltonian(params, s) == pytest.approx(12.0, rel=1e-10)


def test_unbounded_linear_escape(params):
    beta = params.alpha * math.sqrt(2.0 * 2.0 / params.m)
    dq = mo.unbounded_trajectory(params, 12.0, 20.0).q - mo.unbounded_trajectory(params, 12.0, 19.0).q
    assert dq == pytest.approx(beta / params.alpha, rel=1e-2)


def test_unbounded_regime_errors(params):
    with pytest.raises(DomainError):
        mo.unbounded_trajectory(params, 10.0, 1.0)
    with pytest.raises(DomainError):
        mo.unbounded_trajectory(params, 6.0, 1.0)
    with pytest.raises(DomainError):
        mo.unbounded_time_of_position(params, 6.0, 1.0)


def test_time_of_position_at_turning_point(params):
    q_minus, _ = mo.turning_points(params, 12.0)
    assert abs(mo.unbounded_time_of_position(params, 12.0, q_minus)) <= 1e-8


def test_time_of_position_roundtrip(params):
    for t in (0.1, 1.0, 5.0):
        q = mo.unbounded_trajectory(params, 12.0, t).q
        assert mo.unbounded_time_of_position(params, 12.0, q) == pytest.approx(t, abs=1e-8)


def test_time_of_position_monotone(params):
    q_minus, _ = mo.turning_points(params, 12.0)
    qs = np.linspace(q_minus + 1e-6, 8.0, 50)
    ts = [mo.unbounded_time_of_position(params, 12.0, q) for q in qs]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_time_of_position_forbidden(params):
    q_minus, _ = mo.turning_points(params, 12.0)
    with pytest.raises(DomainError):
        mo.unbounded_time_of_position(params, 12.0, q_minus - 1e-3)


# ---------------------------------------------------------------------------
# action and angle
# ---------------------------------------------------------------------------

def test_action_values(params):
    assert mo.action(params, 6.0) == pytest.approx(4.0 * (math.sqrt(10.0) - 2.0), rel=1e-14)
    assert mo.action(params, 0.0) == 0.0
    assert mo.action(params, params.D) == pytest.approx(mo.action_max(params), rel=1e-15)
    with pytest.raises(DomainError):
        mo.action(params, -0.1)
    with pytest.raises(DomainError):
        mo.action(params, 10.1)


def test_action_monotone(params):
    hs = np.linspace(0.0, 10.0, 41)
    Is = [mo.action(params, h) for h in hs]
    assert all(b > a for a, b in zip(Is, Is[1:]))


def test_action_derivative_is_period_over_2pi(params):
    d = 1e-6
    for h in (2.0, 5.0, 8.0, 6.0):
        dIdh = (mo.action(params, h + d) - mo.action(params, h - d)) / (2.0 * d)
        assert dIdh == pytest.approx(mo.period(params, h) / TWO_PI, rel=1e-6)


def test_energy_of_action_inverts_action(params):
    for h in (0.5, 3.0, 6.0, 9.5):
        assert mo.energy_of_action(params, mo.action(params, h)) == pytest.approx(h, rel=1e-12)


def test_angle_at_turning_points(params):
    for h in (0.5, 2.0, 6.0, 9.0, 9.9):
        q_minus, q_plus = mo.turning_points(params, h)
        aa_plus = mo.angle_of_state(params, PhaseState(q_plus, 0.0))
        aa_minus = mo.angle_of_state(params, PhaseState(q_minus, 0.0))
        assert aa_plus.theta == pytest.approx(0.0, abs=1e-7) or \
            aa_plus.theta == pytest.approx(TWO_PI, abs=1e-7)
        assert aa_minus.theta == pytest.approx(math.pi, abs=1e-7)
        assert aa_plus.I == pytest.approx(mo.action(params, h), rel=1e-12)


def test_angle_at_quarter_period(params):
    s = mo.bounded_trajectory(params, 6.0, mo.period(params, 6.0) / 4.0)
    assert s.p < 0.0
    assert mo.angle_of_state(params, s).theta == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_angle_linearity(params):
    for h in (1.0, 6.0, 9.0):
        T = mo.period(params, h)
        ts = np.arange(64) * (T / 64.0)
        thetas = np.array([mo.angle_of_state(params, mo.bounded_trajectory(params, h, t)).theta
                           for t in ts])
        unwrapped = np.unwrap(thetas)
        residual = np.abs(unwrapped - TWO_PI * ts / T)
        assert residual.max() <= 1e-8


def test_angle_regime_errors(params):
    with pytest.raises(DomainError):
        mo.angle_of_state(params, PhaseState(0.0, 0.0))
    with pytest.raises(DomainError):
        mo.angle_of_state(params, PhaseState(0.0, 20.0))


def test_state_of_action_angle_examples(params):
    I6 = mo.action(params, 6.0)
    q_minus, q_plus = mo.turning_points(params, 6.0)
    assert mo.energy_of_action(params, I6) == pytest.approx(6.0, rel=1e-12)
    s = mo.state_of_action_angle(params, ActionAngle(I6, 0.0, None))
    assert s.q == pytest.approx(q_plus, rel=1e-13) and s.p == 0.0
    s = mo.state_of_action_angle(params, ActionAngle(I6, math.pi, None))
    assert s.q == pytest.approx(q_minus, rel=1e-12)
    assert abs(s.p) < 1e-12
    s = mo.state_of_action_angle(params, ActionAngle(I6, math.pi / 2.0, None))
    assert s.q == pytest.approx(math.log(2.5), rel=1e-13)
    assert s.p < 0.0


def test_state_of_action_angle_domain(params):
    with pytest.raises(DomainError):
        mo.state_of_action_angle(params, ActionAngle(0.0, 0.0, None))
    with pytest.raises(DomainError):
        mo.state_of_action_angle(params, ActionAngle(mo.action_max(params), 0.0, None))
    with pytest.raises(DomainError):
        mo.state_of_action_angle(params, ActionAngle(-1.0, 0.0, None))


def test_action_angle_roundtrip(params):
    for s in random_bounded_states(params, 1000, seed=3):
        back = mo.state_of_action_angle(params, mo.angle_of_state(params, s))
        assert back.q == pytest.approx(s.q, abs=1e-9)
        assert back.p == pytest.approx(s.p, abs=1e-9)


def test_sample_helpers(params):
    ts = np.linspace(0.0, 5.0, 11)
    sample = mo.sample_bounded(params, 6.0, ts)
    assert len(sample) == 11
    assert np.allclose(sample.h, 6.0, rtol=1e-12)
    hom = mo.sample_homoclinic(params, ts)
    assert np.allclose(hom.h, params.D, rtol=1e-12)
    unb = mo.sample_unbounded(params, 12.0, ts)
    assert np.allclose(unb.h, 12.0, rtol=1e-12)
