import math

import numpy as np
import pytest

import morseosc as mo
from morseosc import (
    AT_INFINITY,
    DomainError,
    MorseParams,
    PhaseState,
    Regime,
)

LN2 = math.log(2.0)


def test_params_validation():
    with pytest.raises(DomainError):
        MorseParams(-1.0, 1.0, 8.0)
    with pytest.raises(DomainError):
        MorseParams(10.0, 0.0, 8.0)
    with pytest.raises(DomainError):
        MorseParams(10.0, 1.0, -8.0)
    with pytest.raises(DomainError):
        MorseParams(10.0, 1.0, 8.0, epsilon=-0.5, omega=1.0)
    with pytest.raises(DomainError):
        MorseParams(10.0, 1.0, 8.0, epsilon=1.0)  # omega missing
    p = MorseParams(10.0, 1.0, 8.0, epsilon=1.0, omega=2.0)
    assert p.forced and p.forcing_period == math.pi


def test_phase_state_finite():
    with pytest.raises(DomainError):
        PhaseState(math.inf, 0.0)
    with pytest.raises(DomainError):
        PhaseState(0.0, math.nan)


def test_potential_values(params):
    assert mo.potential(params, 0.0) == 0.0
    assert abs(mo.potential(params, 40.0) - params.D) < 1e-12
    assert mo.potential(params, -LN2) == pytest.approx(10.0, rel=1e-14)
    # wall on the left, plateau on the right
    assert mo.potential(params, -5.0) > 1e3
    assert mo.potential(params, 8.0) < params.D


def test_hamiltonian_values(params):
    assert mo.hamiltonian(params, PhaseState(0.0, 0.0)) == 0.0
    assert mo.hamiltonian(params, PhaseState(0.0, 4.0)) == pytest.approx(1.0, rel=1e-15)
    assert mo.hamiltonian(params, PhaseState(-LN2, 0.0)) == pytest.approx(10.0, rel=1e-14)


def test_vector_field(params):
    assert mo.vector_field(params, PhaseState(0.0, 0.0)) == (0.0, 0.0)
    dq, dp = mo.vector_field(params, PhaseState(0.0, 8.0))
    assert dq == pytest.approx(1.0, rel=1e-15)
    assert dp == 0.0
    forced = MorseParams(10.0, 1.0, 8.0, epsilon=1.0, omega=1.0)
    assert mo.vector_field(forced, PhaseState(0.0, 0.0), 0.0) == (0.0, 1.0)


def test_vector_field_autonomous_bitwise(params):
    s = PhaseState(0.731, -2.25)
    assert mo.vector_field(params, s, 0.0) == mo.vector_field(params, s, 1234.5)


def test_equilibria(params):
    eqs = mo.equilibria(params)
    assert len(eqs) == 2
    elliptic, parabolic = eqs
    assert elliptic.kind == "elliptic"
    assert elliptic.location == PhaseState(0.0, 0.0)
    w0 = math.sqrt(2.5)
    assert elliptic.eigenvalues[0] == pytest.approx(1j * w0, abs=1e-15)
    assert elliptic.eigenvalues[1] == pytest.approx(-1j * w0, abs=1e-15)
    assert parabolic.kind == "parabolic"
    assert parabolic.location is AT_INFINITY
    assert parabolic.eigenvalues == (0.0, 0.0)


def test_elliptic_frequency_matches_period(params):
    w0 = abs(mo.equilibria(params)[0].eigenvalues[0])
    assert w0 == pytest.approx(2.0 * math.pi / mo.period(params, 0.0), rel=1e-14)


def test_equilibria_rejects_forced():
    forced = MorseParams(10.0, 1.0, 8.0, epsilon=0.1, omega=1.0)
    with pytest.raises(DomainError):
        mo.equilibria(forced)


def test_jacobian_det_equals_eigenvalue_product(params):
    J = mo.jacobian(params, 0.0)
    det = float(np.linalg.det(J))
    l1, l2 = mo.equilibria(params)[0].eigenvalues
    prod = (l1 * l2).real
    assert abs(det - prod) <= 1e-12 * abs(det)
    assert abs(det) == pytest.approx(2.0 * params.D * params.alpha**2 / params.m, rel=1e-14)


def test_turning_points_h6(params):
    q_minus, q_plus = mo.turning_points(params, 6.0)
    assert q_plus == pytest.approx(1.489863900384858, rel=1e-14)
    assert q_minus == pytest.approx(-0.5735731685107027, rel=1e-14)
    for h in (0.5, 2.0, 6.0, 9.5):
        qm, qp = mo.turning_points(params, h)
        assert qm < 0.0 < qp
        assert mo.potential(params, qm) == pytest.approx(h, rel=1e-12)
        assert mo.potential(params, qp) == pytest.approx(h, rel=1e-12)


def test_turning_points_limits(params):
    qm, qp = mo.turning_points(params, 1e-10)
    assert abs(qm) < 1e-4 and abs(qp) < 1e-4
    qm, qp = mo.turning_points(params, params.D)
    assert qp == math.inf
    assert qm == pytest.approx(-LN2, rel=1e-14)
    with pytest.raises(DomainError):
        mo.turning_points(params, 0.0)
    with pytest.raises(DomainError):
        mo.turning_points(params, -1.0)


def test_classify_energy(params):
    assert mo.classify_energy(params, 5.0).tag is Regime.BOUNDED
    assert mo.classify_energy(params, 10.0).tag is Regime.SEPARATRIX
    assert mo.classify_energy(params, 10.0 + 1e-15).tag is Regime.SEPARATRIX
    assert mo.classify_energy(params, 10.0 - 1e-13).tag is Regime.SEPARATRIX
    assert mo.classify_energy(params, 0.0).tag is Regime.ELLIPTIC
    assert mo.classify_energy(params, 5e-13).tag is Regime.ELLIPTIC
    assert mo.classify_energy(params, 10.5).tag is Regime.UNBOUNDED
    assert mo.classify_energy(params, 1e-10).tag is Regime.BOUNDED
    with pytest.raises(DomainError):
        mo.classify_energy(params, -1.0)


def test_hamiltonian_is_first_integral(params):
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    cfg = mo.IntegratorConfig(rtol=1e-12, atol=1e-14)
    T = mo.period(params, 6.0)
    sample = mo.integrate_to(params, s0, 0.0, 10.0 * T, cfg)
    assert abs(sample.h[-1] - sample.h[0]) <= 1e-9
