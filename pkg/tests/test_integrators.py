import math

import numpy as np
import pytest
from scipy.integrate import quad

import morseosc as mo
from morseosc import (
    DomainError,
    EscapeError,
    IntegratorConfig,
    MorseParams,
    PhaseState,
    StepLimitError,
)
from morseosc.kernels import BACKEND, rk_py

TIGHT = IntegratorConfig(rtol=1e-12, atol=1e-14)


def test_config_validation():
    with pytest.raises(DomainError):
        IntegratorConfig(method="euler")
    with pytest.raises(DomainError):
        IntegratorConfig(method="rk4")  # no step
    with pytest.raises(DomainError):
        IntegratorConfig(rtol=0.0)
    with pytest.raises(DomainError):
        IntegratorConfig(max_steps=0)
    IntegratorConfig(method="rk4", step=0.01)


def test_closed_orbit_returns(params):
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    T = mo.period(params, 6.0)
    sample = mo.integrate_to(params, s0, 0.0, T, TIGHT)
    assert sample.q[-1] == pytest.approx(s0.q, abs=1e-8)
    assert sample.p[-1] == pytest.approx(s0.p, abs=1e-8)


def test_matches_unbounded_closed_form(params):
    q_minus, _ = mo.turning_points(params, 12.0)
    sample = mo.integrate_to(params, PhaseState(q_minus, 0.0), 0.0, 1.0, TIGHT)
    ref = mo.unbounded_trajectory(params, 12.0, 1.0)
    assert sample.q[-1] == pytest.approx(ref.q, abs=1e-8)
    assert sample.p[-1] == pytest.approx(ref.p, abs=1e-8)


def test_equilibrium_is_fixed(params):
    sample = mo.integrate_to(params, PhaseState(0.0, 0.0), 0.0, 10.0, TIGHT)
    assert abs(sample.q[-1]) <= 1e-14
    assert abs(sample.p[-1]) <= 1e-14


def test_dense_output_matches_analytic(params):
    T = mo.period(params, 6.0)
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    ts = np.linspace(0.0, 3.0 * T, 61)
    sample = mo.integrate_to(params, s0, 0.0, 3.0 * T, TIGHT, t_eval=ts)
    for t, q in zip(sample.t, sample.q):
        assert q == pytest.approx(mo.bounded_trajectory(params, 6.0, t).q, abs=1e-8)


def test_t_eval_validation(params):
    s0 = PhaseState(0.1, 0.0)
    with pytest.raises(DomainError):
        mo.integrate_to(params, s0, 0.0, 1.0, TIGHT, t_eval=[0.5, 0.4])
    with pytest.raises(DomainError):
        mo.integrate_to(params, s0, 0.0, 1.0, TIGHT, t_eval=[2.0])


def test_backward_rows_ascend(params):
    s0 = mo.bounded_trajectory(params, 6.0, 2.0)
    sample = mo.integrate_to(params, s0, 2.0, 0.0, TIGHT)
    assert sample.t[0] < sample.t[-1]
    assert sample.q[-1] == s0.q  # the initial state sits at the latest time


def test_reversibility(params):
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    T = mo.period(params, 6.0)
    fwd = mo.integrate_to(params, s0, 0.0, T, TIGHT)
    one_way = math.hypot(fwd.q[-1] - s0.q, fwd.p[-1] - s0.p)
    back = mo.integrate_to(params, PhaseState(fwd.q[-1], fwd.p[-1]), T, 0.0, TIGHT)
    roundtrip = math.hypot(back.q[0] - s0.q, back.p[0] - s0.p)
    assert roundtrip <= 2.0 * one_way + 1e-12


def test_reversibility_forced(forced):
    s0 = PhaseState(0.5, 1.0)
    fwd = mo.integrate_to(forced, s0, 0.0, 5.0, TIGHT)
    back = mo.integrate_to(forced, PhaseState(fwd.q[-1], fwd.p[-1]), 5.0, 0.0, TIGHT)
    assert back.q[0] == pytest.approx(s0.q, abs=1e-9)
    assert back.p[0] == pytest.approx(s0.p, abs=1e-9)


def test_rk4_is_fourth_order(params):
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    T = mo.period(params, 6.0)
    errs = []
    for n in (1024, 2048):
        cfg = IntegratorConfig(method="rk4", step=T / n)
        s = mo.integrate_to(params, s0, 0.0, T, cfg)
        errs.append(math.hypot(s.q[-1] - s0.q, s.p[-1] - s0.p))
    ratio = errs[0] / errs[1]
    assert 12.0 <= ratio <= 20.0


def test_energy_drift_budget(params):
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    T = mo.period(params, 6.0)
    sample = mo.integrate_to(params, s0, 0.0, 10.0 * T, TIGHT)
    assert abs(sample.h[-1] - sample.h[0]) <= 1e-9


def test_escape_error_carries_state(params):
    # dissociating orbit: h = 12 moves right without bound
    q_minus, _ = mo.turning_points(params, 12.0)
    with pytest.raises(EscapeError) as exc:
        mo.integrate_to(params, PhaseState(q_minus, 0.0), 0.0, 100.0, TIGHT,
                        q_ceiling=mo.default_ceiling(params))
    assert exc.value.q > mo.default_ceiling(params)
    assert 0.0 < exc.value.t < 100.0


def test_step_limit_error(params):
    cfg = IntegratorConfig(max_steps=5)
    with pytest.raises(StepLimitError):
        mo.integrate_to(params, PhaseState(1.0, 2.0), 0.0, 50.0, cfg)


# ---------------------------------------------------------------------------
# stroboscopic map
# ---------------------------------------------------------------------------

def test_strobe_requires_forcing(params):
    with pytest.raises(DomainError):
        mo.stroboscopic_map(params, PhaseState(0.0, 0.0), 0.0, 3)


def test_strobe_zero_iterates(forced):
    orbit = mo.stroboscopic_map(forced, PhaseState(0.3, -0.2), 0.0, 0)
    assert len(orbit) == 1
    assert orbit.q[0] == 0.3 and orbit.p[0] == -0.2


def test_strobe_small_epsilon_stays_on_level_set(params):
    p = MorseParams(params.D, params.alpha, params.m, epsilon=1e-12, omega=1.0)
    s0 = mo.bounded_trajectory(params, 6.0, 0.0)
    orbit = mo.stroboscopic_map(p, s0, 0.0, 20, TIGHT)
    hs = orbit.p**2 / (2.0 * p.m) + p.D * (1.0 - np.exp(-p.alpha * orbit.q)) ** 2
    assert np.abs(hs - 6.0).max() <= 1e-6


def test_strobe_well_orbit_bounded(forced):
    # forced well center stays trapped: fixture recorded from the first
    # verified run (q in [0, 0.169], |p| <= 0.94)
    orbit = mo.stroboscopic_map(forced, PhaseState(0.0, 0.0), 0.0, 500)
    assert orbit.escaped_at is None
    assert len(orbit) == 501
    assert orbit.q.min() >= -0.5 and orbit.q.max() <= 0.5
    assert np.abs(orbit.p).max() <= 2.0


def test_strobe_consecutive_times(forced):
    orbit = mo.stroboscopic_map(forced, PhaseState(0.0, 0.0), 0.25, 7)
    diffs = np.diff(orbit.times)
    assert np.allclose(diffs, forced.forcing_period, rtol=0, atol=1e-12)


def test_strobe_escape(forced):
    with pytest.raises(EscapeError) as exc:
        mo.stroboscopic_map(forced, PhaseState(5.5, 9.0), 0.0, 50)
    assert exc.value.partial is not None
    assert exc.value.partial.escaped_at is not None


def test_strobe_bounds_box(forced):
    with pytest.raises(EscapeError):
        mo.stroboscopic_map(forced, PhaseState(0.0, 0.0), 0.0, 10,
                            bounds=(-0.01, 0.01, -0.01, 0.01))


def test_strobe_area_preserving(forced):
    rng = np.random.default_rng(7)
    d = 1e-6
    for _ in range(20):
        q0 = rng.uniform(-0.4, 1.5)
        p0 = rng.uniform(-5.0, 5.0)

        def image(q, p):
            orbit = mo.stroboscopic_map(forced, PhaseState(q, p), 0.0, 1, TIGHT)
            return orbit.q[1], orbit.p[1]

        qp = image(q0 + d, p0)
        qm = image(q0 - d, p0)
        pp = image(q0, p0 + d)
        pm = image(q0, p0 - d)
        det = ((qp[0] - qm[0]) * (pp[1] - pm[1]) - (pp[0] - pm[0]) * (qp[1] - qm[1])) / (4.0 * d * d)
        assert det == pytest.approx(1.0, abs=1e-4)


# ---------------------------------------------------------------------------
# arclength descriptor
# ---------------------------------------------------------------------------

def test_arclength_zero_at_equilibrium(params):
    L, escaped = mo.arclength_descriptor(params, PhaseState(0.0, 0.0), 0.0, 5.0)
    assert L == 0.0 and not escaped


def test_arclength_closed_orbit_is_twice_circumference(params):
    h, T = 6.0, mo.period(params, 6.0)

    def speed(t):
        s = mo.bounded_trajectory(params, h, t)
        return math.hypot(s.p / params.m, mo.force(params, s.q))

    circumference, err = quad(speed, 0.0, T, epsabs=0.0, epsrel=1e-11, limit=200)
    s0 = mo.bounded_trajectory(params, h, 0.0)
    L, escaped = mo.arclength_descriptor(params, s0, 0.0, T)
    assert not escaped
    assert L == pytest.approx(2.0 * circumference, rel=1e-6)


def test_arclength_time_reversal_symmetry(forced):
    for q, p in ((0.2, 1.5), (1.0, 4.0), (-0.3, 2.2)):
        a, ea = mo.arclength_descriptor(forced, PhaseState(q, p), 0.0, 15.0)
        b, eb = mo.arclength_descriptor(forced, PhaseState(q, -p), 0.0, 15.0)
        assert ea == eb
        assert a == pytest.approx(b, rel=1e-6)


def test_arclength_escape_flagged(params):
    q_minus, _ = mo.turning_points(params, 12.0)
    L, escaped = mo.arclength_descriptor(params, PhaseState(q_minus, 0.0), 0.0, 100.0)
    assert escaped
    assert math.isfinite(L) and L > 0.0


def test_arclength_requires_positive_tau(params):
    with pytest.raises(DomainError):
        mo.arclength_descriptor(params, PhaseState(0.0, 0.0), 0.0, 0.0)


# ---------------------------------------------------------------------------
# backend parity and determinism
# ---------------------------------------------------------------------------

KERNEL_ARGS = (10.0, 1.0, 8.0, 1.0, 1.0, 0.3, 2.0, 0.0, 7.3,
               False, 0.0, 1e-9, 1e-12, 10**6, 8.0 * math.log(10.0))


@pytest.mark.skipif(BACKEND != "compiled", reason="compiled backend not built")
def test_backend_parity_propagate():
    from morseosc.kernels import _rk
    rc = _rk.propagate(*KERNEL_ARGS)
    rp = rk_py.propagate(*KERNEL_ARGS)
    assert rc[0] == pytest.approx(rp[0], rel=1e-12, abs=1e-12)
    assert rc[1] == pytest.approx(rp[1], rel=1e-12, abs=1e-12)
    assert rc[3] == rp[3]


@pytest.mark.skipif(BACKEND != "compiled", reason="compiled backend not built")
def test_backend_parity_arclength():
    from morseosc.kernels import _rk
    args = (10.0, 1.0, 8.0, 1.0, 1.0, 0.5, 3.0, 0.0, 10.0,
            False, 0.0, 1e-9, 1e-12, 10**6, 8.0 * math.log(10.0))
    rc = _rk.arclength(*args)
    rp = rk_py.arclength(*args)
    assert rc[0] == pytest.approx(rp[0], rel=1e-12)
    assert rc[1:3] == rp[1:3]


def test_propagate_deterministic(forced):
    a = mo.integrate_to(forced, PhaseState(0.4, 1.0), 0.0, 9.0)
    b = mo.integrate_to(forced, PhaseState(0.4, 1.0), 0.0, 9.0)
    assert (a.q == b.q).all() and (a.p == b.p).all()
