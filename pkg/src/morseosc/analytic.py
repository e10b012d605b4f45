"""Closed-form solutions for the Morse oscillator.

Covers the period and trajectory of bounded motion, the homoclinic orbit
on the separatrix, the unbounded trajectory with its time-of-flight
inverse, and the action-angle chart of the bounded region.  Every
expression has an independent numerical counterpart in
:mod:`morseosc.oracles`; the momentum formulas (hand-differentiated
positions) are verified against finite differences in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import (
    EnergyRegime,
    MorseParams,
    PhaseState,
    Regime,
    TrajectorySample,
    classify_energy,
    hamiltonian,
    REGIME_RTOL,
)

TWO_PI = 2.0 * math.pi

# arcsin arguments within this distance of +/-1 are clamped; anything
# farther out is a genuine regime violation.
_ASIN_CLAMP = 1e-12


@dataclass(frozen=True)
class ActionAngle:
    """Action-angle pair (I, theta) with the energy regime attached;
    theta is wrapped to [0, 2 pi)."""

    I: float
    theta: float
    regime: EnergyRegime


def action_max(params: MorseParams) -> float:
    """Action of the separatrix, sqrt(2 m D) / alpha: the supremum of the
    bounded-region actions."""
    return math.sqrt(2.0 * params.m * params.D) / params.alpha


def _require_bounded_energy(params: MorseParams, h: float, *, op: str) -> None:
    """Reject energies whose bounded-motion branch formulas degenerate."""
    regime = classify_energy(params, h)
    if regime.tag is not Regime.BOUNDED:
        raise DomainError(f"{op} requires bounded motion (0 < h < D), got h={h}")


def period(params: MorseParams, h: float) -> float:
    """Period of the orbit at energy h: T(h) = pi sqrt(2m) / (alpha sqrt(D - h)).

    Defined for 0 <= h < D; grows without bound as h -> D.
    """
    if h < 0 or h >= params.D:
        raise DomainError(f"period requires 0 <= h < D, got h={h}")
    return math.pi * math.sqrt(2.0 * params.m) / (params.alpha * math.sqrt(params.D - h))


def angular_frequency(params: MorseParams, h: float) -> float:
    """2 pi / T(h) = alpha sqrt(2 (D - h) / m)."""
    if h < 0 or h >= params.D:
        raise DomainError(f"angular frequency requires 0 <= h < D, got h={h}")
    return params.alpha * math.sqrt(2.0 * (params.D - h) / params.m)


def bounded_trajectory(params: MorseParams, h: float, t: float) -> PhaseState:
    """State at time t on the bounded orbit of energy h, started from the
    outer turning point: q(0) = q_+, p(0) = 0.

    q(t) = ln((sqrt(D h) cos(W t) + D) / (D - h)) / alpha with
    W = alpha sqrt(2 (D - h) / m); p(t) = m dq/dt.
    """
    _require_bounded_energy(params, h, op="bounded_trajectory")
    D, alpha, m = params.D, params.alpha, params.m
    w = alpha * math.sqrt(2.0 * (D - h) / m)
    sdh = math.sqrt(D * h)
    denom = sdh * math.cos(w * t) + D
    q = math.log(denom / (D - h)) / alpha
    p = -math.sqrt(2.0 * m * (D - h)) * sdh * math.sin(w * t) / denom
    return PhaseState(q, p)


def homoclinic_orbit(params: MorseParams, t: float) -> PhaseState:
    """State at time t on the separatrix orbit (energy h = D).

    q0(t) = ln((1 + (2 D / m) alpha^2 t^2) / 2) / alpha,
    p0(t) = 4 m D alpha t / (2 D alpha^2 t^2 + m).
    q0 is even and p0 odd in t; q0 -> +inf and p0 -> 0 as |t| -> inf.
    """
    D, alpha, m = params.D, params.alpha, params.m
    at2 = alpha * alpha * t * t
    q = math.log((1.0 + 2.0 * D * at2 / m) / 2.0) / alpha
    p = 4.0 * m * D * alpha * t / (2.0 * D * at2 + m)
    return PhaseState(q, p)


def _require_unbounded_energy(params: MorseParams, h: float, *, op: str) -> None:
    regime = classify_energy(params, h)
    if regime.tag is not Regime.UNBOUNDED:
        raise DomainError(f"{op} requires h > D, got h={h}")


def unbounded_trajectory(params: MorseParams, h: float, t: float) -> PhaseState:
    """State at time t on the unbounded orbit of energy h > D, started at
    the inner turning point: q(0) = q_-, p(0) = 0.

    With beta = alpha sqrt(2 (h - D) / m) and E = exp(beta t):
    q(t) = ln((sqrt(h D) E^2 - 2 D E + sqrt(h D)) / (2 (h - D) E)) / alpha;
    p(t) = m dq/dt.
    """
    _require_unbounded_energy(params, h, op="unbounded_trajectory")
    D, alpha, m = params.D, params.alpha, params.m
    beta = alpha * math.sqrt(2.0 * (h - D) / m)
    e = math.exp(beta * t)
    shd = math.sqrt(h * D)
    num = shd * e * e - 2.0 * D * e + shd
    q = math.log(num / (2.0 * (h - D) * e)) / alpha
    p = math.sqrt(2.0 * m * (h - D)) * shd * (e * e - 1.0) / num
    return PhaseState(q, p)


def unbounded_time_of_position(params: MorseParams, h: float, q: float) -> float:
    """Time of flight from the turning point q_- to position q on the
    unbounded orbit of energy h > D; the inverse of
    :func:`unbounded_trajectory` restricted to t >= 0.
    """
    _require_unbounded_energy(params, h, op="unbounded_time_of_position")
    D, alpha, m = params.D, params.alpha, params.m
    u = math.exp(-alpha * q)
    kin = h - D * (1.0 - u) ** 2
    if kin < 0.0:
        # q < q_- is classically forbidden; tolerate only rounding fuzz
        # from positions computed off the exact turning point.
        if kin < -REGIME_RTOL * h:
            raise DomainError(f"position q={q} lies behind the turning point at energy h={h}")
        kin = 0.0
    num = h - D + D * u + math.sqrt((h - D) * kin)
    return math.log(num / (math.sqrt(h * D) * u)) * math.sqrt(m / (2.0 * (h - D))) / alpha


def action(params: MorseParams, h: float) -> float:
    """Action of the level set at energy h:
    I(h) = (sqrt(2m) / alpha) (sqrt(D) - sqrt(D - h)), for 0 <= h <= D.

    I(0) = 0 and I(D) is the separatrix area over 2 pi; dI/dh = T(h)/2pi.
    """
    D = params.D
    tol = REGIME_RTOL * D
    if h < -tol or h > D + tol:
        raise DomainError(f"action requires 0 <= h <= D, got h={h}")
    rest = max(D - h, 0.0)
    return math.sqrt(2.0 * params.m) / params.alpha * (math.sqrt(D) - math.sqrt(rest))


def energy_of_action(params: MorseParams, I: float) -> float:
    """Inverse of :func:`action` on the bounded region:
    h(I) = D - (sqrt(D) - alpha I / sqrt(2 m))^2."""
    root = math.sqrt(params.D) - params.alpha * I / math.sqrt(2.0 * params.m)
    return params.D - root * root


def angle_of_state(params: MorseParams, s: PhaseState) -> ActionAngle:
    """Action-angle coordinates of a bounded-regime state.

    The angle advances uniformly at 2 pi / T(h) along the flow and is zero
    at the outer turning point (q_+, 0).  With
    x = ((h - D) e^(alpha q) + D) / sqrt(D h) one has cos(theta) = -x; the
    momentum fixes the half-orbit (p <= 0 carries theta in [0, pi], the
    reflection covers p > 0, as forced by time-reversal symmetry).  Both
    branch arcsines pi/2 + asin(x) and 3 pi/2 - asin(x) are equivalent to
    the atan2 form used here, which stays fully conditioned at the
    turning points where asin loses half the digits.
    """
    h = hamiltonian(params, s)
    regime = classify_energy(params, h)
    if regime.tag is not Regime.BOUNDED:
        raise DomainError(f"angle_of_state requires a bounded state, got h={h}")
    D = params.D
    eq = math.exp(params.alpha * s.q)
    sdh = math.sqrt(D * h)
    cos_t = -((h - D) * eq + D) / sdh
    if abs(cos_t) > 1.0:
        if abs(cos_t) > 1.0 + _ASIN_CLAMP:
            raise DomainError(f"state ({s.q}, {s.p}) is not on a bounded level set")
        cos_t = math.copysign(1.0, cos_t)
    sin_t = -s.p * (D - h) * eq / (math.sqrt(2.0 * params.m * (D - h)) * sdh)
    theta = math.atan2(sin_t, cos_t) % TWO_PI
    return ActionAngle(action(params, h), theta, regime)


def state_of_action_angle(params: MorseParams, aa: ActionAngle) -> PhaseState:
    """Phase-space state for an action-angle pair in the bounded region;
    inverse of :func:`angle_of_state`."""
    I = aa.I
    if not (0.0 < I < action_max(params)):
        raise DomainError(f"action must lie in (0, {action_max(params)}), got {I}")
    h = energy_of_action(params, I)
    _require_bounded_energy(params, h, op="state_of_action_angle")
    D, alpha, m = params.D, params.alpha, params.m
    sdh = math.sqrt(D * h)
    denom = sdh * math.cos(aa.theta) + D
    q = math.log(denom / (D - h)) / alpha
    p = -math.sqrt(2.0 * m * (D - h)) * sdh * math.sin(aa.theta) / denom
    return PhaseState(q, p)


def _sample(params: MorseParams, times, states) -> TrajectorySample:
    t = np.asarray(times, dtype=float)
    q = np.array([s.q for s in states])
    p = np.array([s.p for s in states])
    hh = np.array([hamiltonian(params, s) for s in states])
    return TrajectorySample(t, q, p, hh)


def sample_bounded(params: MorseParams, h: float, times) -> TrajectorySample:
    """Tabulate the bounded closed-form orbit at the given times."""
    return _sample(params, times, [bounded_trajectory(params, h, t) for t in np.asarray(times, dtype=float)])


def sample_homoclinic(params: MorseParams, times) -> TrajectorySample:
    """Tabulate the separatrix orbit at the given times."""
    return _sample(params, times, [homoclinic_orbit(params, t) for t in np.asarray(times, dtype=float)])


def sample_unbounded(params: MorseParams, h: float, times) -> TrajectorySample:
    """Tabulate the unbounded closed-form orbit at the given times."""
    return _sample(params, times, [unbounded_trajectory(params, h, t) for t in np.asarray(times, dtype=float)])
