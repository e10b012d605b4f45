"""Independent numerical evaluation of the integrals that the analytic
module states in closed form.

These are the ground-truth routes used by the tests: none of them touches
a closed-form result it is meant to check.  The period/action/angle/
time-of-flight integrands all carry inverse-square-root turning-point
singularities in q; substituting u = exp(-alpha q) and then
u = 1 + k sin(phi) removes the endpoint singularities exactly, leaving a
smooth integrand in phi on (sub-intervals of) [-pi/2, pi/2] that adaptive
quadrature polishes off.  The Melnikov integral is improper and
oscillatory; it is truncated at T_cut with the boundary term of one
analytic integration by parts added back, which leaves a rigorously
bounded remainder decaying like 1/T_cut^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _si

from .errors import DomainError, NonconvergenceError
from .model import MorseParams, PhaseState, Regime, classify_energy, hamiltonian

DEFAULT_REL_TOL = 1e-10


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


def _quad(f, lo, hi, rel_tol, prefactor, what):
    """scipy QUADPACK wrapper returning a prefactor-scaled QuadratureResult;
    raises NonconvergenceError when the requested tolerance is not met."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        out = _si.quad(f, lo, hi, epsabs=0.0, epsrel=max(rel_tol / 10.0, 1e-13), full_output=1)
    value, abserr, info = out[0], out[1], out[2]
    value *= prefactor
    abserr *= abs(prefactor)
    evals = int(info["neval"])
    if not math.isfinite(value) or abserr > rel_tol * max(abs(value), 1e-300):
        raise NonconvergenceError(f"{what} quadrature did not converge", value, abserr)
    return QuadratureResult(value, abserr, evals)


def _phi_of_position(params: MorseParams, h: float, q: float) -> float:
    """Angle-like variable of the regularizing substitution at position q:
    phi = arcsin((exp(-alpha q) - 1) / k) with k = sqrt(h / D)."""
    k = math.sqrt(h / params.D)
    x = (math.exp(-params.alpha * q) - 1.0) / k
    if abs(x) > 1.0:
        if abs(x) > 1.0 + 1e-12:
            raise DomainError(f"position q={q} is outside the level set h={h}")
        x = math.copysign(1.0, x)
    return math.asin(x)


def period_quadrature(params: MorseParams, h: float, rel_tol: float = DEFAULT_REL_TOL) -> QuadratureResult:
    """Orbit period at bounded energy h by direct integration of dt around
    the level set."""
    if classify_energy(params, h).tag is not Regime.BOUNDED:
        raise DomainError(f"period quadrature requires 0 < h < D, got h={h}")
    k = math.sqrt(h / params.D)
    pref = math.sqrt(2.0 * params.m) / (params.alpha * math.sqrt(params.D))
    return _quad(lambda phi: 1.0 / (1.0 + k * math.sin(phi)),
                 -0.5 * math.pi, 0.5 * math.pi, rel_tol, pref, "period")


def action_quadrature(params: MorseParams, h: float, rel_tol: float = DEFAULT_REL_TOL) -> QuadratureResult:
    """Enclosed phase-space area over 2 pi at bounded energy h."""
    if classify_energy(params, h).tag is not Regime.BOUNDED:
        raise DomainError(f"action quadrature requires 0 < h < D, got h={h}")
    k = math.sqrt(h / params.D)
    pref = math.sqrt(2.0 * params.m * params.D) * k * k / (math.pi * params.alpha)
    return _quad(lambda phi: math.cos(phi) ** 2 / (1.0 + k * math.sin(phi)),
                 -0.5 * math.pi, 0.5 * math.pi, rel_tol, pref, "action")


def time_of_flight_quadrature(params: MorseParams, h: float, q: float,
                              rel_tol: float = DEFAULT_REL_TOL) -> QuadratureResult:
    """Travel time from the inner turning point q_- to position q on an
    unbounded orbit (h > D)."""
    if classify_energy(params, h).tag is not Regime.UNBOUNDED:
        raise DomainError(f"time-of-flight quadrature requires h > D, got h={h}")
    k = math.sqrt(h / params.D)
    phi_q = _phi_of_position(params, h, q)
    pref = math.sqrt(0.5 * params.m) / (params.alpha * math.sqrt(params.D))
    return _quad(lambda phi: 1.0 / (1.0 + k * math.sin(phi)),
                 phi_q, 0.5 * math.pi, rel_tol, pref, "time-of-flight")


def angle_quadrature(params: MorseParams, s: PhaseState,
                     rel_tol: float = DEFAULT_REL_TOL) -> QuadratureResult:
    """Angle coordinate of a bounded state from two time quadratures:
    2 pi times the travel time from (q_+, 0), divided by the quadrature
    period.  Entirely independent of the closed-form angle expression."""
    h = hamiltonian(params, s)
    if classify_energy(params, h).tag is not Regime.BOUNDED:
        raise DomainError(f"angle quadrature requires a bounded state, got h={h}")
    k = math.sqrt(h / params.D)
    phi_q = _phi_of_position(params, h, s.q)
    pref = math.sqrt(0.5 * params.m) / (params.alpha * math.sqrt(params.D))
    leg = _quad(lambda phi: 1.0 / (1.0 + k * math.sin(phi)),
                -0.5 * math.pi, phi_q, rel_tol, pref, "angle")
    per = period_quadrature(params, h, rel_tol)
    theta = 2.0 * math.pi * leg.value / per.value
    if s.p > 0.0:
        theta = 2.0 * math.pi - theta
    rel_err = leg.error_estimate / max(abs(leg.value), 1e-300) + per.error_estimate / per.value
    return QuadratureResult(theta % (2.0 * math.pi), abs(theta) * rel_err + 1e-15,
                            leg.evaluations + per.evaluations)


# ---------------------------------------------------------------------------
# Melnikov integral
# ---------------------------------------------------------------------------

_GAUSS_ORDER = 16
_node_cache: dict = {}


def _melnikov_nodes(a: float, omega: float, T_cut: float):
    """Panel nodes/weights for the truncated Melnikov integral.

    Far from the origin the integrand oscillates at the forcing frequency,
    so panels of half a forcing period suffice; near the origin the
    homoclinic momentum varies on the scale a, so panels are shrunk to a/2
    there to keep fixed-order Gauss rules at full accuracy.
    """
    key = (a, omega, T_cut)
    hit = _node_cache.get(key)
    if hit is not None:
        return hit
    half = math.pi / omega
    fine_len = min(0.5 * a, 0.5 * half)
    fine_T = max(20.0 * a, 2.0 * half)
    n_fine = int(math.ceil(fine_T / fine_len))
    fine_T = n_fine * fine_len
    n_far = max(int(math.ceil((T_cut - fine_T) / half)), 0)
    T = fine_T + n_far * half
    edges = np.concatenate([
        -fine_T - half * np.arange(n_far, 0, -1),
        np.linspace(-fine_T, fine_T, 2 * n_fine + 1),
        fine_T + half * np.arange(1, n_far + 1),
    ])
    mid = 0.5 * (edges[1:] + edges[:-1])
    hw = 0.5 * (edges[1:] - edges[:-1])
    nodes = {}
    for order in (_GAUSS_ORDER, _GAUSS_ORDER // 2):
        xg, wg = np.polynomial.legendre.leggauss(order)
        t = (mid[:, None] + hw[:, None] * xg[None, :]).ravel()
        w = np.broadcast_to(hw[:, None] * wg[None, :], (hw.size, order)).ravel()
        nodes[order] = (t, np.ascontiguousarray(w))
    result = (nodes[_GAUSS_ORDER], nodes[_GAUSS_ORDER // 2], T)
    _node_cache[key] = result
    return result


def melnikov_quadrature(params: MorseParams, t0: float, phi0: float,
                        T_cut: float | None = None) -> QuadratureResult:
    """Melnikov integral along the homoclinic orbit for forcing phase
    (t0, phi0): the integral over t of (p0(t)/m) epsilon cos(w t + w t0 + phi0).

    The improper integral is truncated at +/-T (T_cut rounded up to whole
    panels and floored at the inner fine-resolution zone).  One analytic
    integration by parts supplies the boundary term
    -2 eps f(T) cos(w T) sin(w t0 + phi0) / w, which is added back; the
    remaining truncation error is bounded by 4 eps |f'(T)| / w^2 and
    reported inside error_estimate together with the Gauss-rule
    discrepancy.  Here f(t) = p0(t)/m = (2/alpha) t / (t^2 + a^2).
    """
    if not params.forced:
        raise DomainError("melnikov quadrature requires epsilon > 0")
    omega, eps, alpha = params.omega, params.epsilon, params.alpha
    a = math.sqrt(params.m / (2.0 * params.D)) / alpha
    if T_cut is None:
        T_cut = 1e4 / omega
    if not (T_cut > 0):
        raise DomainError(f"T_cut must be positive, got {T_cut}")
    (t16, w16), (t8, w8), T = _melnikov_nodes(a, omega, T_cut)
    c = omega * t0 + phi0

    def finite_part(t, w):
        f = (2.0 / alpha) * t / (t * t + a * a)
        return eps * float(np.dot(w, f * np.cos(omega * t + c)))

    val = finite_part(t16, w16)
    val_coarse = finite_part(t8, w8)
    f_T = (2.0 / alpha) * T / (T * T + a * a)
    df_T = (2.0 / alpha) * (a * a - T * T) / (T * T + a * a) ** 2
    boundary = -2.0 * eps * f_T * math.cos(omega * T) * math.sin(c) / omega
    tail_bound = 4.0 * eps * abs(df_T) / omega**2
    err = abs(val - val_coarse) + tail_bound
    value = val + boundary
    if not math.isfinite(value):
        raise NonconvergenceError("melnikov quadrature produced a non-finite value", value, err)
    return QuadratureResult(value, err, t16.size + t8.size)
