"""Homoclinic Melnikov function of the periodically forced system.

Two routes are surfaced side by side: the closed form

    M(t0, phi0) = -eps (2m / alpha) sin(w t0 + phi0) exp(-w sqrt(m / (2 D alpha^2)))

with the tabulated-integral prefactor 2m/alpha, and the direct quadrature
of the defining integral (:func:`morseosc.oracles.melnikov_quadrature`).
Direct evaluation of that integral gives the prefactor 2 pi / alpha
instead, a constant factor m/pi away; :func:`melnikov_scan` fits the
ratio empirically rather than hiding it.  Everything the chaos argument
needs (the location and simplicity of the zeros, the exponential
frequency law, the parameter trends) is shared by both routes, so
downstream code should rely only on those shared properties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NonconvergenceError
from .model import MorseParams
from .oracles import melnikov_quadrature

# a zero is reported simple when |dM/dt0| exceeds this fraction of the
# amplitude scale eps * 2m / alpha
_SIMPLE_RTOL = 1e-12


def _decay_scale(params: MorseParams) -> float:
    """Time scale a = sqrt(m / (2 D alpha^2)) of the homoclinic momentum
    pulse; the exponential factor is exp(-omega a)."""
    return math.sqrt(params.m / (2.0 * params.D)) / params.alpha


def _require_forced(params: MorseParams, what: str) -> None:
    if not params.forced:
        raise DomainError(f"{what} is first order in the forcing; epsilon > 0 required")


def melnikov_analytic(params: MorseParams, t0: float, phi0: float) -> float:
    """The closed-form Melnikov function (prefactor convention 2m/alpha)."""
    _require_forced(params, "melnikov_analytic")
    c = params.omega * t0 + phi0
    amp = params.epsilon * 2.0 * params.m / params.alpha
    return -amp * math.sin(c) * math.exp(-params.omega * _decay_scale(params))


def melnikov_peak_magnitude(params: MorseParams) -> float:
    """|M| at a sine peak: eps (2m/alpha) exp(-omega a)."""
    _require_forced(params, "melnikov_peak_magnitude")
    amp = params.epsilon * 2.0 * params.m / params.alpha
    return amp * math.exp(-params.omega * _decay_scale(params))


@dataclass(frozen=True)
class MelnikovZero:
    t0: float
    slope: float
    simple: bool


def melnikov_zeros(params: MorseParams, window: tuple, phi0: float) -> list:
    """All zeros t0 = (k pi - phi0) / omega inside [window[0], window[1]],
    each with the derivative dM/dt0 there (the transversality marker)."""
    _require_forced(params, "melnikov_zeros")
    lo, hi = float(window[0]), float(window[1])
    if not lo <= hi:
        raise DomainError(f"empty window {window}")
    omega = params.omega
    k_lo = math.ceil((omega * lo + phi0) / math.pi)
    k_hi = math.floor((omega * hi + phi0) / math.pi)
    amp = params.epsilon * 2.0 * params.m / params.alpha
    decay = math.exp(-omega * _decay_scale(params))
    zeros = []
    for k in range(k_lo, k_hi + 1):
        t0 = (k * math.pi - phi0) / omega
        slope = -amp * omega * math.cos(k * math.pi) * decay
        zeros.append(MelnikovZero(t0, slope, abs(slope) > _SIMPLE_RTOL * amp))
    return zeros


def melnikov_numeric_zeros(params: MorseParams, window: tuple, phi0: float,
                           T_cut: float | None = None) -> list:
    """Zeros of the quadrature Melnikov function, located by sign-change
    bracketing on a grid of eight points per expected zero spacing and
    polished with Brent's method."""
    _require_forced(params, "melnikov_numeric_zeros")
    lo, hi = float(window[0]), float(window[1])
    spacing = math.pi / params.omega

    def f(t0: float) -> float:
        return melnikov_quadrature(params, t0, phi0, T_cut).value

    n = max(int(math.ceil((hi - lo) / (spacing / 8.0))), 2)
    grid = np.linspace(lo, hi, n + 1)
    vals = [f(t) for t in grid]
    zeros = []
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0.0:
            zeros.append(float(a))
        elif fa * fb < 0.0:
            zeros.append(float(brentq(f, a, b, xtol=1e-9 / params.omega)))
    if vals[-1] == 0.0:
        zeros.append(float(grid[-1]))
    return zeros


@dataclass(frozen=True)
class MelnikovScan:
    """Tabulated comparison of the two Melnikov routes over a t0 grid.

    ``ratio`` is the least-squares constant fitted as analytic = ratio *
    numeric over the rows with |numeric| > 10 * tail_bound;
    ``residual_spread`` is the worst fit residual relative to the largest
    analytic magnitude."""

    t0: np.ndarray
    phi0: float
    analytic: np.ndarray
    numeric: np.ndarray
    tail_bound: np.ndarray
    ratio: float
    residual_spread: float


def melnikov_scan(params: MorseParams, t0_grid, phi0: float,
                  T_cut: float | None = None) -> MelnikovScan:
    """Evaluate both Melnikov routes over the grid; per-row quadrature
    failures are recorded as NaN rows without aborting the scan."""
    _require_forced(params, "melnikov_scan")
    t0 = np.asarray(t0_grid, dtype=float)
    analytic = np.array([melnikov_analytic(params, t, phi0) for t in t0])
    numeric = np.empty_like(analytic)
    tail = np.empty_like(analytic)
    for i, t in enumerate(t0):
        try:
            res = melnikov_quadrature(params, t, phi0, T_cut)
            numeric[i] = res.value
            tail[i] = res.error_estimate
        except NonconvergenceError as exc:
            numeric[i] = math.nan
            tail[i] = exc.achieved
    used = np.isfinite(numeric) & (np.abs(numeric) > 10.0 * tail)
    if used.any():
        num = numeric[used]
        ana = analytic[used]
        ratio = float(np.dot(ana, num) / np.dot(num, num))
        residual_spread = float(np.max(np.abs(ana - ratio * num)) / np.max(np.abs(ana)))
    else:
        ratio = math.nan
        residual_spread = math.nan
    return MelnikovScan(t0, phi0, analytic, numeric, tail, ratio, residual_spread)
