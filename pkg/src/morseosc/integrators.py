"""Numerical time integration: the adaptive/fixed-step propagator, the
stroboscopic (Poincare) map of the forced system, and the arclength
accumulator behind Lagrangian descriptors.

All routines delegate the stepping to :mod:`morseosc.kernels` (compiled
when available).  Backward integration is the time reparametrization
s = -t inside the kernel, so the step controller always works with
positive steps.  Every function is a pure function of its arguments:
results are bitwise reproducible and independent initial conditions may
be integrated concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainError, EscapeError, StepLimitError
from .kernels import STATUS_BLOWUP, STATUS_ESCAPED, STATUS_OK, STATUS_STEP_LIMIT
from .model import MorseParams, PhaseState, TrajectorySample


@dataclass(frozen=True)
class IntegratorConfig:
    """Stepper selection: adaptive embedded 4(5) pair ("rk45", controlled
    by rtol/atol) or the classical fixed-step scheme ("rk4", controlled by
    step)."""

    method: str = "rk45"
    rtol: float = 1e-9
    atol: float = 1e-12
    step: Optional[float] = None
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.method not in ("rk45", "rk4"):
            raise DomainError(f"unknown integrator method '{self.method}'")
        if self.method == "rk4" and not (self.step and self.step > 0):
            raise DomainError("method 'rk4' requires a positive step")
        if not (self.rtol > 0 and self.atol > 0):
            raise DomainError("rtol and atol must be positive")
        if self.max_steps <= 0:
            raise DomainError("max_steps must be positive")


@dataclass(frozen=True)
class StroboscopicOrbit:
    """Iterates of the time-2pi/omega flow map: states at
    t_n = t_start + n * period.  ``escaped_at`` is the index of the first
    iterate that could not be completed (None when all survived)."""

    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    period: float
    escaped_at: Optional[int] = None

    def __len__(self):
        return len(self.times)

    def state(self, i: int) -> PhaseState:
        return PhaseState(self.q[i], self.p[i])


def default_ceiling(params: MorseParams) -> float:
    """Escape threshold: the position where exp(-alpha q) drops below
    1e-8 and the Morse force is numerically gone."""
    return 8.0 * math.log(10.0) / params.alpha


def _kernel_args(cfg: IntegratorConfig) -> tuple:
    rk4 = cfg.method == "rk4"
    step = cfg.step if cfg.step else 0.0
    return (rk4, step, cfg.rtol, cfg.atol, cfg.max_steps)


def _propagate(params: MorseParams, q: float, p: float, t0: float, t1: float,
               cfg: IntegratorConfig, q_ceiling: float) -> tuple:
    rk4, step, rtol, atol, max_steps = _kernel_args(cfg)
    return kernels.propagate(params.D, params.alpha, params.m, params.epsilon,
                             params.omega, q, p, t0, t1, rk4, step, rtol, atol,
                             max_steps, q_ceiling)


def integrate_to(params: MorseParams, s0: PhaseState, t0: float, t1: float,
                 cfg: IntegratorConfig | None = None, t_eval=None,
                 q_ceiling: float = math.inf) -> TrajectorySample:
    """Integrate from (s0, t0) to t1 (either direction), sampling the
    solution at the requested times.

    ``t_eval`` defaults to the two endpoints; times must be monotone in
    the direction of integration and lie between t0 and t1.  Rows of the
    returned sample are always ordered by increasing t.  Escape past
    ``q_ceiling`` or loss of finiteness raises EscapeError carrying the
    last valid sample; exhausting the step budget raises StepLimitError.
    """
    cfg = cfg or IntegratorConfig()
    direction = 1.0 if t1 >= t0 else -1.0
    if t_eval is None:
        times = [t0, t1] if t1 != t0 else [t0]
    else:
        times = [float(t) for t in t_eval]
        for t in times:
            if direction * (t - t0) < 0 or direction * (t1 - t) < 0:
                raise DomainError(f"sample time {t} outside [{t0}, {t1}]")
        diffs = [direction * (b - a) for a, b in zip(times, times[1:])]
        if any(d <= 0 for d in diffs):
            raise DomainError("sample times must be strictly monotone in the integration direction")
        if not times or times[0] != t0:
            times.insert(0, t0)
        if times[-1] != t1:
            times.append(t1)

    rows_t = [times[0]]
    rows_q = [s0.q]
    rows_p = [s0.p]
    q, p = s0.q, s0.p
    for t_prev, t_next in zip(times, times[1:]):
        q, p, t, status, _ns, _ne = _propagate(params, q, p, t_prev, t_next, cfg, q_ceiling)
        if status in (STATUS_ESCAPED, STATUS_BLOWUP):
            raise EscapeError("trajectory escaped during integration", t, q, p,
                              partial=_as_sample(params, rows_t, rows_q, rows_p, direction))
        if status == STATUS_STEP_LIMIT:
            raise StepLimitError("integrator exhausted max_steps", t, q, p)
        rows_t.append(t)
        rows_q.append(q)
        rows_p.append(p)
    return _as_sample(params, rows_t, rows_q, rows_p, direction)


def _as_sample(params, rows_t, rows_q, rows_p, direction) -> TrajectorySample:
    t = np.asarray(rows_t)
    q = np.asarray(rows_q)
    p = np.asarray(rows_p)
    if direction < 0:
        t, q, p = t[::-1], q[::-1], p[::-1]
    h = p * p / (2.0 * params.m) + params.D * (1.0 - np.exp(-params.alpha * q)) ** 2
    return TrajectorySample(t, q, p, h)


def stroboscopic_map(params: MorseParams, s0: PhaseState, t_start: float,
                     n_iterates: int, cfg: IntegratorConfig | None = None,
                     bounds: tuple | None = None,
                     q_ceiling: float | None = None) -> StroboscopicOrbit:
    """Iterate the period-map of the forced system n_iterates times from
    phase t_start (the section is t = t_start mod 2pi/omega; t_start = 0
    matches the usual t = 0 section).

    ``bounds`` is an optional (q_min, q_max, p_min, p_max) box; an iterate
    leaving it (or escaping past the ceiling) raises EscapeError whose
    ``partial`` holds the truncated orbit.
    """
    if not params.forced:
        raise DomainError("stroboscopic map requires epsilon > 0")
    if n_iterates < 0:
        raise DomainError("n_iterates must be >= 0")
    cfg = cfg or IntegratorConfig()
    ceiling = default_ceiling(params) if q_ceiling is None else q_ceiling
    period = params.forcing_period
    times = t_start + period * np.arange(n_iterates + 1)
    qs = np.empty(n_iterates + 1)
    ps = np.empty(n_iterates + 1)
    qs[0], ps[0] = s0.q, s0.p
    q, p = s0.q, s0.p
    for k in range(1, n_iterates + 1):
        q, p, t, status, _ns, _ne = _propagate(params, q, p, times[k - 1], times[k], cfg, ceiling)
        if status == STATUS_STEP_LIMIT:
            raise StepLimitError("stroboscopic map exhausted max_steps", t, q, p)
        out_of_box = bounds is not None and not (
            bounds[0] <= q <= bounds[1] and bounds[2] <= p <= bounds[3])
        if status in (STATUS_ESCAPED, STATUS_BLOWUP) or out_of_box:
            partial = StroboscopicOrbit(times[:k], qs[:k].copy(), ps[:k].copy(),
                                        period, escaped_at=k)
            raise EscapeError("stroboscopic orbit escaped", t, q, p, partial=partial)
        qs[k], ps[k] = q, p
    return StroboscopicOrbit(times, qs, ps, period)


def arclength_descriptor(params: MorseParams, s0: PhaseState, t_center: float,
                         tau: float, cfg: IntegratorConfig | None = None,
                         q_ceiling: float | None = None) -> tuple:
    """Arclength of the trajectory through (s0, t_center) over
    [t_center - tau, t_center + tau].

    Returns (value, escaped): trajectories that leave the admissible
    region before +/-tau contribute their arclength up to truncation and
    come back flagged instead of raising.
    """
    if not (tau > 0):
        raise DomainError(f"tau must be positive, got {tau}")
    cfg = cfg or IntegratorConfig()
    ceiling = default_ceiling(params) if q_ceiling is None else q_ceiling
    rk4, step, rtol, atol, max_steps = _kernel_args(cfg)
    L, sf, sb, _ns, _ne = kernels.arclength(
        params.D, params.alpha, params.m, params.epsilon, params.omega,
        s0.q, s0.p, t_center, tau, rk4, step, rtol, atol, max_steps, ceiling)
    return L, (sf != STATUS_OK or sb != STATUS_OK)
