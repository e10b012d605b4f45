"""Morse oscillator model: parameters, phase-space state, potential,
Hamiltonian, vector fields, equilibria and energy-regime classification.

The potential is V(q) = D (1 - exp(-alpha q))^2: a well of depth D with its
minimum at the origin, a plateau at D for q -> +inf and a hard wall for
q -> -inf.  Motion with energy 0 < h < D is periodic; h = D is the
separatrix level; h > D dissociates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

# Relative width of the tolerance bands around h = 0 and h = D inside which
# a classification snaps to Elliptic / Separatrix.  The closed-form branch
# expressions lose all precision inside these bands.
REGIME_RTOL = 1e-12


@dataclass(frozen=True)
class MorseParams:
    """Physical parameters: well depth D, inverse width alpha, mass m, and
    the optional forcing amplitude epsilon / angular frequency omega."""

    D: float
    alpha: float
    m: float
    epsilon: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if not (self.D > 0):
            raise DomainError(f"well depth D must be > 0, got {self.D}")
        if not (self.alpha > 0):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (self.m > 0):
            raise DomainError(f"mass m must be > 0, got {self.m}")
        if self.epsilon < 0:
            raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.epsilon > 0 and not (self.omega > 0):
            raise DomainError("omega must be > 0 when epsilon > 0")

    @property
    def forced(self) -> bool:
        return self.epsilon > 0

    @property
    def forcing_period(self) -> float:
        if not self.forced:
            raise DomainError("forcing period undefined for epsilon = 0")
        return 2.0 * math.pi / self.omega


@dataclass(frozen=True)
class PhaseState:
    """A point (q, p) of the two-dimensional phase space."""

    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise DomainError(f"phase state must be finite, got ({self.q}, {self.p})")


class Regime(enum.Enum):
    ELLIPTIC = "elliptic"      # h = 0, the stable equilibrium
    BOUNDED = "bounded"        # 0 < h < D, periodic motion
    SEPARATRIX = "separatrix"  # h = D, the homoclinic level set
    UNBOUNDED = "unbounded"    # h > D, dissociating motion


@dataclass(frozen=True)
class EnergyRegime:
    tag: Regime
    h: float


class PointAtInfinity:
    """Symbolic stand-in for the degenerate fixed point at q = +inf.
    Kept out of PhaseState on purpose so that PhaseState stays finite."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "PointAtInfinity()"


AT_INFINITY = PointAtInfinity()


@dataclass(frozen=True)
class Equilibrium:
    location: Union[PhaseState, PointAtInfinity]
    kind: str  # "elliptic" or "parabolic"
    eigenvalues: tuple


@dataclass(frozen=True)
class TrajectorySample:
    """Time series of (t, q, p, h) rows, monotone in t."""

    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    h: np.ndarray

    def __len__(self):
        return len(self.t)


def potential(params: MorseParams, q: float) -> float:
    """V(q) = D (1 - exp(-alpha q))^2."""
    x = 1.0 - math.exp(-params.alpha * q)
    return params.D * x * x


def force(params: MorseParams, q: float) -> float:
    """-dV/dq = -2 D alpha (exp(-alpha q) - exp(-2 alpha q))."""
    u = math.exp(-params.alpha * q)
    return -2.0 * params.D * params.alpha * u * (1.0 - u)


def hamiltonian(params: MorseParams, s: PhaseState) -> float:
    """H(q, p) = p^2 / 2m + V(q); conserved by the unforced flow."""
    return s.p * s.p / (2.0 * params.m) + potential(params, s.q)


def vector_field(params: MorseParams, s: PhaseState, t: float = 0.0) -> tuple:
    """(dq/dt, dp/dt) of the (possibly forced) system.

    With epsilon = 0 the field is autonomous and t is ignored; with
    epsilon > 0 the momentum equation gains the drive epsilon cos(omega t).
    """
    dq = s.p / params.m
    dp = force(params, s.q)
    if params.epsilon > 0.0:
        dp += params.epsilon * math.cos(params.omega * t)
    return (dq, dp)


def jacobian(params: MorseParams, q: float) -> np.ndarray:
    """Jacobian of the unforced vector field at (q, p); independent of p."""
    u = math.exp(-params.alpha * q)
    dfdq = -2.0 * params.D * params.alpha**2 * (2.0 * u * u - u)
    return np.array([[0.0, 1.0 / params.m], [dfdq, 0.0]])


def equilibria(params: MorseParams) -> list:
    """The two fixed points of the unforced system.

    (0, 0) is elliptic with eigenvalues +/- i alpha sqrt(2D/m); the point
    at infinity is parabolic with a double-zero eigenvalue.  Fixed points
    of the forced system are out of scope, so epsilon > 0 is rejected.
    """
    if params.epsilon > 0:
        raise DomainError("equilibria are defined for the unforced system only")
    w0 = params.alpha * math.sqrt(2.0 * params.D / params.m)
    return [
        Equilibrium(PhaseState(0.0, 0.0), "elliptic", (complex(0.0, w0), complex(0.0, -w0))),
        Equilibrium(AT_INFINITY, "parabolic", (complex(0.0, 0.0), complex(0.0, 0.0))),
    ]


def turning_points(params: MorseParams, h: float) -> tuple:
    """Positions where p = 0 on the level set H = h.

    q_- = -ln(1 + sqrt(h/D)) / alpha exists for every h > 0; the outer
    turning point q_+ = -ln(1 - sqrt(h/D)) / alpha exists for h < D and
    is +inf at and above the dissociation energy.
    """
    if not (h > 0):
        raise DomainError(f"turning points require h > 0, got h={h}")
    r = math.sqrt(h / params.D)
    q_minus = -math.log1p(r) / params.alpha
    if h >= params.D:
        q_plus = math.inf
    else:
        q_plus = -math.log(1.0 - r) / params.alpha
    return (q_minus, q_plus)


def classify_energy(params: MorseParams, h: float) -> EnergyRegime:
    """Assign the energy regime, with snap-to bands of relative width
    1e-12 around h = 0 and h = D."""
    tol = REGIME_RTOL * params.D
    if abs(h) <= tol:
        return EnergyRegime(Regime.ELLIPTIC, h)
    if h < 0:
        raise DomainError(f"energy {h} is below the potential minimum")
    if abs(h - params.D) <= tol:
        return EnergyRegime(Regime.SEPARATRIX, h)
    if h < params.D:
        return EnergyRegime(Regime.BOUNDED, h)
    return EnergyRegime(Regime.UNBOUNDED, h)
