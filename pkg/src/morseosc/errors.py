"""Exception types shared across the package."""


class MorseError(Exception):
    """Base class for all package errors."""


class DomainError(MorseError, ValueError):
    """An argument violates an operation's precondition (wrong energy
    regime, value outside the admissible range, ...)."""


class ConfigError(MorseError, ValueError):
    """A run configuration failed validation. ``key`` names the offending
    entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


class NumericFailure(MorseError, RuntimeError):
    """Base class for runtime numerical failures."""


class NonconvergenceError(NumericFailure):
    """A quadrature did not reach the requested tolerance. Carries the
    estimate that was achieved."""

    def __init__(self, message: str, value: float, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.value = value
        self.achieved = achieved


class EscapeError(NumericFailure):
    """A trajectory left the admissible region (dissociation past the
    position ceiling, a configured domain box, or loss of finiteness).
    Carries the last valid sample and, where available, the partial
    result computed so far."""

    def __init__(self, message: str, t: float, q: float, p: float, partial=None):
        super().__init__(f"{message} (last valid state t={t:.6g}, q={q:.6g}, p={p:.6g})")
        self.t = t
        self.q = q
        self.p = p
        self.partial = partial


class StepLimitError(NumericFailure):
    """The integrator exhausted its step budget before reaching the target
    time."""

    def __init__(self, message: str, t: float, q: float, p: float):
        super().__init__(f"{message} (reached t={t:.6g})")
        self.t = t
        self.q = q
        self.p = p
