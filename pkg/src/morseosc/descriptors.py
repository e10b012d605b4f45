"""Grid-parallel Lagrangian-descriptor fields and Poincare scatter data.

The per-cell work is embarrassingly parallel: the sweep hands whole grid
rows to the kernel (which releases the GIL in the compiled backend) and
assembles results by row index, so the output is bitwise identical for
any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from ._version import __version__
from .errors import DomainError, EscapeError
from .integrators import IntegratorConfig, default_ceiling, stroboscopic_map, _kernel_args
from .model import MorseParams, PhaseState

ENV_THREADS = "MORSE_THREADS"


@dataclass(frozen=True)
class GridSpec:
    """Rectangular (q, p) window sampled at nq x np cell centers, plus the
    descriptor time window (t_center, tau)."""

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    nq: int
    np: int
    t_center: float = 0.0
    tau: float = 40.0

    def __post_init__(self):
        if not (self.q_min < self.q_max and self.p_min < self.p_max):
            raise DomainError("grid window must have positive extent")
        if self.nq < 2 or self.np < 2:
            raise DomainError("grid needs nq >= 2 and np >= 2")
        if not (self.tau > 0):
            raise DomainError("tau must be positive")

    def q_centers(self) -> np.ndarray:
        dq = (self.q_max - self.q_min) / self.nq
        return self.q_min + (np.arange(self.nq) + 0.5) * dq

    def p_centers(self) -> np.ndarray:
        dp = (self.p_max - self.p_min) / self.np
        return self.p_min + (np.arange(self.np) + 0.5) * dp


@dataclass(frozen=True)
class ScalarField:
    """One scalar per grid cell (values[iq, ip]), with escape/failure
    flags and enough metadata to regenerate the field."""

    grid: GridSpec
    values: np.ndarray
    escape_flags: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = (self.grid.nq, self.grid.np)
        if self.values.shape != shape or self.escape_flags.shape != shape:
            raise DomainError(f"field arrays must have shape {shape}")


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker-count policy: explicit argument, else MORSE_THREADS, else
    the hardware default."""
    if workers is not None:
        return max(int(workers), 1)
    env = os.environ.get(ENV_THREADS, "")
    if env:
        return max(int(env), 1)
    return os.cpu_count() or 1


def ld_field(params: MorseParams, grid: GridSpec, cfg: IntegratorConfig | None = None,
             workers: Optional[int] = None, q_ceiling: Optional[float] = None) -> ScalarField:
    """Arclength-descriptor field over the grid: cell (i, j) holds the
    descriptor of the cell-center state (q_i, p_j) around t_center.

    Cells whose trajectory escapes or fails are flagged and keep their
    truncated (finite) arclength; the sweep never aborts on them.
    """
    cfg = cfg or IntegratorConfig()
    ceiling = default_ceiling(params) if q_ceiling is None else q_ceiling
    qs = grid.q_centers()
    ps = grid.p_centers()
    values = np.empty((grid.nq, grid.np))
    flags = np.zeros((grid.nq, grid.np), dtype=np.uint8)
    rk4, step, rtol, atol, max_steps = _kernel_args(cfg)

    def run_row(i: int) -> None:
        kernels.ld_row(params.D, params.alpha, params.m, params.epsilon, params.omega,
                       qs[i], ps, grid.t_center, grid.tau, rk4, step, rtol, atol,
                       max_steps, ceiling, values[i], flags[i])

    n_workers = resolve_workers(workers)
    if n_workers == 1:
        for i in range(grid.nq):
            run_row(i)
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(run_row, range(grid.nq)))

    metadata = {
        "params": asdict(params),
        "grid": asdict(grid),
        "integrator": asdict(cfg),
        "q_ceiling": ceiling,
        "backend": kernels.BACKEND,
        "version": __version__,
    }
    return ScalarField(grid, values, flags.astype(bool), metadata)


def arctan_rescale(f: ScalarField) -> ScalarField:
    """Compress the dynamic range through x -> arctan(x / s) with s the
    median of the unflagged values (scale 1 when that median vanishes).
    Strictly monotone, so ordering is preserved: ridges stay ridges."""
    unflagged = f.values[~f.escape_flags]
    if unflagged.size == 0:
        raise DomainError("cannot rescale a field whose cells are all flagged")
    s = float(np.median(unflagged))
    if not (s > 0):
        s = 1.0
    metadata = dict(f.metadata)
    metadata["rescale_scale"] = s
    return ScalarField(f.grid, np.arctan(f.values / s), f.escape_flags, metadata)


def poincare_scatter(params: MorseParams, seeds, n_iterates: int,
                     cfg: IntegratorConfig | None = None, t_start: float = 0.0,
                     q_ceiling: Optional[float] = None) -> list:
    """Stroboscopic orbits of all seeds; a seed that escapes contributes
    its truncated orbit (escaped_at set) and the rest continue."""
    if not params.forced:
        raise DomainError("poincare scatter requires epsilon > 0")
    orbits = []
    for seed in seeds:
        if not isinstance(seed, PhaseState):
            seed = PhaseState(*seed)
        try:
            orbits.append(stroboscopic_map(params, seed, t_start, n_iterates,
                                           cfg, q_ceiling=q_ceiling))
        except EscapeError as exc:
            orbits.append(exc.partial)
    return orbits
