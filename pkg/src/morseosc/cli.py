"""Command-line interface.

Usage: ``morseosc <subcommand> <config.json> [--output PATH]``

Subcommands: phase-portrait, trajectory, period, action-angle, homoclinic,
melnikov, poincare, ld-map.  The config is a single JSON document holding
a ``params`` block, exactly one command block (named like the subcommand,
with '-' as '_' and ld-map shortened to "ld"), an ``output`` path and a
``format`` ("csv", or "pgm" for ld-map).  Every run writes a JSON sidecar
(<output>.json) containing the fully resolved configuration - defaults
included - plus provenance; fed back as a config it reproduces the output
byte for byte.

Exit codes: 0 success, 1 I/O failure, 2 invalid configuration (the
message names the offending key), 3 numeric failure (partial outputs are
removed).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import analytic, descriptors, integrators, melnikov, model
from ._version import __version__
from .errors import ConfigError, DomainError, NumericFailure
from .kernels import BACKEND
from .model import MorseParams, PhaseState, Regime

COMMANDS = {
    "phase-portrait": "phase_portrait",
    "trajectory": "trajectory",
    "period": "period",
    "action-angle": "action_angle",
    "homoclinic": "homoclinic",
    "melnikov": "melnikov",
    "poincare": "poincare",
    "ld-map": "ld",
}

_TOP_KEYS = {"params", "output", "format", "provenance"} | set(COMMANDS.values())


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.17g}"


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------

def _require_dict(doc, key):
    block = doc.get(key)
    if not isinstance(block, dict):
        raise ConfigError(key, "required object is missing or not a JSON object")
    return block


def _no_unknown(block: dict, path: str, known: set):
    for k in block:
        if k not in known:
            raise ConfigError(f"{path}.{k}", "unknown key")


def _num(block, path, key, default=None, required=False):
    # an explicit JSON null means "use the default" (sidecars round-trip)
    if key not in block or block[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}", "required number is missing")
        return default
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {v!r}")
    return float(v)


def _int(block, path, key, default=None, required=False, minimum=None):
    if key not in block or block[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}", "required integer is missing")
        return default
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{path}.{key}", f"must be >= {minimum}, got {v}")
    return v


def _number_list(block, path, key):
    v = block.get(key)
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return [float(v)]
    if isinstance(v, list) and v and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return [float(x) for x in v]
    raise ConfigError(f"{path}.{key}", "expected a number or a non-empty list of numbers")


def _state_list(block, path, key):
    v = block.get(key)
    if not (isinstance(v, list) and v):
        raise ConfigError(f"{path}.{key}", "expected a non-empty list of [q, p] pairs")
    states = []
    for i, item in enumerate(v):
        if not (isinstance(item, list) and len(item) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)):
            raise ConfigError(f"{path}.{key}[{i}]", "expected a [q, p] number pair")
        if not all(math.isfinite(float(x)) for x in item):
            raise ConfigError(f"{path}.{key}[{i}]", "state must be finite")
        states.append([float(item[0]), float(item[1])])
    return states


def _validate_params(doc) -> tuple:
    block = _require_dict(doc, "params")
    _no_unknown(block, "params", {"D", "alpha", "m", "epsilon", "omega"})
    D = _num(block, "params", "D", required=True)
    alpha = _num(block, "params", "alpha", required=True)
    m = _num(block, "params", "m", required=True)
    eps = _num(block, "params", "epsilon", default=0.0)
    omega = _num(block, "params", "omega", default=0.0)
    if not D > 0:
        raise ConfigError("params.D", f"must be > 0, got {D}")
    if not alpha > 0:
        raise ConfigError("params.alpha", f"must be > 0, got {alpha}")
    if not m > 0:
        raise ConfigError("params.m", f"must be > 0, got {m}")
    if eps < 0:
        raise ConfigError("params.epsilon", f"must be >= 0, got {eps}")
    if eps > 0 and not omega > 0:
        raise ConfigError("params.omega", f"must be > 0 when epsilon > 0, got {omega}")
    params = MorseParams(D, alpha, m, eps, omega)
    return params, {"D": D, "alpha": alpha, "m": m, "epsilon": eps, "omega": omega}


def _validate_integrator(block, path) -> tuple:
    sub = block.get("integrator", {})
    if not isinstance(sub, dict):
        raise ConfigError(f"{path}.integrator", "expected a JSON object")
    _no_unknown(sub, f"{path}.integrator", {"method", "rtol", "atol", "step", "max_steps"})
    method = sub.get("method", "rk45")
    if method not in ("rk45", "rk4"):
        raise ConfigError(f"{path}.integrator.method", f"must be 'rk45' or 'rk4', got {method!r}")
    rtol = _num(sub, f"{path}.integrator", "rtol", default=1e-9)
    atol = _num(sub, f"{path}.integrator", "atol", default=1e-12)
    step = _num(sub, f"{path}.integrator", "step", default=None)
    max_steps = _int(sub, f"{path}.integrator", "max_steps", default=1_000_000, minimum=1)
    if not (rtol > 0 and atol > 0):
        raise ConfigError(f"{path}.integrator.rtol", "rtol and atol must be positive")
    if method == "rk4" and not (step and step > 0):
        raise ConfigError(f"{path}.integrator.step", "method 'rk4' requires a positive step")
    cfg = integrators.IntegratorConfig(method, rtol, atol, step, max_steps)
    return cfg, asdict(cfg)


def _require_energy(params, h, path, *, lo=0.0, hi=None, strict_hi=True):
    if h < lo:
        raise ConfigError(path, f"energy must be >= {lo}, got {h}")
    if hi is not None:
        if strict_hi and not h < hi:
            raise ConfigError(path, f"energy must be < {hi}, got {h}")
        if not strict_hi and not h <= hi:
            raise ConfigError(path, f"energy must be <= {hi}, got {h}")


# ---------------------------------------------------------------------------
# per-command validation (returns the fully resolved block)
# ---------------------------------------------------------------------------

def _validate_period(params, block):
    _no_unknown(block, "period", {"h"})
    hs = _number_list(block, "period", "h")
    for h in hs:
        _require_energy(params, h, "period.h", hi=params.D)
    return {"h": hs}, {}


def _validate_action_angle(params, block):
    _no_unknown(block, "action_angle", {"h", "states"})
    if ("h" in block) == ("states" in block):
        raise ConfigError("action_angle.h", "provide exactly one of 'h' or 'states'")
    if "h" in block:
        hs = _number_list(block, "action_angle", "h")
        for h in hs:
            _require_energy(params, h, "action_angle.h", hi=params.D)
        return {"h": hs}, {}
    states = _state_list(block, "action_angle", "states")
    for i, (q, p) in enumerate(states):
        h = model.hamiltonian(params, PhaseState(q, p))
        if model.classify_energy(params, h).tag is not Regime.BOUNDED:
            raise ConfigError(f"action_angle.states[{i}]",
                              f"state has energy {h}, outside the bounded regime")
    return {"states": states}, {}


def _validate_homoclinic(params, block):
    _no_unknown(block, "homoclinic", {"t_min", "t_max", "samples"})
    t_min = _num(block, "homoclinic", "t_min", default=-5.0)
    t_max = _num(block, "homoclinic", "t_max", default=5.0)
    samples = _int(block, "homoclinic", "samples", default=256, minimum=2)
    if not t_min < t_max:
        raise ConfigError("homoclinic.t_min", "t_min must be < t_max")
    return {"t_min": t_min, "t_max": t_max, "samples": samples}, {}


def _validate_trajectory(params, block):
    _no_unknown(block, "trajectory", {"h", "s0", "t0", "t1", "samples", "integrator"})
    if ("h" in block) == ("s0" in block):
        raise ConfigError("trajectory.h", "provide exactly one of 'h' or 's0'")
    t0 = _num(block, "trajectory", "t0", default=0.0)
    t1 = _num(block, "trajectory", "t1", required=True)
    samples = _int(block, "trajectory", "samples", default=256, minimum=2)
    if t0 == t1:
        raise ConfigError("trajectory.t1", "t1 must differ from t0")
    cfg, cfg_doc = _validate_integrator(block, "trajectory")
    resolved = {"t0": t0, "t1": t1, "samples": samples, "integrator": cfg_doc}
    if "h" in block:
        h = _num(block, "trajectory", "h", required=True)
        _require_energy(params, h, "trajectory.h")
        resolved["h"] = h
    else:
        s0 = _state_list({"s0": [block["s0"]]}, "trajectory", "s0")[0]
        resolved["s0"] = s0
    return resolved, {"cfg": cfg}


def _validate_melnikov(params, block):
    if not params.forced:
        raise ConfigError("params.epsilon", "melnikov requires epsilon > 0")
    _no_unknown(block, "melnikov", {"t0_min", "t0_max", "n_t0", "phi0", "T_cut"})
    t0_min = _num(block, "melnikov", "t0_min", required=True)
    t0_max = _num(block, "melnikov", "t0_max", required=True)
    n_t0 = _int(block, "melnikov", "n_t0", required=True, minimum=1)
    phi0 = _num(block, "melnikov", "phi0", default=0.0)
    T_cut = _num(block, "melnikov", "T_cut", default=None)
    if not t0_min <= t0_max:
        raise ConfigError("melnikov.t0_min", "t0_min must be <= t0_max")
    if T_cut is not None and not T_cut > 0:
        raise ConfigError("melnikov.T_cut", f"must be positive, got {T_cut}")
    return {"t0_min": t0_min, "t0_max": t0_max, "n_t0": n_t0, "phi0": phi0,
            "T_cut": T_cut}, {}


def _validate_poincare(params, block):
    if not params.forced:
        raise ConfigError("params.epsilon", "poincare requires epsilon > 0")
    _no_unknown(block, "poincare", {"seeds", "n_iterates", "t_start", "integrator"})
    seeds = _state_list(block, "poincare", "seeds")
    n_iterates = _int(block, "poincare", "n_iterates", required=True, minimum=0)
    t_start = _num(block, "poincare", "t_start", default=0.0)
    cfg, cfg_doc = _validate_integrator(block, "poincare")
    return {"seeds": seeds, "n_iterates": n_iterates, "t_start": t_start,
            "integrator": cfg_doc}, {"cfg": cfg}


def _validate_ld(params, block):
    _no_unknown(block, "ld", {"grid", "integrator", "rescale", "workers", "q_ceiling"})
    grid_doc = block.get("grid")
    if not isinstance(grid_doc, dict):
        raise ConfigError("ld.grid", "required object is missing or not a JSON object")
    _no_unknown(grid_doc, "ld.grid",
                {"q_min", "q_max", "p_min", "p_max", "nq", "np", "t_center", "tau"})
    g = {
        "q_min": _num(grid_doc, "ld.grid", "q_min", required=True),
        "q_max": _num(grid_doc, "ld.grid", "q_max", required=True),
        "p_min": _num(grid_doc, "ld.grid", "p_min", required=True),
        "p_max": _num(grid_doc, "ld.grid", "p_max", required=True),
        "nq": _int(grid_doc, "ld.grid", "nq", required=True, minimum=2),
        "np": _int(grid_doc, "ld.grid", "np", required=True, minimum=2),
        "t_center": _num(grid_doc, "ld.grid", "t_center", default=0.0),
        "tau": _num(grid_doc, "ld.grid", "tau", default=40.0),
    }
    if not g["q_min"] < g["q_max"]:
        raise ConfigError("ld.grid.q_min", "q_min must be < q_max")
    if not g["p_min"] < g["p_max"]:
        raise ConfigError("ld.grid.p_min", "p_min must be < p_max")
    if not g["tau"] > 0:
        raise ConfigError("ld.grid.tau", f"must be positive, got {g['tau']}")
    grid = descriptors.GridSpec(**g)
    rescale = block.get("rescale", True)
    if not isinstance(rescale, bool):
        raise ConfigError("ld.rescale", f"expected true/false, got {rescale!r}")
    workers = _int(block, "ld", "workers", default=None, minimum=1)
    q_ceiling = _num(block, "ld", "q_ceiling", default=None)
    if q_ceiling is None:
        q_ceiling = integrators.default_ceiling(params)
    cfg, cfg_doc = _validate_integrator(block, "ld")
    resolved = {"grid": g, "integrator": cfg_doc, "rescale": rescale,
                "workers": descriptors.resolve_workers(workers), "q_ceiling": q_ceiling}
    return resolved, {"cfg": cfg, "grid": grid}


def _validate_phase_portrait(params, block):
    _no_unknown(block, "phase_portrait", {"h", "samples", "t_span"})
    hs = _number_list(block, "phase_portrait", "h")
    for h in hs:
        _require_energy(params, h, "phase_portrait.h")
    samples = _int(block, "phase_portrait", "samples", default=256, minimum=2)
    t_span = _num(block, "phase_portrait", "t_span", default=10.0)
    if not t_span > 0:
        raise ConfigError("phase_portrait.t_span", f"must be positive, got {t_span}")
    return {"h": hs, "samples": samples, "t_span": t_span}, {}


_VALIDATORS = {
    "period": _validate_period,
    "action_angle": _validate_action_angle,
    "homoclinic": _validate_homoclinic,
    "trajectory": _validate_trajectory,
    "melnikov": _validate_melnikov,
    "poincare": _validate_poincare,
    "ld": _validate_ld,
    "phase_portrait": _validate_phase_portrait,
}


def validate_config(command: str, doc: dict, output_override: str | None = None):
    """Check the whole document and return (params, resolved_doc, extras).

    ``resolved_doc`` is the configuration with every default filled in; it
    is written to the sidecar verbatim.
    """
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    block_name = COMMANDS[command]
    for key in doc:
        if key not in _TOP_KEYS:
            raise ConfigError(key, "unknown top-level key")
    present = [k for k in COMMANDS.values() if k in doc]
    if present != [block_name]:
        raise ConfigError(block_name,
                          f"config must contain exactly the '{block_name}' command block, found {present}")
    params, params_doc = _validate_params(doc)
    block = _require_dict(doc, block_name)
    resolved_block, extras = _VALIDATORS[block_name](params, block)

    output = output_override if output_override is not None else doc.get("output")
    if not isinstance(output, str) or not output:
        raise ConfigError("output", "required output path is missing")
    fmt = doc.get("format", "pgm" if block_name == "ld" else "csv")
    if fmt not in ("csv", "pgm"):
        raise ConfigError("format", f"must be 'csv' or 'pgm', got {fmt!r}")
    if fmt == "pgm" and block_name != "ld":
        raise ConfigError("format", "'pgm' is only available for ld-map")

    resolved = {"params": params_doc, block_name: resolved_block,
                "output": output, "format": fmt}
    return params, resolved, extras


# ---------------------------------------------------------------------------
# output writers
# ---------------------------------------------------------------------------

class _Outputs:
    """Tracks written files so a failing run can clean up after itself."""

    def __init__(self):
        self.files: list = []

    def write_csv(self, path: str, header, rows):
        with open(path, "w", newline="") as fh:
            self.files.append(path)
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])

    def write_pgm16(self, path: str, pixels: np.ndarray):
        with open(path, "wb") as fh:
            self.files.append(path)
            fh.write(f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n65535\n".encode("ascii"))
            fh.write(pixels.astype(">u2").tobytes())

    def write_pgm8(self, path: str, pixels: np.ndarray):
        with open(path, "wb") as fh:
            self.files.append(path)
            fh.write(f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii"))
            fh.write(pixels.astype(np.uint8).tobytes())

    def write_sidecar(self, path: str, resolved: dict, provenance: dict):
        doc = dict(resolved)
        doc["provenance"] = provenance
        with open(path, "w") as fh:
            self.files.append(path)
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def cleanup(self):
        for path in self.files:
            try:
                os.remove(path)
            except OSError:
                pass


# ---------------------------------------------------------------------------
# command implementations (return provenance extras)
# ---------------------------------------------------------------------------

def _closed_form_states(params, h, times):
    regime = model.classify_energy(params, h).tag
    if regime is Regime.ELLIPTIC:
        return [PhaseState(0.0, 0.0) for _ in times]
    if regime is Regime.BOUNDED:
        return [analytic.bounded_trajectory(params, h, t) for t in times]
    if regime is Regime.SEPARATRIX:
        return [analytic.homoclinic_orbit(params, t) for t in times]
    return [analytic.unbounded_trajectory(params, h, t) for t in times]


def _cmd_period(params, block, out, output):
    rows = [(h, analytic.period(params, h)) for h in block["h"]]
    out.write_csv(output, ["h", "T"], rows)
    return {}


def _cmd_action_angle(params, block, out, output):
    if "h" in block:
        rows = [(h, analytic.action(params, h), analytic.period(params, h))
                for h in block["h"]]
        out.write_csv(output, ["h", "I", "T"], rows)
    else:
        rows = []
        for q, p in block["states"]:
            s = PhaseState(q, p)
            aa = analytic.angle_of_state(params, s)
            rows.append((q, p, model.hamiltonian(params, s), aa.I, aa.theta))
        out.write_csv(output, ["q", "p", "h", "I", "theta"], rows)
    return {}


def _cmd_homoclinic(params, block, out, output):
    times = np.linspace(block["t_min"], block["t_max"], block["samples"])
    rows = []
    for t in times:
        s = analytic.homoclinic_orbit(params, t)
        rows.append((t, s.q, s.p))
    out.write_csv(output, ["t", "q", "p"], rows)
    return {}


def _cmd_trajectory(params, block, out, output, cfg):
    times = np.linspace(block["t0"], block["t1"], block["samples"])
    if "h" in block:
        states = _closed_form_states(params, block["h"], times)
        rows = [(t, s.q, s.p, model.hamiltonian(params, s))
                for t, s in zip(times, states)]
    else:
        q0, p0 = block["s0"]
        sample = integrators.integrate_to(params, PhaseState(q0, p0),
                                          block["t0"], block["t1"], cfg, t_eval=times)
        order = np.argsort(sample.t) if block["t1"] >= block["t0"] else np.argsort(-sample.t)
        rows = [(sample.t[i], sample.q[i], sample.p[i], sample.h[i]) for i in order]
    out.write_csv(output, ["t", "q", "p", "h"], rows)
    return {}


def _cmd_melnikov(params, block, out, output):
    grid = np.linspace(block["t0_min"], block["t0_max"], block["n_t0"])
    scan = melnikov.melnikov_scan(params, grid, block["phi0"], block["T_cut"])
    rows = [(scan.t0[i], scan.phi0, scan.analytic[i], scan.numeric[i], scan.tail_bound[i])
            for i in range(len(scan.t0))]
    out.write_csv(output, ["t0", "phi0", "M_analytic", "M_numeric", "tail_bound"], rows)
    return {"ratio": scan.ratio, "residual_spread": scan.residual_spread}


def _cmd_poincare(params, block, out, output, cfg):
    orbits = descriptors.poincare_scatter(
        params, [PhaseState(q, p) for q, p in block["seeds"]],
        block["n_iterates"], cfg, t_start=block["t_start"])
    rows = []
    escaped = {}
    for i, orbit in enumerate(orbits):
        if orbit.escaped_at is not None:
            escaped[str(i)] = orbit.escaped_at
        for k in range(len(orbit)):
            rows.append((i, k, orbit.times[k], orbit.q[k], orbit.p[k]))
    out.write_csv(output, ["seed", "iterate", "t", "q", "p"], rows)
    return {"escaped": escaped}


def _cmd_ld(params, block, out, output, cfg, grid, fmt):
    field = descriptors.ld_field(params, grid, cfg, workers=block["workers"],
                                 q_ceiling=block["q_ceiling"])
    extras = {"backend": field.metadata["backend"],
              "flagged_cells": int(field.escape_flags.sum())}
    if block["rescale"]:
        field = descriptors.arctan_rescale(field)
        extras["rescale_scale"] = field.metadata["rescale_scale"]
    qs, ps = grid.q_centers(), grid.p_centers()
    if fmt == "csv":
        rows = []
        for i in range(grid.nq):
            for j in range(grid.np):
                rows.append((qs[i], ps[j], field.values[i, j], int(field.escape_flags[i, j])))
        out.write_csv(output, ["q", "p", "value", "escaped"], rows)
        return extras

    valid = field.values[~field.escape_flags]
    vmin = float(valid.min())
    vmax = float(valid.max())
    if vmax > vmin:
        scaled = (field.values - vmin) * (65535.0 / (vmax - vmin))
        pixels = np.clip(np.rint(scaled), 0, 65535).astype(np.uint16)
    else:
        pixels = np.zeros_like(field.values, dtype=np.uint16)
    pixels[field.escape_flags] = 0
    # raster rows run p_max..p_min top to bottom, columns q_min..q_max
    raster = pixels.T[::-1]
    mask = (field.escape_flags.T[::-1] * np.uint8(255))
    out.write_pgm16(output, raster)
    out.write_pgm8(output + ".mask.pgm", mask)
    extras.update({"pgm_min": vmin, "pgm_max": vmax,
                   "raster": "rows top-to-bottom = p_max..p_min, columns left-to-right = q_min..q_max"})
    return extras


def _cmd_phase_portrait(params, block, out, output):
    rows = []
    for h in block["h"]:
        regime = model.classify_energy(params, h).tag
        if regime is Regime.ELLIPTIC:
            rows.append((h, 0.0, 0.0, 0.0))
            continue
        if regime is Regime.BOUNDED:
            times = np.linspace(0.0, analytic.period(params, h), block["samples"])
        else:
            times = np.linspace(-block["t_span"], block["t_span"], block["samples"])
        for t, s in zip(times, _closed_form_states(params, h, times)):
            rows.append((h, t, s.q, s.p))
    out.write_csv(output, ["h", "t", "q", "p"], rows)
    return {}


def run(argv) -> int:
    parser = argparse.ArgumentParser(
        prog="morseosc",
        description="Morse oscillator toolbox: closed-form solutions, Melnikov scans, "
                    "Poincare sections and Lagrangian-descriptor maps.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("config", help="JSON configuration file")
    parser.add_argument("--output", help="override the config's output path")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2

    try:
        params, resolved, extras = validate_config(args.command, doc, args.output)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    block_name = COMMANDS[args.command]
    block = resolved[block_name]
    output = resolved["output"]
    out = _Outputs()
    try:
        if block_name == "period":
            prov = _cmd_period(params, block, out, output)
        elif block_name == "action_angle":
            prov = _cmd_action_angle(params, block, out, output)
        elif block_name == "homoclinic":
            prov = _cmd_homoclinic(params, block, out, output)
        elif block_name == "trajectory":
            prov = _cmd_trajectory(params, block, out, output, extras["cfg"])
        elif block_name == "melnikov":
            prov = _cmd_melnikov(params, block, out, output)
        elif block_name == "poincare":
            prov = _cmd_poincare(params, block, out, output, extras["cfg"])
        elif block_name == "ld":
            prov = _cmd_ld(params, block, out, output, extras["cfg"], extras["grid"],
                           resolved["format"])
        else:
            prov = _cmd_phase_portrait(params, block, out, output)
    except NumericFailure as exc:
        out.cleanup()
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        out.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        out.cleanup()
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1

    provenance = {"command": args.command, "version": __version__,
                  "backend": BACKEND, "files": list(out.files), **prov}
    try:
        out.write_sidecar(output + ".json", resolved, provenance)
    except OSError as exc:
        out.cleanup()
        print(f"error: cannot write sidecar: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
