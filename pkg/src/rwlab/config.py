"""Flat dotted-key run configuration and builders for the library objects.

Config files are TOML; nested tables and dotted keys are flattened, so
``[solver]\\nt_end = 5`` and ``solver.t_end = 5`` are equivalent.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULTS: dict[str, Any] = {
    "speed.family": "tanh",
    "speed.c0": 2.0,
    "speed.delta": 1.0,
    "speed.c_minus": 1.0,
    "speed.c_plus": 3.0,
    "speed.value": 2.0,
    "speed.sample_window": [-50.0, 50.0],
    "speed.sample_count": 20001,
    "data.kind": "gaussian",
    "data.amplitude": 1.0,
    "data.center": 0.0,
    "data.width": 2.0,
    "data.velocity_amplitude": 0.5,
    "data.slack": 0.0,
    "data.file": "",
    "grid.x_min": -40.0,
    "grid.x_max": 40.0,
    "grid.n": 8000,
    "solver.cfl": 0.45,
    "solver.t_end": 10.0,
    "solver.lambda": 0.0,
    "solver.order": "upwind1",
    "solver.limiter": "vanleer",
    "solver.output_every": 10,
    "solver.blow_threshold": 1e3,
    "certify.tol": None,
    "trace.anchor_t": None,
    "trace.anchor_x": None,
    "trace.direction": "minus",
    "trace.n_anchors_random": 0,
    "trace.kappa": 5.0,
    "sweep.lambdas": [0.0, 1.0],
    "diagnostics.blowup_threshold": 50.0,
    "convergence.n_list": [1000, 2000, 4000],
    "convergence.t": 3.0,
    "convergence.orders": ["upwind1", "muscl2"],
    "output.frames": "all",
    "seed": 0,
    "output_dir": "rwl_output",
    "workers": 1,
}

CHOICES = {
    "speed.family": {"tanh", "logistic", "arctan", "constant"},
    "data.kind": {"gaussian", "nonpositive", "simple_wave", "file"},
    "solver.order": {"upwind1", "muscl2"},
    "solver.limiter": {"minmod", "vanleer", "mc"},
    "trace.direction": {"minus", "plus"},
    "output.frames": {"all", "last", "none"},
}

# keys whose default is None but which hold numbers when set
_OPTIONAL_FLOATS = {"certify.tol", "trace.anchor_t", "trace.anchor_x"}


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _coerce(key, value):
    default = DEFAULTS[key]
    try:
        if key in _OPTIONAL_FLOATS:
            return None if value is None or value == "" else float(value)
        if isinstance(default, bool):
            return value if isinstance(value, bool) else str(value).lower() in {"1", "true", "yes"}
        if isinstance(default, int):
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, list):
            if isinstance(value, str):
                value = [v for v in value.strip("[] ").split(",") if v.strip()]
            kind = type(default[0]) if default else float
            return [kind(float(v)) if kind in (int, float) else kind(v) for v in value]
        value = str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r}: cannot interpret {value!r} "
                          f"as {type(default).__name__}", key) from None
    if key in CHOICES and value not in CHOICES[key]:
        raise ConfigError(f"config key {key!r}: {value!r} not in {sorted(CHOICES[key])}", key)
    return value


@dataclass
class RunConfig:
    values: dict = field(default_factory=lambda: dict(DEFAULTS))

    def __getitem__(self, key):
        return self.values[key]

    def set(self, key, value):
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}", key)
        self.values[key] = _coerce(key, value)

    def update(self, mapping):
        for k, v in _flatten(mapping).items():
            self.set(k, v)
        return self

    def copy(self, **overrides):
        cfg = RunConfig(dict(self.values))
        for k, v in overrides.items():
            cfg.set(k, v)
        return cfg

    @classmethod
    def load(cls, path=None, overrides=None):
        cfg = cls()
        if path:
            try:
                with open(path, "rb") as fh:
                    data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as err:
                raise ConfigError(f"{path}: {err}") from None
            cfg.update(data)
        if overrides:
            for k, v in overrides.items():
                cfg.set(k, v)
        return cfg

    def resolved(self):
        return dict(sorted(self.values.items()))

    def output_dir(self):
        return os.environ.get("RWL_OUTPUT_DIR") or self.values["output_dir"]


def build_speed(cfg: RunConfig):
    from . import wavespeed as W

    fam = cfg["speed.family"]
    kw = {"sample_window": tuple(cfg["speed.sample_window"]), "sample_count": cfg["speed.sample_count"]}
    if fam == "tanh":
        return W.tanh_speed(cfg["speed.c0"], cfg["speed.delta"], **kw)
    if fam == "arctan":
        return W.arctan_speed(cfg["speed.c0"], cfg["speed.delta"], **kw)
    if fam == "logistic":
        return W.logistic_speed(cfg["speed.c_minus"], cfg["speed.c_plus"], **kw)
    return W.constant_speed(cfg["speed.value"])


def build_grid(cfg: RunConfig):
    from .solver import Grid

    return Grid(cfg["grid.x_min"], cfg["grid.x_max"], cfg["grid.n"])


def build_data(cfg: RunConfig, grid, ws):
    from . import initial_data as D

    kind = cfg["data.kind"]
    if kind == "file":
        if not cfg["data.file"]:
            raise ConfigError("data.kind = 'file' requires data.file", "data.file")
        return D.load_csv(cfg["data.file"], grid.x)
    base = D.gaussian_bump(cfg["data.amplitude"], cfg["data.center"], cfg["data.width"],
                           cfg["data.velocity_amplitude"], grid.x)
    if kind == "nonpositive":
        return D.nonpositive_riemann_data(base, cfg["data.slack"], ws)
    if kind == "simple_wave":
        return D.simple_wave_data(base, ws)
    return base


def build_solver_config(cfg: RunConfig, **overrides):
    from .solver import SolverConfig

    kw = dict(t_end=cfg["solver.t_end"], cfl=cfg["solver.cfl"], lam=cfg["solver.lambda"],
              output_every=cfg["solver.output_every"], order=cfg["solver.order"],
              blow_threshold=cfg["solver.blow_threshold"], limiter=cfg["solver.limiter"])
    kw.update(overrides)
    try:
        return SolverConfig(**kw)
    except ValueError as err:
        raise ConfigError(f"solver: {err}") from None


def as_jsonable(obj):
    """Convert numpy scalars/arrays inside ``obj`` to plain Python."""
    if isinstance(obj, dict):
        return {k: as_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [as_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return as_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
