"""Run configuration: defaults, YAML/JSON files, ``--set section.key=value`` overrides.

Precedence is command line > file > defaults.  Values given as strings may
use ``pi`` (``pi/2``, ``0.55*pi``, ``3pi/4``).
"""
from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .model import Geometry, ModelParams

DEFAULTS: dict = {
    "model": {"xi": 1.0, "omega_c": 0.0, "g": 0.1, "Omega": 0.0, "N_c": 2004, "eta": None},
    "geometry": {"x1": 0.0, "x2": 2.0, "n1": 2.0, "n2": 2.0},
    "concurrence_map": {"lambda_min": 1e-2, "lambda_max": 1e2, "count": 401, "values": None},
    "fidelity_map": {
        "lambda_min": 0.0, "lambda_max": 2.0, "lambda_count": 101,
        "theta_count": 180, "varphi": 0.0, "levels": [0.5, 0.9, 0.99],
    },
    "rates_map": {
        "lambda_min": 0.02, "lambda_max": 2.0, "lambda_count": 100,
        "theta_count": 180, "n2": 2.0, "kstar": "pi/2",
    },
    "dynamics": {
        "engine": "ed", "tmax": 400.0, "dt": 0.02, "output_dt": 1.0,
        "initial": "bic", "detuning": None, "detuning_factor": 1.1,
    },
    "bic_find": {"kstar": None},
}

SWEEP_PARAMETERS = ("lambda", "theta", "n1", "n2", "dx", "kstar", "Nc")

_PI_EXPR = re.compile(r"^\s*([-+]?[\d.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([\d.eE+-]+))?\s*$")


def parse_number(value) -> float:
    """Float from a number or a ``pi`` expression such as ``'3pi/4'``."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        m = _PI_EXPR.match(value)
        if m:
            coef = m.group(1)
            coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
            den = float(m.group(2)) if m.group(2) else 1.0
            return coef * math.pi / den
        try:
            return float(value)
        except ValueError:
            pass
    raise ConfigError(f"expected a number, got {value!r}")


@dataclass(frozen=True)
class SweepSpec:
    """One axis of a parameter sweep: a log/linear range or an explicit list."""

    parameter: str
    minimum: float | None = None
    maximum: float | None = None
    count: int = 1
    spacing: str = "linear"
    explicit: tuple[float, ...] | None = None
    endpoint: bool = True

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"unknown sweep parameter {self.parameter!r}; choose from {SWEEP_PARAMETERS}")
        if self.explicit is None:
            if self.count < 1:
                raise ConfigError(f"sweep count must be >= 1, got {self.count}")
            if not (np.isfinite(self.minimum) and np.isfinite(self.maximum)):
                raise ConfigError("sweep range must be finite")
            if self.spacing == "log" and not (self.minimum > 0 and self.maximum > 0):
                raise ConfigError("log-spaced sweeps need a positive range")
        elif not all(np.isfinite(self.explicit)):
            raise ConfigError("sweep values must be finite")

    def values(self) -> np.ndarray:
        if self.explicit is not None:
            return np.asarray(self.explicit, dtype=float)
        if self.spacing == "log":
            return np.logspace(np.log10(self.minimum), np.log10(self.maximum), self.count, endpoint=self.endpoint)
        return np.linspace(self.minimum, self.maximum, self.count, endpoint=self.endpoint)


def _merge(base: dict, update: dict, path: str = "") -> dict:
    for key, value in update.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown configuration key {where!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where!r} must be a mapping")
            _merge(base[key], value, where + ".")
        else:
            base[key] = value
    return base


def apply_override(cfg: dict, assignment: str) -> dict:
    """Apply one ``section.key=value`` override; the value is parsed as YAML."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    dotted, raw = assignment.split("=", 1)
    parts = dotted.strip().split(".")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse value in {assignment!r}: {exc}") from exc
    update: dict = {}
    node = update
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value
    return _merge(cfg, update)


def load_config(path: str | Path | None = None, overrides=()) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must be a mapping at top level")
        _merge(cfg, data)
    for assignment in overrides:
        apply_override(cfg, assignment)
    return cfg


def model_params(cfg: dict) -> ModelParams:
    m = cfg["model"]
    try:
        n_c = int(m["N_c"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"model.N_c must be an integer, got {m['N_c']!r}") from exc
    return ModelParams(
        xi=parse_number(m["xi"]),
        omega_c=parse_number(m["omega_c"]),
        g=parse_number(m["g"]),
        Omega=parse_number(m["Omega"]),
        N_c=n_c,
        eta=None if m["eta"] is None else parse_number(m["eta"]),
    )


def geometry(cfg: dict) -> Geometry:
    g = cfg["geometry"]
    return Geometry(*(parse_number(g[key]) for key in ("x1", "x2", "n1", "n2")))
