"""Run configuration: a single key-value tree driving every CLI sweep.

TOML and JSON files are both accepted (chosen by extension); CLI flags
override file values. Validation failures raise ConfigError so the CLI can
map them to its config-error exit code.
"""

import json

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class RunConfig:
    # crossover scan
    inv_kfa: tuple = tuple(np.round(np.arange(-2.0, 2.0 + 1e-9, 0.1), 10))
    # probe block
    mass_ratio: float = 40.0 / 6.0
    kappa: float = 0.18
    omega_a_min: float = 0.1
    omega_a_max: float = 2.0
    omega_a_points: int = 40
    beta: float = np.inf
    # numerics block
    epsilon: float = 0.01
    res: float = 1.0
    rel_tol: float = 1e-4
    threads: int = 1
    # sweep grids
    q_min: float = 0.05
    q_max: float = 2.0
    q_points: int = 40
    nu_min: float = 0.05
    nu_max: float = 3.0
    nu_points: int = 40
    # output block
    out_dir: str = "out"
    formats: tuple = ("csv", "json")
    e_fermi_khz: float = None  # enables lab-unit columns when provided

    def __post_init__(self):
        if len(self.inv_kfa) == 0:
            raise ConfigError("inv_kfa scan list is empty")
        if list(self.inv_kfa) != sorted(self.inv_kfa):
            raise ConfigError("inv_kfa scan list must be sorted")
        for name in ("mass_ratio", "kappa", "epsilon", "res", "rel_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.omega_a_min <= self.omega_a_max:
            raise ConfigError("need 0 < omega_a_min <= omega_a_max")
        if not 0 < self.q_min <= self.q_max:
            raise ConfigError("need 0 < q_min <= q_max")
        if self.nu_min <= 0 or self.nu_min > self.nu_max:
            raise ConfigError("need 0 < nu_min <= nu_max")
        for name in ("omega_a_points", "q_points", "nu_points", "threads"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.beta > 0:
            raise ConfigError("beta must be positive (np.inf for T=0)")
        for f_ in self.formats:
            if f_ not in ("csv", "json"):
                raise ConfigError(f"unknown output format {f_!r}")
        if self.e_fermi_khz is not None and not self.e_fermi_khz > 0:
            raise ConfigError("e_fermi_khz must be positive when given")

    def as_dict(self):
        out = {}
        for f_ in fields(self):
            v = getattr(self, f_.name)
            if isinstance(v, tuple):
                v = list(v)
            out[f_.name] = v
        return out


_FIELD_NAMES = {f.name for f in fields(RunConfig)}


def _coerce(raw):
    known = {}
    for k, v in raw.items():
        if k not in _FIELD_NAMES:
            raise ConfigError(f"unknown config key {k!r}")
        if isinstance(v, list):
            v = tuple(v)
        if k == "beta" and isinstance(v, str):
            if v.lower() in ("inf", "infinite", "infinity"):
                v = np.inf
            else:
                raise ConfigError(f"bad beta value {v!r}")
        known[k] = v
    return known


def load_config(path=None, overrides=None):
    """Build a RunConfig from an optional file plus flag overrides."""
    raw = {}
    if path is not None:
        try:
            if str(path).endswith(".toml"):
                with open(path, "rb") as fh:
                    raw = tomllib.load(fh)
            elif str(path).endswith(".json"):
                with open(path) as fh:
                    raw = json.load(fh)
            else:
                raise ConfigError(f"config file must be .toml or .json: {path}")
        except (OSError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    raw = _coerce(raw)
    try:
        cfg = RunConfig(**raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    if overrides:
        clean = {k: v for k, v in overrides.items() if v is not None}
        if clean:
            cfg = replace(cfg, **_coerce(clean))
    return cfg
