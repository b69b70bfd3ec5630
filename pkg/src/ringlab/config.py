"""Scenario configuration: a single YAML document, schema-validated.

Unknown keys are rejected and all physical consistency constraints
(delta < T, delta and T multiples of dt, T > 3*delta where energy bounds
are used) are checked before any computation runs.  No environment
overrides: the file is the complete record of a run.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import yaml

from .errors import ConfigError

# allowed keys per section; None marks scalar leaves
_SCHEMA: dict = {
    "lattice": {
        "M": None, "a": None, "Lambda": None, "kappa": None,
        "ell": None, "overtone": None,
        "damping": {"kind": None, "value": None},
        "pole_offset": None,
    },
    "modes": {
        "amp_plus": None, "amp_minus": None,
        "contaminants": None,  # list of {j, sign, amp}
    },
    "tail": {"c": None, "nu": None, "m": None, "leak": None},
    "noise": {
        "harmonics": None,  # list of [c, mu, phi]
        "lcg": {"seed": None, "amplitude": None},
    },
    "observation": {"T0": None, "T": None, "Delta": None, "dt": None, "taper": None},
    "window": {
        "enabled": None, "n": None, "m0": None,
        "prior": None, "prior_offset": None,
        "path": None, "stencil_order": None,
    },
    "extraction": {"prior": None, "prior_offset": None, "amp_floor": None},
    "inversion": {
        "mode": None,
        "guess": {"M": None, "a": None, "Lambda": None},
        "box": {"M": None, "a": None, "Lambda": None},
        "grid_n": None,
    },
    "sweep": {"axis": None, "values": None},
    "prony": {"samples": None, "amps": None, "nodes": None, "eta": None},
    "band_isolate": {
        "dim": None, "n_poles": None, "max_order": None, "seed": None,
        "n_models": None, "nu1": None, "nu2": None, "times": None,
        "forcing_k": None, "tol": None,
    },
    "pseudospectrum": {
        "poles": None, "e_plus": None, "e_minus": None, "hol_bound": None,
        "eps": None, "grid_n": None, "re_range": None, "im_range": None,
    },
    "window_check": {
        "nodes": None, "target": None, "m0": None, "n_draws": None,
        "delta_scale": None, "nu": None, "sigma_max": None, "seed": None,
    },
}

_SWEEP_AXES = ("T0", "T", "Delta", "ell", "noise_amp", "separation")


def _validate_keys(tree: Any, schema: dict, path: str = ""):
    if not isinstance(tree, dict):
        raise ConfigError(f"section {path or '<root>'} must be a mapping")
    for key, val in tree.items():
        if key not in schema:
            raise ConfigError(f"unknown key {path + key!r}")
        sub = schema[key]
        if isinstance(sub, dict) and isinstance(val, dict):
            _validate_keys(val, sub, path + key + ".")
        elif isinstance(sub, dict) and val is not None and not isinstance(val, dict):
            raise ConfigError(f"key {path + key!r} must be a mapping")


_DEFAULTS = {
    "lattice": {"M": 1.0, "a": 0.08, "Lambda": 0.02, "kappa": 0.3,
                "ell": 100, "overtone": 0,
                "damping": {"kind": "constant", "value": 0.2},
                "pole_offset": [0.0, 0.0]},
    "modes": {"amp_plus": [1.0, 0.0], "amp_minus": [1.0, 0.0], "contaminants": []},
    "tail": {"c": 0.0, "nu": 0.5, "m": 0, "leak": 0.0},
    "noise": {"harmonics": [], "lcg": None},
    "observation": {"T0": 4.0, "T": 10.0, "Delta": 1.0, "dt": 0.05,
                    "taper": "raised-cosine"},
    "window": {"enabled": False, "n": 1, "m0": None, "prior": "exact",
               "prior_offset": [0.0, 0.0], "path": "modal", "stencil_order": 8},
    "extraction": {"prior": "exact", "prior_offset": [0.0, 0.0], "amp_floor": 0.0},
    "inversion": {"mode": "2p", "guess": None, "box": None, "grid_n": 5},
    "sweep": {"axis": None, "values": []},
}


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


@dataclass
class ScenarioConfig:
    """Validated scenario document with defaults filled in."""

    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        _validate_keys(self.raw, _SCHEMA)
        merged = dict(_DEFAULTS)
        for key in _DEFAULTS:
            merged[key] = _merge(_DEFAULTS[key], self.raw.get(key, {}) or {})
        for key in self.raw:
            if key not in merged:
                merged[key] = self.raw[key]
        self.data = merged
        self._check_physical()

    def _check_physical(self):
        obs = self.data["observation"]
        t_len, delta, dt = obs["T"], obs["Delta"], obs["dt"]
        if not (0 < delta < t_len):
            raise ConfigError("need 0 < Delta < T")
        for name, x in (("Delta", delta), ("T", t_len)):
            k = x / dt
            if abs(k - round(k)) > 1e-9 * max(1.0, k):
                raise ConfigError(f"{name} must be an integer multiple of dt")
        if t_len <= 3 * delta:
            raise ConfigError("need T > 3*Delta for the energy lower bounds")
        if obs["taper"] not in ("raised-cosine", "rectangular"):
            raise ConfigError(f"unknown taper {obs['taper']!r}")
        sweep = self.data["sweep"]
        if sweep["axis"] is not None and sweep["axis"] not in _SWEEP_AXES:
            raise ConfigError(
                f"sweep axis must be one of {_SWEEP_AXES}, got {sweep['axis']!r}")
        win = self.data["window"]
        if win["path"] not in ("modal", "fd"):
            raise ConfigError("window path must be 'modal' or 'fd'")
        inv = self.data["inversion"]
        if inv["mode"] not in ("2p", "3p"):
            raise ConfigError("inversion mode must be '2p' or '3p'")

    def __getitem__(self, key: str):
        return self.data[key]

    def section(self, key: str, default=None):
        return self.data.get(key, default)


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a mapping")
    return ScenarioConfig(raw=doc)


def as_complex(val) -> complex:
    """Accept [re, im] pairs or bare numbers from the config."""
    if isinstance(val, (list, tuple)):
        if len(val) != 2:
            raise ConfigError(f"complex values are [re, im] pairs, got {val!r}")
        return complex(float(val[0]), float(val[1]))
    return complex(float(val), 0.0)
