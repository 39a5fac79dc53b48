"""Scenario configuration: JSON ingestion, unit-tagged keys, defaults.

Defaults reproduce the paper-scale parameter set (J = 50 K, j1 = 0.2,
A_par = 100 kOe/muB, gamma_n/2pi = 4.3 MHz/kOe, N = 20, r = 10,
n(0)/N = 0.01), so an empty ``parameters`` block gives the headline coupling.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

SCENARIOS = ("coupling", "range_profile", "dynamics", "gate", "noise_sweep", "init")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class Param:
    default: Any
    kind: str = "float"  # float | int | str | floats | optional
    check: Optional[Callable[[Any], bool]] = None
    rule: str = ""
    choices: tuple = ()


def _pos(x):
    return x > 0


def _nonneg(x):
    return x >= 0


def _fraction(x):
    return 0 <= x <= 1


PARAMS: dict[str, Param] = {
    # ladder and hyperfine
    "J_kelvin": Param(50.0, check=_pos, rule="> 0"),
    "j1": Param(0.2, check=lambda x: 0 <= x < 1, rule="in [0, 1)"),
    "g": Param(2.0, check=_pos, rule="> 0"),
    "N_modes": Param(20, "int", lambda x: x >= 2, ">= 2"),
    "r_ij_sites": Param(10.0),
    "A_par_kOe_per_muB": Param(100.0, check=_pos, rule="> 0"),
    "A_perp_kOe_per_muB": Param(1.0, check=_nonneg, rule=">= 0"),
    "gamma_MHz_per_kOe": Param(4.3, check=_pos, rule="> 0"),
    "n0_per_site": Param(0.01, check=_fraction, rule="in [0, 1]"),
    # field and chain
    "field_T": Param(10.0, check=_pos, rule="> 0"),
    "gradient_T_per_site": Param(1e-3),
    "N_chain_sites": Param(100, "int", lambda x: x >= 2, ">= 2"),
    # range profile
    "r_max_sites": Param(20, "int", lambda x: x >= 1, ">= 1"),
    "T_kelvin": Param(1.0, check=_pos, rule="> 0"),
    # dynamics
    "W_ex_per_s": Param(0.01, check=_nonneg, rule=">= 0"),
    "T_s": Param(1.0, check=_pos, rule="> 0"),
    "n_init": Param(0.0, check=_fraction, rule="in [0, 1]"),
    "t_s": Param(5.0, check=_nonneg, rule=">= 0"),
    "samples": Param(11, "int", lambda x: x >= 2, ">= 2"),
    "kappa_per_s_per_W": Param(None, "optional", _nonneg, ">= 0"),
    "P_mw_W": Param(None, "optional", _nonneg, ">= 0"),
    "mw_center_sites": Param(50.0, check=_nonneg, rule=">= 0"),
    "mw_linewidth_MHz": Param(100.0, check=_pos, rule="> 0"),
    # gate
    "W_Hz": Param(None, "optional"),
    "m_eff_muB": Param(1.0, check=_nonneg, rule=">= 0"),
    "frame": Param("shifted", "str", choices=("shifted", "bare")),
    "second_axis": Param("auto", "str", choices=("auto", "+Y", "-Y")),
    # noise
    "T1_over_t_gate": Param([1.0, 10.0, 100.0], "floats", _pos, "> 0"),
    # initializer
    "omega_n_MHz": Param(None, "optional", _pos, "> 0"),
    "T_bath_K": Param(1.0, check=_pos, rule="> 0"),
    "N_qubits": Param(10, "int", lambda x: x >= 1, ">= 1"),
    "P_e": Param(1.0, check=_fraction, rule="in [0, 1]"),
    "tau_transfer_s": Param(1.0, check=_pos, rule="> 0"),
    "t_pump_s": Param(3.0, check=_nonneg, rule=">= 0"),
}

_COUPLING = (
    "J_kelvin", "j1", "g", "N_modes", "r_ij_sites", "A_par_kOe_per_muB",
    "A_perp_kOe_per_muB", "gamma_MHz_per_kOe", "n0_per_site",
)

SCENARIO_PARAMS: dict[str, tuple[str, ...]] = {
    "coupling": _COUPLING,
    "range_profile": _COUPLING + ("r_max_sites", "T_kelvin", "field_T"),
    "dynamics": (
        "J_kelvin", "j1", "g", "field_T", "gradient_T_per_site", "N_chain_sites",
        "W_ex_per_s", "T_s", "n_init", "t_s", "samples", "kappa_per_s_per_W",
        "P_mw_W", "mw_center_sites", "mw_linewidth_MHz",
    ),
    "gate": _COUPLING + ("W_Hz", "m_eff_muB", "frame", "second_axis", "field_T"),
    "noise_sweep": _COUPLING + ("W_Hz", "frame", "T1_over_t_gate"),
    "init": (
        "omega_n_MHz", "gamma_MHz_per_kOe", "field_T", "T_bath_K", "N_qubits",
        "P_e", "tau_transfer_s", "t_pump_s",
    ),
}

# keys without a unit tag (dimensionless or enumerations)
_UNITLESS = {"j1", "g", "n_init", "samples", "frame", "second_axis", "P_e"}

_UNIT_SUFFIXES = (
    "kOe_per_muB", "T_per_muB", "MHz_per_kOe", "Hz_per_T", "T_per_site", "per_s_per_W",
    "per_s", "kelvin", "sites", "GHz", "MHz", "kHz", "Hz", "muB", "kOe", "ms", "us",
    "K", "T", "W", "s",
)


def _base(key: str) -> str:
    """Physical quantity a key names, with its unit tag removed."""
    if key in _UNITLESS:
        return key
    for suffix in _UNIT_SUFFIXES:
        if key.endswith("_" + suffix):
            return key[: -len(suffix) - 1]
    return key


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    @property
    def key(self) -> str:
        return self.parameter.split(".", 1)[1]

    def values(self) -> list[float]:
        import numpy as np

        if self.scale == "log":
            return [float(v) for v in np.geomspace(self.start, self.stop, self.count)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    parameters: dict
    sweep: Optional[SweepSpec] = None
    output_directory: str = "out"
    formats: tuple = ("csv", "json")

    def to_dict(self) -> dict:
        d = {
            "scenario": self.scenario,
            "parameters": copy.deepcopy(self.parameters),
            "output": {"directory": self.output_directory, "formats": list(self.formats)},
        }
        if self.sweep is not None:
            d["sweep"] = {
                "parameter": self.sweep.parameter,
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "count": self.sweep.count,
                "scale": self.sweep.scale,
            }
        return d

    def with_parameter(self, key: str, value) -> "ScenarioConfig":
        params = dict(self.parameters)
        params[key] = coerce_parameter(key, value, f"parameters.{key}")
        return ScenarioConfig(self.scenario, params, None, self.output_directory, self.formats)


def coerce_parameter(key: str, value, path: str):
    spec = PARAMS[key]
    if spec.kind == "str":
        if not isinstance(value, str) or value not in spec.choices:
            raise ConfigError(path, f"expected one of {list(spec.choices)}, got {value!r}")
        return value
    if spec.kind == "optional" and value is None:
        return None
    if spec.kind == "floats":
        items = value if isinstance(value, list) else [value]
        if not items:
            raise ConfigError(path, "expected a non-empty list of numbers")
        return [_number(key, v, f"{path}[{i}]", "float") for i, v in enumerate(items)]
    return _number(key, value, path, spec.kind)


def _number(key, value, path, kind):
    spec = PARAMS[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(path, "value must be finite")
    if kind == "int":
        if value != int(value):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
    if spec.check is not None and not spec.check(value):
        raise ConfigError(path, f"out of range: {value!r} (must be {spec.rule})")
    return value


def defaults(scenario: str) -> dict:
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}; expected one of {list(SCENARIOS)}")
    params = {k: copy.deepcopy(PARAMS[k].default) for k in SCENARIO_PARAMS[scenario]}
    return {"scenario": scenario, "parameters": params,
            "output": {"directory": "out", "formats": list(FORMATS)}}


def validate_config(raw: str | dict) -> ScenarioConfig:
    """Parse and validate a config document; fill defaults for missing parameters."""
    if isinstance(raw, str):
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError("<document>", f"invalid JSON: {exc}") from None
    else:
        doc = raw
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "top level must be an object")
    for key in doc:
        if key not in ("scenario", "parameters", "sweep", "output"):
            raise ConfigError(key, "unknown key")
    if "scenario" not in doc:
        raise ConfigError("scenario", "missing required key")
    scenario = doc["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}; expected one of {list(SCENARIOS)}")

    allowed = SCENARIO_PARAMS[scenario]
    raw_params = doc.get("parameters", {})
    if not isinstance(raw_params, dict):
        raise ConfigError("parameters", "must be an object")
    params = {}
    for key, value in raw_params.items():
        path = f"parameters.{key}"
        if key not in allowed:
            match = [k for k in allowed if _base(k) == _base(key)]
            if match:
                raise ConfigError(path, f"unit mismatch: expected key {match[0]!r}")
            raise ConfigError(path, f"unknown key for scenario {scenario!r}")
        params[key] = coerce_parameter(key, value, path)
    for key in allowed:
        if key not in params:
            params[key] = copy.deepcopy(PARAMS[key].default)

    sweep = None
    if doc.get("sweep") is not None:
        sweep = _validate_sweep(doc["sweep"], allowed)

    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output", "must be an object")
    for key in output:
        if key not in ("directory", "formats"):
            raise ConfigError(f"output.{key}", "unknown key")
    directory = output.get("directory", "out")
    if not isinstance(directory, str) or not directory:
        raise ConfigError("output.directory", "must be a non-empty string")
    formats = output.get("formats", list(FORMATS))
    if not isinstance(formats, list) or not formats or any(f not in FORMATS for f in formats):
        raise ConfigError("output.formats", f"must be a non-empty subset of {list(FORMATS)}")
    return ScenarioConfig(scenario, params, sweep, directory, tuple(dict.fromkeys(formats)))


def _validate_sweep(raw, allowed) -> SweepSpec:
    if not isinstance(raw, dict):
        raise ConfigError("sweep", "must be an object")
    for key in raw:
        if key not in ("parameter", "start", "stop", "count", "scale"):
            raise ConfigError(f"sweep.{key}", "unknown key")
    for key in ("parameter", "start", "stop", "count"):
        if key not in raw:
            raise ConfigError(f"sweep.{key}", "missing required key")
    path = raw["parameter"]
    if not isinstance(path, str) or not path.startswith("parameters."):
        raise ConfigError("sweep.parameter", "must be a path of the form 'parameters.<key>'")
    key = path.split(".", 1)[1]
    if key not in allowed:
        raise ConfigError("sweep.parameter", f"unknown parameter {key!r} for this scenario")
    if PARAMS[key].kind == "str":
        raise ConfigError("sweep.parameter", f"{key!r} is not numeric")
    for k in ("start", "stop"):
        v = raw[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"sweep.{k}", "expected a finite number")
    count = raw["count"]
    if isinstance(count, bool) or not isinstance(count, int):
        raise ConfigError("sweep.count", "expected an integer")
    if count < 2:
        raise ConfigError("sweep.count", f"must be >= 2, got {count}")
    scale = raw.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise ConfigError("sweep.scale", "must be 'linear' or 'log'")
    if scale == "log" and (raw["start"] <= 0 or raw["stop"] <= 0):
        raise ConfigError("sweep.start", "log sweeps need positive bounds")
    return SweepSpec(path, float(raw["start"]), float(raw["stop"]), count, scale)
