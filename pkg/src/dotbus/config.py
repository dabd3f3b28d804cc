"""Run configuration: JSON with optional unit-suffixed strings.

Every physical value may be written either as a bare number (SI base unit of
that key, frequencies as plain Hz for keys named ``*_over_2pi``) or as a
string like ``"10 mm"`` / ``"0.2 MHz"`` / ``"20 ueV"``.  Parsing validates
all invariants and produces a normalized all-numeric dump that reparses to
the identical configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .device import (
    CouplerParams,
    DotParams,
    EV_TO_JOULE,
    MAX_WIRING_EPSILON,
    TlrParams,
    coupling_g,
)
from .dynamics import NoiseSpec
from .hamiltonians import ModelParams


class ConfigError(Exception):
    """Invalid configuration; carries the offending key path."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


_UNITS = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9},
    "capacitance": {"F": 1.0, "pF": 1e-12, "fF": 1e-15, "aF": 1e-18},
    "capacitance_per_length": {"F/m": 1.0, "pF/m": 1e-12, "fF/m": 1e-15},
    "inductance_per_length": {"H/m": 1.0, "uH/m": 1e-6, "µH/m": 1e-6, "nH/m": 1e-9},
    "energy": {
        "J": 1.0,
        "eV": EV_TO_JOULE,
        "meV": 1e-3 * EV_TO_JOULE,
        "ueV": 1e-6 * EV_TO_JOULE,
        "µeV": 1e-6 * EV_TO_JOULE,
        "neV": 1e-9 * EV_TO_JOULE,
    },
    "frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9},
    "dimensionless": {},
}


def parse_quantity(value, kind: str, path: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(path, "expected a number or unit string, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        parts = value.split()
        table = _UNITS[kind]
        if len(parts) == 2 and parts[1] in table:
            try:
                return float(parts[0]) * table[parts[1]]
            except ValueError:
                raise ConfigError(path, f"cannot parse number in {value!r}") from None
        if len(parts) == 1:
            try:
                return float(parts[0])
            except ValueError:
                pass
        allowed = ", ".join(table) or "none (bare number only)"
        raise ConfigError(path, f"cannot parse {value!r}; accepted units: {allowed}")
    raise ConfigError(path, f"expected a number or unit string, got {type(value).__name__}")


DEFAULTS = {
    "device": {
        "tlr": {
            "length": 0.01,
            "inductance_per_length": 4e-7,
            "capacitance_per_length": 2.5e-10,
            "wiring_capacitance": 0.0,
            "quality_factor": 1e5,
        },
        "dot": {
            "bias": 0.0,
            "tunneling": 20e-6 * EV_TO_JOULE,
            "total_capacitance": 1e-15,
            "triplet_energy": 0.0,
            "singlet_energy": 0.0,
        },
        "coupler": {"coupling_capacitance": 2.5e-16, "position": 0.0},
    },
    "model": {
        "n_qubits": 2,
        "coupling_g": "from-device",
        "tau_over_g": 10.0,
        "photon_cutoff": 5,
        "dispersive_threshold": 5.0,
    },
    "noise": {"gamma_over_2pi": 0.2e6, "gamma_phi_over_2pi": 0.5e6},
    "sweep": {
        "gamma_max_over_2pi": 1e6,
        "gamma_phi_max_over_2pi": 1e6,
        "gamma_points": 21,
        "gamma_phi_points": 21,
    },
    "output": {"timeseries": False},
}

_KINDS = {
    "device.tlr.length": "length",
    "device.tlr.inductance_per_length": "inductance_per_length",
    "device.tlr.capacitance_per_length": "capacitance_per_length",
    "device.tlr.wiring_capacitance": "capacitance",
    "device.tlr.quality_factor": "dimensionless",
    "device.dot.bias": "energy",
    "device.dot.tunneling": "energy",
    "device.dot.total_capacitance": "capacitance",
    "device.dot.triplet_energy": "energy",
    "device.dot.singlet_energy": "energy",
    "device.coupler.coupling_capacitance": "capacitance",
    "device.coupler.position": "length",
    "model.tau_over_g": "dimensionless",
    "model.dispersive_threshold": "dimensionless",
    "noise.gamma_over_2pi": "frequency",
    "noise.gamma_phi_over_2pi": "frequency",
    "sweep.gamma_max_over_2pi": "frequency",
    "sweep.gamma_phi_max_over_2pi": "frequency",
}

_INT_KEYS = {"model.n_qubits", "model.photon_cutoff", "sweep.gamma_points", "sweep.gamma_phi_points"}
_BOOL_KEYS = {"output.timeseries"}


def _merge(defaults, given, path: str):
    """Overlay ``given`` onto the default tree, rejecting unknown keys."""
    if not isinstance(given, dict):
        raise ConfigError(path or "<root>", "expected an object")
    out = {}
    for key, default in defaults.items():
        sub_path = f"{path}.{key}" if path else key
        if isinstance(default, dict):
            out[key] = _merge(default, given.get(key, {}), sub_path)
        else:
            out[key] = given.get(key, default)
    for key in given:
        if key not in defaults:
            sub_path = f"{path}.{key}" if path else key
            raise ConfigError(sub_path, "unknown key")
    return out


@dataclass(frozen=True, eq=False)
class RunConfig:
    tlr: TlrParams
    dot: DotParams
    coupler: CouplerParams
    model: ModelParams
    noise: NoiseSpec
    sweep_gamma_axis: np.ndarray       # rad/s
    sweep_gamma_phi_axis: np.ndarray   # rad/s
    timeseries: bool
    normalized: dict

    def dump(self) -> dict:
        return self.normalized

    def dump_json(self) -> str:
        return json.dumps(self.normalized, indent=2, sort_keys=True) + "\n"


def _normalize_tree(tree: dict) -> dict:
    out = {}

    def walk(node, path):
        result = {}
        for key, value in node.items():
            sub = f"{path}.{key}" if path else key
            if isinstance(value, dict):
                result[key] = walk(value, sub)
            elif sub in _INT_KEYS:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(sub, f"expected an integer, got {value!r}")
                result[key] = value
            elif sub in _BOOL_KEYS:
                if not isinstance(value, bool):
                    raise ConfigError(sub, f"expected true/false, got {value!r}")
                result[key] = value
            elif sub == "model.coupling_g":
                if value == "from-device":
                    result[key] = value
                else:
                    result[key] = parse_quantity(value, "frequency", sub)
            else:
                result[key] = parse_quantity(value, _KINDS[sub], sub)
        return result

    out = walk(tree, "")
    return out


def config_from_dict(raw: dict) -> RunConfig:
    tree = _normalize_tree(_merge(DEFAULTS, raw, ""))

    t = tree["device"]["tlr"]
    lc = t["length"] * t["capacitance_per_length"]
    if lc > 0 and t["wiring_capacitance"] / lc >= MAX_WIRING_EPSILON:
        raise ConfigError(
            "device.tlr.wiring_capacitance",
            f"wiring ratio C0/LC = {t['wiring_capacitance'] / lc:.3g} "
            f"exceeds the perturbative limit {MAX_WIRING_EPSILON}",
        )
    try:
        tlr = TlrParams(
            length=t["length"],
            inductance_per_length=t["inductance_per_length"],
            capacitance_per_length=t["capacitance_per_length"],
            wiring_capacitance=t["wiring_capacitance"],
            quality_factor=t["quality_factor"],
        )
    except ValueError as exc:
        raise ConfigError("device.tlr", str(exc)) from None

    d = tree["device"]["dot"]
    try:
        dot = DotParams(
            bias_epsilon=d["bias"],
            tunneling=d["tunneling"],
            total_capacitance=d["total_capacitance"],
            triplet_energy=d["triplet_energy"],
            singlet_energy=d["singlet_energy"],
        )
    except ValueError as exc:
        raise ConfigError("device.dot", str(exc)) from None

    c = tree["device"]["coupler"]
    try:
        coupler = CouplerParams(
            coupling_capacitance=c["coupling_capacitance"], position=c["position"]
        )
        coupler.validate_against(tlr)
    except ValueError as exc:
        raise ConfigError("device.coupler", str(exc)) from None

    m = tree["model"]
    if m["coupling_g"] == "from-device":
        g = abs(coupling_g(tlr, dot, coupler))
    else:
        g = 2.0 * math.pi * m["coupling_g"]
    if g <= 0:
        raise ConfigError("model.coupling_g", "resolved coupling must be positive")
    if m["tau_over_g"] <= 0:
        raise ConfigError("model.tau_over_g", "detuning ratio must be positive")
    tau = m["tau_over_g"] * g
    try:
        model = ModelParams.uniform(m["n_qubits"], g, tau, m["photon_cutoff"])
        model = ModelParams(
            model.n_qubits, model.couplings_g, model.detunings_tau,
            model.photon_cutoff, m["dispersive_threshold"],
        )
    except ValueError as exc:
        raise ConfigError("model", str(exc)) from None

    n = tree["noise"]
    try:
        noise = NoiseSpec.uniform(
            2, 2.0 * math.pi * n["gamma_over_2pi"], 2.0 * math.pi * n["gamma_phi_over_2pi"]
        )
    except ValueError as exc:
        raise ConfigError("noise", str(exc)) from None

    s = tree["sweep"]
    for key in ("gamma_points", "gamma_phi_points"):
        if s[key] < 1:
            raise ConfigError(f"sweep.{key}", "point count must be at least 1")
    for key in ("gamma_max_over_2pi", "gamma_phi_max_over_2pi"):
        if s[key] < 0:
            raise ConfigError(f"sweep.{key}", "axis maximum must be nonnegative")
    gamma_axis = 2.0 * math.pi * np.linspace(0.0, s["gamma_max_over_2pi"], s["gamma_points"])
    gamma_phi_axis = 2.0 * math.pi * np.linspace(
        0.0, s["gamma_phi_max_over_2pi"], s["gamma_phi_points"]
    )

    return RunConfig(
        tlr=tlr,
        dot=dot,
        coupler=coupler,
        model=model,
        noise=noise,
        sweep_gamma_axis=gamma_axis,
        sweep_gamma_phi_axis=gamma_phi_axis,
        timeseries=tree["output"]["timeseries"],
        normalized=tree,
    )


def parse_config(path: str) -> RunConfig:
    """Load, validate and normalize a JSON run configuration."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("<file>", f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"malformed JSON: {exc}") from None
    return config_from_dict(raw)
