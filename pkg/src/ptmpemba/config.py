"""Run configuration: a JSON document, overridable from the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import InvalidParams, ModelParams, bloch_state
from .mpemba import CrossingConfig
from .quantifiers import QuantifierKind


class ConfigError(ValueError):
    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass(frozen=True)
class Axis:
    min: float
    max: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)

    @classmethod
    def parse(cls, raw, where: str) -> "Axis":
        if isinstance(raw, str):
            parts = raw.split(":")
            if len(parts) != 3:
                raise ConfigError(where, f"expected min:max:steps, got {raw!r}")
            raw = {"min": parts[0], "max": parts[1], "steps": parts[2]}
        try:
            axis = cls(float(raw["min"]), float(raw["max"]), int(raw["steps"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(where, f"bad axis spec ({exc})") from None
        if axis.steps < 1 or (axis.steps > 1 and axis.max <= axis.min):
            raise ConfigError(where, "axis needs steps >= 1 and max > min")
        return axis


@dataclass
class RunConfig:
    params: ModelParams
    initial_state_I: list[tuple[float, float, float]]
    initial_state_II: list[tuple[float, float, float]]
    quantifier: QuantifierKind = QuantifierKind.TRACE
    crossing: CrossingConfig = field(default_factory=CrossingConfig)
    grid_a: Axis | None = None
    grid_gamma1: Axis | None = None
    outputs: dict[str, str] = field(default_factory=dict)

    def states(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.params.n_qubits
        return _tensor_power(self.initial_state_I, n), _tensor_power(self.initial_state_II, n)

    def to_dict(self) -> dict:
        out = {
            "params": {
                "a": self.params.a,
                "gamma1": self.params.gamma1,
                "gamma2": self.params.gamma2,
                "n_qubits": self.params.n_qubits,
            },
            "initial_state_I": [list(r) for r in self.initial_state_I],
            "initial_state_II": [list(r) for r in self.initial_state_II],
            "quantifier": self.quantifier.value,
            "crossing": {
                "t_min": self.crossing.t_min,
                "t_max": self.crossing.t_max,
                "samples": self.crossing.samples,
                "refine_tol": self.crossing.refine_tol,
                "amplitude_floor": self.crossing.amplitude_floor,
            },
            "outputs": dict(self.outputs),
        }
        grid = {}
        for name, axis in (("a", self.grid_a), ("gamma1", self.grid_gamma1)):
            if axis is not None:
                grid[name] = {"min": axis.min, "max": axis.max, "steps": axis.steps}
        if grid:
            out["grid"] = grid
        return out


def _tensor_power(vectors, n: int) -> np.ndarray:
    if len(vectors) == 1:
        vectors = vectors * n
    if len(vectors) != n:
        raise ConfigError("initial_state", f"need 1 or {n} Bloch vectors, got {len(vectors)}")
    return bloch_state(*vectors)


def _bloch_list(raw, where: str) -> list[tuple[float, float, float]]:
    if isinstance(raw, str):
        raw = [float(x) for x in raw.split(",")]
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(where, "Bloch vectors must be numeric") from None
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ConfigError(where, f"expected one or more (r_x, r_y, r_z) triples, got shape {arr.shape}")
    for k, r in enumerate(arr):
        if np.linalg.norm(r) > 1 + 1e-12:
            raise ConfigError(f"{where}[{k}]", f"|r| = {np.linalg.norm(r):.6g} lies outside the Bloch ball")
    return [tuple(map(float, r)) for r in arr]


DEFAULTS = {
    "params": {"a": 1.2, "gamma1": 0.6, "gamma2": 1.0, "n_qubits": 1},
    "initial_state_I": [0.0, 0.0, 1.0],
    "initial_state_II": [0.0, 0.0, 0.0],
    "quantifier": "trace",
    "crossing": {},
    "outputs": {},
}


def load_document(path: str | Path) -> dict:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    if not isinstance(doc, dict):
        raise ConfigError(str(path), "top level must be an object")
    return doc


def merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], val)
        else:
            out[key] = val
    return out


def build_config(doc: dict) -> RunConfig:
    doc = merge(DEFAULTS, doc)
    p = doc["params"]
    try:
        params = ModelParams(float(p["a"]), float(p["gamma1"]), float(p["gamma2"]), int(p.get("n_qubits", 1)))
    except InvalidParams as exc:
        raise ConfigError("params", str(exc)) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("params", f"missing or malformed field ({exc})") from None

    try:
        quantifier = QuantifierKind(doc["quantifier"])
    except ValueError:
        raise ConfigError("quantifier", f"unknown quantifier {doc['quantifier']!r}") from None

    c = doc.get("crossing") or {}
    try:
        crossing = CrossingConfig(
            t_min=float(c.get("t_min", 0.0)),
            t_max=None if c.get("t_max") is None else float(c["t_max"]),
            samples=int(c.get("samples", 4000)),
            refine_tol=float(c.get("refine_tol", 1e-10)),
            amplitude_floor=float(c.get("amplitude_floor", 1e-12)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError("crossing", str(exc)) from None

    grid = doc.get("grid") or {}
    grid_a = Axis.parse(grid["a"], "grid.a") if "a" in grid else None
    grid_g1 = Axis.parse(grid["gamma1"], "grid.gamma1") if "gamma1" in grid else None
    for a in grid_a.values() if grid_a else [params.a]:
        for g1 in grid_g1.values() if grid_g1 else [params.gamma1]:
            try:
                params.with_(a=float(a), gamma1=float(g1))
            except InvalidParams as exc:
                raise ConfigError("grid", f"lattice point (a={a:.6g}, gamma1={g1:.6g}): {exc}") from None

    cfg = RunConfig(
        params=params,
        initial_state_I=_bloch_list(doc["initial_state_I"], "initial_state_I"),
        initial_state_II=_bloch_list(doc["initial_state_II"], "initial_state_II"),
        quantifier=quantifier,
        crossing=crossing,
        grid_a=grid_a,
        grid_gamma1=grid_g1,
        outputs={k: str(v) for k, v in (doc.get("outputs") or {}).items()},
    )
    cfg.states()  # surfaces qubit-count mismatches early
    return cfg
