"""Run configuration loaded from a JSON document.

Example::

    {
      "L": 3.141592653589793, "V": 1.0, "mass": 1.0, "unit_system": "natural",
      "modes": [{"alpha": 1, "C1": [0.5, 0.0], "C2": [0.5, 0.0]}],
      "grid": {"n_points": 513},
      "time": {"t": 0.3, "dt": null},
      "fock": {"dim": 32},
      "output": {"format": "csv", "path": null}
    }

Omitted constants take their natural-unit value 1 (CODATA values when
``unit_system`` is ``"SI"``).  A mode without ``C2`` is taken as physical,
``C2 = conj(C1)``.  ``time.dt`` defaults to ``T / (n_points - 1)`` where
``T`` is the period of the lowest mode.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .classical import ModeState, fundamental_period
from .fock import DEFAULT_DIM
from .modes import NATURAL, SI, SI_EPSILON0, SI_HBAR, SI_MU0, CavityConfig, ZGrid

OUTPUT_FORMATS = ("csv", "json")
DEFAULT_T = 0.3
DEFAULT_N_POINTS = 513


class ConfigError(ValueError):
    """Malformed run configuration; the message names the offending key."""


@dataclass(frozen=True)
class RunConfig:
    cavity: CavityConfig = field(default_factory=CavityConfig)
    modes: tuple = (ModeState.cosine(1),)
    n_points: int = DEFAULT_N_POINTS
    t: float = DEFAULT_T
    dt: Optional[float] = None
    fock_dim: int = DEFAULT_DIM
    coherent: Optional[complex] = None
    output_format: str = "csv"
    output_path: Optional[str] = None
    tolerances: dict = field(default_factory=dict)

    @property
    def grid(self) -> ZGrid:
        return ZGrid.for_cavity(self.cavity, self.n_points)

    @property
    def time_step(self) -> float:
        if self.dt is not None:
            return self.dt
        return fundamental_period(self.modes, self.cavity) / (self.n_points - 1)


def _number(value: Any, key: str, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"{key} must be > 0, got {value!r}")
    return value


def _integer(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _complex(value: Any, key: str) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(_number(value[0], f"{key}[0]"), _number(value[1], f"{key}[1]"))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(_number(value, key))
    raise ConfigError(f"{key} must be a [re, im] pair, got {value!r}")


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name, {})
    if sec is None:
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(f"{name} must be an object, got {sec!r}")
    return sec


def _parse_cavity(doc: dict) -> CavityConfig:
    unit_system = doc.get("unit_system", NATURAL)
    if unit_system not in (NATURAL, SI):
        raise ConfigError(f"unit_system must be 'natural' or 'SI', got {unit_system!r}")
    defaults = {"epsilon0": 1.0, "mu0": 1.0, "hbar": 1.0}
    if unit_system == SI:
        defaults = {"epsilon0": SI_EPSILON0, "mu0": SI_MU0, "hbar": SI_HBAR}
    kw = {"unit_system": unit_system}
    kw["L"] = _number(doc.get("L", math.pi), "L", positive=True)
    kw["V"] = _number(doc.get("V", 1.0), "V", positive=True)
    for key, default in defaults.items():
        kw[key] = _number(doc.get(key, default), key, positive=True)
    mass = doc.get("mass", 1.0)
    if isinstance(mass, list):
        if not mass:
            raise ConfigError("mass must not be an empty list")
        kw["mass"] = tuple(_number(m, f"mass[{i}]", positive=True) for i, m in enumerate(mass))
    else:
        kw["mass"] = _number(mass, "mass", positive=True)
    try:
        return CavityConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_mode(entry: Any, i: int) -> ModeState:
    key = f"modes[{i}]"
    if not isinstance(entry, dict):
        raise ConfigError(f"{key} must be an object")
    if "alpha" not in entry:
        raise ConfigError(f"{key}.alpha is required")
    alpha = _integer(entry["alpha"], f"{key}.alpha")
    if alpha < 1:
        raise ConfigError(f"{key}.alpha must be ≥ 1 (got {alpha}): mode index {alpha} is undefined")
    C1 = _complex(entry.get("C1", [0.0, 0.0]), f"{key}.C1")
    C2 = _complex(entry["C2"], f"{key}.C2") if "C2" in entry else C1.conjugate()
    C_prime = _complex(entry.get("C_prime", [0.0, 0.0]), f"{key}.C_prime")
    C_const = _number(entry.get("C_const", 0.0), f"{key}.C_const")
    return ModeState(alpha, C1, C2, C_prime, C_const)


def parse_config(doc: Any) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    cavity = _parse_cavity(doc)

    modes_doc = doc.get("modes", [{"alpha": 1, "C1": [0.5, 0.0]}])
    if not isinstance(modes_doc, list):
        raise ConfigError("modes must be a list")
    modes = tuple(_parse_mode(m, i) for i, m in enumerate(modes_doc))
    alphas = [m.alpha for m in modes]
    if len(set(alphas)) != len(alphas):
        raise ConfigError(f"modes contains duplicate alpha values {sorted(alphas)}")
    for m in modes:
        try:
            cavity.mass_for(m.alpha)
        except ValueError as exc:
            raise ConfigError(f"mass: {exc}") from None

    grid = _section(doc, "grid")
    n_points = _integer(grid.get("n_points", DEFAULT_N_POINTS), "grid.n_points")
    if n_points < 3:
        raise ConfigError(f"grid.n_points must be ≥ 3, got {n_points}")

    time = _section(doc, "time")
    t = _number(time.get("t", DEFAULT_T), "time.t")
    dt = time.get("dt")
    if dt is not None:
        dt = _number(dt, "time.dt", positive=True)

    fock = _section(doc, "fock")
    dim = _integer(fock.get("dim", DEFAULT_DIM), "fock.dim")
    if dim < 2:
        raise ConfigError(f"fock.dim must be ≥ 2, got {dim}")
    coherent = fock.get("coherent")
    if coherent is not None:
        coherent = _complex(coherent, "fock.coherent")

    output = _section(doc, "output")
    fmt = output.get("format", "csv")
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"output.format must be one of {OUTPUT_FORMATS}, got {fmt!r}")
    path = output.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError(f"output.path must be a string, got {path!r}")

    verify = _section(doc, "verify")
    tolerances = verify.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("verify.tolerances must be an object")
    tolerances = {str(k): _number(v, f"verify.tolerances.{k}") for k, v in tolerances.items()}

    return RunConfig(cavity, modes, n_points, t, dt, dim, coherent, fmt, path, tolerances)


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(doc)
