"""Physical parameters of the tilted two-band Bose-Hubbard model.

Energies are in recoil energies, hbar = 1, times in inverse recoil energies.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .bessel import bessel_j
from .errors import ConfigError

__all__ = [
    "ModelParams",
    "DerivedParams",
    "derive_parameters",
    "resonant_force_estimate",
    "params_from_mapping",
    "load_config",
    "FIG1_PARAMS",
]


@dataclass(frozen=True)
class ModelParams:
    """All inputs of the two-band Hamiltonian.

    ``F`` is always given explicitly; the resonant forces quoted for real
    lattices are shifted away from ``Delta / m``.
    """

    L: int
    N: int
    Delta: float
    t_a: float
    t_b: float
    C0: float
    W_a: float
    W_b: float
    W_x: float
    g: float
    F: float
    m: int = 1

    def __post_init__(self):
        for name in ("L", "N", "m"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")
        # L = 1 is accepted as a degenerate single-site ring without hopping.
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.m < 1:
            raise ValueError(f"resonance order m must be >= 1, got {self.m}")
        if not self.F > 0:
            raise ValueError(f"Stark force F must be > 0, got {self.F}")
        if not (self.t_a > 0 and self.t_b > 0):
            raise ValueError("hopping amplitudes t_a, t_b must be > 0")
        for name in ("W_a", "W_b", "W_x", "g"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class DerivedParams:
    x_a: float
    x_b: float
    delta_x: float
    V_m: float
    U: float
    T_B: float
    T_res: float

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


def derive_parameters(p: ModelParams) -> DerivedParams:
    """Bessel arguments, resonant coupling, effective interaction and time scales."""
    if p.F == 0:
        raise ValueError("F = 0 leaves the Bessel arguments t/F undefined")
    if p.m < 0:
        raise ValueError("m must be non-negative")
    x_a = p.t_a / p.F
    x_b = p.t_b / p.F
    delta_x = x_a + x_b
    V_m = p.C0 * p.F * bessel_j(p.m, delta_x)
    U = 2.0 * p.g * p.W_x * bessel_j(0, x_a) ** 2 * bessel_j(0, x_b) ** 2
    T_B = 2.0 * math.pi / p.F
    T_res = math.pi / abs(V_m) if V_m != 0 else math.inf
    return DerivedParams(x_a=x_a, x_b=x_b, delta_x=delta_x, V_m=V_m, U=U, T_B=T_B, T_res=T_res)


def resonant_force_estimate(Delta: float, m: int) -> float:
    """First-order resonance estimate F = Delta / m.

    Only a starting point for scans: actual resonant forces are shifted by
    the off-resonant interband coupling.
    """
    if m == 0:
        raise ValueError("resonance order m must be >= 1")
    if m < 0:
        raise ValueError(f"resonance order m must be >= 1, got {m}")
    if not Delta > 0:
        raise ValueError(f"band gap Delta must be > 0, got {Delta}")
    return Delta / m


_FIELDS = tuple(f.name for f in dataclasses.fields(ModelParams))
_REQUIRED = tuple(
    f.name for f in dataclasses.fields(ModelParams) if f.default is dataclasses.MISSING
)


def params_from_mapping(data: Mapping[str, Any]) -> ModelParams:
    """Build ``ModelParams`` from a mapping; unknown or missing keys are errors."""
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown parameter key(s): {', '.join(unknown)}")
    missing = [name for name in _REQUIRED if name not in data]
    if missing:
        raise ConfigError(f"missing parameter field(s): {', '.join(missing)}")
    try:
        return ModelParams(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON or TOML file into a plain dict (format chosen by suffix)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


# Lattice depth V_0 = 10, resonance m = 1.
FIG1_PARAMS = ModelParams(
    L=5,
    N=5,
    Delta=7.77,
    t_a=0.005,
    t_b=0.121,
    C0=-0.114,
    W_a=0.040,
    W_b=0.027,
    W_x=0.018,
    g=0.1,
    F=7.9804,
    m=1,
)
