"""Run configuration files (TOML or JSON), schema version 1.

Layout::

    schema_version = 1
    model = "both"            # "full" | "spin" | "both"

    [params]                  # every ModelParams field except m is required
    L = 5
    ...

    [spin]                    # optional overrides for the spin chain
    L = 7
    V_m = 1.0
    U = 0.25

    [evolution]               # all optional; defaults depend on the model
    t_final = 7300.0
    dt = 0.003
    sample_every = 256

    [analysis]
    window = 1300.0           # envelope window (time); default 3 T_res
    extract = true            # extract revival times after simulate

    [output]
    directory = "out"
    prefix = "fig1"

Unknown keys anywhere are errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .params import ModelParams, derive_parameters, load_config, params_from_mapping

__all__ = ["RunConfig", "SCHEMA_VERSION", "parse_config", "read_run_config", "MODELS"]

SCHEMA_VERSION = 1
MODELS = ("full", "spin", "both")
_TOP = {"schema_version", "model", "params", "spin", "evolution", "analysis", "output"}
_SECTIONS = {
    "spin": {"L", "m", "V_m", "U"},
    "evolution": {"t_final", "dt", "sample_every"},
    "analysis": {"window", "extract"},
    "output": {"directory", "prefix"},
}


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    model: str = "both"
    spin: dict = field(default_factory=dict)
    t_final: float | None = None
    dt: float | None = None
    sample_every: int | None = None
    window: float | None = None
    extract: bool = True
    directory: Path = Path(".")
    prefix: str = "run"
    raw: dict = field(default_factory=dict, repr=False)

    def spin_couplings(self) -> dict:
        """L, m, V_m, U of the spin chain after applying overrides."""
        d = derive_parameters(self.params)
        out = {"L": self.params.L, "m": self.params.m, "V_m": d.V_m, "U": d.U}
        out.update(self.spin)
        return out

    def snapshot(self) -> dict:
        """Flat ``config.*`` metadata sufficient to rebuild this config."""
        flat = {}

        def walk(prefix, value):
            if isinstance(value, Mapping):
                for k in sorted(value):
                    walk(f"{prefix}.{k}", value[k])
            else:
                flat[prefix] = value

        walk("config", self.raw)
        return flat


def _section(data: Mapping, name: str) -> dict:
    value = data.get(name, {})
    if not isinstance(value, Mapping):
        raise ConfigError(f"section {name!r} must be a table")
    unknown = sorted(set(value) - _SECTIONS[name])
    if unknown:
        raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(unknown)}")
    return dict(value)


def _positive(name: str, value, kind=float):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if kind is int and int(value) != value:
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    value = kind(value)
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be > 0, got {value!r}")
    return value


def parse_config(data: Mapping[str, Any]) -> RunConfig:
    unknown = sorted(set(data) - _TOP)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}; this version reads {SCHEMA_VERSION}")
    model = data.get("model", "both")
    if model not in MODELS:
        raise ConfigError(f"model must be one of {', '.join(MODELS)}, got {model!r}")
    if "params" not in data:
        raise ConfigError("missing section [params]")
    if not isinstance(data["params"], Mapping):
        raise ConfigError("section 'params' must be a table")
    params = params_from_mapping(data["params"])

    spin = _section(data, "spin")
    for key in ("L", "m"):
        if key in spin:
            spin[key] = _positive(f"spin.{key}", spin[key], int)
    for key in ("V_m", "U"):
        if key in spin:
            v = spin[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"spin.{key} must be a finite number, got {v!r}")
            spin[key] = float(v)

    evo = _section(data, "evolution")
    ana = _section(data, "analysis")
    out = _section(data, "output")
    extract = ana.get("extract", True)
    if not isinstance(extract, bool):
        raise ConfigError(f"analysis.extract must be true or false, got {extract!r}")
    prefix = out.get("prefix", "run")
    if not isinstance(prefix, str) or not prefix or "/" in prefix:
        raise ConfigError(f"output.prefix must be a non-empty file name prefix, got {prefix!r}")
    directory = out.get("directory", ".")
    if not isinstance(directory, str):
        raise ConfigError(f"output.directory must be a string, got {directory!r}")

    return RunConfig(
        params=params,
        model=model,
        spin=spin,
        t_final=_positive("evolution.t_final", evo.get("t_final")),
        dt=_positive("evolution.dt", evo.get("dt")),
        sample_every=_positive("evolution.sample_every", evo.get("sample_every"), int),
        window=_positive("analysis.window", ana.get("window")),
        extract=extract,
        directory=Path(directory),
        prefix=prefix,
        raw={k: data[k] for k in data},
    )


def read_run_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(load_config(path))
