"""Run configuration: YAML documents validated against a JSON schema.

A document mirrors :class:`tripledot.gatelab.ExperimentConfig`::

    preset: fig3                 # optional, only meaningful for ``fig``
    hubbard: {t: 1.41421356, u: 20.0}
    experiment: {initial: ud, targets: {gate: gate}}
    grid: {dt: 0.01, tau_max: 20.0, record_every: 1}
    noise:
      charge: {amplitude: 0.00714169, f_min: 0.0025, width: 0.01, coupling: [0, 1, 0]}
      nuclear: {b_nuc: 0.1}
    mc: {n: 1000, seed: 7, workers: 1}
    output: {path: out.csv}

``noise.charge.calibration`` may name a record written by ``calibrate``
instead of giving ``amplitude``.  Every key is optional and unknown keys
are rejected.  See ``docs/config.md`` for the field reference.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import yaml

from .gatelab import ChargeNoise, ExperimentConfig
from .hubbard import HubbardParams

__all__ = [
    "ConfigError",
    "SCHEMA",
    "PRESETS",
    "RunConfig",
    "load_document",
    "load_preset",
    "merge",
    "validate",
    "run_config",
    "read_calibration",
]

PRESETS = ("fig2", "fig3", "fig4", "fig5")


class ConfigError(ValueError):
    """Malformed or inconsistent configuration (a usage error)."""


_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_triple = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}


def _obj(props: dict, **extra) -> dict:
    return {"type": "object", "properties": props, "additionalProperties": False, **extra}


SCHEMA = _obj(
    {
        "preset": {"enum": list(PRESETS)},
        "hubbard": _obj(
            {
                "e": _triple,
                "t": _num,
                "t_ac": _num,
                "t_cb": _num,
                "u": {"oneOf": [{"type": "number", "minimum": 0}, _triple]},
            }
        ),
        "experiment": _obj(
            {
                "initial": {"enum": ["uu", "ud", "du", "dd", "uu+ud"]},
                "targets": {
                    "type": "object",
                    "minProperties": 1,
                    "additionalProperties": {"enum": ["self", "gate", "partial_swap"]},
                    "propertyNames": {"pattern": "^[A-Za-z_][A-Za-z0-9_]*$"},
                },
            }
        ),
        "grid": _obj({"dt": _pos, "tau_max": _pos, "record_every": {"type": "integer", "minimum": 1}}),
        "noise": _obj(
            {
                "charge": _obj(
                    {
                        "amplitude": {"type": "number", "minimum": 0},
                        "calibration": {"type": "string"},
                        "f_min": {"type": ["number", "null"], "exclusiveMinimum": 0},
                        "f_max": {"type": ["number", "null"], "exclusiveMinimum": 0},
                        "width": _pos,
                        "coupling": _triple,
                    }
                ),
                "nuclear": _obj({"b_nuc": {"type": "number", "minimum": 0}}),
            }
        ),
        "mc": _obj(
            {
                "n": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
                "workers": {"type": "integer", "minimum": 1},
            }
        ),
        "output": _obj({"path": {"type": "string"}}),
    }
)


def validate(doc) -> dict:
    if doc is None:
        doc = {}
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    return doc


def load_document(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}") from None
    return validate(doc)


def load_preset(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files("tripledot.presets").joinpath(f"{name}.yaml").read_text(encoding="utf-8")
    return validate(yaml.safe_load(text))


def merge(base: dict, over: dict) -> dict:
    """Recursive dict merge; ``over`` wins, except ``targets`` maps replace wholesale."""
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "targets":
            out[k] = merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def read_calibration(path: str | Path) -> dict:
    """Load a record written by ``calibrate``; it must carry a finite amplitude."""
    try:
        rec = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read calibration record {path}: {exc.strerror}") from None
    amp = rec.get("amplitude") if isinstance(rec, dict) else None
    if not isinstance(amp, (int, float)) or not math.isfinite(amp) or amp < 0:
        raise ConfigError(f"{path} is not a calibration record (no usable 'amplitude')")
    return rec


def _hubbard(d: dict) -> HubbardParams:
    if "t" in d and ("t_ac" in d or "t_cb" in d):
        raise ConfigError("give either hubbard.t or hubbard.t_ac/t_cb, not both")
    t_def = d.get("t", math.sqrt(2.0))
    u = d.get("u", 20.0)
    u = (u, u, u) if isinstance(u, (int, float)) else tuple(u)
    try:
        return HubbardParams(
            e=tuple(d.get("e", (0.0, 0.0, 0.0))),
            t_ac=d.get("t_ac", t_def),
            t_cb=d.get("t_cb", t_def),
            u=u,
        )
    except ValueError as exc:
        raise ConfigError(f"hubbard: {exc}") from None


def _charge(d: dict | None, base_dir: Path) -> ChargeNoise | None:
    if d is None:
        return None
    if "amplitude" in d and "calibration" in d:
        raise ConfigError("noise.charge: give amplitude or calibration, not both")
    if "calibration" in d:
        p = Path(d["calibration"])
        amp = read_calibration(p if p.is_absolute() else base_dir / p)["amplitude"]
    elif "amplitude" in d:
        amp = d["amplitude"]
    else:
        raise ConfigError("noise.charge needs an amplitude or a calibration record")
    kw = {k: d[k] for k in ("f_min", "f_max", "width") if k in d}
    if "coupling" in d:
        kw["coupling"] = tuple(d["coupling"])
    return ChargeNoise(float(amp), **kw)


@dataclass(frozen=True)
class RunConfig:
    experiment: ExperimentConfig
    preset: str | None
    output: str | None


def run_config(doc: dict, base_dir: str | Path = ".") -> RunConfig:
    """Turn a validated document into an experiment description."""
    doc = validate(doc)
    base_dir = Path(base_dir)
    ex = doc.get("experiment", {})
    grid = doc.get("grid", {})
    noise = doc.get("noise", {})
    mc = doc.get("mc", {})
    kw = dict(
        hubbard=_hubbard(doc.get("hubbard", {})),
        charge=_charge(noise.get("charge"), base_dir),
        b_nuc=float(noise.get("nuclear", {}).get("b_nuc", 0.0)),
        n_mc=mc.get("n", 100),
        seed=mc.get("seed", 0),
        workers=mc.get("workers", 1),
        **{k: grid[k] for k in ("dt", "tau_max", "record_every") if k in grid},
    )
    if "initial" in ex:
        kw["initial"] = ex["initial"]
    if "targets" in ex:
        kw["targets"] = ex["targets"]
    try:
        cfg = ExperimentConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(cfg, doc.get("preset"), doc.get("output", {}).get("path"))
