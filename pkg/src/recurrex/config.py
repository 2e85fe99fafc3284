"""Layered run configuration: defaults < TOML file < dotted overrides.

Overrides use dotted keys ("embedding.bins=24") so the CLI can forward
arbitrary flags without enumerating every knob.  All values are checked
up front; a bad setting fails before any audio is read.
"""

import dataclasses
import math
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ParameterError, ParseError


@dataclass
class SignalConfig:
    frame_ms: float = 20.0
    hop_ms: float = 10.0
    segments: bool = False
    segment_s: float = 1.0
    stride_s: float = 0.5


@dataclass
class EmbeddingConfig:
    max_lag: int = 0  # 0 = quarter of the frame length
    bins: int = 16
    smooth: int = 3
    max_m: int = 10
    r_tol: float = 10.0
    a_tol: float = 2.0
    fnn_threshold: float = 0.01


@dataclass
class RecurrenceConfig:
    norm: float = 1.0  # 1, 2, or inf
    epsilon: str = "fixed_rr"
    value: float = 0.15


@dataclass
class RqaConfig:
    include_loi: bool = True


@dataclass
class EvalConfig:
    protocol: str = "sd5"
    norm: str = "g"
    seed: int = 0
    k: int = 5
    stratify: bool = False
    grid: list = field(default_factory=lambda: [0.001, 0.01, 0.1, 1.0, 10.0, 30.0])
    max_iter: int = 500
    tol: float = 1e-6


@dataclass
class RuntimeConfig:
    workers: int = 0  # 0 = RECURREX_THREADS or the CPU count


@dataclass
class Config:
    signal: SignalConfig = field(default_factory=SignalConfig)
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    recurrence: RecurrenceConfig = field(default_factory=RecurrenceConfig)
    rqa: RqaConfig = field(default_factory=RqaConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)


def _coerce(raw, ftype, key):
    if isinstance(raw, str):
        s = raw.strip()
        try:
            if ftype is bool:
                low = s.lower()
                if low in ("1", "true", "yes", "on"):
                    return True
                if low in ("0", "false", "no", "off"):
                    return False
                raise ValueError(s)
            if ftype is int:
                return int(s)
            if ftype is float:
                return math.inf if s in ("inf", "Inf") else float(s)
            if ftype is list:
                return [float(x) for x in s.split(",") if x.strip()]
            return s
        except ValueError:
            raise ParameterError(f"cannot read {key}={raw!r} as {ftype.__name__}")
    if ftype is float and isinstance(raw, (int, float)):
        return float(raw)
    if ftype is bool and not isinstance(raw, bool):
        raise ParameterError(f"{key} expects a boolean, got {raw!r}")
    if ftype is list and isinstance(raw, (list, tuple)):
        return [float(x) for x in raw]
    if ftype is int and isinstance(raw, bool):
        raise ParameterError(f"{key} expects an integer, got {raw!r}")
    if not isinstance(raw, ftype):
        raise ParameterError(f"{key} expects {ftype.__name__}, got {raw!r}")
    return raw


def _set_dotted(cfg, key, value):
    parts = key.split(".")
    if len(parts) != 2:
        raise ParameterError(f"expected section.option, got {key!r}")
    section, option = parts
    if not hasattr(cfg, section):
        raise ParameterError(f"unknown config section {section!r}")
    sub = getattr(cfg, section)
    ftypes = {f.name: f.type for f in dataclasses.fields(sub)}
    if option not in ftypes:
        raise ParameterError(f"unknown option {option!r} in section {section!r}")
    ftype = ftypes[option]
    if isinstance(ftype, str):  # "float" under from __future__ annotations
        ftype = {"float": float, "int": int, "bool": bool,
                 "str": str, "list": list}[ftype]
    setattr(sub, option, _coerce(value, ftype, key))


def validate(cfg):
    sig, emb, rec, ev = cfg.signal, cfg.embedding, cfg.recurrence, cfg.eval
    if sig.frame_ms <= 0 or sig.hop_ms <= 0:
        raise ParameterError("frame_ms and hop_ms must be positive")
    if sig.segment_s <= 0 or sig.stride_s <= 0:
        raise ParameterError("segment_s and stride_s must be positive")
    if emb.bins < 2:
        raise ParameterError("embedding.bins must be >= 2")
    if emb.smooth < 0:
        raise ParameterError("embedding.smooth must be >= 0")
    if emb.max_lag < 0:
        raise ParameterError("embedding.max_lag must be >= 0 (0 = auto)")
    if emb.max_m < 2:
        raise ParameterError("embedding.max_m must be >= 2")
    if emb.r_tol <= 0 or emb.a_tol <= 0:
        raise ParameterError("FNN tolerances must be positive")
    if not 0 < emb.fnn_threshold < 1:
        raise ParameterError("embedding.fnn_threshold must lie in (0, 1)")
    if rec.norm not in (1.0, 2.0, math.inf):
        raise ParameterError("recurrence.norm must be 1, 2, or inf")
    if rec.epsilon not in ("fixed_value", "fixed_rr", "sigma_ratio"):
        raise ParameterError(f"unknown epsilon criterion {rec.epsilon!r}")
    if rec.epsilon == "fixed_rr" and not 0 < rec.value < 1:
        raise ParameterError("fixed_rr target must lie in (0, 1)")
    if rec.epsilon != "fixed_rr" and rec.value <= 0:
        raise ParameterError("epsilon value must be positive")
    if ev.protocol not in ("sd5", "si", "loso"):
        raise ParameterError(f"unknown protocol {ev.protocol!r}")
    if ev.norm not in ("g", "ps", "pf"):
        raise ParameterError(f"unknown normalization {ev.norm!r}")
    if ev.k < 2:
        raise ParameterError("eval.k must be >= 2")
    if not ev.grid:
        raise ParameterError("eval.grid must not be empty")
    if cfg.runtime.workers < 0:
        raise ParameterError("runtime.workers must be >= 0")
    return cfg


def load_config(path=None, overrides=None):
    """Build a validated Config from an optional TOML file plus overrides.

    overrides is a mapping of dotted keys to values (strings are coerced
    to the field's type).  Flags win over the file, the file over
    defaults.
    """
    cfg = Config()
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(f"bad TOML in {path}: {exc}") from exc
        for section, options in data.items():
            if not isinstance(options, dict):
                raise ParameterError(
                    f"top-level config key {section!r} is not a section")
            for option, value in options.items():
                _set_dotted(cfg, f"{section}.{option}", value)
    for key, value in (overrides or {}).items():
        _set_dotted(cfg, key, value)
    return validate(cfg)
