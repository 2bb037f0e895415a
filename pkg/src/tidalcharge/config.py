"""Experiment configuration record and the flat ``key = value`` config format.

A config document is plain text, one ``key = value`` pair per line. ``#``
starts a comment, blank lines are ignored and keys are exactly the
:class:`ExperimentConfig` field names. Every quantity is SI; units are never
written in the file. Keys left out take the defaults below.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from .constants import default_constants

_EV = default_constants().e  # J per eV


class ConfigError(ValueError):
    """Invalid config document or violated config constraint."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class ExperimentConfig:
    # source masses (each pile ~500 kg of lead)
    a: float = 0.353
    b: float = 0.353
    c: float = 0.353
    rho_source: float = 11340.0
    R: float = 1.5
    omega: float = math.pi / 30
    # pendula
    m_bob: float = 1.0
    ell: float = 0.5
    s: float = 0.1
    L_bob: float = 0.05
    r_bob: float = 0.005
    # superconductor
    n_s: float = 1e28
    E_gap: float = 1e-3 * _EV
    superconducting: bool = True
    alpha: float = 11 / 18
    beta_geom: float = -2 / 3
    # numerics
    quad_tol: float = 1e-9
    solver_tol: float = 1e-18
    max_iter: int = 200
    dt: float = 0.25
    t_end: float = 120.0

    def __post_init__(self):
        positive = ("a", "b", "c", "rho_source", "R", "omega", "m_bob", "ell", "s",
                    "L_bob", "r_bob", "n_s", "E_gap", "alpha", "quad_tol", "solver_tol",
                    "dt", "t_end", "max_iter")
        for name in positive:
            value = getattr(self, name)
            # rho_source = 0 is allowed: it switches the sources off
            if name == "rho_source":
                if not (math.isfinite(value) and value >= 0):
                    raise ConfigError("must be non-negative and finite", key=name)
                continue
            if not (math.isfinite(value) and value > 0):
                raise ConfigError("must be strictly positive and finite", key=name)
        if not math.isfinite(self.beta_geom):
            raise ConfigError("must be finite", key="beta_geom")
        if not self.R - self.s / 2 > 0:
            raise ConfigError("R − s/2 must be positive", key="R")
        if self.t_end < self.dt:
            raise ConfigError("t_end must be at least dt", key="t_end")

    @property
    def n_steps(self) -> int:
        """Number of rows on the time grid t = 0, dt, ..., t_end."""
        return int(math.floor(self.t_end / self.dt + 1e-9)) + 1

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def with_value(self, key: str, value) -> "ExperimentConfig":
        if key not in FIELD_TYPES:
            raise ConfigError(f"unknown key; valid keys: {', '.join(FIELD_TYPES)}", key=key)
        return replace(self, **{key: _coerce(key, value)})

    def to_dict(self) -> dict:
        return asdict(self)


FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _coerce(key: str, raw, line: int | None = None):
    kind = FIELD_TYPES[key]
    if isinstance(raw, str):
        raw = raw.strip()
    try:
        if kind == "bool":
            if isinstance(raw, bool):
                return raw
            lowered = str(raw).lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        if kind == "int":
            if isinstance(raw, float) and raw.is_integer():
                return int(raw)
            return int(raw)
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse {raw!r} as {kind}", key=key, line=line) from None


def load_config(text: str) -> ExperimentConfig:
    """Parse a flat ``key = value`` document into a validated config."""
    values = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in FIELD_TYPES:
            raise ConfigError(f"unknown key; valid keys: {', '.join(FIELD_TYPES)}",
                              key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        if not value:
            raise ConfigError("missing value", key=key, line=lineno)
        values[key] = _coerce(key, value, lineno)
    return ExperimentConfig(**values)


def render_config(cfg: ExperimentConfig) -> str:
    """Inverse of :func:`load_config`; floats are written with ``repr`` so they round-trip."""
    out = []
    for name, value in asdict(cfg).items():
        if isinstance(value, bool):
            text = "true" if value else "false"
        else:
            text = repr(value)
        out.append(f"{name} = {text}")
    return "\n".join(out) + "\n"
