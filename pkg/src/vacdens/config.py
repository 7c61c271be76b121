"""Physical constants, run configuration and dimensionless cavity scaling.

Internally every solver works with hbar = c = 1 and a per-problem length
unit (c*eta for the wall, gamma_c for the point source, L0 for the cavity).
SI values enter only here and in the output layer.

The run configuration is a flat ``key = value`` document::

    # wall
    eta = 5e-17
    # cavity
    L0 = 1e-5
    M = 1e-11
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Callable

from scipy import constants as _sc


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is the 1-based source line if known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = _sc.hbar
    c: float = _sc.c

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0):
            raise ConfigError("hbar and c must be positive")


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class BoundaryConfig:
    eta: float = 5e-17        # s; cutoff frequency 1/eta = 2e16 s^-1
    z_min: float = 0.0        # units of c*eta
    z_max: float = 4.0
    samples: int = 400

    def __post_init__(self):
        if not self.eta > 0:
            raise ConfigError("eta must be positive")
        if not self.z_min >= 0:
            raise ConfigError("z_min must be >= 0")
        if not self.z_max > self.z_min:
            raise ConfigError("z_max must exceed z_min")
        if self.samples < 2:
            raise ConfigError("samples must be >= 2")


@dataclass(frozen=True)
class SourceConfig:
    alpha: float = 1.0        # polarizability, pure scale factor
    gamma_c: float = 1.0      # cutoff length (m), shifted lower gamma limit
    r_min: float = 1e-2       # units of gamma_c
    r_max: float = 1e4
    samples: int | None = None  # None: 64 points per decade (log) or 400 (linear)
    log_spacing: bool = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError("alpha must be positive")
        if not self.gamma_c > 0:
            raise ConfigError("gamma_c must be positive")
        if not self.r_min >= 0:
            raise ConfigError("r_min must be >= 0")
        if not self.r_max > self.r_min:
            raise ConfigError("r_max must exceed r_min")
        if self.log_spacing and self.r_min == 0:
            raise ConfigError("log_spacing requires r_min > 0")
        if self.samples is not None and self.samples < 2:
            raise ConfigError("samples must be >= 2")

    def grid_size(self) -> int:
        if self.samples is not None:
            return self.samples
        if self.log_spacing:
            return max(2, int(round(64 * math.log10(self.r_max / self.r_min))) + 1)
        return 400


@dataclass(frozen=True)
class CavityConfig:
    L0: float = 1e-5          # m
    M: float = 1e-11          # kg
    omega_osc: float = 1e5    # s^-1
    omega_cut: float | None = 1e16
    n_modes: int | None = None
    sigma_over_L0: float | None = None
    x_min: float = 0.9
    x_max: float = 1.0
    samples: int = 401

    def __post_init__(self):
        for name in ("L0", "M", "omega_osc"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if (self.omega_cut is None) == (self.n_modes is None):
            raise ConfigError("exactly one of omega_cut and n_modes must be set")
        if self.omega_cut is not None and not self.omega_cut > 0:
            raise ConfigError("omega_cut must be positive")
        if self.n_modes is not None and self.n_modes < 1:
            raise ConfigError("n_modes must be >= 1")
        if self.sigma_over_L0 is not None and not 0 < self.sigma_over_L0 <= 0.1:
            raise ConfigError("sigma_over_L0 must lie in (0, 0.1]")
        if not 0 <= self.x_min < self.x_max <= 1:
            raise ConfigError("need 0 <= x_min < x_max <= 1")
        if self.samples < 2:
            raise ConfigError("samples must be >= 2")


@dataclass(frozen=True)
class CavityDimensionless:
    omega_hat: float   # omega_osc L0 / (pi c)
    mu: float          # hbar / (M omega_osc L0^2); mu/2 is the ground-state variance of q/L0
    n_modes: int

    def __post_init__(self):
        if not (self.omega_hat >= 0 and self.mu >= 0 and self.n_modes >= 1):
            raise ConfigError("dimensionless cavity parameters must be non-negative, N >= 1")


@dataclass(frozen=True)
class RunConfig:
    boundary: BoundaryConfig = field(default_factory=BoundaryConfig)
    source: SourceConfig = field(default_factory=SourceConfig)
    cavity: CavityConfig = field(default_factory=CavityConfig)
    constants: PhysicalConstants = CODATA
    rel_tol: float = 1e-10

    def __post_init__(self):
        if not 1e-14 <= self.rel_tol <= 1e-2:
            raise ConfigError("rel_tol must lie in [1e-14, 1e-2]")


def n_modes_from_cutoff(omega_cut: float, L0: float, c: float = CODATA.c) -> int:
    """Number of cavity modes j*pi*c/L0 at or below ``omega_cut``."""
    if not (omega_cut > 0 and L0 > 0):
        raise ConfigError("omega_cut and L0 must be positive")
    n = math.floor(omega_cut * L0 / (math.pi * c))
    if n < 1:
        raise ConfigError("cutoff lies below the fundamental cavity mode")
    return n


def derive_dimensionless(cfg: CavityConfig, constants: PhysicalConstants = CODATA) -> CavityDimensionless:
    omega_hat = cfg.omega_osc * cfg.L0 / (math.pi * constants.c)
    if cfg.sigma_over_L0 is not None:
        mu = 2.0 * cfg.sigma_over_L0 ** 2
    else:
        mu = constants.hbar / (cfg.M * cfg.omega_osc * cfg.L0 ** 2)
    if cfg.n_modes is not None:
        n = cfg.n_modes
    else:
        n = n_modes_from_cutoff(cfg.omega_cut, cfg.L0, constants.c)
    return CavityDimensionless(omega_hat, mu, n)


# --- key = value documents -------------------------------------------------

def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _parse_opt_int(text: str) -> int | None:
    return None if text.lower() == "none" else _parse_int(text)


def _parse_opt_float(text: str) -> float | None:
    return None if text.lower() == "none" else float(text)


# key -> (section, field, parser)
KEYS: dict[str, tuple[str, str, Callable[[str], Any]]] = {
    "hbar": ("constants", "hbar", float),
    "c": ("constants", "c", float),
    "rel_tol": ("run", "rel_tol", float),
    "eta": ("boundary", "eta", float),
    "z_min": ("boundary", "z_min", float),
    "z_max": ("boundary", "z_max", float),
    "z_samples": ("boundary", "samples", _parse_int),
    "alpha": ("source", "alpha", float),
    "gamma_c": ("source", "gamma_c", float),
    "r_min": ("source", "r_min", float),
    "r_max": ("source", "r_max", float),
    "r_samples": ("source", "samples", _parse_opt_int),
    "log_spacing": ("source", "log_spacing", _parse_bool),
    "L0": ("cavity", "L0", float),
    "M": ("cavity", "M", float),
    "omega_osc": ("cavity", "omega_osc", float),
    "omega_cut": ("cavity", "omega_cut", _parse_opt_float),
    "n_modes": ("cavity", "n_modes", _parse_opt_int),
    "sigma_over_L0": ("cavity", "sigma_over_L0", _parse_opt_float),
    "x_min": ("cavity", "x_min", float),
    "x_max": ("cavity", "x_max", float),
    "x_samples": ("cavity", "samples", _parse_int),
}


def parse_assignments(text: str) -> dict[str, tuple[Any, int]]:
    """Parse a key=value document into ``{key: (value, line_number)}``."""
    out: dict[str, tuple[Any, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        try:
            parsed = KEYS[key][2](value)
        except ValueError:
            raise ConfigError(f"malformed value for {key}: {value!r}", lineno) from None
        if isinstance(parsed, float) and not math.isfinite(parsed):
            raise ConfigError(f"{key} must be finite", lineno)
        out[key] = (parsed, lineno)
    return out


def build_config(values: dict[str, tuple[Any, int | None]]) -> RunConfig:
    sections: dict[str, dict[str, Any]] = {"constants": {}, "run": {}, "boundary": {},
                                           "source": {}, "cavity": {}}
    lines: dict[str, dict[str, int]] = {name: {} for name in sections}
    for key, (value, lineno) in values.items():
        section, name, _ = KEYS[key]
        sections[section][name] = value
        if lineno is not None:
            lines[section][name] = lineno
    cav = sections["cavity"]
    # setting one cutoff form clears the default of the other
    if "n_modes" in cav and cav["n_modes"] is not None and "omega_cut" not in cav:
        cav["omega_cut"] = None

    def make(section, cls, **extra):
        try:
            return cls(**sections[section], **extra)
        except ConfigError as exc:
            # attribute the error to the line of the first field it names
            line = next((ln for name, ln in lines[section].items()
                         if re.search(rf"\b{re.escape(name)}\b", exc.message)), None)
            raise ConfigError(exc.message, line) from None

    constants = make("constants", PhysicalConstants)
    return make("run", RunConfig,
                boundary=make("boundary", BoundaryConfig),
                source=make("source", SourceConfig),
                cavity=make("cavity", CavityConfig),
                constants=constants)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a key=value run configuration."""
    return build_config(parse_assignments(text))


def _format(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value)


def serialize_config(cfg: RunConfig) -> str:
    """Inverse of :func:`parse_config` (every key written explicitly)."""
    objects = {"constants": cfg.constants, "run": cfg, "boundary": cfg.boundary,
               "source": cfg.source, "cavity": cfg.cavity}
    lines = []
    for key, (section, name, _) in KEYS.items():
        lines.append(f"{key} = {_format(getattr(objects[section], name))}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CODATA", "BoundaryConfig", "CavityConfig", "CavityDimensionless", "ConfigError",
    "PhysicalConstants", "RunConfig", "SourceConfig", "build_config", "derive_dimensionless",
    "n_modes_from_cutoff", "parse_assignments", "parse_config", "serialize_config",
]
