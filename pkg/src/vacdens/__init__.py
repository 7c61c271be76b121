"""Regularized vacuum energy densities near boundaries, point sources and a mobile cavity wall."""
from . import boundary, cavity, config, pointsource, quadrature
from .config import ConfigError, RunConfig, parse_config, serialize_config
from .quadrature import QuadratureError, integrate, richardson_limit

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "QuadratureError", "RunConfig", "boundary", "cavity", "config", "integrate",
    "parse_config", "pointsource", "quadrature", "richardson_limit", "serialize_config",
]
