"""Renormalized field fluctuations outside a perfectly conducting half-space.

Positions are ``z_hat = z / (c*eta)`` where ``1/eta`` is the exponential
(time-splitting) frequency cutoff; fluctuation values are in units of
``hbar / (c^3 eta^4)``.  The conductor occupies ``z < 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .config import CODATA, PhysicalConstants
from .quadrature import DEFAULT_REL_TOL, integrate

# zero of 12 z^2 - 1
Z_NODE = 1.0 / (2.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class BoundaryProfilePoint:
    z_hat: float
    e2_renorm: float
    b2_renorm: float
    e2_ideal: float | None  # None at the interface


def _check_z(z_hat):
    z = np.asarray(z_hat, dtype=float)
    if np.any(z < 0) or np.any(np.isnan(z)):
        raise ValueError("z_hat must be >= 0 (z < 0 is inside the conductor)")
    return z


def _scalar_or_array(z, value):
    return float(value) if np.ndim(z) == 0 else value


def vacuum_term() -> float:
    """Space-independent <E^2> = <B^2> without the wall: 12/pi."""
    return 12.0 / math.pi


def e2_renorm(z_hat):
    """(4/pi) (12 z^2 - 1) / (4 z^2 + 1)^3, finite at the interface."""
    z = _check_z(z_hat)
    z2 = z * z
    value = (4.0 / math.pi) * (12.0 * z2 - 1.0) / (4.0 * z2 + 1.0) ** 3
    return _scalar_or_array(z_hat, value)


def b2_renorm(z_hat):
    value = e2_renorm(z_hat)
    return -value


def e2_total(z_hat):
    """Unrenormalized conductor-limit fluctuation: vacuum term plus renormalized part."""
    return vacuum_term() + e2_renorm(z_hat)


def b2_total(z_hat):
    return vacuum_term() + b2_renorm(z_hat)


def e2_renorm_derivative(z_hat):
    # d/dz (12z^2-1)/(4z^2+1)^3 = 48 z (1 - 4 z^2) / (4 z^2 + 1)^4
    z = _check_z(z_hat)
    value = (4.0 / math.pi) * 48.0 * z * (1.0 - 4.0 * z * z) / (4.0 * z * z + 1.0) ** 4
    return _scalar_or_array(z_hat, value)


def ideal_limit_e2(z_hat):
    """Sharp-cutoff limit 3 / (4 pi z^4); undefined at the interface."""
    z = np.asarray(z_hat, dtype=float)
    if np.any(~(z > 0)):
        raise ValueError("ideal-conductor limit is not valid at z = 0 (or z < 0)")
    return _scalar_or_array(z_hat, 3.0 / (4.0 * math.pi * z ** 4))


def ideal_limit_b2(z_hat):
    return -ideal_limit_e2(z_hat)


def profile_point(z_hat: float) -> BoundaryProfilePoint:
    e2 = e2_renorm(z_hat)
    ideal = ideal_limit_e2(z_hat) if z_hat > 0 else None
    return BoundaryProfilePoint(float(z_hat), e2, -e2, ideal)


def integral_check(rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Quadrature of the renormalized profile over the whole half-space.

    The positive and negative lobes are integrated separately (split at the
    sign change) so the cancellation happens in one final addition.
    """
    f = e2_renorm
    negative = integrate(f, 0.0, Z_NODE, rel_tol).value
    positive = integrate(f, Z_NODE, math.inf, rel_tol, scale=1.0).value
    return math.fsum((negative, positive))


def abs_integral(rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Integral of |e2_renorm| over z_hat >= 0 (the natural scale of integral_check)."""
    negative = integrate(e2_renorm, 0.0, Z_NODE, rel_tol).value
    positive = integrate(e2_renorm, Z_NODE, math.inf, rel_tol, scale=1.0).value
    return positive - negative


def extrema():
    """Analytic extrema: minimum -4/pi at the interface, maximum 1/pi at z_hat = 1/2."""
    return (0.0, -4.0 / math.pi), (0.5, 1.0 / math.pi)


def numerical_extrema(z_max: float = 10.0, grid: int = 10001):
    """Grid scan on [0, z_max] refined by root-finding on the exact derivative."""
    zs = np.linspace(0.0, z_max, grid)
    vals = e2_renorm(zs)

    def refine(i):
        if i == 0 or i == grid - 1:
            return float(zs[i])
        lo, hi = zs[i - 1], zs[i + 1]
        d_lo, d_hi = e2_renorm_derivative(lo), e2_renorm_derivative(hi)
        if d_lo == 0.0:
            return float(lo)
        if d_hi == 0.0:
            return float(hi)
        return brentq(e2_renorm_derivative, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    z_lo = refine(int(np.argmin(vals)))
    z_hi = refine(int(np.argmax(vals)))
    return (z_lo, e2_renorm(z_lo)), (z_hi, e2_renorm(z_hi))


def half_width() -> float:
    """Width of the region where the profile exceeds half its maximum."""
    half = 0.5 / math.pi
    g = lambda z: e2_renorm(z) - half
    left = brentq(g, Z_NODE, 0.5, xtol=1e-14)
    right = brentq(g, 0.5, 5.0, xtol=1e-14)
    return right - left


# --- SI conversion ------------------------------------------------------------

def fluctuation_unit(eta: float, constants: PhysicalConstants = CODATA) -> float:
    """hbar / (c^3 eta^4): SI value of one dimensionless fluctuation unit."""
    return constants.hbar / (constants.c ** 3 * eta ** 4)


def e2_renorm_si(z, eta: float, constants: PhysicalConstants = CODATA):
    """Renormalized <E^2> at physical distance ``z`` (m) for cutoff time ``eta`` (s)."""
    return fluctuation_unit(eta, constants) * e2_renorm(np.asarray(z) / (constants.c * eta))


def z_of_maximum_si(eta: float, constants: PhysicalConstants = CODATA) -> float:
    return extrema()[1][0] * constants.c * eta
