"""Field energy densities around a point-like polarizable source.

Lengths are in units of the cutoff length ``gamma_c`` (``r_hat = r/gamma_c``),
densities ``u = <field^2>/(8 pi)`` in units of ``alpha hbar c / gamma_c^7`` and
space-integrated energies in ``alpha hbar c / gamma_c^4``.

The exponential cutoff ``exp(-(k + k') gamma_c)`` becomes a shifted lower limit
of the auxiliary ``gamma`` integral, so both densities are one-dimensional
integrals of rational functions:

    u_E(r) =  (4/pi^3) int_{gamma_c}^inf (3r^4 - 2r^2 g^2 + 3g^4)/(r^2+g^2)^6 dg
    u_B(r) = -(4/pi^3) int_{gamma_c}^inf  8 r^2 g^2          /(r^2+g^2)^6 dg

For ``r > gamma_c`` the substitution ``g = r t`` gives ``r^-7 int_{gamma_c/r}^inf``
of a fixed kernel, which keeps far-zone values free of under/overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np
from scipy.special import spherical_jn

from .config import CODATA, PhysicalConstants
from .quadrature import DEFAULT_REL_TOL, QuadratureError, integrate

Kind = Literal["electric", "magnetic"]

PREFACTOR = 4.0 / math.pi ** 3
FAR_ZONE_MIN_R = 100.0


def _electric_kernel(t):
    t2 = t * t
    return (3.0 - 2.0 * t2 + 3.0 * t2 * t2) / (1.0 + t2) ** 6


def _magnetic_kernel(t):
    t2 = t * t
    return 8.0 * t2 / (1.0 + t2) ** 6


_KERNELS = {"electric": _electric_kernel, "magnetic": _magnetic_kernel}
_SIGNS = {"electric": 1.0, "magnetic": -1.0}


def _check_kind(kind):
    if kind not in _KERNELS:
        raise ValueError(f"kind must be 'electric' or 'magnetic', got {kind!r}")


def _density(kind: str, r_hat: float, gamma_c: float, rel_tol: float) -> float:
    _check_kind(kind)
    r = float(r_hat)
    if not r >= 0:
        raise ValueError("r_hat must be >= 0")
    if not gamma_c > 0:
        raise ValueError("gamma_c must be positive")
    sign = _SIGNS[kind]
    if r == 0.0:
        # electric integrand reduces to 3 g^-8; magnetic vanishes identically
        return PREFACTOR * 3.0 / (7.0 * gamma_c ** 7) if kind == "electric" else 0.0
    kernel = _KERNELS[kind]
    if r <= gamma_c:
        r2 = r * r
        if kind == "electric":
            f = lambda g: (3 * r2 * r2 - 2 * r2 * g * g + 3 * g ** 4) / (r2 + g * g) ** 6
        else:
            f = lambda g: 8 * r2 * g * g / (r2 + g * g) ** 6
        value = integrate(f, gamma_c, math.inf, rel_tol, scale=gamma_c).value
        return sign * PREFACTOR * value
    value = integrate(kernel, gamma_c / r, math.inf, rel_tol, scale=1.0).value
    return sign * PREFACTOR * value / r ** 7


def u_electric(r_hat: float, gamma_c: float = 1.0, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Electric energy density; finite at the source position."""
    return _density("electric", r_hat, gamma_c, rel_tol)


def u_magnetic(r_hat: float, gamma_c: float = 1.0, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Magnetic energy density; non-positive, zero at the source."""
    return _density("magnetic", r_hat, gamma_c, rel_tol)


@dataclass(frozen=True)
class SourceDensities:
    r_hat: float
    u_electric: float
    u_magnetic: float
    u_total: float


def densities(r_hat: float, gamma_c: float = 1.0, rel_tol: float = DEFAULT_REL_TOL) -> SourceDensities:
    e = u_electric(r_hat, gamma_c, rel_tol)
    m = u_magnetic(r_hat, gamma_c, rel_tol)
    return SourceDensities(float(r_hat), e, m, e + m)


def far_coefficient(kind: Kind, r_probe: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Estimate of the r^-7 coefficient, ``u(r) 16 pi^2 r^7`` (23 or -7).

    Biased by the missing ``int_0^{1/r}`` part of the kernel: O(1/r) electric,
    O(1/r^3) magnetic.
    """
    _check_kind(kind)
    if not r_probe >= FAR_ZONE_MIN_R:
        raise ValueError(f"r_probe must be >= {FAR_ZONE_MIN_R:g} to avoid near-zone contamination")
    tail = integrate(_KERNELS[kind], 1.0 / r_probe, math.inf, rel_tol).value
    return _SIGNS[kind] * 16.0 * math.pi ** 2 * PREFACTOR * tail


def self_energy(kind: Literal["electric", "magnetic", "total"], gamma_c: float = 1.0,
                rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Space integral ``int 4 pi r^2 u(r) dr`` by nested quadrature.

    ``total`` integrates the summed density pointwise, so the cancellation is
    a property of the integrand rather than of two separate results.
    """
    if kind not in ("electric", "magnetic", "total"):
        raise ValueError(f"unknown kind {kind!r}")
    inner_tol = max(1e-14, rel_tol * 1e-2)

    def radial(rs):
        out = np.empty_like(rs)
        for i, r in enumerate(rs):
            if kind == "total":
                u = (_density("electric", r, gamma_c, inner_tol)
                     + _density("magnetic", r, gamma_c, inner_tol))
            else:
                u = _density(kind, r, gamma_c, inner_tol)
            out[i] = 4.0 * math.pi * r * r * u
        return out

    if kind == "total":
        # the integrand changes sign; bound the error by the electric scale
        scale = abs(self_energy("electric", gamma_c, rel_tol))
        near = integrate(radial, 0.0, gamma_c, rel_tol, abs_tol=0.1 * rel_tol * scale)
        far = integrate(radial, gamma_c, math.inf, rel_tol, scale=gamma_c,
                        abs_tol=0.1 * rel_tol * scale)
    else:
        near = integrate(radial, 0.0, gamma_c, rel_tol)
        far = integrate(radial, gamma_c, math.inf, rel_tol, scale=gamma_c)
    return near.value + far.value


def self_energy_closed(kind: Literal["electric", "magnetic", "total"], gamma_c: float = 1.0) -> float:
    """Closed values +-3/(16 pi gamma_c^4) from swapping the r and gamma integrals."""
    e = 3.0 / (16.0 * math.pi * gamma_c ** 4)
    return {"electric": e, "magnetic": -e, "total": 0.0}[kind]


# --- singular (distributional) series at the source ------------------------

@dataclass(frozen=True)
class SeriesTerm:
    delta_order: int | None   # None: regular r^-n term; k: k-th derivative of delta(r)
    inverse_power: int
    coefficient: Fraction


@dataclass(frozen=True)
class SingularSeries:
    """``prefactor_sign * hbar c alpha/(4 pi)^2 * sum coeff * delta^(k)(r) / r^n``.

    Data only: distributions have no pointwise values.
    """
    kind: str
    terms: tuple[SeriesTerm, ...]
    prefactor_sign: int

    def far_coefficient(self) -> Fraction:
        return self.prefactor_sign * next(t.coefficient for t in self.terms if t.delta_order is None)


def _series(kind, sign, rows):
    return SingularSeries(kind, tuple(SeriesTerm(d, n, Fraction(c)) for d, n, c in rows), sign)


_SERIES = {
    "electric": _series("electric", +1, [
        (None, 7, 23), (0, 6, -23), (1, 5, 10),
        (2, 4, Fraction(-7, 3)), (3, 3, Fraction(1, 3)), (4, 2, Fraction(1, 15)),
    ]),
    "magnetic": _series("magnetic", -1, [
        (None, 7, 7), (0, 6, -7), (1, 5, 2),
        (2, 4, Fraction(1, 3)), (3, 3, Fraction(-1, 3)), (4, 2, Fraction(-1, 15)),
    ]),
}


def singular_series(kind: Kind) -> SingularSeries:
    _check_kind(kind)
    return _SERIES[kind]


# --- spherical-Bessel double integral (independent check) -------------------

def _j1_over(x):
    # j1(x)/x with the small-argument series below 1e-3
    small = np.abs(x) < 1e-3
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0,
                    spherical_jn(1, safe) / safe)


def bessel_oracle(kind: Kind, r_hat: float, rel_tol: float = 1e-11) -> float:
    """Density from the (k, k') double integral with damping exp(-(k+k')).

    Iterated quadrature, inner k' first.  The integrand carries
    ``k^3 k'^3 / (k + k')`` and the spherical Bessel bracket; the overall
    normalization is ``alpha hbar c / (2 pi^3)`` for both kinds, fixed by the
    far-zone 23/r^7 and 7/r^7 laws.
    """
    _check_kind(kind)
    r = float(r_hat)
    if not r > 0:
        raise ValueError("the Bessel representation needs r_hat > 0")
    # oscillation-resolving split point; the damping scale is 1
    hint = 8.0

    def inner(k):
        kr = k * r
        j0k, j1k = spherical_jn(0, kr), spherical_jn(1, kr)
        j1k_over = _j1_over(kr)

        def f(kp):
            kpr = kp * r
            j0p = spherical_jn(0, kpr)
            if kind == "electric":
                j1p_over = _j1_over(kpr)
                bracket = (j0k * j0p - j0k * j1p_over - j1k_over * j0p
                           + 3.0 * j1k_over * j1p_over)
            else:
                bracket = j1k * spherical_jn(1, kpr)
            return bracket * (k * kp) ** 3 * np.exp(-(k + kp)) / (k + kp)

        return integrate(f, 0.0, math.inf, rel_tol, scale=hint, abs_tol=1e-15).value

    def outer(ks):
        return np.array([inner(k) for k in ks])

    total = integrate(outer, 0.0, math.inf, rel_tol, scale=hint, abs_tol=1e-14)
    sign = 1.0 if kind == "electric" else -1.0
    return sign * total.value / (2.0 * math.pi ** 3)


def bessel_oracle_electric(r_hat: float, rel_tol: float = 1e-11) -> float:
    return bessel_oracle("electric", r_hat, rel_tol)


# --- SI conversion ------------------------------------------------------------

def density_unit(alpha: float, gamma_c: float, constants: PhysicalConstants = CODATA) -> float:
    """SI value of one density unit, alpha hbar c / gamma_c^7 (linear in alpha)."""
    return alpha * constants.hbar * constants.c / gamma_c ** 7


def energy_unit(alpha: float, gamma_c: float, constants: PhysicalConstants = CODATA) -> float:
    return alpha * constants.hbar * constants.c / gamma_c ** 4


__all__ = [
    "QuadratureError", "SeriesTerm", "SingularSeries", "SourceDensities", "bessel_oracle",
    "bessel_oracle_electric", "densities", "density_unit", "energy_unit", "far_coefficient",
    "self_energy", "self_energy_closed", "singular_series", "u_electric", "u_magnetic",
]
