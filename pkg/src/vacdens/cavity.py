"""Scalar field energy density in a 1D cavity with one quantum-mobile wall.

Dimensionless conventions: ``x_hat = x / L0`` in [0, 1] (mobile wall at 1),
mode ``k`` has wavenumber ``pi k / L0``; the cavity is fixed by
``(omega_hat, mu, N)`` (see :class:`vacdens.config.CavityDimensionless`).

``S(x_hat)`` is the dimensionless change of the renormalized energy density,

    S(x) = sum_{k,p} (-1)^(k+p) cos(pi (k-p) x) T(k, p),
    T(k, p) = sum_j k j p / ((omega_hat + k + j)(omega_hat + p + j)),

with one cutoff N on all three indices.  The physical density (J/m) is
``(mu/2) (hbar pi c / L0^2) S``.

Phases are evaluated as ``cos(pi (k-p) y)`` with ``y = 1 - x_hat`` (equal to
``(-1)^(k+p) cos(pi (k-p) x_hat)``), with the integer multiple of ``y``
reduced mod 2 exactly before multiplying by pi.  S is an alternating sum far
smaller than sum|T| away from the wall, so phase rounding would otherwise
dominate the error.  Reductions use ``math.fsum`` so every sample is exactly
rounded and independent of evaluation order.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import partial
from typing import Sequence

import numpy as np

from .config import CODATA, CavityDimensionless, PhysicalConstants
from .parallel import map_ordered
from .quadrature import RichardsonResult, integrate, richardson_limit

MAX_TABLE_MODES = 5000
PERTURBATIVE_NB = 0.1


class PerturbativeWarning(UserWarning):
    """Mean wall excitation too large for the lowest-order dressed state."""


class ResourceError(MemoryError):
    pass


@dataclass(frozen=True)
class CouplingValue:
    k: int
    j: int
    c_hat: float   # units hbar pi c / L0
    d_hat: float


@dataclass(frozen=True)
class WallState:
    n_b: float
    p0: float
    p1: float
    mu: float

    def __post_init__(self):
        if not (self.n_b >= 0 and math.isfinite(self.n_b)):
            raise ValueError("n_b must be finite and non-negative")
        if self.p0 + self.p1 != 1.0:
            raise ValueError("p0 + p1 must equal 1")


@dataclass(frozen=True, eq=False)
class InnerSumTable:
    n_modes: int
    omega_hat: float
    T: np.ndarray      # read-only, symmetric, T[k-1, p-1]
    diff: np.ndarray   # k - p as float, read-only

    def __getstate__(self):
        return {"n_modes": self.n_modes, "omega_hat": self.omega_hat,
                "T": np.array(self.T), "diff": np.array(self.diff)}

    def __setstate__(self, state):
        for key in ("T", "diff"):
            state[key].setflags(write=False)
        for key, value in state.items():
            object.__setattr__(self, key, value)


def _modes(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=float)


def _check_index(i: int, n: int, name: str):
    if not 1 <= i <= n:
        raise IndexError(f"mode index {name}={i} outside 1..{n}")


def coupling(k: int, j: int, params: CavityDimensionless) -> CouplingValue:
    _check_index(k, params.n_modes, "k")
    _check_index(j, params.n_modes, "j")
    sign = -1.0 if (k + j) % 2 else 1.0
    c_hat = sign * math.sqrt(params.mu * k * j / 8.0)
    return CouplingValue(k, j, c_hat, c_hat / (params.omega_hat + k + j))


def build_inner_sum_table(params: CavityDimensionless) -> InnerSumTable:
    """Precompute T(k, p); O(N^3) once, reused for every position sample."""
    n = params.n_modes
    if n > MAX_TABLE_MODES:
        raise ResourceError(f"inner-sum table for N={n} exceeds the {MAX_TABLE_MODES}-mode budget")
    m = _modes(n)
    inv = 1.0 / (params.omega_hat + m[:, None] + m[None, :])   # [k, j]
    weighted = inv * m[None, :]                                  # j / (W + k + j)
    table = np.empty((n, n))
    for i in range(n):
        # row i, columns p >= k; mirrored below for exact symmetry
        inner = np.sum(weighted[i][None, :] * inv[i:], axis=1)
        table[i, i:] = m[i] * m[i:] * inner
        table[i:, i] = table[i, i:]
    table.setflags(write=False)
    diff = m[:, None] - m[None, :]
    diff.setflags(write=False)
    return InnerSumTable(n, params.omega_hat, table, diff)


_SPLIT = 134217729.0  # 2**27 + 1


def _half_turns(n: np.ndarray, y: float) -> np.ndarray:
    """``n * y`` reduced to [-1, 1] modulo 2, for integer-valued ``n``.

    ``y`` is split so that ``n * y_hi`` is exact for ``|n| < 2**26``; only the
    small ``n * y_lo`` part is rounded.
    """
    c = _SPLIT * y
    hi = c - (c - y)
    lo = y - hi
    r = np.fmod(n * hi, 2.0) + n * lo
    return r - 2.0 * np.round(0.5 * r)


def _cos_pi(n: np.ndarray, y: float) -> np.ndarray:
    return np.cos(math.pi * _half_turns(n, y))


def _sin_pi(n: np.ndarray, y: float) -> np.ndarray:
    return np.sin(math.pi * _half_turns(n, y))


def _check_x(x_hat: float) -> float:
    x = float(x_hat)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x_hat must lie in [0, 1], got {x_hat!r}")
    return x


def delta_density(x_hat: float, table: InnerSumTable) -> float:
    """S(x_hat) from the precomputed table; O(N^2) per point."""
    y = 1.0 - _check_x(x_hat)
    terms = table.T * _cos_pi(table.diff, y)
    return math.fsum(terms.ravel())


def delta_density_fast(x_hat: float, params: CavityDimensionless) -> float:
    """S(x_hat) as a sum of squares over j; no table needed.

    sum_j [C_j^2 + S_j^2] with C_j = sum_k (-1)^k cos(pi k x) k sqrt(j)/(W+k+j)
    and S_j the sine analogue.
    """
    y = 1.0 - _check_x(x_hat)
    m = _modes(params.n_modes)
    amp = m[None, :] * np.sqrt(m)[:, None] / (params.omega_hat + m[None, :] + m[:, None])  # [j, k]
    c = np.sum(amp * _cos_pi(m, y)[None, :], axis=1)
    s = np.sum(amp * _sin_pi(m, y)[None, :], axis=1)
    return math.fsum(np.concatenate((c * c, s * s)))


def wall_excitation(params: CavityDimensionless) -> WallState:
    """Mean excitation number of the wall in the dressed ground state."""
    m = _modes(params.n_modes)
    terms = m[:, None] * m[None, :] / (params.omega_hat + m[:, None] + m[None, :]) ** 2
    n_b = 0.25 * params.mu * math.fsum(terms.ravel())
    if n_b >= 1.0:
        warnings.warn(f"N_b = {n_b:.4g} >= 1: mixture weight p0 = 1 - N_b is negative; "
                      "the lowest-order dressed state does not apply", PerturbativeWarning,
                      stacklevel=2)
    elif n_b > PERTURBATIVE_NB:
        warnings.warn(f"N_b = {n_b:.4g} exceeds {PERTURBATIVE_NB}; perturbative validity is doubtful",
                      PerturbativeWarning, stacklevel=2)
    return WallState(n_b, 1.0 - n_b, n_b, params.mu)


def position_pdf(q_hat, state: WallState):
    """Wall displacement density per unit q/L0: (1-N_b) f0 + N_b f1."""
    if not state.mu > 0:
        raise ValueError("position_pdf needs mu > 0")
    q = np.asarray(q_hat, dtype=float)
    mu = state.mu
    gauss = np.exp(-q * q / mu)
    f0 = gauss / math.sqrt(math.pi * mu)
    f1 = math.sqrt(4.0 / math.pi) * mu ** -1.5 * q * q * gauss
    out = state.p0 * f0 + state.p1 * f1
    return float(out) if np.ndim(q_hat) == 0 else out


def averaged_cosine(n: int, k: int, p: int, x_hat: float, mu: float) -> float:
    """<cos[(kappa_k - kappa_p) x]> over the n-th oscillator state (n = 0, 1)."""
    if n not in (0, 1):
        raise ValueError("n must be 0 or 1")
    if mu < 0:
        raise ValueError("mu must be >= 0")
    a = math.pi * (k - p) * x_hat
    e = 0.25 * mu * a * a
    value = math.exp(-e) * math.cos(a)
    return value if n == 0 else value * (1.0 - 2.0 * e)


def averaged_cosine_oracle(n: int, k: int, p: int, x_hat: float, mu: float,
                           exact_kappa: bool = False, rel_tol: float = 1e-12) -> float:
    """Direct quadrature of cos[(kappa_k(q) - kappa_p(q)) x] against f_n(q).

    ``kappa(q) = pi k / (1 + q)`` when ``exact_kappa``; otherwise its
    small-displacement form ``pi k (1 - q)``.
    """
    if n not in (0, 1):
        raise ValueError("n must be 0 or 1")
    if not mu > 0:
        raise ValueError("oracle needs mu > 0")
    a = math.pi * (k - p) * x_hat
    state = WallState(float(n), 1.0 - n, float(n), mu)

    def f(q):
        phase = a / (1.0 + q) if exact_kappa else a * (1.0 - q)
        return np.cos(phase) * position_pdf(q, state)

    width = min(0.5, 12.0 * math.sqrt(mu))
    left = integrate(f, -width, 0.0, rel_tol, abs_tol=1e-16)
    right = integrate(f, 0.0, width, rel_tol, abs_tol=1e-16)
    return left.value + right.value


def averaged_density(x_hat: float, table: InnerSumTable, state: WallState,
                     component: int | None = None) -> float:
    """Energy-density change averaged over the wall position distribution.

    ``component=None`` gives the mixture p0 <.>_0 + p1 <.>_1; ``0`` or ``1``
    gives the average over that oscillator state alone.
    """
    x = _check_x(x_hat)
    y = 1.0 - x
    a2 = (math.pi * x) ** 2 * (table.diff * table.diff)
    e = 0.25 * state.mu * a2
    if component is None:
        weight = state.p0 + state.p1 * (1.0 - 2.0 * e)
    elif component == 0:
        weight = 1.0
    elif component == 1:
        weight = 1.0 - 2.0 * e
    else:
        raise ValueError("component must be None, 0 or 1")
    terms = table.T * np.exp(-e) * weight * _cos_pi(table.diff, y)
    return math.fsum(terms.ravel())


# --- free 1D Casimir baseline --------------------------------------------------

CASIMIR_EXACT = -math.pi / 24.0


def free_casimir_density(epsilon: float) -> float:
    """(pi/2) [sum_j j exp(-j eps) - 1/eps^2] in units hbar c / L0^2."""
    if not 0.0 < epsilon <= 0.5:
        raise ValueError("epsilon must lie in (0, 0.5]")
    jmax = math.ceil(80.0 / epsilon)
    j = np.arange(1, jmax + 1, dtype=float)
    terms = j * np.exp(-j * epsilon)
    return 0.5 * math.pi * (math.fsum(terms) - 1.0 / (epsilon * epsilon))


def casimir_limit(epsilons: Sequence[float] = (0.04, 0.02, 0.01)) -> RichardsonResult:
    """Cutoff-free limit of :func:`free_casimir_density`; the regulated sum is
    even in epsilon, so corrections go as eps^2, eps^4, ..."""
    eps = sorted(epsilons, reverse=True)
    return richardson_limit([(e, free_casimir_density(e)) for e in eps], 2, step=2)


# --- profiles and units ----------------------------------------------------------

def density_unit_si(params: CavityDimensionless, L0: float,
                    constants: PhysicalConstants = CODATA) -> float:
    """J/m per unit S: (mu/2) hbar pi c / L0^2 (equals hbar^2 pi c / (2 L0^4 M omega_osc))."""
    return 0.5 * params.mu * constants.hbar * math.pi * constants.c / L0 ** 2


def casimir_unit_si(L0: float, constants: PhysicalConstants = CODATA) -> float:
    return constants.hbar * constants.c / L0 ** 2


def density_profile(xs, table: InnerSumTable, workers: int | None = 1) -> np.ndarray:
    return np.array(map_ordered(partial(delta_density, table=table), xs, workers))


def averaged_profile(xs, table: InnerSumTable, state: WallState, component: int | None = None,
                     workers: int | None = 1) -> np.ndarray:
    fn = partial(averaged_density, table=table, state=state, component=component)
    return np.array(map_ordered(fn, xs, workers))
