"""Adaptive tanh-sinh quadrature and Richardson extrapolation.

Finite intervals are integrated panel-wise with the double-exponential
(tanh-sinh) rule, halving the step until successive levels agree.  Panels
that do not settle by ``MAX_LEVEL`` are bisected.  A semi-infinite interval
``[a, inf)`` is split at ``a + scale``; the tail is mapped onto ``s in [0, 1)``
through ``t = a + scale + scale * s / (1 - s)``.

The integrand must be vectorised: it is called with a 1-D float array and
must return an array of the same shape.  Evaluation order is fixed, so equal
inputs give bit-identical outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

MAX_LEVEL = 8
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_EVALS = 2_000_000

_T_MAX = 4.0
# Tail nodes closer than this to s = 1 are dropped (t beyond ~1e30 * scale).
_TAIL_FLOOR = 1e-30
_EPS = np.finfo(float).eps

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0.0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


class QuadratureError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    ``best`` holds the last estimate so callers can still inspect it.
    """

    def __init__(self, message: str, best: QuadResult | None = None):
        super().__init__(message)
        self.best = best


def _level_nodes(level: int):
    """Return (t >= 0 abscissae new at this level, complement 1-|x|, weight)."""
    h = 2.0 ** -level
    if level == 0:
        t = np.arange(0.0, _T_MAX + 0.5 * h, h)
    else:
        t = np.arange(h, _T_MAX + 0.5 * h, 2.0 * h)
    u = 0.5 * math.pi * np.sinh(t)
    # 1 - tanh(u) without cancellation
    comp = 1.0 / (np.exp(u) * np.cosh(u))
    w = 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    return t, comp, w


_NODES = [_level_nodes(lvl) for lvl in range(MAX_LEVEL + 1)]


class _Panel:
    """One tanh-sinh panel, refined level by level.

    ``tail`` panels live in the mapped coordinate s in [a, b] subset of [0, 1].
    """

    __slots__ = ("a", "b", "tail", "origin", "scale", "level", "wsum",
                 "abs_wsum", "value", "prev", "l1", "evals")

    def __init__(self, a, b, tail=False, origin=0.0, scale=1.0):
        self.a = a
        self.b = b
        self.tail = tail
        self.origin = origin
        self.scale = scale
        self.level = -1
        self.wsum = 0.0
        self.abs_wsum = 0.0
        self.value = 0.0
        self.prev = math.nan
        self.l1 = 0.0
        self.evals = 0

    @property
    def error(self) -> float:
        if self.level < 1:
            return math.inf
        return abs(self.value - self.prev)

    @property
    def noise(self) -> float:
        return 64.0 * _EPS * self.l1

    def _evaluate(self, f: Integrand, comp, w, include_centre: bool):
        half = 0.5 * (self.b - self.a)
        dist = half * comp
        # right half (x >= 0) then left half (x < 0), skipping the centre twice
        if include_centre:
            d_right, w_right = dist, w
            d_left, w_left = dist[1:], w[1:]
        else:
            d_right, w_right = dist, w
            d_left, w_left = dist, w
        if self.tail:
            one_minus_b = 1.0 - self.b
            s_r = self.b - d_right
            oms_r = one_minus_b + d_right
            s_l = self.a + d_left
            oms_l = (1.0 - self.a) - d_left
            s = np.concatenate((s_l[::-1], s_r))
            oms = np.concatenate((oms_l[::-1], oms_r))
            ww = np.concatenate((w_left[::-1], w_right))
            keep = (oms > _TAIL_FLOOR) & (ww > 0.0) & (s > self.a) & (s < self.b)
            s, oms, ww = s[keep], oms[keep], ww[keep]
            x = self.origin + self.scale * s / oms
            jac = self.scale / (oms * oms)
            fx = np.asarray(f(x), dtype=float) * jac
        else:
            x_r = self.b - d_right
            x_l = self.a + d_left
            x = np.concatenate((x_l[::-1], x_r))
            ww = np.concatenate((w_left[::-1], w_right))
            keep = (x > self.a) & (x < self.b) & (ww > 0.0)
            x, ww = x[keep], ww[keep]
            fx = np.asarray(f(x), dtype=float)
        if fx.shape != x.shape:
            raise ValueError("integrand must return an array shaped like its input")
        if not np.all(np.isfinite(fx)):
            raise QuadratureError(
                f"integrand not finite on ({self.a!r}, {self.b!r})"
                + (" [mapped tail]" if self.tail else "")
            )
        self.evals += x.size
        return float(np.sum(ww * fx)), float(np.sum(ww * np.abs(fx)))

    def refine(self, f: Integrand) -> None:
        lvl = self.level + 1
        _, comp, w = _NODES[lvl]
        s, s_abs = self._evaluate(f, comp, w, include_centre=(lvl == 0))
        self.wsum += s
        self.abs_wsum += s_abs
        h = 2.0 ** -lvl
        half = 0.5 * (self.b - self.a)
        self.prev = self.value
        self.value = half * h * self.wsum
        self.l1 = half * h * self.abs_wsum
        self.level = lvl

    def split(self):
        mid = 0.5 * (self.a + self.b)
        return (_Panel(self.a, mid, self.tail, self.origin, self.scale),
                _Panel(mid, self.b, self.tail, self.origin, self.scale))


def integrate(
    f: Integrand,
    a: float,
    b: float = math.inf,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    scale: float | None = None,
    abs_tol: float = 0.0,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> QuadResult:
    """Integrate a vectorised ``f`` over ``[a, b]`` (``b`` may be ``inf``).

    Parameters
    ----------
    f : callable
        Vectorised integrand, finite on the open interval.
    a, b : float
        Limits with ``a <= b``; ``b = inf`` selects the semi-infinite scheme.
    rel_tol : float
        Relative tolerance in ``[1e-14, 1e-2]``.
    scale : float, optional
        Decay-length hint for semi-infinite intervals (default 1).
    abs_tol : float
        Absolute tolerance floor; needed when the integral itself is ~0.
    max_evals : int
        Evaluation budget; exceeded budget raises :class:`QuadratureError`.

    Returns
    -------
    QuadResult
    """
    if not (1e-14 <= rel_tol <= 1e-2):
        raise ValueError(f"rel_tol must lie in [1e-14, 1e-2], got {rel_tol!r}")
    if abs_tol < 0.0:
        raise ValueError("abs_tol must be non-negative")
    if math.isnan(a) or math.isnan(b) or math.isinf(a):
        raise ValueError("lower limit must be finite and limits not NaN")
    if b < a:
        raise ValueError("integration limits must satisfy a <= b")
    if a == b:
        return QuadResult(0.0, 0.0, 1)

    if math.isinf(b):
        hint = 1.0 if scale is None else float(scale)
        if not hint > 0.0:
            raise ValueError("scale must be positive")
        panels = [_Panel(a, a + hint), _Panel(0.0, 1.0, tail=True, origin=a + hint, scale=hint)]
    else:
        panels = [_Panel(a, b)]

    for p in panels:
        p.refine(f)
        p.refine(f)

    while True:
        total = math.fsum(p.value for p in panels)
        err = math.fsum(p.error for p in panels)
        evals = sum(p.evals for p in panels)
        tol = max(rel_tol * abs(total), abs_tol, 1e-300)
        if err <= tol:
            return QuadResult(total, err, max(evals, 1))
        worst_i = max(range(len(panels)), key=lambda i: panels[i].error)
        worst = panels[worst_i]
        if worst.error <= worst.noise:
            # every panel is at its rounding floor; nothing left to gain
            return QuadResult(total, err, max(evals, 1))
        if evals > max_evals:
            raise QuadratureError(
                f"no convergence within {max_evals} evaluations "
                f"(estimate {total!r}, error {err!r}, tolerance {tol!r})",
                QuadResult(total, err, evals),
            )
        if worst.level < MAX_LEVEL:
            worst.refine(f)
        else:
            left, right = worst.split()
            if not (worst.a < left.b < worst.b):
                raise QuadratureError(
                    "panel cannot be subdivided further", QuadResult(total, err, evals)
                )
            left.refine(f)
            left.refine(f)
            right.refine(f)
            right.refine(f)
            left.evals += worst.evals  # keep the running evaluation count
            panels[worst_i:worst_i + 1] = [left, right]


def integrate_value(f: Integrand, a: float, b: float = math.inf, rel_tol: float = DEFAULT_REL_TOL,
                    **kwargs) -> float:
    return integrate(f, a, b, rel_tol, **kwargs).value


class RichardsonResult(NamedTuple):
    value: float
    residual: float


def richardson_limit(samples: Sequence[tuple[float, float]], leading_order: int,
                     step: int = 1) -> RichardsonResult:
    """Extrapolate ``v(h)`` to ``h = 0`` assuming
    ``v(h) = L + c0 h^p + c1 h^(p+step) + ...`` with ``p = leading_order``.

    All samples are used (one correction term per extra sample).  The residual
    is the change in the limit when the coarsest sample is dropped.
    """
    if len(samples) < 3:
        raise ValueError("richardson_limit needs at least 3 samples")
    if leading_order < 1 or step < 1:
        raise ValueError("leading_order and step must be positive integers")
    hs = [float(h) for h, _ in samples]
    vs = [float(v) for _, v in samples]
    if any(h <= 0.0 for h in hs):
        raise ValueError("step sizes must be positive")
    if any(h1 <= h2 for h1, h2 in zip(hs, hs[1:])):
        raise ValueError("step sizes must be strictly decreasing")

    full = _solve_limit(hs, vs, leading_order, step)
    reduced = _solve_limit(hs[1:], vs[1:], leading_order, step)
    return RichardsonResult(full, abs(full - reduced))


def _solve_limit(hs, vs, order, step):
    n = len(hs)
    if n == 1:
        return vs[0]
    h = np.asarray(hs) / hs[0]  # rescale for conditioning
    powers = [0] + [order + i * step for i in range(n - 1)]
    mat = np.column_stack([h ** p for p in powers])
    coef = np.linalg.solve(mat, np.asarray(vs))
    return float(coef[0])
