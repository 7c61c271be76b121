"""Acceptance gate: one check per criterion at its stated tolerance.

Each check returns ``(passed, detail)``.  Under pytest the lines are printed
in the terminal summary; ``python tests/test_acceptance.py`` prints them
directly.
"""
from __future__ import annotations

import math
import os
import subprocess
import sys
import time
import warnings

import numpy as np
import pytest

from vacdens import boundary, cavity, pointsource
from vacdens.config import CavityConfig, CavityDimensionless, derive_dimensionless

RESULTS: list[str] = []


def rel(a, b):
    return abs(a - b) / abs(b)


def check_1():
    v0, vh = boundary.e2_renorm(0.0), boundary.e2_renorm(0.5)
    (zlo, _), (zhi, _) = boundary.numerical_extrema()
    ok = (rel(v0, -4 / math.pi) <= 1e-12 and rel(vh, 1 / math.pi) <= 1e-12
          and abs(zlo) <= 1e-10 and abs(zhi - 0.5) <= 1e-10)
    return ok, f"e2(0)={v0!r} e2(1/2)={vh!r} argmin={zlo!r} argmax={zhi!r}"


def check_2():
    total, scale = boundary.integral_check(1e-10), boundary.abs_integral(1e-10)
    ratio = abs(total) / scale
    return ratio <= 1e-8, f"|int|/int|.|={ratio:.3e} (bound 1e-8)"


def check_3():
    d50 = abs(boundary.e2_renorm(50.0) / boundary.ideal_limit_e2(50.0) - 1)
    d500 = abs(boundary.e2_renorm(500.0) / boundary.ideal_limit_e2(500.0) - 1)
    return d50 <= 5e-3 and d500 <= 2e-5, f"dev(50)={d50:.3e} dev(500)={d500:.3e}"


def check_4():
    e = pointsource.far_coefficient("electric", 1e4)
    m = pointsource.far_coefficient("magnetic", 1e4)
    ok = rel(e, 23) <= 1.5e-3 and rel(m, -7) <= 1.5e-3 and rel(e / m, -23 / 7) <= 2e-3
    return ok, f"electric={e:.6f} magnetic={m:.6f} ratio={e / m:.6f}"


def check_5():
    worst_cancel, worst_closed = 0.0, 0.0
    for g in (0.5, 1.0, 2.0):
        e = pointsource.self_energy("electric", g)
        t = pointsource.self_energy("total", g)
        worst_cancel = max(worst_cancel, abs(t) / abs(e))
        worst_closed = max(worst_closed, rel(e, 3 / (16 * math.pi * g ** 4)))
    ok = worst_cancel <= 1e-6 and worst_closed <= 1e-8
    return ok, f"max |total/electric|={worst_cancel:.2e} max closed-form dev={worst_closed:.2e}"


def check_6():
    devs = [rel(pointsource.bessel_oracle("electric", r), pointsource.u_electric(r)) for r in (1.0, 2.0, 5.0)]
    return max(devs) <= 1e-4, "deviations " + ", ".join(f"{d:.2e}" for d in devs)


def check_7():
    r = cavity.casimir_limit((0.04, 0.02, 0.01))
    d = rel(r.value, -math.pi / 24)
    return d <= 1e-6, f"limit={r.value!r} rel dev={d:.2e}"


def check_8():
    p = CavityDimensionless(derive_dimensionless(CavityConfig()).omega_hat, 1e-18, 40)
    t = cavity.build_inner_sum_table(p)
    xs = np.linspace(0.0, 1.0, 101)
    slow = np.array([cavity.delta_density(x, t) for x in xs])
    fast = np.array([cavity.delta_density_fast(x, p) for x in xs])
    dev = float(np.max(np.abs(slow - fast) / np.abs(fast)))
    floor = float(np.min(slow) / np.max(slow))
    return dev <= 1e-12 and floor >= -1e-12, f"max rel dev={dev:.2e} min S/max S={floor:.2e}"


def _S_at(omega_cut, x):
    p = derive_dimensionless(CavityConfig(omega_cut=omega_cut))
    return p.n_modes, cavity.delta_density(x, cavity.build_inner_sum_table(p))


def check_9():
    n_hi, s_hi = _S_at(1e16, 1.0)
    n_lo, s_lo = _S_at(8e15, 1.0)
    _, s_half = _S_at(1e16, 0.5)
    ok = n_hi == 106 and n_lo == 84 and s_hi > s_lo and s_half / s_hi <= 0.05
    return ok, f"S(1;N={n_hi})={s_hi:.4e} S(1;N={n_lo})={s_lo:.4e} S(0.5)/S(1)={s_half / s_hi:.2e}"


def check_10():
    details, ok = [], True
    xs = np.linspace(0.97, 1.0, 121)  # step 2.5e-4
    for n in (100, 500):
        p = derive_dimensionless(CavityConfig(omega_cut=None, n_modes=n, sigma_over_L0=0.01))
        t = cavity.build_inner_sum_table(p)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", cavity.PerturbativeWarning)
            state = cavity.wall_excitation(p)
        avg1, raw1 = cavity.averaged_density(1.0, t, state), cavity.delta_density(1.0, t)
        ok &= avg1 < raw1
        details.append(f"N={n}: avg(1)={avg1:.3e} < S(1)={raw1:.3e} (N_b={state.n_b:.3g})")
        if n == 500:
            prof = cavity.averaged_profile(xs, t, state, workers=os.cpu_count() or 1)
            x_star = float(xs[int(np.argmax(prof))])
            ok &= x_star != 1.0
            details.append(f"argmax={x_star:.5f}")
    return ok, "; ".join(details)


def check_11():
    mu, worst = 2e-4, 0.0
    for n in (0, 1):
        for dk in range(1, 11):
            for x in (0.5, 0.9, 1.0):
                a = math.pi * dk * x
                closed = cavity.averaged_cosine(n, dk, 0, x, mu)
                oracle = cavity.averaged_cosine_oracle(n, dk, 0, x, mu)
                floor = math.exp(-0.25 * mu * a * a)  # cos(a) can vanish on the grid
                worst = max(worst, abs(closed - oracle) / max(abs(oracle), floor))
    # informational: error of the small-displacement wavenumber itself
    lin = abs(cavity.averaged_cosine(0, 10, 0, 1.0, mu)
              - cavity.averaged_cosine_oracle(0, 10, 0, 1.0, mu, exact_kappa=True))
    return worst <= 1e-4, (f"max rel dev={worst:.2e} (n=0,1; k-p=1..10; x=0.5,0.9,1); "
                           f"exact-kappa abs dev at k-p=10, x=1: {lin:.2e}")


def check_12():
    worst, exact_sum, moment = 0.0, True, 0.0
    for w, mu, n in ((0.0, 1e-3, 20), (0.37, 2e-4, 15), (2.5, 1e-6, 7)):
        p = CavityDimensionless(w, mu, n)
        d2 = math.fsum(cavity.coupling(k, j, p).d_hat ** 2 for k in range(1, n + 1) for j in range(1, n + 1))
        s = cavity.wall_excitation(p)
        worst = max(worst, rel(s.n_b, 2 * d2))
        exact_sum &= (s.p0 + s.p1 == 1.0)
        width = 20 * math.sqrt(mu)
        norm = pointsource.integrate(lambda q: cavity.position_pdf(q, s), -width, width, 1e-12).value
        m2 = pointsource.integrate(lambda q: q * q * cavity.position_pdf(q, s), -width, width, 1e-12).value
        want = (1 - s.n_b) * mu / 2 + s.n_b * 3 * mu / 2
        moment = max(moment, abs(norm - 1), rel(m2, want))
    ok = worst <= 1e-12 and exact_sum and moment <= 1e-10
    return ok, f"N_b identity dev={worst:.2e} p0+p1 exact={exact_sum} pdf dev={moment:.2e}"


CLI_CASES = [
    ["boundary", "--samples", "400"],
    ["point-source", "--samples", "64", "--workers", "2"],
    ["point-source", "check"],
    ["cavity", "density", "--samples", "201", "--workers", "2"],
    ["cavity", "averaged", "--n-modes", "100", "--sigma-over-L0", "0.01", "--samples", "81", "--workers", "2"],
    ["cavity", "casimir"],
]


def _cli(args):
    proc = subprocess.run([sys.executable, "-m", "vacdens", *args], capture_output=True, check=False)
    return proc.returncode, proc.stdout


def _serial(args):
    out = list(args)
    if "--workers" in out:
        out[out.index("--workers") + 1] = "1"
    return out


def check_13():
    bad = []
    for args in CLI_CASES:
        first, second = _cli(args), _cli(args)
        serial = _cli(_serial(args))
        if first[0] != 0 or first != second or first[1] != serial[1]:
            bad.append(" ".join(args[:2]))
    return not bad, f"{len(CLI_CASES)} invocations byte-identical" if not bad else f"mismatch: {bad}"


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 14)}


def _run(i):
    start = time.perf_counter()
    ok, detail = CHECKS[i]()
    line = f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  [{time.perf_counter() - start:6.2f} s] {detail}"
    RESULTS.append(line)
    return ok, line


@pytest.mark.parametrize("number", list(CHECKS))
def test_criterion(number):
    ok, line = _run(number)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failures = 0
    for i in CHECKS:
        ok, line = _run(i)
        print(line, flush=True)
        failures += not ok
    sys.exit(1 if failures else 0)
