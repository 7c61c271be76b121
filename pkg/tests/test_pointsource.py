import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from vacdens import pointsource as ps

mp.mp.dps = 30


def _mp_density(kind, r, gamma_c=1.0):
    r = mp.mpf(r)
    if kind == "electric":
        f = lambda g: (3 * r ** 4 - 2 * r ** 2 * g ** 2 + 3 * g ** 4) / (r ** 2 + g ** 2) ** 6
        sign = 1
    else:
        f = lambda g: 8 * r ** 2 * g ** 2 / (r ** 2 + g ** 2) ** 6
        sign = -1
    return float(sign * 4 / mp.pi ** 3 * mp.quad(f, [gamma_c, 2 * gamma_c, mp.inf]))


@pytest.mark.parametrize("r", [1e-3, 0.3, 1.0, 1.5, 7.0, 120.0])
@pytest.mark.parametrize("kind", ["electric", "magnetic"])
def test_against_high_precision_quadrature(kind, r):
    got = ps._density(kind, r, 1.0, 1e-12)
    assert got == pytest.approx(_mp_density(kind, r), rel=1e-10)


def test_value_at_source():
    assert ps.u_electric(0.0) == pytest.approx(12 / (7 * math.pi ** 3), rel=1e-15)
    assert ps.u_magnetic(0.0) == 0.0


def test_far_kernel_moments():
    # Beta-function moments give 23 pi / 64 and 7 pi / 64 for the full kernels
    e = ps.integrate(ps._electric_kernel, 0.0).value
    m = ps.integrate(ps._magnetic_kernel, 0.0).value
    assert e == pytest.approx(23 * math.pi / 64, rel=1e-13)
    assert m == pytest.approx(7 * math.pi / 64, rel=1e-13)


def test_far_coefficients():
    assert ps.far_coefficient("electric", 1e4) == pytest.approx(23, rel=1.5e-3)
    assert ps.far_coefficient("magnetic", 1e4) == pytest.approx(-7, rel=1.5e-3)


def test_far_coefficient_improves_with_distance():
    err = [abs(ps.far_coefficient("electric", r) - 23) for r in (1e2, 1e3, 1e4)]
    assert err[0] > err[1] > err[2]


def test_far_coefficient_rejects_near_zone():
    with pytest.raises(ValueError):
        ps.far_coefficient("electric", 10.0)


@given(st.floats(1e-3, 1e3), st.floats(0.2, 5.0))
def test_cutoff_scaling(r, gamma_c):
    # u(r; gamma_c) = gamma_c^-7 u(r / gamma_c; 1)
    a = ps.u_electric(r, gamma_c)
    b = ps.u_electric(r / gamma_c, 1.0) / gamma_c ** 7
    assert a == pytest.approx(b, rel=1e-9)


@given(st.floats(0.0, 1e5))
def test_signs(r):
    assert ps.u_electric(r) > 0
    assert ps.u_magnetic(r) <= 0


@given(st.floats(0.0, 50.0), st.floats(1e-3, 50.0))
def test_electric_decreases_outward(r, dr):
    assert ps.u_electric(r + dr) <= ps.u_electric(r) * (1 + 1e-9)


def test_densities_total():
    d = ps.densities(2.0)
    assert d.u_total == d.u_electric + d.u_magnetic


def test_bad_inputs():
    with pytest.raises(ValueError):
        ps.u_electric(-1.0)
    with pytest.raises(ValueError):
        ps.u_electric(1.0, gamma_c=0.0)
    with pytest.raises(ValueError):
        ps._density("gravitational", 1.0, 1.0, 1e-10)


def test_self_energy_closed_form():
    assert ps.self_energy("electric") == pytest.approx(3 / (16 * math.pi), rel=1e-9)
    assert ps.self_energy("magnetic") == pytest.approx(-3 / (16 * math.pi), rel=1e-9)
    assert abs(ps.self_energy("total")) <= 1e-9 * ps.self_energy_closed("electric")


def test_self_energy_cutoff_scaling():
    assert ps.self_energy_closed("electric", 2.0) == ps.self_energy_closed("electric") / 16


def test_singular_series_tables():
    e, m = ps.singular_series("electric"), ps.singular_series("magnetic")
    assert e.far_coefficient() == 23 and m.far_coefficient() == -7
    assert [t.delta_order for t in e.terms] == [None, 0, 1, 2, 3, 4]
    assert all(t.inverse_power + (t.delta_order or -1) == 6 for t in e.terms if t.delta_order)
    assert m.terms[3].coefficient == Fraction(1, 3)


def test_bessel_representation_single_point():
    assert ps.bessel_oracle("electric", 2.0) == pytest.approx(ps.u_electric(2.0), rel=1e-8)


def test_bessel_representation_magnetic():
    assert ps.bessel_oracle("magnetic", 2.0, 1e-9) == pytest.approx(ps.u_magnetic(2.0), rel=1e-6)


def test_units_linear_in_alpha():
    assert ps.density_unit(2.0, 1e-9) == 2 * ps.density_unit(1.0, 1e-9)
    assert ps.energy_unit(1.0, 2.0) == pytest.approx(ps.energy_unit(1.0, 1.0) / 16)
