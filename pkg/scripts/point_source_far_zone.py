"""Point-source densities: convergence of the far-zone coefficients and the self-energy balance."""
import math

from vacdens import pointsource as ps


def main():
    print("r_probe      electric_coef   magnetic_coef   ratio")
    for r in (1e2, 1e3, 1e4, 1e5):
        e, m = ps.far_coefficient("electric", r), ps.far_coefficient("magnetic", r)
        print(f"{r:8.0e}  {e:14.8f}  {m:14.10f}  {e / m:10.6f}")
    print(f"exact                23               -7   {-23 / 7:10.6f}")
    print()
    print("gamma_c   self_electric         closed 3/(16 pi g^4)   |total/electric|")
    for g in (0.5, 1.0, 2.0):
        e, t = ps.self_energy("electric", g), ps.self_energy("total", g)
        print(f"{g:6.2f}   {e:.15e}  {3 / (16 * math.pi * g ** 4):.15e}   {abs(t / e):.2e}")
    print()
    print("r       density route    Bessel route     rel dev")
    for r in (1.0, 2.0, 5.0):
        a, b = ps.u_electric(r), ps.bessel_oracle("electric", r)
        print(f"{r:4.1f}  {a:.10e}  {b:.10e}  {abs(a - b) / abs(a):.1e}")


if __name__ == "__main__":
    main()
