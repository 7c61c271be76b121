"""Renormalized fluctuation profile near a conducting wall, with extrema and far-field check."""
import argparse
import sys

import numpy as np

from vacdens import boundary
from vacdens.cli import OutputTable, write_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--z-max", type=float, default=4.0)
    ap.add_argument("--samples", type=int, default=400)
    args = ap.parse_args(argv)

    (zlo, vlo), (zhi, vhi) = boundary.numerical_extrema()
    print(f"# minimum at z={zlo:.12g}: {vlo:.15g}  (closed form -4/pi)", file=sys.stderr)
    print(f"# maximum at z={zhi:.12g}: {vhi:.15g}  (closed form 1/pi)", file=sys.stderr)
    print(f"# integral over z: {boundary.integral_check():.3e}", file=sys.stderr)
    for z in (5.0, 50.0, 500.0):
        dev = boundary.e2_renorm(z) / boundary.ideal_limit_e2(z) - 1
        print(f"# ratio to ideal limit at z={z:g}: 1{dev:+.3e}", file=sys.stderr)

    zs = np.linspace(0.0, args.z_max, args.samples)
    table = OutputTable(["z_over_ceta", "e2_renorm", "b2_renorm"])
    table.rows = [(float(z), float(e), float(-e)) for z, e in zip(zs, boundary.e2_renorm(zs))]
    write_csv(table, sys.stdout.buffer)


if __name__ == "__main__":
    main()
