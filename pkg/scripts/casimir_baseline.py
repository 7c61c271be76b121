"""Free 1D Casimir density: regulated mode sums and their Richardson limit."""
import math

from vacdens import cavity


def main():
    for eps in (0.16, 0.08, 0.04, 0.02, 0.01):
        print(f"eps={eps:<5g} density={cavity.free_casimir_density(eps):.15f}")
    for seq in ((0.04, 0.02, 0.01), (0.16, 0.08, 0.04, 0.02, 0.01)):
        r = cavity.casimir_limit(seq)
        print(f"limit from {seq}: {r.value:.15f} (residual {r.residual:.1e})")
    print(f"exact -pi/24:          {-math.pi / 24:.15f}")


if __name__ == "__main__":
    main()
