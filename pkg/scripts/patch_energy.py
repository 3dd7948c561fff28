"""Finite disc patches against the infinite lattice.

For growing radius, compare the best Delaunay-midpoint energy of a disc
patch with the centered lattice energy, and solve the charge problem on a
small square block.
"""
import argparse

from maxtheta import pointset as P
from maxtheta.energy import energy_c, parse_potential
from maxtheta.lattice import hexagonal, square


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pot", default="pow:s=4")
    ap.add_argument("--radii", type=float, nargs="+", default=[4, 6, 8, 12, 16])
    ap.add_argument("--within", type=float, default=1.5)
    args = ap.parse_args()
    f = parse_potential(args.pot)

    for kind, L in (("hexagonal", hexagonal()), ("square", square())):
        lat = energy_c(L, f)
        print(f"{kind}: lattice centered energy {lat:.10f}")
        for R in args.radii:
            X = P.make_patch(kind, R)
            e, m = P.center_energy(X, f, within=args.within)
            print(f"  R={R:<4g} n={X.n:<5d} patch {e:.10f}  rel gap {abs(e - lat) / abs(lat):.3e}  at {m.round(4).tolist()}")

    X = P.grid_patch(4, 4)
    e, phi = P.charge_energy(X, f)
    print(f"\n4x4 block optimal charges (energy {e:.10f}):")
    print(phi.reshape(4, 4))


if __name__ == "__main__":
    main()
