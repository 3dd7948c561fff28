"""Sign of the y-derivatives along vertical lines above the unit arc.

Informational only. Monotonic decrease in y along every line x = const
would give maximality of the hexagonal lattice on each line at once.
"""
import argparse

import numpy as np

from maxtheta.verify import probe_fixed_x_conjecture


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--xs", type=float, nargs="+", default=list(np.round(np.linspace(0, 0.5, 11), 3)))
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.25, 0.5, 1.0, 2.0, 4.0])
    ap.add_argument("--ny", type=int, default=60)
    args = ap.parse_args()

    r = probe_fixed_x_conjecture(tuple(args.xs), tuple(args.alphas), args.ny)
    print(r.line())
    for v in r.violations[:20]:
        print(f"  x={v['x']:.3f} y={v['y']:.6f} alpha={v['alpha']:g} "
              f"dc/dy={v['dc_dy']:+.3e} dpm/dy={v['dpm_dy']:+.3e}")
    if len(r.violations) > 20:
        print(f"  ... {len(r.violations) - 20} more")


if __name__ == "__main__":
    main()
