"""Scan truncation and mollifier settings for sample-based recovery.

Prints the L1 error against the Gamma(5t, 5) clock density for a grid of
(omega_max, R) settings over several seeds. Used to choose the sample-CF
defaults in ``timechange.inversion``.

    python scripts/pilot_parameters.py --theta 0 --seeds 10
"""

import argparse

import numpy as np

from timechange import FrequencyGrid, Gamma, TcbmSpec, round_trip_report
from timechange.inversion import spatial_grid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--theta", type=float, default=0.0)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--omega-max", type=float, nargs="+", default=[2, 3, 4, 5, 6, 8])
    ap.add_argument("--R", type=float, nargs="+", default=[1.5, 2, 3, 5, 20])
    args = ap.parse_args()

    spec = TcbmSpec(args.theta, Gamma(5.0, 5.0))
    xis = spatial_grid(0.01, 8.0, 800)
    print(f"theta={args.theta} t={args.t} n={args.n} seeds=1..{args.seeds}")
    print(f"{'omega_max':>9} {'R':>5} {'median L1':>10} {'min L1':>8} {'max L1':>10}")
    best = None
    for om in args.omega_max:
        grid = FrequencyGrid.uniform(om, 401)
        for R in args.R:
            l1 = [round_trip_report(spec, args.t, args.n, s, grid, xis, R).l1 for s in range(1, args.seeds + 1)]
            med = float(np.median(l1))
            print(f"{om:9.3g} {R:5.3g} {med:10.4f} {min(l1):8.4f} {max(l1):10.4g}")
            if best is None or med < best[0]:
                best = (med, om, R)
    print(f"best median L1 {best[0]:.4f} at omega_max={best[1]:g}, R={best[2]:g}")


if __name__ == "__main__":
    main()
