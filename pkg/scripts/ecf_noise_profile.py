"""Per-frequency error of the contour ECF against the exact clock CF.

For ``theta = 0`` and a Gamma(a, b) clock the observed law has a finite
moment generating function only for ``|s| < sqrt(2b)``. Along the contour
``Re(u) = sqrt(|omega|)``, so the estimator has finite variance only for
``|omega| < b/2`` and a finite mean only for ``|omega| < 2b``. The table makes
the breakdown visible next to the effective sample size.

    python scripts/ecf_noise_profile.py --n 100000 --seed 1
"""

import argparse

import numpy as np

from timechange import FrequencyGrid, Gamma, TcbmSpec, analytic_transformed_cf, empirical_transformed_cf, sample_tcbm_increments


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--a", type=float, default=5.0)
    ap.add_argument("--b", type=float, default=5.0)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--omega-max", type=float, default=12.0)
    args = ap.parse_args()

    spec = TcbmSpec(0.0, Gamma(args.a, args.b))
    grid = FrequencyGrid.uniform(args.omega_max, 49)
    x = sample_tcbm_increments(spec, 1.0, args.n, args.seed)
    emp = empirical_transformed_cf(x, 0.0, grid)
    ref = analytic_transformed_cf(spec, 1.0, grid)
    print(f"finite variance for |omega| < {args.b / 2:g}, finite mean for |omega| < {2 * args.b:g}")
    print(f"{'omega':>7} {'|exact|':>10} {'|error|':>10} {'ess':>10} {'max exp':>8}")
    for k in range(grid.center, len(grid)):
        print(f"{grid.omegas[k]:7.3f} {abs(ref.values[k]):10.3g} {abs(emp.values[k] - ref.values[k]):10.3g} "
              f"{emp.ess[k]:10.4g} {emp.max_exponent[k]:8.3f}")


if __name__ == "__main__":
    main()
