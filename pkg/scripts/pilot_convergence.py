"""Pilot run for the q=101, d=2 convergence table.

Prints one row per (size, seed), the per-size mean of eps, and the
ceiling for |A|=80 (twice the pilot maximum) that the acceptance test
freezes.
"""

import argparse
from collections import defaultdict

from detlab.field import make_field
from detlab.inequalities import convergence_experiment

SIZES = [20, 40, 60, 80, 101]
SEEDS = [0, 1, 2, 3, 4]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=101)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    rows = convergence_experiment(make_field(args.q), args.d, SIZES, SEEDS, workers=args.workers)
    by_size = defaultdict(list)
    print("size,seed,eps,S,elapsed_ms")
    for row in rows:
        by_size[row.size].append(row.eps)
        print(f"{row.size},{row.seed},{float(row.eps):.6g},{row.S},{row.elapsed_ms:.1f}")
    print("\nsize,mean_eps,max_eps")
    for size, eps in by_size.items():
        print(f"{size},{float(sum(eps) / len(eps)):.6g},{float(max(eps)):.6g}")
    pilot_max = max(by_size[80])
    print(f"\npilot max eps(80) = {pilot_max} ~ {float(pilot_max):.6g}")
    print(f"ceiling = {2 * pilot_max} ~ {2 * float(pilot_max):.6g}")


if __name__ == "__main__":
    main()
