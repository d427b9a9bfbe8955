"""Uniformity error for intervals [-H, H] in F_p, d = 2 by default."""

import argparse

from detlab.field import make_field
from detlab.inequalities import check_interval_base_case, convergence_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=13)
    ap.add_argument("--d", type=int, default=2)
    args = ap.parse_args()
    F = make_field(args.p)
    hs = range(1, (args.p - 1) // 2 + 1)
    print("H,size,eps,S")
    for H, row in zip(hs, convergence_experiment(F, args.d, hs, kind="interval")):
        print(f"{H},{row.size},{float(row.eps):.6g},{row.S}")
    if args.p <= 13 and args.d == 2:
        print("\nH,S_2,congruence_nonzero,congruence_all")
        for H in hs:
            if H > 3:
                break
            rep = check_interval_base_case(args.p, H)
            eq, le = rep.records
            print(f"{H},{eq.lhs},{eq.rhs},{le.rhs}")


if __name__ == "__main__":
    main()
