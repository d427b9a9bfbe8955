"""List instances where the composed bound with main term |A|^(d^2)/q fails.

The gating form, with main term |A|^d ||g_0||_1 / q, is checked alongside
and must never fail.
"""

import itertools

from detlab.detcount import explicit_set
from detlab.field import make_field
from detlab.inequalities import check_composed_bound


def main():
    print("q,d,A,lhs,rhs,gating_pass")
    for q, d in itertools.product((3, 5, 7, 9), (2, 3)):
        F = make_field(*((3, 2) if q == 9 else (q, 1)))
        for k in (1, 2, 3):
            for A in itertools.combinations(range(q), k):
                rep = check_composed_bound(explicit_set(F, A), d)
                gated, literal = rep.records
                if not literal.passed or not gated.passed:
                    print(f"{q},{d},{' '.join(map(str, A))},{literal.lhs},{literal.rhs},{gated.passed}")


if __name__ == "__main__":
    main()
