"""Three-term progressions in product sets AB over F_q.

For a pivot x1 in A, y1 in B with x1 y1 != 0, the number of solutions of
x0 y0 + x2 y2 = 2 x1 y1 is an incidence count for the form
((x0, x2), (y0, y2)) -> x0 y0 + x2 y2 with f = 1_{A x A}, g = 1_{B x B}.
Once it beats the trivial solutions (x0 y0 = x2 y2 = x1 y1) some progression
x0 y0, x1 y1, x2 y2 with distinct terms exists.

A progression is nontrivial when its three terms are pairwise distinct,
i.e. its step is nonzero (2 is invertible since q is odd).  Zero may occur
as a term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .detcount import DensityFunction, EntrySet, random_set
from .field import FiniteField, field_for_order
from .reports import CheckRecord, Report, leq
from .rng import SplitMix64
from .spectral import nu


def _field_of(A: EntrySet, B: EntrySet) -> FiniteField:
    if A.field != B.field:
        raise ValueError("A and B live in different fields")
    return A.field


def _pivot_target(A: EntrySet, B: EntrySet, x1: int, y1: int) -> int:
    F = _field_of(A, B)
    if x1 not in A or y1 not in B:
        raise ValueError("pivot must satisfy x1 in A and y1 in B")
    prod = F.mul(x1, y1)
    if prod == 0:
        raise ValueError("pivot needs x1 * y1 != 0")
    return F.add(prod, prod)


def quadruple_table(A: EntrySet, B: EntrySet):
    """nu(t) = #{(x0, y0, x2, y2) in A x B x A x B : x0 y0 + x2 y2 = t}."""
    _field_of(A, B)
    f = DensityFunction.cartesian_indicator(A, 2)
    g = DensityFunction.cartesian_indicator(B, 2)
    return nu(f, g)


def quadruple_count(A: EntrySet, B: EntrySet, x1: int, y1: int) -> int:
    """Solutions of x0 y0 + x2 y2 = 2 x1 y1 over A x B x A x B."""
    return quadruple_table(A, B)[_pivot_target(A, B, x1, y1)]


def quadruple_count_direct(A: EntrySet, B: EntrySet, x1: int, y1: int) -> int:
    """Same count by looping over all four variables."""
    F = A.field
    t = _pivot_target(A, B, x1, y1)
    return sum(1 for x0 in A for y0 in B for x2 in A for y2 in B
               if F.add(F.mul(x0, y0), F.mul(x2, y2)) == t)


def trivial_solution_count(A: EntrySet, B: EntrySet, x1: int, y1: int) -> int:
    """#{(x0, y0, x2, y2) : x0 y0 = x2 y2 = x1 y1} = r(x1 y1)^2, with r the
    number of factorizations of x1 y1 over A x B."""
    F = _field_of(A, B)
    c = F.mul(x1, y1)
    r = sum(1 for x in A for y in B if F.mul(x, y) == c)
    return r * r


def check_quadruple_lower_bound(A: EntrySet, B: EntrySet, x1: int, y1: int) -> Report:
    """count >= |A|^2 |B|^2 / q - sqrt(q) |A| |B|, compared exactly.

    With m = |A|^2 |B|^2 / q the bound is vacuous when m <= sqrt(q) |A| |B|;
    otherwise it is (m - count)^2 <= q |A|^2 |B|^2 given count < m.
    """
    F = _field_of(A, B)
    q, a, b = F.q, len(A), len(B)
    count = quadruple_count(A, B, x1, y1)
    main = Fraction(a * a * b * b, q)
    radical_sq = q * a * a * b * b
    report = Report("quadruple_lower_bound", _pair_instance(A, B, {"x1": x1, "y1": y1}))
    deficit = max(main - count, Fraction(0))
    rec = leq("(main - count)_+^2 <= q |A|^2 |B|^2", deficit**2, radical_sq,
              {"count": count, "main": main})
    rec.note = "vacuous" if main**2 <= radical_sq else None
    report.add(rec)
    trivial = trivial_solution_count(A, B, x1, y1)
    report.add(leq("trivial solutions <= |A| |B|", trivial, a * b, {"trivial": trivial}))
    report.extra.update({"count": count, "trivial": trivial})
    return report


def _pair_instance(A: EntrySet, B: EntrySet, extra=None) -> dict:
    out = {"field": A.field.describe(), "A": A.describe(), "B": B.describe()}
    out.update(extra or {})
    return out


# --- progressions -------------------------------------------------------------


@dataclass(frozen=True)
class APWitness:
    """Terms a, a + delta, a + 2 delta of AB with one factorization each."""

    terms: tuple[int, int, int]
    delta: int
    factors: tuple[tuple[int, int], ...]

    def verify(self, A: EntrySet, B: EntrySet) -> bool:
        F = _field_of(A, B)
        a, b, c = self.terms
        return (
            self.delta != 0
            and len({a, b, c}) == 3
            and F.add(a, self.delta) == b
            and F.add(b, self.delta) == c
            and all(x in A and y in B and F.mul(x, y) == t
                    for (x, y), t in zip(self.factors, self.terms))
        )

    def to_json(self) -> dict:
        return {"terms": list(self.terms), "delta": self.delta,
                "factors": [list(f) for f in self.factors]}


def product_set(A: EntrySet, B: EntrySet) -> dict[int, tuple[int, int]]:
    """AB with the smallest factorization (x, y) of each element."""
    F = _field_of(A, B)
    out: dict[int, tuple[int, int]] = {}
    for x in A:
        for y in B:
            out.setdefault(F.mul(x, y), (x, y))
    return dict(sorted(out.items()))


def find_3ap_in_productset(A: EntrySet, B: EntrySet) -> APWitness | None:
    """First progression found scanning a, then delta, in increasing order."""
    F = _field_of(A, B)
    AB = product_set(A, B)
    if len(AB) < 3:
        return None
    member = np.zeros(F.q, dtype=bool)
    member[list(AB)] = True
    for a in AB:
        nxt = np.asarray(F.add(a, F.elements()))
        last = np.asarray(F.add(nxt, F.elements()))
        hits = np.flatnonzero(member[nxt] & member[last])
        hits = hits[hits != 0]
        if len(hits):
            delta = int(hits[0])
            terms = (a, int(nxt[delta]), int(last[delta]))
            return APWitness(terms, delta, tuple(AB[t] for t in terms))
    return None


def exceeds_threshold(q: int, a: int, b: int) -> bool:
    """|A| |B| > q (sqrt(q) + 1), decided in integers."""
    n = a * b - q
    # n > q^(3/2)  iff  n > 0 and n^2 > q^3
    return n > 0 and n * n > q**3


def threshold_size(q: int) -> int:
    """Smallest integer product a*b exceeding q (sqrt(q) + 1)."""
    n = q + isqrt(q**3)
    while not exceeds_threshold(q, n, 1):
        n += 1
    return n


def _first_pivot(A: EntrySet, B: EntrySet):
    nz_a = [x for x in A if x != 0]
    nz_b = [y for y in B if y != 0]
    return (nz_a[0], nz_b[0]) if nz_a and nz_b else None


def check_ap_threshold(q_values, trials: int, seed: int = 0) -> Report:
    """Random pairs (A, B) over the threshold must contain a progression.

    Sizes are drawn uniformly among pairs with |A| |B| above the threshold;
    each draw also checks that the quadruple count at the first nonzero
    pivot beats the trivial solutions.  Draws without a pivot are skipped.
    """
    rng = SplitMix64(seed)
    report = Report("ap_threshold", {"q_values": list(q_values), "trials": trials, "seed": seed})
    skipped = []
    for n in range(trials):
        q = list(q_values)[n % len(q_values)]
        F = field_for_order(q)
        sizes = [(a, b) for a in range(1, q + 1) for b in range(1, q + 1)
                 if exceeds_threshold(q, a, b)]
        if not sizes:
            raise ValueError(f"no pair of set sizes exceeds the threshold for q={q}")
        a, b = sizes[rng.below(len(sizes))]
        A = random_set(F, a, rng.next())
        B = random_set(F, b, rng.next())
        inst = {"q": q, "A": list(A.members), "B": list(B.members)}
        pivot = _first_pivot(A, B)
        if pivot is None:
            skipped.append(inst)
            continue
        w = find_3ap_in_productset(A, B)
        ok = w is not None and w.verify(A, B)
        report.add(CheckRecord(f"trial {n}: progression in AB", int(ok), 1, ok,
                               None if ok else inst))
        count = quadruple_count(A, B, *pivot)
        trivial = trivial_solution_count(A, B, *pivot)
        report.add(CheckRecord(f"trial {n}: quadruples beat trivial solutions", count, trivial,
                               count > trivial, None if count > trivial else
                               {**inst, "pivot": list(pivot)}))
    report.extra["skipped"] = skipped
    return report

