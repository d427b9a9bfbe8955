"""Exact determinant distributions N_d(A; t) and the cofactor density g.

Two independent routes to the same table:

* :func:`count_bruteforce` visits every d x d matrix over A and buckets its
  determinant;
* :func:`count_via_cofactors` builds the histogram g of signed-minor vectors
  of (d-1) x d matrices and sums f(x) g(y) over x . y = t with f the
  indicator of A^d.

Counts are Python integers in every public structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from ._compute import (
    DENSE_POINTS,
    INT64_LIMIT,
    BudgetExceeded,
    bilinear_counts,
    check_budget,
    kernel_args,
    run_partitioned,
)
from .field import FiniteField, make_field
from .matrices import (
    cartesian_rows,
    coordinate_sign,
    partition_ranges,
    permutation_signs,
)
from .rng import SplitMix64, sample

__all__ = [
    "BudgetExceeded",
    "DensityFunction",
    "DistributionTable",
    "EntrySet",
    "count_bruteforce",
    "count_via_cofactors",
    "explicit_set",
    "full_set",
    "g_histogram",
    "interval_set",
    "pair_statistic_S",
    "parse_set",
    "random_set",
]


# --- entry sets -------------------------------------------------------------


@dataclass(frozen=True)
class EntrySet:
    """A subset of F_q with sorted, distinct members."""

    field: FiniteField
    members: tuple[int, ...]
    descriptor: str
    seed: int | None = None

    def __post_init__(self):
        m = tuple(sorted(int(v) for v in self.members))
        if len(set(m)) != len(m):
            raise ValueError("entry set has duplicate members")
        if m and (m[0] < 0 or m[-1] >= self.field.q):
            raise ValueError(f"members must be element indices of F_{self.field.q}")
        object.__setattr__(self, "members", m)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, a):
        return int(a) in self.members

    def as_array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)

    def scaled(self, c: int) -> EntrySet:
        """The set cA."""
        vals = np.asarray(self.field.mul(c, self.as_array())).tolist()
        return EntrySet(self.field, tuple(vals), f"scaled:{c}:{self.descriptor}")

    def describe(self) -> dict:
        return {"descriptor": self.descriptor, "seed": self.seed, "members": list(self.members)}


def explicit_set(F: FiniteField, values) -> EntrySet:
    vals = [int(v) for v in values]
    if len(set(vals)) != len(vals):
        raise ValueError("entry set has duplicate members")
    return EntrySet(F, tuple(vals), "list:" + ",".join(str(v) for v in sorted(vals)))


def full_set(F: FiniteField) -> EntrySet:
    return EntrySet(F, tuple(range(F.q)), "full")


def interval_set(p, H: int) -> EntrySet:
    """Residues of -H..H in a prime field, 1 <= H <= (p-1)/2."""
    F = p if isinstance(p, FiniteField) else make_field(int(p))
    if not F.is_prime_field:
        raise ValueError("intervals are only defined over prime fields")
    if not 1 <= H <= (F.p - 1) // 2:
        raise ValueError(f"H must lie in 1..{(F.p - 1) // 2}, got {H}")
    return EntrySet(F, tuple(v % F.p for v in range(-H, H + 1)), f"interval:{H}")


def random_set(F: FiniteField, size: int, seed: int) -> EntrySet:
    """Seeded Fisher-Yates draw of `size` distinct elements (see rng.py)."""
    members = sample(F.q, size, SplitMix64(seed))
    return EntrySet(F, tuple(members), f"random:{size}", seed)


def parse_set(F: FiniteField, text: str, seed: int | None = None) -> EntrySet:
    """Parse ``list:a,b,..`` | ``interval:H`` | ``full`` | ``random:N``."""
    kind, _, arg = text.partition(":")
    if kind == "list":
        if not arg:
            raise ValueError("list: needs at least one element")
        return explicit_set(F, [int(v) for v in arg.split(",")])
    if kind == "interval":
        return interval_set(F, int(arg))
    if kind == "full" and not arg:
        return full_set(F)
    if kind == "random":
        return random_set(F, int(arg), 0 if seed is None else seed)
    raise ValueError(f"unrecognised set descriptor {text!r}")


# --- points of F_q^d --------------------------------------------------------


def point_index(F: FiniteField, coords) -> np.ndarray:
    """Odometer index of points (last axis = coordinates, first most significant)."""
    coords = np.asarray(coords, dtype=np.int64)
    d = coords.shape[-1]
    weights = F.q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return coords @ weights


def point_coords(F: FiniteField, d: int, index) -> np.ndarray:
    index = np.asarray(index, dtype=np.int64)
    weights = F.q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return (index[..., None] // weights) % F.q


# --- density functions ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityFunction:
    """Non-negative integer function on F_q^d, stored by its support.

    ``points`` are sorted odometer indices with strictly positive
    ``weights``.  The total mass must stay below 2^63.
    """

    field: FiniteField
    d: int
    points: np.ndarray = dc_field(repr=False)
    weights: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1)
        w = np.asarray(self.weights, dtype=np.int64).reshape(-1)
        if pts.shape != w.shape:
            raise ValueError("points and weights differ in length")
        if np.any(w < 0):
            raise ValueError("density functions are non-negative")
        keep = w > 0
        pts, w = pts[keep], w[keep]
        order = np.argsort(pts, kind="stable")
        pts, w = pts[order], w[order]
        if len(pts) > 1 and np.any(np.diff(pts) == 0):
            raise ValueError("duplicate support points")
        if len(pts) and (pts[0] < 0 or pts[-1] >= self.field.q**self.d):
            raise ValueError("support point outside F_q^d")
        if sum(int(v) for v in w) >= INT64_LIMIT:
            raise OverflowError("total mass exceeds the exact int64 range")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    # constructors

    @classmethod
    def from_dense(cls, F: FiniteField, d: int, values) -> DensityFunction:
        values = np.asarray(values, dtype=np.int64).reshape(-1)
        if len(values) != F.q**d:
            raise ValueError(f"expected {F.q**d} values, got {len(values)}")
        pts = np.flatnonzero(values)
        return cls(F, d, pts, values[pts])

    @classmethod
    def from_points(cls, F: FiniteField, d: int, coords, weights=None) -> DensityFunction:
        """Aggregate (possibly repeated) points given as coordinate rows."""
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, d)
        idx = point_index(F, coords)
        w = np.ones(len(idx), dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)
        pts, inv = np.unique(idx, return_inverse=True)
        agg = np.zeros(len(pts), dtype=np.int64)
        np.add.at(agg, inv, w)
        return cls(F, d, pts, agg)

    @classmethod
    def cartesian_indicator(cls, A: EntrySet, d: int) -> DensityFunction:
        """f(x) = A(x_1) ... A(x_d)."""
        rows = cartesian_rows(A.members, d)
        return cls.from_points(A.field, d, rows)

    @classmethod
    def zero(cls, F: FiniteField, d: int) -> DensityFunction:
        return cls(F, d, np.zeros(0, np.int64), np.zeros(0, np.int64))

    # queries

    @property
    def support_size(self) -> int:
        return len(self.points)

    def coords(self) -> np.ndarray:
        return point_coords(self.field, self.d, self.points)

    def __call__(self, x) -> int:
        idx = int(point_index(self.field, np.asarray(x).reshape(1, -1))[0])
        return self.at_index(idx)

    def at_index(self, idx: int) -> int:
        j = np.searchsorted(self.points, idx)
        if j < len(self.points) and self.points[j] == idx:
            return int(self.weights[j])
        return 0

    def norm1(self) -> int:
        return sum(int(w) for w in self.weights)

    def norm2_squared(self) -> int:
        return sum(int(w) * int(w) for w in self.weights)

    def norm(self, r: float) -> float:
        """(sum |f(x)|^r)^(1/r)."""
        if r <= 0:
            raise ValueError("r must be positive")
        return float(np.sum(self.weights.astype(float) ** r) ** (1.0 / r))

    def dense(self, limit: int = DENSE_POINTS) -> np.ndarray:
        n = self.field.q**self.d
        if n > limit:
            raise BudgetExceeded(f"dense array of {n} points exceeds the limit {limit}")
        out = np.zeros(n, dtype=np.int64)
        out[self.points] = self.weights
        return out

    def punctured(self) -> DensityFunction:
        """The same function with the value at the origin set to 0."""
        keep = self.points != 0
        return DensityFunction(self.field, self.d, self.points[keep], self.weights[keep])

    def __eq__(self, other):
        return (
            isinstance(other, DensityFunction)
            and self.field == other.field
            and self.d == other.d
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )


# --- distribution tables ----------------------------------------------------


@dataclass(frozen=True)
class DistributionTable:
    """Exact counts t -> N_d(A; t) for every t in F_q."""

    field: FiniteField
    d: int
    entry_set: EntrySet
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) != self.field.q:
            raise ValueError("one count per field element required")

    def __getitem__(self, t: int) -> int:
        return self.counts[t]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict[int, int]:
        return dict(enumerate(self.counts))


def pair_statistic_S(table: DistributionTable) -> int:
    """S_d(A) = sum over l != 0 of N_d(A; l)^2."""
    return sum(c * c for c in table.counts[1:])


# --- brute force ------------------------------------------------------------


def count_bruteforce(A: EntrySet, d: int, budget: int | None = None,
                     workers: int = 1) -> DistributionTable:
    """Enumerate all |A|^(d^2) matrices and bucket their determinants."""
    F = A.field
    k = len(A)
    if d < 1:
        raise ValueError("d must be positive")
    check_budget(k ** (d * d), budget)
    if d == 1:
        counts = [1 if t in A else 0 for t in range(F.q)]
        return DistributionTable(F, d, A, counts)
    if k == 0:
        return DistributionTable(F, d, A, [0] * F.q)
    dtype, p, q, add, mul, neg = kernel_args(F)
    rows = cartesian_rows(A.members, d).astype(dtype)
    perms, signs = permutation_signs(d)

    def part(lo, hi):
        return _kernels.det_histogram(rows, d, lo, hi, p, q, add, mul, neg, perms, signs)

    hists = run_partitioned(part, partition_ranges(len(rows), workers), workers)
    counts = np.sum(hists, axis=0)
    return DistributionTable(F, d, A, [int(c) for c in counts])


# --- cofactor density and the decomposition route ---------------------------

# Matrices handled per kernel call when building g; bounds scratch memory.
_CHUNK = 2**22


def g_histogram(A: EntrySet, d: int, convention: str = "laplace",
                budget: int | None = None, workers: int = 1) -> DensityFunction:
    """g(y) = #{M in M_{d-1,d}(A) : v(M) = y}."""
    F = A.field
    k = len(A)
    if d < 1:
        raise ValueError("d must be positive")
    coordinate_sign(max(d, 2), 1, convention)  # validates the name
    if d == 1:
        # The single empty matrix; its only minor is the empty determinant 1.
        one = 1 if coordinate_sign(1, 1, convention) > 0 else F.neg(1)
        return DensityFunction(F, 1, [one], [1])
    check_budget(k ** (d * (d - 1)), budget)
    if k == 0:
        return DensityFunction.zero(F, d)
    dtype, p, q, add, mul, neg = kernel_args(F)
    rows = cartesian_rows(A.members, d).astype(dtype)
    nr = len(rows)
    minor_cols = np.array([[c for c in range(d) if c != i] for i in range(d)], dtype=np.int64)
    mperms, msigns = permutation_signs(d - 1)
    coord_neg = np.array([coordinate_sign(d, i + 1, convention) < 0 for i in range(d)])
    n_points = F.q**d
    dense = n_points <= DENSE_POINTS
    per_row = nr ** (d - 2)
    rows_per_chunk = max(1, _CHUNK // per_row)
    ranges = [(lo, min(lo + rows_per_chunk, nr)) for lo in range(0, nr, rows_per_chunk)]

    def part(lo, hi):
        pts = _kernels.cofactor_points(rows, d, lo, hi, p, q, add, mul, neg,
                                       minor_cols, mperms, msigns, coord_neg)
        if dense:
            return np.bincount(pts, minlength=n_points)
        return np.unique(pts, return_counts=True)

    pieces = run_partitioned(part, ranges, workers)
    if dense:
        return DensityFunction.from_dense(F, d, np.sum(pieces, axis=0))
    pts = np.concatenate([u for u, _ in pieces])
    cnt = np.concatenate([c for _, c in pieces])
    uniq, inv = np.unique(pts, return_inverse=True)
    agg = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(agg, inv, cnt)
    return DensityFunction(F, d, uniq, agg)


def count_via_cofactors(A: EntrySet, d: int, budget: int | None = None,
                        workers: int = 1) -> DistributionTable:
    """N_d(A; t) = sum over x . y = t of f(x) g(y), laplace-convention g."""
    F = A.field
    k = len(A)
    if d < 1:
        raise ValueError("d must be positive")
    check_budget(k ** (d * (d - 1)), budget)
    g = g_histogram(A, d, "laplace", budget=budget, workers=workers)
    check_budget(k ** (d * (d - 1)) + k**d * g.support_size, budget)
    if k == 0:
        return DistributionTable(F, d, A, [0] * F.q)
    xs = cartesian_rows(A.members, d)
    counts = bilinear_counts(F, xs, np.ones(len(xs), dtype=np.int64),
                             g.coords(), g.weights, workers=workers)
    return DistributionTable(F, d, A, counts)


def gl_order(q: int, d: int) -> int:
    """|GL_d(F_q)| = prod_{i<d} (q^d - q^i)."""
    out = 1
    for i in range(d):
        out *= q**d - q**i
    return out
