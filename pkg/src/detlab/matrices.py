"""Dense matrices over F_q: determinants, minors, signed-minor vectors.

Column indices in the public API are 1-based, matching the usual
notation for minors: ``minor_det(M, i)`` deletes column i.

Two sign conventions exist for the signed-minor vector of a (d-1) x d
matrix M:

* ``"paper"``:   v_i = (-1)^i det(M_i)
* ``"laplace"``: v_i = (-1)^(d+i) det(M_i), so that x . v = det(stack(M, x))

They differ by the global factor (-1)^d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

from ._compute import check_budget
from .field import FiniteField

CONVENTIONS = ("laplace", "paper")
MAX_DIM = 6


@dataclass(frozen=True, eq=False)
class FqMatrix:
    field: FiniteField
    entries: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        if a.shape[0] > MAX_DIM or a.shape[1] > MAX_DIM:
            raise ValueError(f"matrices larger than {MAX_DIM} x {MAX_DIM} are not supported")
        if a.size and (a.min() < 0 or a.max() >= self.field.q):
            raise ValueError(f"entries must be element indices of F_{self.field.q}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def column(self, i: int) -> np.ndarray:
        """Column i (1-based)."""
        return self.entries[:, i - 1]

    def delete_column(self, i: int) -> FqMatrix:
        if not 1 <= i <= self.cols:
            raise IndexError(f"column {i} out of range 1..{self.cols}")
        return FqMatrix(self.field, np.delete(self.entries, i - 1, axis=1))

    def __matmul__(self, other):
        if isinstance(other, FqMatrix):
            return FqMatrix(self.field, matmul(self.field, self.entries, other.entries))
        vec = np.asarray(other, dtype=np.int64)
        return matmul(self.field, self.entries, vec.reshape(-1, 1)).ravel()

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.field == other.field
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.field, self.entries.tobytes(), self.shape))

    def __repr__(self):
        return f"FqMatrix(F_{self.field.q}, {self.entries.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()


def matmul(F: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError("shape mismatch in matrix product")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = np.asarray(F.add(out, F.mul(a[:, k : k + 1], b[k : k + 1, :])))
    return out


def det(M: FqMatrix) -> int:
    """Determinant by Gaussian elimination over F_q."""
    m, n = M.shape
    if m != n:
        raise ValueError(f"determinant of a non-square {m} x {n} matrix")
    F = M.field
    a = [list(map(int, row)) for row in M.entries]
    result = 1
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = F.neg(result)
        piv = a[c][c]
        result = F.mul(result, piv)
        inv = F.inv(piv)
        for r in range(c + 1, n):
            if a[r][c]:
                factor = F.mul(a[r][c], inv)
                a[r] = [F.sub(x, F.mul(factor, y)) for x, y in zip(a[r], a[c])]
    return result


def minor_det(M: FqMatrix, i: int) -> int:
    """det of the (d-1) x (d-1) matrix left after deleting column i of M."""
    if M.cols != M.rows + 1:
        raise ValueError(f"expected a (d-1) x d matrix, got {M.rows} x {M.cols}")
    return det(M.delete_column(i))


@dataclass(frozen=True)
class CofactorVector:
    coords: tuple[int, ...]
    convention: str

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


def coordinate_sign(d: int, i: int, convention: str) -> int:
    """Sign (+1 or -1) attached to det(M_i), 1-based i."""
    if convention == "paper":
        return -1 if i % 2 else 1
    if convention == "laplace":
        return -1 if (d + i) % 2 else 1
    raise ValueError(f"unknown sign convention {convention!r}")


def cofactor_vector(M: FqMatrix, convention: str = "laplace") -> CofactorVector:
    d = M.cols
    if M.rows != d - 1:
        raise ValueError(f"expected a (d-1) x d matrix, got {M.rows} x {M.cols}")
    F = M.field
    coords = []
    for i in range(1, d + 1):
        m = minor_det(M, i)
        coords.append(m if coordinate_sign(d, i, convention) > 0 else F.neg(m))
    return CofactorVector(tuple(coords), convention)


def stack(M: FqMatrix, x) -> FqMatrix:
    """Append the row x under M."""
    row = np.asarray(x, dtype=np.int64).reshape(1, -1)
    return FqMatrix(M.field, np.vstack([M.entries, row]))


def row_count(k: int, n: int) -> int:
    return k**n


def partition_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    """Split range(total) into at most `parts` contiguous, non-empty ranges."""
    parts = max(1, min(parts, total))
    bounds = [total * j // parts for j in range(parts + 1)]
    return [(bounds[j], bounds[j + 1]) for j in range(parts) if bounds[j] < bounds[j + 1]]


def cartesian_rows(members, n: int) -> np.ndarray:
    """All vectors of A^n in odometer order (last coordinate fastest)."""
    members = np.asarray(members, dtype=np.int64)
    k = len(members)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.indices((k,) * n).reshape(n, -1).T
    return members[idx]


def enumerate_matrices(A, m: int, n: int, first_rows: tuple[int, int] | None = None,
                       budget: int | None = None) -> Iterator[FqMatrix]:
    """Stream every m x n matrix with entries in A, in odometer order.

    Row-major entries, last entry fastest, over the canonical ordering of A.
    ``first_rows=(lo, hi)`` restricts the first row to the odometer indices
    lo..hi-1 of A^n, which splits the stream into contiguous pieces.
    The budget is checked before the first matrix is produced.
    """
    if m < 1 or n < 1:
        raise ValueError("matrix shape must be at least 1 x 1")
    k = len(A.members)
    if k < 1:
        raise ValueError("entry set is empty")
    rows = cartesian_rows(A.members, n)
    lo, hi = first_rows if first_rows is not None else (0, len(rows))
    if not 0 <= lo <= hi <= len(rows):
        raise ValueError(f"first-row range {(lo, hi)} outside 0..{len(rows)}")
    check_budget((hi - lo) * k ** (n * (m - 1)), budget)

    def stream():
        for r0 in range(lo, hi):
            for rest in itertools.product(range(len(rows)), repeat=m - 1):
                yield FqMatrix(A.field, rows[[r0, *rest]])

    return stream()


def cramer_reconstruct(Mi: FqMatrix, y_tail, i: int) -> np.ndarray:
    """Column m_i completing Mi to a matrix with alternating-sign vector
    (0, ..., 0, y_i, ..., y_d).

    ``y_tail`` is (y_i, ..., y_d) and must satisfy det(Mi) = (-1)^i y_i.
    Inserting the result as column i of Mi gives the unique such matrix.
    The combination is m_i = (-1)^(i+1) det(Mi)^(-1) * sum_{j>i} y_j m_j
    over the columns m_j of Mi that sit right of position i.
    """
    F = Mi.field
    n = Mi.rows
    if Mi.cols != n:
        raise ValueError("Mi must be square")
    d = n + 1
    if not 1 <= i <= d:
        raise IndexError(f"index {i} out of range 1..{d}")
    y_tail = [int(v) for v in y_tail]
    if len(y_tail) != d - i + 1:
        raise ValueError(f"expected {d - i + 1} tail values, got {len(y_tail)}")
    D = det(Mi)
    if D == 0:
        raise ValueError("Mi is singular")
    expected = y_tail[0] if i % 2 == 0 else F.neg(y_tail[0])
    if D != expected:
        raise ValueError("y_i is inconsistent with det(Mi)")
    scale = F.inv(D) if i % 2 == 1 else F.neg(F.inv(D))
    coeff = np.zeros(n, dtype=np.int64)
    # columns i..n of Mi (0-based i-1..n-1) are the original columns i+1..d
    coeff[i - 1 :] = F.mul(scale, np.array(y_tail[1:], dtype=np.int64))
    return Mi @ coeff


def random_matrix(F: FiniteField, m: int, n: int, rng: np.random.Generator) -> FqMatrix:
    return FqMatrix(F, rng.integers(0, F.q, size=(m, n)))


def permutation_signs(n: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    signs = np.empty(len(perms), dtype=np.int64)
    for s, p in enumerate(perms):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if p[a] > p[b])
        signs[s] = -1 if inversions % 2 else 1
    return perms, signs
