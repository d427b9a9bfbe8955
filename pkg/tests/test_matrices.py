import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from detlab.detcount import explicit_set
from detlab.field import make_field
from detlab.matrices import (
    FqMatrix,
    cofactor_vector,
    cramer_reconstruct,
    det,
    enumerate_matrices,
    minor_det,
    partition_ranges,
    stack,
)
from detlab._compute import BudgetExceeded
from oracles import PolyField, leibniz_det, alternating_vector

SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)]


def M(F, rows):
    return FqMatrix(F, np.array(rows))


def test_det_examples():
    assert det(M(make_field(5), [[1, 2], [3, 4]])) == 3
    assert det(M(make_field(3), np.eye(3, dtype=int))) == 1
    assert det(M(make_field(7), [[2, 0, 0], [0, 3, 0], [0, 0, 4]])) == 3


def test_det_rejects_non_square():
    with pytest.raises(ValueError):
        det(M(make_field(5), [[1, 2]]))


def test_shape_and_entry_validation():
    F = make_field(5)
    with pytest.raises(ValueError):
        M(F, [[5]])
    with pytest.raises(ValueError):
        FqMatrix(F, np.zeros((7, 7), dtype=int))


def test_minor_examples():
    F5, F3 = make_field(5), make_field(3)
    assert minor_det(M(F5, [[1, 2]]), 1) == 2
    assert minor_det(M(F5, [[1, 2]]), 2) == 1
    m = M(F3, [[1, 0, 1], [0, 1, 1]])
    assert minor_det(m, 3) == 1
    assert minor_det(m, 1) == 2
    with pytest.raises(IndexError):
        minor_det(m, 4)


def test_cofactor_examples():
    F5, F3 = make_field(5), make_field(3)
    assert cofactor_vector(M(F5, [[1, 2]]), "paper").coords == (3, 1)
    assert cofactor_vector(M(F5, [[1, 2]]), "laplace").coords == (3, 1)
    m = M(F3, [[1, 0, 1], [0, 1, 1]])
    v = cofactor_vector(m, "laplace")
    x = [1, 1, 1]
    assert F3.dot(np.array(x), v.as_array()) == det(stack(m, x))


@st.composite
def matrix_case(draw, square=False):
    p, r = draw(st.sampled_from(SMALL_FIELDS))
    F = make_field(p, r)
    d = draw(st.integers(2, 5))
    rows = d if square else d - 1
    ent = draw(st.lists(st.integers(0, F.q - 1), min_size=rows * d, max_size=rows * d))
    x = draw(st.lists(st.integers(0, F.q - 1), min_size=d, max_size=d))
    return F, FqMatrix(F, np.array(ent).reshape(rows, d)), x


@given(matrix_case())
def test_laplace_identity(case):
    F, m, x = case
    v = cofactor_vector(m, "laplace").as_array()
    assert F.dot(np.array(x), v) == det(stack(m, x))


@given(matrix_case())
def test_convention_relation(case):
    F, m, _ = case
    d = m.cols
    alt = cofactor_vector(m, "paper").coords
    lap = cofactor_vector(m, "laplace").coords
    assert alt == (lap if d % 2 == 0 else tuple(F.neg(c) for c in lap))


@given(matrix_case())
def test_alternating_vector_matches_oracle(case):
    F, m, _ = case
    if m.cols > 4:
        return
    O = PolyField(F.p, F.modulus)
    assert cofactor_vector(m, "paper").coords == alternating_vector(O, [tuple(r) for r in m.tolist()])


@given(matrix_case(square=True))
def test_det_matches_leibniz(case):
    F, m, _ = case
    if m.cols > 4:
        return
    assert det(m) == leibniz_det(PolyField(F.p, F.modulus), m.tolist())


@given(matrix_case(square=True), st.data())
def test_row_swap_antisymmetry(case, data):
    F, m, _ = case
    i, j = data.draw(st.sampled_from(list(itertools.combinations(range(m.rows), 2))))
    rows = m.entries.copy()
    rows[[i, j]] = rows[[j, i]]
    assert det(FqMatrix(F, rows)) == F.neg(det(m))


@given(matrix_case(square=True), st.data())
def test_det_multiplicative(case, data):
    F, a, _ = case
    n = a.cols
    ent = data.draw(st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n))
    b = FqMatrix(F, np.array(ent).reshape(n, n))
    assert det(a @ b) == F.mul(det(a), det(b))


# --- enumeration ----------------------------------------------------------------


def test_enumeration_examples():
    F3 = make_field(3)
    A = explicit_set(F3, [0, 1])
    assert [m.tolist() for m in enumerate_matrices(A, 1, 1)] == [[[0]], [[1]]]
    mats = [m.entries.tobytes() for m in enumerate_matrices(A, 2, 2)]
    assert len(mats) == 16 and len(set(mats)) == 16
    B = explicit_set(make_field(7), [1, 2, 4])
    assert len(list(enumerate_matrices(B, 1, 2))) == 9


def test_enumeration_order_is_odometer():
    A = explicit_set(make_field(5), [1, 3])
    got = [tuple(m.entries.ravel()) for m in enumerate_matrices(A, 2, 2)]
    assert got == list(itertools.product([1, 3], repeat=4))


def test_enumeration_partitions_concatenate():
    A = explicit_set(make_field(5), [0, 2, 4])
    full = [m.entries.tobytes() for m in enumerate_matrices(A, 2, 3)]
    for parts in (1, 2, 4, 27):
        pieces = []
        for lo, hi in partition_ranges(27, parts):
            pieces += [m.entries.tobytes() for m in enumerate_matrices(A, 2, 3, (lo, hi))]
        assert pieces == full


def test_enumeration_budget():
    A = explicit_set(make_field(5), [0, 1, 2])
    with pytest.raises(BudgetExceeded):
        enumerate_matrices(A, 3, 3, budget=1000)


def test_partition_ranges_cover():
    for total in (1, 5, 17):
        for parts in (1, 3, 8, 40):
            ranges = partition_ranges(total, parts)
            assert ranges[0][0] == 0 and ranges[-1][1] == total
            assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))


# --- Cramer reconstruction ------------------------------------------------------


def insert_column(Mi, col, i):
    return FqMatrix(Mi.field, np.insert(Mi.entries, i - 1, col, axis=1))


def test_cramer_examples():
    F5 = make_field(5)
    col = cramer_reconstruct(M(F5, [[2]]), [3, 4], 1)
    assert col.tolist() == [4]
    assert cofactor_vector(M(F5, [[4, 2]]), "paper").coords == (3, 4)
    F3 = make_field(3)
    assert cramer_reconstruct(M(F3, np.eye(2, dtype=int)), [2], 3).tolist() == [0, 0]


def test_cramer_errors():
    F5 = make_field(5)
    with pytest.raises(ValueError, match="singular"):
        cramer_reconstruct(M(F5, [[1, 2], [2, 4]]), [0, 1, 1], 1)
    with pytest.raises(ValueError, match="inconsistent"):
        cramer_reconstruct(M(F5, [[2]]), [2, 4], 1)


def _cramer_cases(q_field, d, limit=None, seed=0):
    """(Mi, i, tail) with det(Mi) = (-1)^i y_i; all of them, or a sample."""
    F = q_field
    n = d - 1
    rng = np.random.default_rng(seed)
    all_mi = itertools.product(range(F.q), repeat=n * n)
    if limit is not None:
        all_mi = (tuple(rng.integers(0, F.q, n * n)) for _ in range(limit))
    for ent in all_mi:
        Mi = FqMatrix(F, np.array(ent).reshape(n, n))
        D = det(Mi)
        if D == 0:
            continue
        for i in range(1, d + 1):
            yi = D if i % 2 == 0 else F.neg(D)
            for rest in itertools.product(range(F.q), repeat=d - i):
                yield Mi, i, [yi, *rest]


@pytest.mark.parametrize("p,r,d,limit", [
    (3, 1, 2, None), (5, 1, 2, None), (7, 1, 2, None),
    (3, 1, 3, None), (5, 1, 3, 12), (7, 1, 3, 4), (3, 2, 2, None),
])
def test_cramer_unique_completion(p, r, d, limit):
    F = make_field(p, r)
    for Mi, i, tail in _cramer_cases(F, d, limit):
        target = (0,) * (i - 1) + tuple(tail)
        solutions = [col for col in itertools.product(range(F.q), repeat=d - 1)
                     if cofactor_vector(insert_column(Mi, col, i), "paper").coords == target]
        assert len(solutions) == 1
        assert tuple(cramer_reconstruct(Mi, tail, i).tolist()) == solutions[0]


def test_unsigned_combination_fails_for_even_index():
    # m_i = det(Mi)^-1 * sum_{j>i} y_j m_j, without the (-1)^(i+1) factor,
    # lands on the negated tail when i is even.
    F = make_field(5)
    Mi = M(F, [[1, 2], [3, 4]])
    D = det(Mi)
    i, tail = 2, [D, 3]  # d = 3, y_2 = det(Mi)
    unsigned = np.asarray(F.mul(F.inv(D), F.mul(Mi.entries[:, 1], 3)))
    v = cofactor_vector(insert_column(Mi, unsigned, i), "paper").coords
    assert v == (0, D, F.neg(3))
    signed = cramer_reconstruct(Mi, tail, i)
    assert cofactor_vector(insert_column(Mi, signed, i), "paper").coords == (0, D, 3)
