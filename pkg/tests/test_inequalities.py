import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from detlab import inequalities as ineq
from detlab.detcount import (
    count_bruteforce,
    count_via_cofactors,
    explicit_set,
    full_set,
    pair_statistic_S,
    random_set,
)
from detlab.field import make_field


def worked():
    return explicit_set(make_field(3), [0, 1])


def records(report):
    return {r.check: r for r in report.records}


# --- worked example -------------------------------------------------------------


def test_pointwise_worked_example():
    rec = records(ineq.check_g_pointwise(worked(), 2))
    assert (rec["g pointwise i=2"].lhs, rec["g pointwise i=2"].rhs) == (1, 1)
    assert all(r.passed for r in rec.values())


def test_tail_sum_worked_example():
    rec = records(ineq.check_tail_sum(worked(), 2))["tail sum i=1"]
    assert (rec.lhs, rec.rhs, rec.passed) == (2, 2, True)


def test_g_second_moment_worked_example():
    rep = ineq.check_lemma1_and_e7(worked(), 2)
    rec = records(rep)
    # lhs 3 from g at (2,0), (0,1), (2,1); rhs (|A| + 1) * sum_{l != 0} N_1(A; l)^2 = 3 * 1
    assert (rec["g second moment total"].lhs, rec["g second moment total"].rhs) == (3, 3)
    assert (rec["g second moment i=1"].lhs, rec["g second moment i=1"].rhs) == (2, 2)
    assert (rec["g second moment i=2"].lhs, rec["g second moment i=2"].rhs) == (1, 1)
    assert rep.passed


def test_deviation_worked_example():
    rec = ineq.check_e8(worked(), 2, 1).records[0]
    assert rec.lhs == Fraction(49, 9) and rec.rhs == 48 and rec.passed


def test_deviation_rejects_zero_t():
    with pytest.raises(ValueError):
        ineq.check_e8(worked(), 2, 0)


def test_s_recursion_worked_example():
    rep = ineq.check_m4_chain(worked(), 2)
    assert rep.passed
    assert rep.extra["S_d"] == 18
    assert records(rep)["(a) S_d <= sum_t nu(t)^2"].lhs == 18


def test_recursion_needs_d_at_least_2():
    with pytest.raises(ValueError):
        ineq.check_tail_sum(worked(), 1)


# --- degenerate sets ------------------------------------------------------------


def test_zero_set():
    A = explicit_set(make_field(5), [0])
    for d in (2, 3):
        assert ineq.check_lemma1_and_e7(A, d).extra["g2_nonzero"] == 0
        rep = ineq.check_m4_chain(A, d)
        assert rep.passed and rep.extra["S_d"] == 0


def test_literal_composed_bound_counterexample():
    # N_2(A; t) = 0 for t != 0, so the left side is (1/q)^2 while S_1 = 0.
    rep = ineq.check_composed_bound(explicit_set(make_field(3), [0]), 2)
    gated, literal = rep.records
    assert gated.passed and gated.gating
    assert not literal.passed and not literal.gating
    assert literal.lhs == Fraction(1, 9) and literal.rhs == 0
    assert rep.passed


def test_full_field_deviation_has_slack():
    rep = ineq.check_e8_all(full_set(make_field(3)), 2)
    assert rep.passed
    # (24 - 27)^2 = 9 against 3 * 3^2 * ||g||_2^2 = 243
    assert all(r.lhs == 9 and r.rhs == 243 for r in rep.records)


# --- exhaustive and randomized checks -------------------------------------------


SETS = [(q, d, A) for q in (3, 5) for d in (2, 3) for k in (1, 2, 3)
        for A in itertools.combinations(range(q), k)]


@pytest.mark.parametrize("q,d", [(3, 2), (3, 3), (5, 2), (5, 3)])
def test_recursion_suite_exhaustive_small_sets(q, d):
    F = make_field(q)
    bad = []
    for q_, d_, A in SETS:
        if (q_, d_) != (q, d):
            continue
        rep = ineq.recursion_suite(explicit_set(F, A), d)
        if not rep.passed:
            bad.append((A, [r.check for r in rep.failures()]))
    assert bad == []


def test_pointwise_f5_exhaustive():
    A = explicit_set(make_field(5), [1, 2, 3])
    assert ineq.check_g_pointwise(A, 3).passed
    assert ineq.check_tail_sum(A, 3).passed


@settings(max_examples=25)
@given(st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2)]), st.integers(2, 3), st.data())
def test_recursion_suite_random(field, d, data):
    F = make_field(*field)
    size = data.draw(st.integers(1, F.q if d == 2 else min(F.q, 4)))
    A = random_set(F, size, data.draw(st.integers(0, 2**32)))
    assert ineq.recursion_suite(A, d).passed


@settings(max_examples=20)
@given(st.sampled_from([3, 5, 7]), st.integers(2, 3), st.data())
def test_s_consistency(q, d, data):
    F = make_field(q)
    A = random_set(F, data.draw(st.integers(1, min(q, 4))), data.draw(st.integers(0, 999)))
    rep = ineq.check_m4_chain(A, d)
    assert rep.extra["S_d"] == pair_statistic_S(count_bruteforce(A, d))


# --- interval base case ---------------------------------------------------------


@pytest.mark.parametrize("p,H", [(p, H) for p in (5, 7, 11, 13) for H in (1, 2, 3)
                                 if H <= (p - 1) // 2])
def test_interval_base_case(p, H):
    assert ineq.check_interval_base_case(p, H).passed


def test_congruence_count_small_by_hand():
    total, nonzero = ineq.congruence_pair_counts(3, 1)
    vals = [(a * d - b * c) % 3 for a, b, c, d in itertools.product([-1, 0, 1], repeat=4)]
    assert total == sum(1 for x in vals for y in vals if x == y)
    assert nonzero == sum(1 for x in vals for y in vals if x == y != 0)


# --- convergence series ---------------------------------------------------------


@pytest.mark.parametrize("q", [3, 5, 7])
def test_eps_full_field_closed_form(q):
    F = make_field(q)
    [row] = ineq.convergence_experiment(F, 2, [q], [0])
    assert row.eps == Fraction(1, q * q)


def test_eps_single_element():
    F = make_field(7)
    [row] = ineq.convergence_experiment(F, 2, [1], [3])
    # one matrix, determinant 0: eps = 1 at every t != 0
    assert row.eps == 1


def test_eps_single_nonzero_element_d1():
    F = make_field(7)
    A = explicit_set(F, [3])
    assert ineq.uniformity_error(count_via_cofactors(A, 1)) == F.q - 1


def test_interval_schedule():
    rows = ineq.convergence_experiment(make_field(13), 2, range(1, 7), kind="interval")
    assert [r.size for r in rows] == [3, 5, 7, 9, 11, 13]
    assert rows[-1].eps == Fraction(1, 169)
