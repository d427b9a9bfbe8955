"""Budgets, work partitioning and kernel argument plumbing."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from contextvars import ContextVar

import numpy as np

from . import _kernels
from .field import FiniteField

DEFAULT_BUDGET = 10**9
# Dense arrays over F_q^d are used up to this many points.
DENSE_POINTS = 2**24
INT64_LIMIT = 2**63


class BudgetExceeded(ValueError):
    """Raised instead of silently truncating an enumeration."""


_SCOPED_BUDGET: ContextVar[int | None] = ContextVar("detlab_budget", default=None)


@contextmanager
def budget_scope(budget: int | None):
    """Use `budget` as the default for every check inside the block."""
    token = _SCOPED_BUDGET.set(budget)
    try:
        yield
    finally:
        _SCOPED_BUDGET.reset(token)


def default_budget() -> int:
    scoped = _SCOPED_BUDGET.get()
    if scoped is not None:
        return scoped
    env = os.environ.get("DETLAB_BUDGET")
    if env:
        return int(float(env))
    return DEFAULT_BUDGET


def check_budget(visits: int, budget: int | None = None) -> None:
    limit = default_budget() if budget is None else budget
    if visits > limit:
        raise BudgetExceeded(f"{visits} visits exceed the enumeration budget of {limit}")


_EMPTY = np.zeros(0, dtype=np.uint8)


def kernel_args(F: FiniteField):
    """(row dtype, p, q, addt, mult, negt) for the compiled kernels."""
    tables = F.kernel_tables
    if tables is not None:
        add, mul, neg = tables
        return np.uint8, F.p, F.q, add, mul, neg
    if F.is_prime_field:
        return np.int64, F.p, F.q, _EMPTY, _EMPTY, _EMPTY
    raise NotImplementedError(
        f"compiled kernels support prime fields and fields with q <= 256, not F_{F.q}"
    )


def run_partitioned(fn, ranges, workers: int = 1):
    """Apply fn to every range; thread pool when workers > 1.  Order preserved."""
    if workers <= 1 or len(ranges) <= 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: fn(*r), ranges))


def bilinear_counts(F: FiniteField, us, wf, ys, wg, workers: int = 1,
                    force_python: bool = False) -> list[int]:
    """Exact hist[t] = sum over (a, b) with us[a] . ys[b] = t of wf[a] * wg[b].

    Uses the int64 kernel when the total mass fits, otherwise accumulates
    per-row partial histograms in Python integers.
    """
    from .matrices import partition_ranges

    us = np.asarray(us, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    wf = np.asarray(wf, dtype=np.int64)
    wg = np.asarray(wg, dtype=np.int64)
    if len(us) == 0 or len(ys) == 0:
        return [0] * F.q
    mass_f = sum(int(w) for w in wf)
    mass_g = sum(int(w) for w in wg)
    if not force_python and mass_f * mass_g < INT64_LIMIT:
        dtype, p, q, add, mul, _ = kernel_args(F)
        u8, y8 = us.astype(dtype), ys.astype(dtype)

        def part(lo, hi):
            return _kernels.bilinear_histogram(u8[lo:hi], wf[lo:hi], y8, wg, p, q, add, mul)

        hists = run_partitioned(part, partition_ranges(len(us), workers), workers)
        total = np.sum(hists, axis=0)
        return [int(v) for v in total]
    if mass_g >= INT64_LIMIT:
        raise OverflowError("weights of g exceed the exact int64 range")
    out = [0] * F.q
    for a in range(len(us)):
        t = np.asarray(F.dot(us[a][None, :], ys)).reshape(-1)
        partial = np.zeros(F.q, dtype=np.int64)
        np.add.at(partial, t, wg)
        w = int(wf[a])
        for tv in np.flatnonzero(partial):
            out[tv] += w * int(partial[tv])
    return out
