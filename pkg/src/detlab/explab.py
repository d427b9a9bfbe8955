"""Experiment configurations and the operations behind each CLI subcommand.

Each ``run_*`` returns ``(data, passed)``: a JSON-ready data section that
depends only on the configuration, and whether every gating check passed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import inequalities as ineq
from . import productset
from ._compute import BudgetExceeded, budget_scope
from .detcount import (
    DensityFunction,
    EntrySet,
    count_bruteforce,
    count_via_cofactors,
    g_histogram,
    gl_order,
    pair_statistic_S,
    parse_set,
)
from .field import FiniteField, make_field
from .reports import CheckRecord, Report
from .rng import SplitMix64
from .spectral import BilinearForm, nu, verify_error_bound, verify_second_moment

OPERATIONS = ("count", "incidence", "recursion", "m4", "ap3", "sweep", "verify-all")


@dataclass
class ExperimentConfig:
    op: str
    p: int
    r: int = 1
    d: int = 2
    set: str = "full"
    seed: int = 0
    t: int | None = None
    budget: int | None = None
    workers: int = 1
    out: str | None = None
    format: str | None = None
    # count
    method: str = "cofactor"
    # incidence
    form: str = "dot"
    # ap3
    set_b: str | None = None
    trials: int = 0
    # sweep
    sizes: list[int] = dc_field(default_factory=list)
    seeds: list[int] = dc_field(default_factory=lambda: [0])
    kind: str = "random"

    def __post_init__(self):
        if self.op not in OPERATIONS:
            raise ValueError(f"unknown operation {self.op!r}")
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.format not in (None, "csv", "json"):
            raise ValueError("format must be csv or json")
        if self.method not in ("cofactor", "bruteforce", "both"):
            raise ValueError("method must be cofactor, bruteforce or both")
        if self.form not in ("dot", "random"):
            raise ValueError("form must be dot or random")
        if self.kind not in ("random", "interval"):
            raise ValueError("kind must be random or interval")

    @property
    def output_format(self) -> str:
        if self.format:
            return self.format
        return "csv" if self.op in ("count", "sweep") else "json"

    def field(self) -> FiniteField:
        return make_field(self.p, self.r)

    def entry_set(self) -> EntrySet:
        return parse_set(self.field(), self.set, self.seed)

    def describe(self) -> dict:
        out = asdict(self)
        for k in ("out", "format", "workers"):
            out.pop(k)
        return out


def _instance(cfg: ExperimentConfig, A: EntrySet) -> dict:
    return {"field": A.field.describe(), "d": cfg.d, "set": A.describe()}


def _reports_data(cfg: ExperimentConfig, A: EntrySet, reports: list[Report], **extra) -> dict:
    return {"config": cfg.describe(), "instance": _instance(cfg, A),
            "reports": [r.to_json() for r in reports], **extra}


def _all_passed(reports) -> bool:
    return all(r.passed for r in reports)


# --- count ---------------------------------------------------------------------


def run_count(cfg: ExperimentConfig):
    A = cfg.entry_set()
    with budget_scope(cfg.budget):
        tables = {}
        if cfg.method in ("cofactor", "both"):
            tables["cofactor"] = count_via_cofactors(A, cfg.d, workers=cfg.workers)
        if cfg.method in ("bruteforce", "both"):
            tables["bruteforce"] = count_bruteforce(A, cfg.d, workers=cfg.workers)
    table = next(iter(tables.values()))
    report = count_report(A, cfg.d, tables)
    return table, report


def count_report(A: EntrySet, d: int, tables: dict) -> Report:
    F = A.field
    report = Report("count", {"field": F.describe(), "d": d, "set": A.descriptor})
    table = next(iter(tables.values()))
    total = len(A) ** (d * d)
    report.add(CheckRecord("sum_t N(t) == |A|^(d^2)", table.total, total, table.total == total))
    if len(tables) == 2:
        a, b = tables["cofactor"].counts, tables["bruteforce"].counts
        diff = [t for t in range(F.q) if a[t] != b[t]]
        report.add(CheckRecord("cofactor route == brute force", len(diff), 0, not diff,
                               {"t": diff[0], "cofactor": a[diff[0]], "bruteforce": b[diff[0]]}
                               if diff else None))
    if len(A) == F.q:
        expected = gl_order(F.q, d) // (F.q - 1)
        bad = [t for t in range(1, F.q) if table[t] != expected]
        report.add(CheckRecord("full field: N(t) == |GL_d| / (q - 1)", table[1], expected,
                               not bad, {"t": bad[0], "N": table[bad[0]]} if bad else None))
    return report


# --- incidence -------------------------------------------------------------------


def random_form(F: FiniteField, d: int, seed: int) -> BilinearForm:
    """First non-degenerate matrix drawn entrywise from the splitmix64 stream."""
    rng = SplitMix64(seed)
    while True:
        m = np.array([[rng.below(F.q) for _ in range(d)] for _ in range(d)], dtype=np.int64)
        try:
            return BilinearForm(F, m)
        except ValueError:
            continue


def incidence_reports(A: EntrySet, d: int, form: str = "dot", seed: int = 0,
                      workers: int = 1):
    """Uniformity and second-moment checks for f = 1_{A^d} against the
    cofactor density g of A."""
    F = A.field
    f = DensityFunction.cartesian_indicator(A, d)
    g = g_histogram(A, d, "laplace", workers=workers)
    B = BilinearForm.dot(F, d) if form == "dot" else random_form(F, d, seed)
    table = nu(f, g, B, workers=workers)
    reports = [verify_error_bound(f, g, B, table)]
    f0 = f.punctured()
    reports.append(verify_second_moment(f0, g, table=nu(f0, g, workers=workers)))
    return table, B, reports


def run_incidence(cfg: ExperimentConfig):
    A = cfg.entry_set()
    with budget_scope(cfg.budget):
        table, B, reports = incidence_reports(A, cfg.d, cfg.form, cfg.seed, cfg.workers)
    extra = {"form": B.tolist(), "nu": list(table.values)}
    if cfg.t is not None:
        extra["nu_t"] = {"t": cfg.t, "value": table[cfg.t]}
    return _reports_data(cfg, A, reports, **extra), _all_passed(reports)


# --- recursion / m4 ------------------------------------------------------------------


def run_recursion(cfg: ExperimentConfig):
    A = cfg.entry_set()
    with budget_scope(cfg.budget):
        parts = [ineq.check_g_pointwise(A, cfg.d), ineq.check_tail_sum(A, cfg.d),
                 ineq.check_lemma1_and_e7(A, cfg.d),
                 ineq.check_e8(A, cfg.d, cfg.t) if cfg.t is not None else ineq.check_e8_all(A, cfg.d),
                 ineq.check_composed_bound(A, cfg.d)]
    return _reports_data(cfg, A, parts), _all_passed(parts)


def run_m4(cfg: ExperimentConfig):
    A = cfg.entry_set()
    with budget_scope(cfg.budget):
        rep = ineq.check_m4_chain(A, cfg.d)
    return _reports_data(cfg, A, [rep]), rep.passed


# --- ap3 ------------------------------------------------------------------------------


def ap3_reports(A: EntrySet, B: EntrySet, trials: int = 0, seed: int = 0) -> list[Report]:
    F = A.field
    report = Report("ap3", {"field": F.describe(), "A": A.describe(), "B": B.describe()})
    w = productset.find_3ap_in_productset(A, B)
    above = productset.exceeds_threshold(F.q, len(A), len(B))
    report.extra["witness"] = w.to_json() if w else None
    report.extra["above_threshold"] = above
    if above:
        ok = w is not None and w.verify(A, B)
        report.add(CheckRecord("|A||B| > q(sqrt(q)+1) => progression in AB", int(ok), 1, ok,
                               None if ok else {"A": list(A), "B": list(B)}))
    elif w is not None:
        report.add(CheckRecord("witness verifies", int(w.verify(A, B)), 1, w.verify(A, B)))
    reports = [report]
    pivot = productset._first_pivot(A, B)
    if pivot is None:
        report.extra["pivot"] = None
        report.extra["note"] = "no pivot with x1 y1 != 0; quadruple checks skipped"
    else:
        report.extra["pivot"] = list(pivot)
        reports.append(productset.check_quadruple_lower_bound(A, B, *pivot))
    if trials:
        reports.append(productset.check_ap_threshold([F.q], trials, seed))
    return reports


def run_ap3(cfg: ExperimentConfig):
    A = cfg.entry_set()
    B = parse_set(A.field, cfg.set_b, cfg.seed) if cfg.set_b else A
    reports = ap3_reports(A, B, cfg.trials, cfg.seed)
    return _reports_data(cfg, A, reports), _all_passed(reports)


# --- sweep ----------------------------------------------------------------------------


SWEEP_HEADER = ["size", "q", "d", "set", "seed", "eps", "eps_float", "S", "elapsed_ms", "status"]


def run_sweep(cfg: ExperimentConfig) -> list[list]:
    """One row per (size, seed); rows over budget are marked skipped."""
    F = cfg.field()
    rows = []
    seeds = cfg.seeds if cfg.kind == "random" else [None]
    for size in cfg.sizes:
        for seed in seeds:
            try:
                [row] = ineq.convergence_experiment(
                    F, cfg.d, [size], [seed], cfg.kind, workers=cfg.workers, budget=cfg.budget)
            except BudgetExceeded:
                rows.append([size, F.q, cfg.d, f"{cfg.kind}:{size}", seed, "", "", "", "",
                             "skipped"])
                continue
            rows.append([row.size, F.q, cfg.d, row.descriptor, seed, row.eps,
                         float(row.eps), row.S, round(row.elapsed_ms, 3), "ok"])
    return rows


# --- verify-all ---------------------------------------------------------------------------


def verify_all(cfg: ExperimentConfig):
    """Every check that applies to the configured instance."""
    A = cfg.entry_set()
    d = cfg.d
    reports: list[Report] = []
    skipped: list[str] = []
    with budget_scope(cfg.budget):
        tables = {"cofactor": count_via_cofactors(A, d, workers=cfg.workers)}
        try:
            tables["bruteforce"] = count_bruteforce(A, d, workers=cfg.workers)
        except BudgetExceeded:
            skipped.append("bruteforce")
        reports.append(count_report(A, d, tables))
        _, _, inc = incidence_reports(A, d, "dot", cfg.seed, cfg.workers)
        reports.extend(inc)
        _, _, inc = incidence_reports(A, d, "random", cfg.seed, cfg.workers)
        for rep in inc[:1]:
            rep.kind = "error_bound_random_form"
            reports.append(rep)
        if d >= 2:
            reports.append(ineq.recursion_suite(A, d))
        else:
            skipped.append("recursion (d = 1)")
        reports.extend(ap3_reports(A, A))
    table = tables["cofactor"]
    epsilon = ineq.uniformity_error(table) if len(A) else None
    data = _reports_data(cfg, A, reports, counts=list(table.counts),
                         S=pair_statistic_S(table), eps=epsilon, skipped=skipped)
    return data, _all_passed(reports)


RUNNERS = {
    "incidence": run_incidence,
    "recursion": run_recursion,
    "m4": run_m4,
    "ap3": run_ap3,
    "verify-all": verify_all,
}


def eps_closed_form_full(q: int, d: int) -> Fraction:
    """Uniformity error of A = F_q: |q |GL_d| / ((q-1) q^(d^2)) - 1|."""
    return abs(Fraction(q * gl_order(q, d), (q - 1) * q ** (d * d)) - 1)
