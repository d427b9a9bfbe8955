"""Command line entry point.

Exit codes: 0 when every gating check passes, 1 when a check fails (the
witness is in the output), 2 for invalid configurations and budgets that
cannot be met.
"""

from __future__ import annotations

import argparse
import sys

from . import explab
from . import io as dio
from ._compute import BudgetExceeded
from .explab import ExperimentConfig


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()] if text else []


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--p", type=int, required=True, help="odd prime characteristic")
    sp.add_argument("--r", type=int, default=1, help="extension degree, q = p^r")
    sp.add_argument("--d", type=int, default=2, help="matrix dimension")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=lambda s: int(float(s)), default=None,
                    help="maximum matrix visits (default: DETLAB_BUDGET or 1e9)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", default=None, help="output file (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detlab",
        description="Exact determinant distributions over finite fields and their bounds.")
    sub = parser.add_subparsers(dest="op", required=True)

    def command(name, help_text, with_set=True, with_t=False):
        sp = sub.add_parser(name, help=help_text)
        _add_common(sp)
        if with_set:
            sp.add_argument("--set", default="full",
                            help="list:a,b,.. | interval:H | full | random:N")
        if with_t:
            sp.add_argument("--t", type=int, default=None)
        return sp

    sp = command("count", "distribution N_d(A; t) for every t")
    sp.add_argument("--method", choices=("cofactor", "bruteforce", "both"), default="cofactor")
    sp = command("incidence", "uniformity and second-moment bounds for nu", with_t=True)
    sp.add_argument("--form", choices=("dot", "random"), default="dot")
    command("recursion", "recursive estimates for N_d", with_t=True)
    command("m4", "second-moment recursion for S_d")
    sp = command("ap3", "progressions in the product set AB")
    sp.add_argument("--set-b", default=None, help="second set (default: same as --set)")
    sp.add_argument("--trials", type=int, default=0, help="random threshold trials")
    sp = command("sweep", "uniformity error across set sizes", with_set=False)
    sp.add_argument("--sizes", type=_int_list, default=[])
    sp.add_argument("--seeds", type=_int_list, default=[0])
    sp.add_argument("--kind", choices=("random", "interval"), default="random")
    command("verify-all", "every applicable check for one instance")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = {k: v for k, v in vars(args).items() if v is not None}
    return ExperimentConfig(**values)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(cfg: ExperimentConfig) -> int:
    F = cfg.field()
    fmt = cfg.output_format
    if cfg.op == "count":
        table, report = explab.run_count(cfg)
        if fmt == "csv":
            text = dio.table_to_csv(table, cfg.seed)
        else:
            data = {**dio.table_to_json(table, cfg.seed), "report": report.to_json()}
            text = dio.dumps(dio.document(data, cfg.workers))
        _emit(text, cfg.out)
        return 0 if report.passed else 1
    if cfg.op == "sweep":
        rows = explab.run_sweep(cfg)
        meta = dio.provenance(F, cfg.d, seed=None)
        meta.update({"kind": cfg.kind, "seeds": cfg.seeds})
        if fmt == "csv":
            text = dio.rows_to_csv(meta, explab.SWEEP_HEADER, rows)
        else:
            data = {**meta, "rows": [dict(zip(explab.SWEEP_HEADER, r)) for r in rows]}
            text = dio.dumps(dio.document(data, cfg.workers))
        _emit(text, cfg.out)
        return 0
    data, passed = explab.RUNNERS[cfg.op](cfg)
    if fmt == "csv":
        meta = dio.provenance(F, cfg.d, seed=cfg.seed)
        meta["set"] = cfg.set
        rows = []
        for rep in data["reports"]:
            for rec in rep["records"]:
                rows.append([rep["kind"], rec["check"], rec["lhs"], rec["rhs"], rec["ratio"],
                             rec["pass"], rec.get("gating", True)])
        text = dio.rows_to_csv(meta, dio.REPORT_HEADER, rows)
    else:
        text = dio.dumps(dio.document(data, cfg.workers))
    _emit(text, cfg.out)
    if not passed:
        bad = [(rep["kind"], rec["check"]) for rep in data["reports"]
               for rec in rep["records"] if not rec["pass"] and rec.get("gating", True)]
        print(f"detlab: {len(bad)} check(s) failed, first {bad[0]}", file=sys.stderr)
    return 0 if passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        cfg.field()
        return run(cfg)
    except (BudgetExceeded, NotImplementedError, ValueError, OverflowError) as exc:
        print(f"detlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
