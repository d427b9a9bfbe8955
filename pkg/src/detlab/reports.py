"""Check records and reports shared by the verification modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class VerificationError(AssertionError):
    def __init__(self, report: Report):
        bad = report.failures()
        super().__init__(
            f"{report.kind}: {len(bad)} failing check(s); first {bad[0].check} witness={bad[0].witness}"
        )
        self.report = report


def exact_json(v):
    """ints stay ints, Fractions become 'a/b' strings, floats stay floats."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return v
    if isinstance(v, dict):
        return {str(k): exact_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [exact_json(x) for x in v]
    try:
        import numpy as np

        if isinstance(v, np.integer):
            return int(v)
        if isinstance(v, np.floating):
            return float(v)
    except ImportError:  # pragma: no cover
        pass
    return str(v)


@dataclass
class CheckRecord:
    check: str
    lhs: int | Fraction | float
    rhs: int | Fraction | float
    passed: bool
    witness: dict | None = None
    # Informational records are reported but never fail a run.
    gating: bool = True
    note: str | None = None

    @property
    def ratio(self) -> float | None:
        if self.rhs == 0:
            return None if self.lhs != 0 else 0.0
        return float(Fraction(self.lhs) / Fraction(self.rhs))

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "lhs": exact_json(self.lhs),
            "rhs": exact_json(self.rhs),
            "ratio": self.ratio,
            "pass": self.passed,
        }
        if not self.gating:
            out["gating"] = False
        if self.witness is not None:
            out["witness"] = exact_json(self.witness)
        if self.note:
            out["note"] = self.note
        return out


def leq(check: str, lhs, rhs, witness=None, **kw) -> CheckRecord:
    """Record for the exact comparison lhs <= rhs."""
    ok = lhs <= rhs
    return CheckRecord(check, lhs, rhs, bool(ok), None if ok else witness, **kw)


@dataclass
class Report:
    kind: str
    instance: dict
    records: list[CheckRecord] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if r.gating)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.gating and not r.passed]

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def extend(self, other: Report) -> None:
        self.records.extend(other.records)

    def raise_if_failed(self) -> Report:
        if not self.passed:
            raise VerificationError(self)
        return self

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "instance": exact_json(self.instance),
            "pass": self.passed,
            "records": [r.to_json() for r in self.records],
            "extra": exact_json(self.extra),
        }
