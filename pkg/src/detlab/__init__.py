"""Exact determinant distributions of matrices with restricted entries over F_q."""

__version__ = "0.1.0"

from .detcount import (  # noqa: E402
    BudgetExceeded,
    DensityFunction,
    DistributionTable,
    EntrySet,
    count_bruteforce,
    count_via_cofactors,
    explicit_set,
    full_set,
    g_histogram,
    interval_set,
    pair_statistic_S,
    parse_set,
    random_set,
)
from .field import FiniteField, field_for_order, make_field  # noqa: E402
from .matrices import FqMatrix, cofactor_vector, det, minor_det  # noqa: E402
from .reports import CheckRecord, Report, VerificationError  # noqa: E402

__all__ = [
    "BudgetExceeded",
    "CheckRecord",
    "DensityFunction",
    "DistributionTable",
    "EntrySet",
    "FiniteField",
    "FqMatrix",
    "Report",
    "VerificationError",
    "cofactor_vector",
    "count_bruteforce",
    "count_via_cofactors",
    "det",
    "explicit_set",
    "field_for_order",
    "full_set",
    "g_histogram",
    "interval_set",
    "make_field",
    "minor_det",
    "pair_statistic_S",
    "parse_set",
    "random_set",
]
