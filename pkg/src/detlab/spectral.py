"""Fourier analysis on F_q^d and incidence counts for bilinear forms.

Normalisation: ghat(m) = q^-d * sum_x g(x) chi(-x . m), so Plancherel reads
sum_m |ghat(m)|^2 = q^-d * sum_x |g(x)|^2.

Incidence counts nu(t) and all norms are exact integers; only the transform
and the character are floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from ._compute import BudgetExceeded, bilinear_counts
from .detcount import DensityFunction, point_coords, point_index
from .field import FiniteField
from .matrices import FqMatrix, det, matmul
from .reports import CheckRecord, Report

# Dense complex arrays over F_q^d up to this many points.
SPECTRAL_POINTS = 2**22
SECOND_MOMENT_GUARD = 1e-6


@dataclass(frozen=True, eq=False)
class Spectrum:
    field: FiniteField
    d: int
    values: np.ndarray = dc_field(repr=False)

    def at(self, m) -> complex:
        return complex(self.values[int(point_index(self.field, np.asarray(m).reshape(1, -1))[0])])

    def energy(self) -> float:
        """sum_m |ghat(m)|^2, pairwise-summed."""
        return float(np.sum(np.abs(self.values) ** 2))


def _char_matrix(F: FiniteField, sign: int) -> np.ndarray:
    """W[m, x] = chi(sign * x * m)."""
    e = F.elements()
    prod = np.asarray(F.mul(e[:, None], e[None, :]))
    if sign < 0:
        prod = np.asarray(F.neg(prod))
    return F.chi_table[prod]


def _apply_axes(W: np.ndarray, arr: np.ndarray, d: int) -> np.ndarray:
    for axis in range(d):
        arr = np.moveaxis(np.tensordot(W, arr, axes=([1], [axis])), 0, axis)
    return arr


def _check_points(F: FiniteField, d: int) -> int:
    n = F.q**d
    if n > SPECTRAL_POINTS:
        raise BudgetExceeded(f"spectrum over {n} points exceeds the limit {SPECTRAL_POINTS}")
    return n


def fourier(g: DensityFunction, method: str = "auto") -> Spectrum:
    """ghat(m) = q^-d sum_x g(x) chi(-x . m) for every m in F_q^d.

    ``"axes"`` applies a q x q character matrix along each coordinate
    (d * q^(d+1) multiplies); ``"direct"`` sums over the support for every m.
    ``"auto"`` picks direct when the support has at most d*q points.
    """
    F, d = g.field, g.d
    n = _check_points(F, d)
    if method == "auto":
        method = "direct" if g.support_size <= d * F.q else "axes"
    if method == "axes":
        arr = g.dense().astype(complex).reshape((F.q,) * d)
        out = _apply_axes(_char_matrix(F, -1), arr, d).reshape(-1)
    elif method == "direct":
        ms = point_coords(F, d, np.arange(n))
        out = np.zeros(n, dtype=complex)
        for x, w in zip(g.coords(), g.weights):
            phase = np.asarray(F.neg(F.dot(ms, x[None, :])))
            out += int(w) * F.chi_table[phase]
    else:
        raise ValueError(f"unknown method {method!r}")
    return Spectrum(F, d, out / float(F.q) ** d)


def inverse_fourier(spec: Spectrum) -> np.ndarray:
    """g(x) = sum_m ghat(m) chi(x . m), as a complex array over F_q^d."""
    F, d = spec.field, spec.d
    arr = spec.values.reshape((F.q,) * d)
    return _apply_axes(_char_matrix(F, +1), arr, d).reshape(-1)


# --- bilinear forms and incidences ------------------------------------------


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """B(x, y) = x^T B y with det B != 0."""

    field: FiniteField
    matrix: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("bilinear form needs a square matrix")
        if det(FqMatrix(self.field, m)) == 0:
            raise ValueError("bilinear form is degenerate (det B = 0)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def dot(cls, F: FiniteField, d: int) -> BilinearForm:
        return cls(F, np.eye(d, dtype=np.int64))

    @classmethod
    def random(cls, F: FiniteField, d: int, rng: np.random.Generator) -> BilinearForm:
        while True:
            m = rng.integers(0, F.q, size=(d, d))
            if det(FqMatrix(F, m)) != 0:
                return cls(F, m)

    def __call__(self, x, y) -> int:
        u = matmul(self.field, np.asarray(x).reshape(1, -1), self.matrix)
        return int(self.field.dot(u.reshape(-1), np.asarray(y, dtype=np.int64)))

    def tolist(self):
        return self.matrix.tolist()


@dataclass(frozen=True)
class IncidenceTable:
    field: FiniteField
    values: tuple[int, ...]

    def __getitem__(self, t: int) -> int:
        return self.values[t]

    @property
    def total(self) -> int:
        return sum(self.values)

    def second_moment(self) -> int:
        return sum(v * v for v in self.values)


def nu(f: DensityFunction, g: DensityFunction, B: BilinearForm | None = None,
       workers: int = 1) -> IncidenceTable:
    """nu(t) = sum over B(x, y) = t of f(x) g(y), exactly."""
    F = f.field
    if g.field != F or g.d != f.d:
        raise ValueError("f and g live on different spaces")
    if B is None:
        B = BilinearForm.dot(F, f.d)
    if B.d != f.d or B.field != F:
        raise ValueError("bilinear form does not match the dimension of f and g")
    if f.support_size == 0 or g.support_size == 0:
        return IncidenceTable(F, tuple([0] * F.q))
    us = matmul(F, f.coords(), B.matrix)
    vals = bilinear_counts(F, us, f.weights, g.coords(), g.weights, workers=workers)
    return IncidenceTable(F, tuple(vals))


def _instance(f: DensityFunction, g: DensityFunction, B: BilinearForm | None) -> dict:
    out = {"field": f.field.describe(), "d": f.d,
           "support_f": f.support_size, "support_g": g.support_size}
    if B is not None:
        out["form"] = B.tolist()
    return out


def verify_error_bound(f: DensityFunction, g: DensityFunction,
                       B: BilinearForm | None = None, table: IncidenceTable | None = None) -> Report:
    """|nu(t) - |f|_1 |g|_1 / q| <= q^((d-1)/2) |f|_2 |g|_2 for every t != 0.

    Both sides are squared so the comparison is exact in rationals.  The
    single record carries the worst t; ``extra['max_ratio']`` is the largest
    |R(t)| / bound.
    """
    F, d, q = f.field, f.d, f.field.q
    if B is None:
        B = BilinearForm.dot(F, d)
    if table is None:
        table = nu(f, g, B)
    main = Fraction(f.norm1() * g.norm1(), q)
    bound_sq = q ** (d - 1) * f.norm2_squared() * g.norm2_squared()
    report = Report("error_bound", _instance(f, g, B))
    worst_t, worst = None, Fraction(-1)
    failing = []
    for t in range(1, q):
        r_sq = (table[t] - main) ** 2
        if r_sq > worst:
            worst_t, worst = t, r_sq
        if r_sq > bound_sq:
            failing.append(t)
    if worst_t is None:  # q has no nonzero t only if q == 1
        raise ValueError("field without nonzero elements")
    rec = CheckRecord("R(t)^2 <= q^(d-1) |f|_2^2 |g|_2^2", worst, bound_sq, not failing,
                      {"t": failing[0], "nu": table[failing[0]]} if failing else None)
    report.add(rec)
    report.extra["worst_t"] = worst_t
    report.extra["max_ratio"] = float(np.sqrt(float(worst) / bound_sq)) if bound_sq else (
        0.0 if worst == 0 else float("inf"))
    return report


def line_incidences(E: DensityFunction) -> np.ndarray:
    """|E cap l_k| for every k in F_q^d, l_k = {t k : t != 0}."""
    F, d = E.field, E.d
    n = _check_points(F, d)
    member = np.zeros(n, dtype=bool)
    member[E.points] = True
    ks = point_coords(F, d, np.arange(n))
    out = np.zeros(n, dtype=np.int64)
    for t in range(1, F.q):
        out += member[point_index(F, np.asarray(F.mul(t, ks)))]
    return out


def _spectral_term(f: DensityFunction, g: DensityFunction, lines: np.ndarray) -> float:
    F, d, q = f.field, f.d, f.field.q
    ghat = fourier(g)
    weights = np.abs(ghat.values[1:]) ** 2 * lines[1:]
    return float(q) ** (2 * d - 1) * f.norm2_squared() * float(np.sum(weights))


def verify_second_moment(f: DensityFunction, g: DensityFunction,
                         guard: float = SECOND_MOMENT_GUARD,
                         table: IncidenceTable | None = None) -> Report:
    """Second-moment bound for the dot product, f vanishing at the origin.

    sum_t nu(t)^2 <= q^-1 |f|_2^2 |E| |g|_1^2
                     + q^(2d-1) |f|_2^2 sum_{k != 0} |ghat(k)|^2 |E cap l_k|

    with E = support(f).  The left side and the first term are exact; the
    spectral sum is floating point and inflated by ``guard`` (relative).
    """
    F, d, q = f.field, f.d, f.field.q
    if f.at_index(0) != 0:
        raise ValueError("f must vanish at the origin")
    if table is None:
        table = nu(f, g)
    lhs = table.second_moment()
    E = f.support_size
    first = Fraction(f.norm2_squared() * E * g.norm1() ** 2, q)
    lines = line_incidences(f)
    spectral = _spectral_term(f, g, lines) if g.support_size else 0.0
    rhs = first + Fraction(spectral * (1.0 + guard))
    report = Report("second_moment", _instance(f, g, None))
    report.add(CheckRecord("sum_t nu(t)^2 <= second-moment bound", lhs, float(rhs), lhs <= rhs,
                           None if lhs <= rhs else {"lhs": lhs, "first_term": first,
                                                    "spectral_term": spectral}))
    report.extra.update({"first_term": first, "spectral_term": spectral,
                         "max_line_incidence": int(lines[1:].max()) if len(lines) > 1 else 0})
    # Same right-hand side with g punctured at the origin, for comparison only.
    g0 = g.punctured()
    if g0.support_size != g.support_size:
        first0 = Fraction(f.norm2_squared() * E * g0.norm1() ** 2, q)
        spectral0 = _spectral_term(f, g0, lines) if g0.support_size else 0.0
        rhs0 = float(first0) + spectral0
        report.extra["rhs_punctured_g"] = rhs0
        report.extra["punctured_g_tighter"] = rhs0 < float(rhs)
    return report
