"""Arithmetic in F_q, q = p^r with p an odd prime.

Elements are dense integer indices 0..q-1.  For r > 1 the base-p digits of an
index are the polynomial coefficients, lowest degree first, so ``a + b*x`` in
F_9 is the index ``a + 3*b``.

Every arithmetic method accepts Python ints or integer numpy arrays; scalars
come back as Python ints, arrays as int64 arrays.
"""

from __future__ import annotations

import functools
import math

import numpy as np

# Largest supported field order; element indices must fit int64 products.
MAX_ORDER = 2**24
# Full q x q add/mul tables are built only up to this order.
TABLE_ORDER = 256
# Per-element tables (inv, trace, characters) up to this order.
SMALL_TABLE_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# --- polynomials over F_p as coefficient lists, lowest degree first ---------


def _poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mulmod(a, b, mod, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_rem(prod, mod, p)


def _poly_rem(a, mod, p):
    a = list(a)
    r = len(mod) - 1
    if r == 0:
        return [0]
    inv_lead = pow(mod[-1], p - 2, p)
    for k in range(len(a) - 1, r - 1, -1):
        c = a[k] * inv_lead % p
        if c:
            for j in range(r + 1):
                a[k - r + j] = (a[k - r + j] - c * mod[j]) % p
    return _poly_trim(a[:r])


def _poly_gcd(a, b, p):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b != [0]:
        a, b = b, _poly_rem(a, b, p)
    return a


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_powmod(base, e, mod, p):
    acc = [1]
    while e:
        if e & 1:
            acc = _poly_mulmod(acc, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return acc


def is_irreducible(mod: list[int], p: int) -> bool:
    """Ben-Or test: gcd(x^{p^k} - x, mod) is constant for every k <= deg/2."""
    r = len(mod) - 1
    if r < 1:
        return False
    xk = [0, 1]
    for _ in range(r // 2):
        xk = _poly_powmod(xk, p, mod, p)
        if len(_poly_gcd(mod, _poly_sub(xk, [0, 1], p), p)) > 1:
            return False
    return True


def find_modulus(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r over F_p.

    Candidates are ordered by their coefficient tuple read from x^{r-1} down
    to the constant term, i.e. by the integer sum_j c_j p^j.
    """
    for code in range(p**r):
        low = [(code // p**j) % p for j in range(r)]
        mod = low + [1]
        if is_irreducible(mod, p):
            return tuple(mod)
    raise ArithmeticError(f"no irreducible polynomial of degree {r} over F_{p}")


class FiniteField:
    """Immutable arithmetic context for F_{p^r}."""

    def __init__(self, p: int, r: int = 1):
        if not isinstance(p, (int, np.integer)) or not isinstance(r, (int, np.integer)):
            raise TypeError("p and r must be integers")
        p, r = int(p), int(r)
        if p == 2:
            raise ValueError("p must be odd")
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if r < 1:
            raise ValueError(f"r must be positive, got {r}")
        if p**r > MAX_ORDER:
            raise ValueError(f"field order {p}^{r} exceeds the index limit {MAX_ORDER}")
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = find_modulus(p, r) if r > 1 else None
        self._pow_p = np.array([p**j for j in range(r)], dtype=np.int64)
        self._add_t = self._mul_t = None
        if r > 1 and self.q <= TABLE_ORDER:
            a, b = np.meshgrid(np.arange(self.q), np.arange(self.q), indexing="ij")
            self._add_t = self._poly_add(a, b)
            self._mul_t = self._poly_mul(a, b)
        # Tr(x^j) for the power basis; trace is F_p-linear in the digits.
        self._trace_basis = np.array(
            [self._trace_by_powers(p**j) for j in range(r)], dtype=np.int64
        )

    # -- identity ------------------------------------------------------------

    def _key(self):
        return (self.p, self.r, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.r == 1:
            return f"FiniteField({self.p})"
        return f"FiniteField({self.p}, {self.r}, modulus={list(self.modulus)})"

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    @property
    def is_prime_field(self) -> bool:
        return self.r == 1

    def describe(self) -> dict:
        """Header description: {p, r, modulus coefficients ascending}."""
        return {
            "p": self.p,
            "r": self.r,
            "modulus": list(self.modulus) if self.modulus else [],
        }

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    # -- digit/polynomial helpers for r > 1 ----------------------------------

    def to_digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pow_p) % self.p

    def from_digits(self, digits) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self._pow_p

    def _poly_add(self, a, b):
        return self.from_digits((self.to_digits(a) + self.to_digits(b)) % self.p)

    def _poly_mul(self, a, b):
        p, r = self.p, self.r
        da, db = self.to_digits(a), self.to_digits(b)
        shape = np.broadcast_shapes(da.shape[:-1], db.shape[:-1])
        prod = np.zeros(shape + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                prod[..., i + j] += da[..., i] * db[..., j]
        prod %= p
        mod = self.modulus
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[..., k]
            for j in range(r):
                prod[..., k - r + j] -= c * mod[j]
            prod[..., k - r : k] %= p
        return self.from_digits(prod[..., :r] % p)

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _wrap(result, *inputs):
        if all(np.ndim(x) == 0 for x in inputs):
            return int(result)
        return np.asarray(result, dtype=np.int64)

    def _check(self, a):
        arr = np.asarray(a)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"element index out of range for F_{self.q}")
        return arr.astype(np.int64, copy=False)

    def add(self, a, b):
        x, y = self._check(a), self._check(b)
        if self.r == 1:
            out = (x + y) % self.p
        elif self._add_t is not None:
            out = self._add_t[x, y]
        else:
            out = self._poly_add(x, y)
        return self._wrap(out, a, b)

    def neg(self, a):
        x = self._check(a)
        if self.r == 1:
            out = (-x) % self.p
        else:
            out = self.from_digits((-self.to_digits(x)) % self.p)
        return self._wrap(out, a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        x, y = self._check(a), self._check(b)
        if self.r == 1:
            out = (x * y) % self.p
        elif self._mul_t is not None:
            out = self._mul_t[x, y]
        else:
            out = self._poly_mul(x, y)
        return self._wrap(out, a, b)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        x = self._check(a)
        if self.r == 1 and x.ndim == 0:
            return pow(int(x), e, self.p)
        acc = np.ones_like(x)
        base = x
        while e:
            if e & 1:
                acc = np.asarray(self.mul(acc, base))
            base = np.asarray(self.mul(base, base))
            e >>= 1
        return self._wrap(acc, a)

    @functools.cached_property
    def _inv_table(self) -> np.ndarray:
        nz = self.nonzero()
        tab = np.zeros(self.q, dtype=np.int64)
        tab[1:] = self.pow(nz, self.q - 2)
        return tab

    def inv(self, a):
        x = self._check(a)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.q <= SMALL_TABLE_ORDER:
            return self._wrap(self._inv_table[x], a)
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n):
        """Image of an integer (or integer array) in the prime subfield."""
        return self._wrap(np.asarray(n, dtype=np.int64) % self.p, n)

    def dot(self, x, y):
        """Dot product along the last axis."""
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if self.r == 1:
            out = np.sum(x * y % self.p, axis=-1) % self.p
        else:
            terms = np.asarray(self.mul(x, y))
            out = np.zeros(terms.shape[:-1], dtype=np.int64)
            for j in range(terms.shape[-1]):
                out = np.asarray(self.add(out, terms[..., j]))
        return self._wrap(out, out)

    # -- trace and additive character ---------------------------------------

    def _trace_by_powers(self, a: int) -> int:
        acc, cur = 0, int(a)
        for _ in range(self.r):
            acc = self.add(acc, cur)
            cur = self.pow(cur, self.p)
        if acc >= self.p:
            raise ArithmeticError("trace left the prime subfield")
        return acc

    def trace(self, a):
        """Tr(a) = a + a^p + ... + a^{p^{r-1}}, an element of F_p."""
        x = self._check(a)
        if self.r == 1:
            return self._wrap(x, a)
        out = (self.to_digits(x) @ self._trace_basis) % self.p
        return self._wrap(out, a)

    @functools.cached_property
    def chi_table(self) -> np.ndarray:
        if self.q > SMALL_TABLE_ORDER:
            raise MemoryError("character table only built for q <= 2^16")
        return np.exp(2j * np.pi * np.asarray(self.trace(self.elements())) / self.p)

    def chi(self, a):
        """Canonical additive character exp(2 pi i Tr(a) / p)."""
        x = self._check(a)
        if self.q <= SMALL_TABLE_ORDER:
            out = self.chi_table[x]
        else:
            out = np.exp(2j * np.pi * np.asarray(self.trace(x)) / self.p)
        if np.ndim(a) == 0:
            return complex(out)
        return out

    # -- tables for compiled kernels ----------------------------------------

    @functools.cached_property
    def kernel_tables(self):
        """(add, mul, neg) flattened uint8 tables, or None when q > 256."""
        if self.q > TABLE_ORDER:
            return None
        a, b = np.meshgrid(self.elements(), self.elements(), indexing="ij")
        add = np.asarray(self.add(a, b)).astype(np.uint8).ravel()
        mul = np.asarray(self.mul(a, b)).astype(np.uint8).ravel()
        neg = np.asarray(self.neg(self.elements())).astype(np.uint8)
        return add, mul, neg


@functools.lru_cache(maxsize=None)
def make_field(p: int, r: int = 1) -> FiniteField:
    return FiniteField(p, r)


def field_for_order(q: int) -> FiniteField:
    """The field with q elements, q an odd prime power."""
    if q < 3:
        raise ValueError(f"no odd-characteristic field of order {q}")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    r = round(math.log(q, p))
    if p**r != q:
        raise ValueError(f"{q} is not a prime power")
    return make_field(p, r)


class FieldElement:
    """Operator-friendly wrapper around an element index."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        value = int(value)
        if not 0 <= value < field.q:
            raise ValueError(f"{value} is not an element index of F_{field.q}")
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.from_int(int(other))

    def __add__(self, o):
        return FieldElement(self.field, self.field.add(self.value, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.field, self.field.sub(self.value, self._other(o)))

    def __rsub__(self, o):
        return FieldElement(self.field, self.field.sub(self._other(o), self.value))

    def __mul__(self, o):
        return FieldElement(self.field, self.field.mul(self.value, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FieldElement(self.field, self.field.div(self.value, self._other(o)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def trace(self) -> int:
        return self.field.trace(self.value)

    def chi(self) -> complex:
        return self.field.chi(self.value)

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.field == o.field and self.value == o.value
        if isinstance(o, (int, np.integer)):
            return self.value == int(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"F{self.field.q}({self.value})"
