"""Finite fields GF(q) backed by Zech logarithm tables.

Elements are plain integers in ``range(q)``: the element
``c_0 + c_1 x + ... + c_{e-1} x^{e-1}`` has index ``sum(c_i * p**i)``.
Index 0 is zero and index 1 is one.  This index order is the canonical
total order used everywhere else in the package.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NotAPrimePower

ZERO, SQUARE, NONSQUARE = "zero", "square", "nonsquare"

_MAX_ORDER = 1 << 16


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``, or raise NotAPrimePower."""
    if q < 2:
        raise NotAPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotAPrimePower(f"{q} has at least two distinct prime divisors")
    return p, e


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    # m is monic; coefficients are low-to-high
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return (a + [0] * dm)[:dm]


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    e = len(m) - 1
    for d in range(1, e // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod(m, divisor, p)[:d]):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree e over GF(p).

    Candidates are ordered by the p-adic index of their non-leading
    coefficients, the same order used for field elements.
    """
    for code in range(p**e):
        low = [(code // p**i) % p for i in range(e)]
        m = low + [1]
        if _is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """GF(q) with exp/log tables and a Zech logarithm table for addition."""

    def __init__(self, q: int):
        p, e = prime_power(q)
        if q > _MAX_ORDER:
            raise NotAPrimePower(f"field order {q} exceeds table limit {_MAX_ORDER}")
        self.q, self.p, self.e = q, p, e
        self.modulus = smallest_irreducible(p, e) if e > 1 else [0, 1]
        self._build_tables()

    def _vec(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def _idx(self, v: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(v))

    def _slow_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        return self._idx(_poly_mod(_poly_mul(self._vec(a), self._vec(b), self.p), self.modulus, self.p))

    def _build_tables(self) -> None:
        q, n = self.q, self.q - 1
        for g in range(2 if q > 2 else 1, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._slow_mul(x, g)
            if len(exp) == n:
                break
        self.generator = g
        self.exp = exp
        self.log = [-1] * q
        for i, x in enumerate(exp):
            self.log[x] = i
        # zech[i] = log(1 + g^i), or -1 when 1 + g^i == 0
        self.zech = [-1] * n
        for i, x in enumerate(exp):
            s = self._idx([(u + v) % self.p for u, v in zip(self._vec(1), self._vec(x))])
            self.zech[i] = self.log[s] if s else -1

    # -- scalar arithmetic on indices -------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self.log[a], self.log[b]
        z = self.zech[(lb - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self.exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        # -1 = g^((q-1)/2) for odd q
        return self.exp[(self.log[a] + (self.q - 1) // 2) % (self.q - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if a == 0:
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def char(self, a: int) -> str:
        """Quadratic character of ``a``: zero, square or nonsquare."""
        if a == 0:
            return ZERO
        if self.p == 2 or self.log[a] % 2 == 0:
            return SQUARE
        return NONSQUARE

    def trace(self, a: int) -> int:
        """Absolute trace to GF(p), returned as an integer in range(p)."""
        t, x = 0, a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        return t

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def __call__(self, index: int) -> "FieldElement":
        return FieldElement(self, index)

    # -- vectorised tables ------------------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        t = np.empty((self.q, self.q), dtype=np.int64)
        for a in range(self.q):
            for b in range(self.q):
                t[a, b] = self.add(a, b)
        return t

    @cached_property
    def mul_table(self) -> np.ndarray:
        t = np.zeros((self.q, self.q), dtype=np.int64)
        for a in range(1, self.q):
            for b in range(1, self.q):
                t[a, b] = self.mul(a, b)
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        # inv_table[0] is a placeholder; callers must not divide by zero
        return np.array([0] + [self.inv(a) for a in range(1, self.q)], dtype=np.int64)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (field_create, (self.q,))


@lru_cache(maxsize=None)
def field_create(q: int) -> Field:
    """Return the (cached) field of order q."""
    return Field(q)


class FieldElement:
    """An element of a specific Field, with operator overloading."""

    __slots__ = ("field", "index")

    def __init__(self, field: Field, index: int):
        if not 0 <= index < field.q:
            raise ValueError(f"index {index} out of range for {field}")
        self.field = field
        self.index = int(index)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.q != self.field.q:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.index
        raise FieldMismatch(f"cannot combine {self.field} element with {type(other).__name__}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.index, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.index, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.index, self._other(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.index, self._other(other)))

    def __pow__(self, k: int):
        if isinstance(k, FieldElement):
            raise FieldMismatch("exponent must be an integer")
        return FieldElement(self.field, self.field.pow(self.index, int(k)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and other.field.q == self.field.q
            and other.index == self.index
        )

    def __hash__(self):
        return hash((self.field.q, self.index))

    def __repr__(self):
        return f"{self.field}[{self.index}]"


def arith(a: FieldElement, b, op: str) -> FieldElement:
    """Apply ``op`` in {add, sub, mul, div, pow}; pow takes an int exponent."""
    if op == "pow":
        return a ** (b.index if isinstance(b, FieldElement) else int(b))
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](b)


def quadratic_character(x: FieldElement) -> str:
    return x.field.char(x.index)
