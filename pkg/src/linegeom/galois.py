"""Exact arithmetic in GF(q) for prime powers q <= 16.

Elements are encoded as integers in ``[0, q)``: base-p digit ``i`` of the
integer is the coefficient of ``x**i`` in the residue polynomial.  Each
extension field uses the least irreducible monic polynomial under that same
integer encoding, so enumeration orders built on top are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DivisionByZero, MixedFields, NotPrimePower

MAX_ORDER = 16


def _factor_prime_power(q):
    if not isinstance(q, int) or isinstance(q, bool) or q < 2 or q > MAX_ORDER:
        raise NotPrimePower(f"field order must be a prime power in [2, {MAX_ORDER}], got {q!r}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, k


# Polynomials over GF(p) are coefficient lists, lowest degree first.

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a = _poly_trim(a)
    return a


def _monic_polys(p, degree):
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree 1 .. deg-1."""
    poly = _poly_trim(poly)
    degree = len(poly) - 1
    if degree < 1:
        return False
    for d in range(1, degree):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def _encode(poly, p):
    return sum(c * p**i for i, c in enumerate(poly))


def _least_irreducible(p, k):
    candidates = sorted(_monic_polys(p, k), key=lambda f: _encode(f, p))
    for poly in candidates:
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(q) with precomputed addition/multiplication tables.

    ``modulus`` lists coefficients lowest degree first and is ``None`` for
    prime fields.
    """

    q: int
    p: int
    k: int
    modulus: tuple | None
    add_table: tuple = field(repr=False)
    mul_table: tuple = field(repr=False)
    neg_table: tuple = field(repr=False)
    inv_table: tuple = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"

    def __call__(self, value):
        return self.element(value)

    def element(self, value):
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element encoding of GF({self.q})")
        return FieldElement(self, value)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    # integer-level helpers used by the hot loops of the model builder

    def iadd(self, a, b):
        return self.add_table[a][b]

    def isub(self, a, b):
        return self.add_table[a][self.neg_table[b]]

    def imul(self, a, b):
        return self.mul_table[a][b]

    def iinv(self, a):
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        return self.inv_table[a]


def _digits(value, p, k):
    out = []
    for _ in range(k):
        value, r = divmod(value, p)
        out.append(r)
    return out


def _build_tables(q, p, k, modulus):
    if k == 1:
        add = tuple(tuple((a + b) % p for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % p for b in range(q)) for a in range(q))
    else:
        digits = [_digits(v, p, k) for v in range(q)]
        add = tuple(
            tuple(_encode([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q))
            for a in range(q)
        )
        rows = []
        for a in range(q):
            row = []
            for b in range(q):
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        prod[i + j] = (prod[i + j] + x * y) % p
                row.append(_encode(_poly_mod(prod, modulus, p), p))
            rows.append(tuple(row))
        mul = tuple(rows)
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (0,) + tuple(next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q))
    return add, mul, neg, inv


@lru_cache(maxsize=None)
def field_make(q):
    """Return the (cached, immutable) field of order ``q``."""
    p, k = _factor_prime_power(q)
    modulus = _least_irreducible(p, k) if k > 1 else None
    add, mul, neg, inv = _build_tables(q, p, k, modulus)
    return FieldSpec(q, p, k, modulus, add, mul, neg, inv)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def _check(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.spec.element(other % self.spec.q) if self.spec.k == 1 else self.spec.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.spec != self.spec:
            raise MixedFields(f"cannot combine elements of {self.spec!r} and {other.spec!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.spec, self.spec.add_table[self.value][other.value])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg_table[self.value])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.spec, self.spec.mul_table[self.value][other.value])

    __rmul__ = __mul__

    def inverse(self):
        return FieldElement(self.spec, self.spec.iinv(self.value))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.spec.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@GF({self.spec.q})"


def _same(a, b):
    if a.spec != b.spec:
        raise MixedFields(f"cannot combine elements of {a.spec!r} and {b.spec!r}")


def add(a, b):
    _same(a, b)
    return a + b


def mul(a, b):
    _same(a, b)
    return a * b


def neg(a):
    return -a


def inv(a):
    return a.inverse()
