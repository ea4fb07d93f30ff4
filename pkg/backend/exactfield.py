"""Exact scalars over the rationals and over prime fields.

A `Field` does the arithmetic on raw values (`Fraction` for Q, `int` residues
for F_p); matrices and vectors in the rest of the backend hold raw values and
call back into their field. `FieldScalar` wraps a raw value for callers that
want operator syntax.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from math import gcd
from typing import Any, Iterator, Optional

from sympy import isprime

from backend.errors import DivisionByZero, MixedFields, ParseError

logger = logging.getLogger('ExactField')

RATIONALS = 'Q'
PRIME_FIELD = 'Fp'


class Field:
    def __init__(self, kind: str = RATIONALS, p: Optional[int] = None):
        if kind == RATIONALS:
            self.kind = RATIONALS
            self.characteristic = 0
            self.cardinality = None
        elif kind == PRIME_FIELD:
            if not isinstance(p, int) or isinstance(p, bool):
                raise ValueError("prime field needs an integer characteristic")
            if not isprime(p):
                raise ValueError(f"{p} is not a prime")
            self.kind = PRIME_FIELD
            self.characteristic = p
            self.cardinality = p
        else:
            raise ValueError(f"Unknown field kind: {kind}")

    @classmethod
    def rationals(cls) -> 'Field':
        return cls(RATIONALS)

    @classmethod
    def prime(cls, p: int) -> 'Field':
        return cls(PRIME_FIELD, p)

    @property
    def is_finite(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def __eq__(self, other):
        return isinstance(other, Field) and self.kind == other.kind and self.characteristic == other.characteristic

    def __hash__(self):
        return hash((self.kind, self.characteristic))

    def __repr__(self):
        return "Field(Q)" if self.kind == RATIONALS else f"Field(F_{self.characteristic})"

    def __str__(self):
        return "Q" if self.kind == RATIONALS else f"F{self.characteristic}"

    def has_at_least(self, n: int) -> bool:
        return self.cardinality is None or self.cardinality >= n

    # Raw arithmetic

    def coerce(self, x: Any):
        if isinstance(x, FieldScalar):
            if x.field != self:
                raise MixedFields(f"{x.field!r} scalar used in {self!r}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == RATIONALS:
            return Fraction(x)
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.characteristic, x.denominator % self.characteristic)
        return int(x) % self.characteristic

    def add(self, a, b):
        if self.kind == RATIONALS:
            return a + b
        return (a + b) % self.characteristic

    def sub(self, a, b):
        if self.kind == RATIONALS:
            return a - b
        return (a - b) % self.characteristic

    def mul(self, a, b):
        if self.kind == RATIONALS:
            return a * b
        return (a * b) % self.characteristic

    def neg(self, a):
        if self.kind == RATIONALS:
            return -a
        return (-a) % self.characteristic

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero(f"zero has no inverse in {self}")
        if self.kind == RATIONALS:
            return Fraction(1) / a
        return pow(a, -1, self.characteristic)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    # Serialization

    def parse(self, text: str):
        text = text.strip()
        try:
            if self.kind == RATIONALS:
                return Fraction(text)
            if '/' in text:
                num, den = text.split('/')
                return self.div(int(num) % self.characteristic, int(den) % self.characteristic)
            return int(text) % self.characteristic
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Cannot read scalar '{text}' over {self}: {str(e)}")

    def format(self, a) -> str:
        if self.kind == RATIONALS:
            a = Fraction(a)
            if a.denominator == 1:
                return str(a.numerator)
            return f"{a.numerator}/{a.denominator}"
        return str(a)

    def descriptor(self) -> dict:
        if self.kind == RATIONALS:
            return {'kind': RATIONALS}
        return {'kind': PRIME_FIELD, 'p': self.characteristic}

    def scalar(self, x) -> 'FieldScalar':
        return FieldScalar(self, self.coerce(x))

    def elements(self) -> Iterator:
        """All of F_p in residue order, or Q ordered by height.

        Rationals come by max(|num|, den), then denominator, then |num|, the
        positive value before its negative: 0, 1, -1, 2, -2, 1/2, -1/2, 3, ...
        """
        if self.kind == PRIME_FIELD:
            yield from range(self.characteristic)
            return
        yield Fraction(0)
        for height in count(1):
            for den in range(1, height + 1):
                for num in range(1, height + 1):
                    if max(num, den) != height or gcd(num, den) != 1:
                        continue
                    yield Fraction(num, den)
                    yield Fraction(-num, den)

    def first_elements(self, n: int) -> list:
        out = []
        for value in self.elements():
            if len(out) == n:
                break
            out.append(value)
        return out


def enumerate_field(field: Field) -> Iterator['FieldScalar']:
    for value in field.elements():
        yield FieldScalar(field, value)


@dataclass(frozen=True)
class FieldScalar:
    field: Field
    value: Any

    def _other(self, other) -> Any:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise MixedFields(f"cannot combine {self.field!r} with {other.field!r}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return NotImplemented

    def _wrap(self, value) -> 'FieldScalar':
        return FieldScalar(self.field, value)

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.div(self.value, b))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one
        for _ in range(exponent):
            result = self.field.mul(result, self.value)
        return self._wrap(result)

    def inverse(self) -> 'FieldScalar':
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        # equal only to scalars of the same field
        if not isinstance(other, FieldScalar):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"FieldScalar({self}, {self.field})"

