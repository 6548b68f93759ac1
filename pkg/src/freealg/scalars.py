"""Exact coefficient fields: the rationals and prime fields F_p.

Two layers live here.  ``FieldSpec`` knows how to do arithmetic on *raw*
values (``Fraction`` for Q, ``int`` residues for F_p); the polynomial code
uses that layer directly because it is several times faster than wrapping
every coefficient.  ``FieldElem`` is the checked, canonical value type used
at API boundaries.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DivisionByZero, NotPrime, SpecMismatch

RATIONALS = "Rationals"
PRIME_FIELD = "PrimeField"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.p is not None:
                raise ValueError("the rationals take no modulus")
        elif self.kind == PRIME_FIELD:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise NotPrime(f"{self.p} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def Q(cls) -> "FieldSpec":
        return cls(RATIONALS)

    @classmethod
    def Fp(cls, p: int) -> "FieldSpec":
        return cls(PRIME_FIELD, p)

    @classmethod
    def from_string(cls, text: str) -> "FieldSpec":
        """Parse the CLI form ``q`` or ``fp:<p>``."""
        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return cls.Q()
        m = re.fullmatch(r"(?:fp|f|gf):?(\d+)", t)
        if m:
            return cls.Fp(int(m.group(1)))
        raise ValueError(f"bad field spec {text!r}; expected q or fp:<p>")

    def __str__(self):
        return "q" if self.kind == RATIONALS else f"fp:{self.p}"

    @property
    def is_finite(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == PRIME_FIELD else 0

    # -- raw arithmetic -------------------------------------------------
    def canon(self, x):
        """Canonical raw value for an int, Fraction, or FieldElem."""
        if isinstance(x, FieldElem):
            if x.spec != self:
                raise SpecMismatch(f"{x.spec} value used in {self}")
            return x.value
        if self.kind == RATIONALS:
            if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, int) and not isinstance(x, bool):
            return x % self.p
        if isinstance(x, Fraction):
            num = x.numerator % self.p
            den = x.denominator % self.p
            if den == 0:
                raise DivisionByZero(f"{x} has denominator divisible by {self.p}")
            return num * pow(den, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    @property
    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.p is None:
            return Fraction(1) / a
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def raw_pow(self, a, k: int):
        if self.p is None:
            return a ** k
        return pow(a, k, self.p)

    def fmt(self, a) -> str:
        if self.p is None:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def parse(self, text: str):
        """Raw value from ``a``, ``-a`` or ``a/b``."""
        t = text.strip()
        m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", t)
        if not m:
            raise ValueError(f"bad scalar literal {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise DivisionByZero(f"zero denominator in {text!r}")
        return self.canon(Fraction(num, den))

    def raw_elements(self) -> Iterator:
        if self.p is None:
            raise ValueError("the rationals cannot be enumerated")
        return iter(range(self.p))

    # -- boxed values ---------------------------------------------------
    def __call__(self, x) -> "FieldElem":
        return FieldElem(self, self.canon(x))

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, v) for v in self.raw_elements()]


class FieldElem:
    """Immutable canonical scalar tied to one FieldSpec."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "value", spec.canon(value))

    def __setattr__(self, *_):
        raise AttributeError("FieldElem is immutable")

    def _other(self, y):
        if isinstance(y, FieldElem):
            if y.spec != self.spec:
                raise SpecMismatch(f"{self.spec} vs {y.spec}")
            return y.value
        return self.spec.canon(y)

    def __add__(self, y):
        return FieldElem(self.spec, self.spec.add(self.value, self._other(y)))

    __radd__ = __add__

    def __sub__(self, y):
        return FieldElem(self.spec, self.spec.sub(self.value, self._other(y)))

    def __rsub__(self, y):
        return FieldElem(self.spec, self.spec.sub(self._other(y), self.value))

    def __mul__(self, y):
        return FieldElem(self.spec, self.spec.mul(self.value, self._other(y)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg(self.value))

    def __truediv__(self, y):
        return self * field_inv(y if isinstance(y, FieldElem) else self.spec(y))

    def __pow__(self, k: int):
        if k < 0:
            return field_inv(self) ** (-k)
        return FieldElem(self.spec, self.spec.raw_pow(self.value, k))

    def __eq__(self, y):
        if isinstance(y, FieldElem):
            return self.spec == y.spec and self.value == y.value
        if isinstance(y, (int, Fraction)) and not isinstance(y, bool):
            try:
                return self.value == self.spec.canon(y)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __bool__(self):
        return self.value != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        return self.spec.fmt(self.value)

    def __repr__(self):
        return f"FieldElem({self.spec}, {self})"


def field_inv(x: FieldElem) -> FieldElem:
    if x.value == 0:
        raise DivisionByZero("inverse of zero")
    return FieldElem(x.spec, x.spec.inv(x.value))
