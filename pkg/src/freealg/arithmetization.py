"""Pairing functions and tuple codes.

Tuples of naturals are coded bijectively: the empty tuple is 0, and a
nonempty tuple (a_1..a_k) is 1 + pair(k-1, body) where body right-nests the
entries, pair(a_1, pair(a_2, ... a_k)).  Every natural decodes to exactly one
tuple.  The nested layer tags atoms as 2a and sub-tuples as 2c+1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import Sequence, Union

from .errors import IndexOutOfRange


def cantor_pair(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise ValueError("pairing is defined on naturals")
    return (x + y) * (x + y + 1) // 2 + y


def cantor_unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError("pairing is defined on naturals")
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def _encode(s: Sequence[int]) -> int:
    if not s:
        return 0
    for a in s:
        if not isinstance(a, int) or a < 0:
            raise ValueError(f"tuple entries must be naturals, got {a!r}")
    body = s[-1]
    for a in reversed(s[:-1]):
        body = cantor_pair(a, body)
    return 1 + cantor_pair(len(s) - 1, body)


def _decode(c: int) -> tuple:
    if c < 0:
        raise ValueError("codes are naturals")
    if c == 0:
        return ()
    k1, body = cantor_unpair(c - 1)
    out = []
    for _ in range(k1):
        a, body = cantor_unpair(body)
        out.append(a)
    out.append(body)
    return tuple(out)


@dataclass(frozen=True)
class NTupleCode:
    code: int
    decoded: tuple = field(compare=False, repr=False)

    @classmethod
    def of(cls, s: Sequence[int]) -> "NTupleCode":
        s = tuple(s)
        return cls(_encode(s), s)

    @classmethod
    def from_code(cls, c: int) -> "NTupleCode":
        return cls(c, _decode(c))

    def __int__(self):
        return self.code


def _as_code(c) -> NTupleCode:
    if isinstance(c, NTupleCode):
        return c
    return NTupleCode.from_code(int(c))


def tuple_code(s: Sequence[int]) -> NTupleCode:
    return NTupleCode.of(s)


def decode_tuple(c) -> tuple:
    return _as_code(c).decoded


def length_code(c) -> int:
    return len(_as_code(c).decoded)


def component_code(c, i: int) -> int:
    s = _as_code(c).decoded
    if not 1 <= i <= len(s):
        raise IndexOutOfRange(f"component {i} of a length-{len(s)} tuple")
    return s[i - 1]


def concat_code(c1, c2) -> NTupleCode:
    return NTupleCode.of(_as_code(c1).decoded + _as_code(c2).decoded)


# -- the nested layer ------------------------------------------------------

Nested = Sequence[Union[int, Sequence[int]]]


def _tag(x) -> int:
    if isinstance(x, int):
        if x < 0:
            raise ValueError("atoms must be naturals")
        return 2 * x
    if isinstance(x, NTupleCode):
        return 2 * x.code + 1
    return 2 * _encode(tuple(x)) + 1


def _untag(v: int):
    if v % 2 == 0:
        return v // 2
    return NTupleCode.from_code(v // 2)


def nested_tuple_code(s: Nested) -> int:
    return _encode(tuple(_tag(x) for x in s))


def decode_nested(c: int) -> tuple:
    """Atoms come back as ints, sub-tuples as plain tuples."""
    out = []
    for v in _decode(c):
        x = _untag(v)
        out.append(x.decoded if isinstance(x, NTupleCode) else x)
    return tuple(out)


def nested_length(c: int) -> int:
    return len(_decode(c))


def nested_component(c: int, i: int):
    """Atom components are ints; tuple components are NTupleCode values."""
    s = _decode(c)
    if not 1 <= i <= len(s):
        raise IndexOutOfRange(f"component {i} of a length-{len(s)} tuple")
    return _untag(s[i - 1])


def nested_concat(c1: int, c2: int) -> int:
    return _encode(_decode(c1) + _decode(c2))


# -- rectangular index -----------------------------------------------------

def rect_index(p: int, q: int, x: int, y: int) -> int:
    """Row-major cell number of (x, y) in a p-by-q grid, 1-based."""
    if p < 1 or q < 1 or not (1 <= x <= p) or not (1 <= y <= q):
        raise IndexOutOfRange(f"cell ({x}, {y}) outside a {p}x{q} grid")
    return (x - 1) * q + y


def rect_unindex(p: int, q: int, r: int) -> tuple[int, int]:
    if p < 1 or q < 1 or not (1 <= r <= p * q):
        raise IndexOutOfRange(f"cell {r} outside a {p}x{q} grid")
    return (r - 1) // q + 1, (r - 1) % q + 1
