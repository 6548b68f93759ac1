"""A computable list superstructure over K and the pair encoding of
polynomials inside it, plus the (f, t^n) coding of sequences inside K[t].

A polynomial sum a_1 M_1 + ... + a_k M_k is stored as the pair of tuples
((a_1..a_k), (M_1..M_k)) with each monomial an N-tuple of generator indices;
the empty tuple is the monomial 1 and ((0), (1)) is the zero element.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arithmetization import rect_index, rect_unindex
from .errors import BadIndex, IndexOutOfRange, MalformedPair, SortError
from .ncpoly import NcPoly, uv_coeffs, uv_from_coeffs
from .scalars import FieldElem, FieldSpec


# -- the three sorts -------------------------------------------------------
# K values are FieldElem, S(K) values are tuples of FieldElem, N values ints.

def _seq(s):
    if not isinstance(s, tuple) or not all(isinstance(a, FieldElem) for a in s):
        raise SortError(f"{s!r} is not a tuple of field elements")
    return s


def sk_length(s: tuple) -> int:
    return len(_seq(s))


def sk_component(s: tuple, i: int) -> FieldElem:
    _seq(s)
    if not 1 <= i <= len(s):
        raise IndexOutOfRange(f"component {i} of a length-{len(s)} tuple")
    return s[i - 1]


def sk_t(s: tuple, i: int, a: FieldElem) -> bool:
    """The predicate t(s, i, a): the i-th entry of s is a."""
    _seq(s)
    return 1 <= i <= len(s) and s[i - 1] == a


def sk_concat(s1: tuple, s2: tuple) -> tuple:
    return _seq(s1) + _seq(s2)


def sk_member(a: FieldElem, s: tuple) -> bool:
    return a in _seq(s)


# -- pair encoding of polynomials ----------------------------------------------

@dataclass(frozen=True)
class TuplePair:
    coeffs: tuple
    mons: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "mons", tuple(tuple(m) for m in self.mons))
        if len(self.coeffs) != len(self.mons):
            raise MalformedPair("coefficient and monomial tuples differ in length")
        if not self.coeffs:
            raise MalformedPair("pairs are nonempty; zero is ((0), (1))")
        specs = {c.spec for c in self.coeffs}
        if len(specs) != 1:
            raise MalformedPair("mixed coefficient fields")

    @property
    def spec(self) -> FieldSpec:
        return self.coeffs[0].spec

    def __len__(self):
        return len(self.coeffs)

    def is_reduced(self) -> bool:
        if self == zero_pair(self.spec):
            return True
        return all(not c.is_zero() for c in self.coeffs) and len(set(self.mons)) == len(self.mons)

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "mons": [list(m) for m in self.mons]}

    @classmethod
    def from_json(cls, data: dict, spec: FieldSpec) -> "TuplePair":
        return cls(tuple(spec(spec.parse(str(c))) for c in data["coeffs"]),
                   tuple(tuple(m) for m in data["mons"]))

    def __str__(self):
        cs = ", ".join(str(c) for c in self.coeffs)
        ms = ", ".join("ε" if not m else "(" + ",".join(map(str, m)) + ")" for m in self.mons)
        return f"(({cs}), ({ms}))"


def zero_pair(spec: FieldSpec) -> TuplePair:
    return TuplePair((spec(0),), ((),))


def encode_poly(f: NcPoly) -> TuplePair:
    if f.is_zero():
        return zero_pair(f.spec)
    ws = f.support()
    return TuplePair(tuple(FieldElem(f.spec, f.terms[w]) for w in ws), tuple(ws))


def decode_pair(q: TuplePair, n: int) -> NcPoly:
    spec = q.spec
    out: dict = {}
    for c, m in zip(q.coeffs, q.mons):
        for x in m:
            if not (isinstance(x, int) and 1 <= x <= n):
                raise BadIndex(f"monomial entry {x!r} outside 1..{n}")
        out[m] = spec.add(out.get(m, spec.zero), c.value)
    return NcPoly(spec, n, {m: c for m, c in out.items() if c != 0}, _raw=True)


def red(q: TuplePair) -> TuplePair:
    """Collect like terms in order of first occurrence, drop zeros."""
    spec = q.spec
    acc: dict = {}
    for c, m in zip(q.coeffs, q.mons):
        acc[m] = spec.add(acc.get(m, spec.zero), c.value)
    kept = [(FieldElem(spec, c), m) for m, c in acc.items() if c != 0]
    if not kept:
        return zero_pair(spec)
    return TuplePair(tuple(c for c, _ in kept), tuple(m for _, m in kept))


def pair_equiv(q1: TuplePair, q2: TuplePair) -> bool:
    """The relation ~: reduced forms agree up to a permutation of entries."""
    r1, r2 = red(q1), red(q2)
    if len(r1) != len(r2):
        return False
    return set(zip(r1.coeffs, r1.mons)) == set(zip(r2.coeffs, r2.mons))


def oplus(q1: TuplePair, q2: TuplePair) -> TuplePair:
    return TuplePair(q1.coeffs + q2.coeffs, q1.mons + q2.mons)


def odot(q1: TuplePair, q2: TuplePair) -> TuplePair:
    p, r = len(q1), len(q2)
    coeffs = [None] * (p * r)
    mons = [None] * (p * r)
    for x in range(1, p + 1):
        for y in range(1, r + 1):
            k = rect_index(p, r, x, y) - 1
            coeffs[k] = q1.coeffs[x - 1] * q2.coeffs[y - 1]
            mons[k] = q1.mons[x - 1] + q2.mons[y - 1]
    return TuplePair(tuple(coeffs), tuple(mons))


def odot_cell(q1: TuplePair, q2: TuplePair, r: int) -> tuple[int, int]:
    """Which factor entries produced entry r of odot(q1, q2)."""
    return rect_unindex(len(q1), len(q2), r)


# -- sequences inside K[t] ---------------------------------------------------

def _t_power(spec: FieldSpec, k: int) -> NcPoly:
    return NcPoly(spec, 1, {(1,) * k: spec.one}, _raw=True)


def kt_encode_seq(alphas: Sequence, spec: FieldSpec | None = None) -> tuple[NcPoly, NcPoly]:
    """(alpha_0..alpha_n) -> (sum alpha_i t^i, t^n)."""
    if not alphas:
        raise MalformedPair("sequences are nonempty")
    if spec is None:
        spec = alphas[0].spec
    raw = [spec.canon(a) for a in alphas]
    return uv_from_coeffs(spec, raw), _t_power(spec, len(raw) - 1)


def _power_exponent(g: NcPoly) -> int:
    if g.n != 1 or len(g.terms) != 1:
        raise MalformedPair(f"{g} is not a power of t")
    (w,) = g.terms
    if g.terms[w] != g.spec.one:
        raise MalformedPair(f"{g} is not a power of t")
    return len(w)


def kt_decode_seq(f: NcPoly, g: NcPoly) -> tuple:
    n = _power_exponent(g)
    if f.n != 1:
        raise MalformedPair("first component must live in K[t]")
    if f.degree > n:
        raise MalformedPair(f"degree {f.degree} exceeds the length bound {n}")
    cs = uv_coeffs(f) if not f.is_zero() else []
    cs = list(cs) + [f.spec.zero] * (n + 1 - len(cs))
    return tuple(FieldElem(f.spec, c) for c in cs)


def kt_concat(p1: tuple[NcPoly, NcPoly], p2: tuple[NcPoly, NcPoly]) -> tuple[NcPoly, NcPoly]:
    """(f, t^n) ^ (g, t^m) = (f + t^(n+1) g, t^(n+m+1))."""
    f, tn = p1
    g, tm = p2
    _power_exponent(tn)  # both second components must be powers of t
    _power_exponent(tm)
    t = _t_power(f.spec, 1)
    return f + tn * t * g, tn * tm * t


def kt_length(pair: tuple[NcPoly, NcPoly]) -> NcPoly:
    """Length n+1 of (f, t^n), returned as t^(n+1)."""
    return pair[1] * _t_power(pair[1].spec, 1)


def kt_component(pair: tuple[NcPoly, NcPoly], i: int) -> FieldElem:
    seq = kt_decode_seq(*pair)
    if not 0 <= i < len(seq):
        raise IndexOutOfRange(f"component {i} of a length-{len(seq)} sequence")
    return seq[i]
