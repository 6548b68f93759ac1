"""Centralizers of non-units, computed in a degree window.

C(P) is isomorphic to a one-variable polynomial ring K[g]; the window
solves P*Z - Z*P = 0 over all monomials of degree <= d, takes the
minimal-degree non-scalar solution as g (monic, constant-free), and asserts
that the solution space is exactly the span of the powers of g that fit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import MalformedPair, NotMember, NotProper, WindowTooSmall
from .linalg import Echelon, kernel
from .ncpoly import NcPoly, deglex_key, words_upto


class WindowShapeError(AssertionError):
    """The solution space is not a power basis; signals an implementation bug."""


@dataclass(frozen=True)
class CentralizerWindow:
    P: NcPoly
    d: int
    basis: tuple
    generator: NcPoly
    powers: tuple = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "P": str(self.P),
            "d": self.d,
            "generator": str(self.generator),
            "dimension": self.dimension,
            "basis": [str(b) for b in self.basis],
        }


def _check_proper(P: NcPoly):
    if P.is_zero() or P.is_constant():
        raise NotProper(f"{P} is a unit or zero; its centralizer is the whole algebra")


def commutator_kernel(P: NcPoly, d: int) -> list[NcPoly]:
    """Basis of {Z : deg Z <= d, PZ = ZP}, echelonized by leading word."""
    spec, n = P.spec, P.n
    cols = []
    for w in words_upto(n, d):
        Z = NcPoly(spec, n, {w: spec.one}, _raw=True)
        cols.append((w, (P * Z - Z * P).terms))
    _, rels = kernel(spec, cols, deglex_key)
    # re-echelonize the solutions by leading word so leads are distinct
    ech = Echelon(spec, deglex_key)
    for i, rel in enumerate(rels):
        ech.add(rel, i)
    sols = []
    for lead in sorted(ech.pivots, key=deglex_key):
        vec, _ = ech.pivots[lead]
        sols.append(NcPoly(spec, n, dict(vec), _raw=True))
    return sols


def centralizer_window(P: NcPoly, d: int) -> CentralizerWindow:
    _check_proper(P)
    if d < P.degree:
        raise WindowTooSmall(f"d = {d} < deg P = {P.degree}")
    sols = commutator_kernel(P, d)
    nonscalar = [s for s in sols if s.degree >= 1]
    g = min(nonscalar, key=lambda s: deglex_key(s.lead_word()))
    g = g.monic()
    g = g - g.constant_term
    k = g.degree
    powers = [NcPoly.one(P.spec, P.n)]
    while (len(powers)) * k <= d:
        powers.append(powers[-1] * g)
    if len(sols) != len(powers) or len(powers) != d // k + 1:
        raise WindowShapeError(f"window has dimension {len(sols)}, expected {d // k + 1}")
    for b in powers:
        if P * b != b * P:
            raise WindowShapeError("a power of the generator fails to commute")
    span = Echelon(P.spec, deglex_key)
    for i, b in enumerate(powers):
        span.add(b.terms, i)
    for s in sols:
        if not span.contains(s.terms):
            raise WindowShapeError("solution outside the span of generator powers")
    return CentralizerWindow(P, d, tuple(powers), g, tuple(powers))


def generator(P: NcPoly) -> NcPoly:
    """The normalized generator of C(P), from the smallest usable window."""
    return centralizer_window(P, P.degree).generator


def is_self_generating(P: NcPoly, d: int | None = None) -> bool:
    W = centralizer_window(P, P.degree if d is None else d)
    return W.generator.degree == P.degree


def expand_in_powers(f: NcPoly, g: NcPoly) -> tuple:
    """Raw coefficients (a_0..a_k) with f = sum a_i g^i, by descending
    leading-term elimination; NotMember if a residue survives."""
    spec = f.spec
    f._check(g)
    k = g.degree
    if k < 1:
        raise NotProper("expansion base must be non-constant")
    r = f
    coeffs: dict = {}
    cache = {0: NcPoly.one(spec, f.n)}
    while not r.is_zero():
        d = r.degree
        if d % k:
            raise NotMember(f"{f} is not in K[{g}]")
        i = d // k
        if i not in cache:
            cache[i] = g ** i
        gi = cache[i]
        L = r.lead_word()
        if gi.lead_word() != L:
            raise NotMember(f"{f} is not in K[{g}]")
        c = spec.div(r.terms[L], gi.terms[L])
        coeffs[i] = c
        r = r - gi.scale(c)
    top = max(coeffs, default=0)
    return tuple(coeffs.get(i, spec.zero) for i in range(top + 1))


def expand_in_generator(f: NcPoly, W: CentralizerWindow) -> tuple:
    if f.degree > W.d:
        raise WindowTooSmall(f"deg f = {f.degree} exceeds the window degree {W.d}")
    from .scalars import FieldElem

    return tuple(FieldElem(f.spec, c) for c in expand_in_powers(f, W.generator))


def evaluate_powers(coeffs: Sequence, g: NcPoly) -> NcPoly:
    spec = g.spec
    out = NcPoly.zero(spec, g.n)
    power = NcPoly.one(spec, g.n)
    for c in coeffs:
        out = out + power.scale(spec.canon(c))
        power = power * g
    return out


def map_centralizer(P: NcPoly, Q: NcPoly, f: NcPoly, d: int | None = None) -> NcPoly:
    """Transport f in C(P) to C(Q) along g_P -> g_Q."""
    P._check(Q)
    P._check(f)
    d = max(P.degree, d or 0)
    gP = centralizer_window(P, d).generator
    gQ = centralizer_window(Q, Q.degree).generator
    return evaluate_powers(expand_in_powers(f, gP), gQ)


def transport_seq(P: NcPoly, Q: NcPoly, pair: tuple[NcPoly, NcPoly]) -> tuple[NcPoly, NcPoly]:
    """(sum a_i P^i, P^n) -> (sum a_i Q^i, Q^n)."""
    _check_proper(P)
    _check_proper(Q)
    f, pn = pair
    try:
        length = expand_in_powers(pn, P)
        coeffs = expand_in_powers(f, P)
    except NotMember as exc:
        raise MalformedPair(str(exc)) from None
    n = len(length) - 1
    if any(c != 0 for c in length[:-1]) or length[-1] != P.spec.one:
        raise MalformedPair("second component is not a power of P")
    if len(coeffs) > n + 1:
        raise MalformedPair(f"first component has P-degree {len(coeffs) - 1} > {n}")
    return evaluate_powers(coeffs, Q), Q ** n
