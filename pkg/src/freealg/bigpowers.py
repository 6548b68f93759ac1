"""Marker words and the big-powers codecs.

A sequence of polynomials f_0..f_{s+1} is packed into one polynomial by
separating consecutive factors with strictly increasing powers a^e, a^(e+1),
... of an unbordered primitive marker a that occurs in none of the factors.
Because occurrences of such a marker never overlap, every monomial of the
product splits back into its slots by scanning for maximal runs of a.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BadExponent,
    BadParam,
    ChainBroken,
    InconsistentExponents,
    MarkerUnsafe,
    NoMarkerRun,
    NotRankOne,
    SyncMismatch,
    ZeroFactor,
    ZeroInput,
)
from .ncpoly import NcPoly, deglex_key, left_divide
from .scalars import FieldElem, FieldSpec
from .words import contains, is_primitive, is_unbordered, maximal_runs


@dataclass(frozen=True)
class Marker:
    m: int
    word: tuple

    def __len__(self):
        return len(self.word)

    def power(self, k: int) -> tuple:
        return self.word * k

    def poly(self, spec: FieldSpec, n: int, k: int = 1) -> NcPoly:
        return NcPoly(spec, n, {self.word * k: spec.one}, _raw=True)


def marker_word(m: int) -> tuple:
    if m < 1:
        raise BadParam("marker index must be at least 1")
    out = []
    for j in range(1, m + 1):
        out.append(1)
        out.extend([2] * j)
    return tuple(out)


def marker(m: int) -> Marker:
    return Marker(m, marker_word(m))


def marker_length(m: int) -> int:
    return m * (m + 3) // 2


def _marker_conditions(w: tuple) -> int | None:
    """Index m if w = a_m, checked through the defining conditions:
    letters only x1, x2; begins x1x2 and ends x1x2^m; every full block
    x1 x2^j x1 with j < m is followed by x2^(j+1) (x1 or end next); the
    block x2^(m-1) is followed by the final x2^m."""
    if len(w) < 2 or any(c not in (1, 2) for c in w):
        return None
    if w[:2] != (1, 2):
        return None
    # length of the trailing x2 run fixes m
    m = 0
    while m < len(w) and w[-1 - m] == 2:
        m += 1
    if m == 0 or len(w) < m + 1 or w[-1 - m] != 1:
        return None
    # read blocks x1 x2^j
    blocks = []
    i = 0
    while i < len(w):
        if w[i] != 1:
            return None
        j = i + 1
        while j < len(w) and w[j] == 2:
            j += 1
        blocks.append(j - i - 1)
        i = j
    if blocks[0] != 1:
        return None
    for k in range(len(blocks) - 1):
        if blocks[k] < m and blocks[k + 1] != blocks[k] + 1:
            return None
        if blocks[k] >= m:
            return None
    return m if blocks[-1] == m else None


def recognize_marker(f: NcPoly) -> int | None:
    if len(f.terms) != 1:
        return None
    (w,) = f.terms
    return _marker_conditions(w)


def marker_ok(a: Sequence[int], fs: Sequence[NcPoly]) -> bool:
    a = tuple(a)
    if not a or not is_primitive(a) or not is_unbordered(a):
        return False
    return not any(contains(a, w) for f in fs for w in f.terms)


def choose_marker(fs: Sequence[NcPoly]) -> Marker:
    longest = max((len(w) for f in fs for w in f.terms), default=0)
    m = 1
    while True:
        mk = marker(m)
        if len(mk.word) > longest or marker_ok(mk.word, fs):
            return mk
        m += 1


def _word(a) -> tuple:
    return a.word if isinstance(a, Marker) else tuple(a)


def _ring(fs: Sequence[NcPoly]):
    spec, n = fs[0].spec, fs[0].n
    for f in fs:
        fs[0]._check(f)
    return spec, n


def encode_seq(fs: Sequence[NcPoly], e: int, a) -> NcPoly:
    """f_0 a^e f_1 a^(e+1) ... a^(e+s) f_(s+1)."""
    if e < 3:
        raise BadExponent(f"base exponent {e} < 3")
    if len(fs) < 2:
        raise BadParam("need at least the two outer factors f_0 and f_1")
    w = _word(a)
    spec, n = _ring(fs)
    if n < 2 or max(w) > n:
        raise MarkerUnsafe("markers need the generators x1 and x2")
    for i, f in enumerate(fs):
        if f.is_zero():
            raise ZeroFactor(f"factor {i} is zero")
    if not marker_ok(w, fs):
        raise MarkerUnsafe("marker is bordered, a proper power, or a subword of a factor")
    out = fs[0]
    for i, f in enumerate(fs[1:]):
        out = out * NcPoly(spec, n, {w * (e + i): spec.one}, _raw=True) * f
    return out


def _split_runs(exps: Sequence[int], e: int) -> list[int] | None:
    """Match run exponents against e, e+1, ... where adjacent runs merge
    when the slot between them is the empty word.  Returns, per run, how
    many nominal runs it absorbed; None if the reading is inconsistent."""
    nxt = e
    counts = []
    for j in exps:
        total, k = 0, 0
        while total < j:
            total += nxt + k
            k += 1
        if total != j:
            return None
        counts.append(k)
        nxt += k
    return counts


def _slots(word: tuple, a: tuple, e: int) -> tuple[tuple, ...]:
    runs = maximal_runs(a, word)
    if not runs.exponents or max(runs.exponents) < e:
        raise NoMarkerRun(f"no run a^j with j >= {e}")
    counts = _split_runs(runs.exponents, e)
    if counts is None:
        raise InconsistentExponents(f"run exponents {list(runs.exponents)} do not read {e}, {e + 1}, ...")
    slots = [runs.segments[0]]
    for k, seg in zip(counts, runs.segments[1:]):
        slots.extend([()] * (k - 1))
        slots.append(seg)
    return tuple(slots)


def decode_seq(f: NcPoly, a, e: int) -> list[NcPoly]:
    """Recover f_0..f_(s+1) with f_0..f_s monic (deglex) and the leftover
    scalar in the last factor."""
    if e < 3:
        raise BadExponent(f"base exponent {e} < 3")
    if f.is_zero():
        raise ZeroInput("cannot decode the zero polynomial")
    w = _word(a)
    spec, n = f.spec, f.n
    table = {}
    width = None
    for mono, c in f.terms.items():
        slots = _slots(mono, w, e)
        if width is None:
            width = len(slots)
        elif len(slots) != width:
            raise InconsistentExponents("monomials disagree on the number of runs")
        table[slots] = c
    per_slot = [sorted({k[i] for k in table}, key=deglex_key) for i in range(width)]
    ref = max(table, key=lambda k: tuple(deglex_key(x) for x in k))
    # slice the tensor through the reference entry to read each factor
    factors = []
    for i in range(width):
        coeffs = {}
        for word in per_slot[i]:
            key = ref[:i] + (word,) + ref[i + 1:]
            if key in table:
                coeffs[word] = table[key]
        factors.append(NcPoly(spec, n, coeffs, _raw=True))
    if len(table) != _prod(len(p.terms) for p in factors):
        raise NotRankOne("coefficient tensor is not a product")
    # rank one iff T(k) * T(ref)^(width-1) = prod_i T(ref with slot i := k_i)
    refc = table[ref]
    scale = spec.raw_pow(refc, width - 1)
    for key, c in table.items():
        rhs = spec.one
        for i in range(width):
            rhs = spec.mul(rhs, factors[i].terms.get(key[i], spec.zero))
        if spec.mul(c, scale) != rhs:
            raise NotRankOne("coefficient tensor is not a product")
    out = [fct.monic() for fct in factors[:-1]]
    rest = factors[-1]
    # scale the last factor so the product reproduces f exactly
    lead_key = tuple(g.lead_word() for g in out) + (rest.lead_word(),)
    target = table.get(lead_key)
    if target is None:
        raise NotRankOne("coefficient tensor is not a product")
    last = rest.scale(spec.div(target, rest.terms[rest.lead_word()]))
    out.append(last)
    return out


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


# -- synchronization gadget --------------------------------------------------

def _sync_factors(P: NcPoly, Q: NcPoly, s: int) -> list[NcPoly]:
    one = NcPoly.one(P.spec, P.n)
    return [one] + [(P ** i) * (Q ** i) for i in range(1, s + 1)] + [one]


def sync_gadget(P: NcPoly, Q: NcPoly, s: int, e: int = 3, a=None) -> NcPoly:
    P._check(Q)
    if P.is_constant() or Q.is_constant():
        raise BadParam("P and Q must be non-units")
    fs = _sync_factors(P, Q, s)
    mk = a if a is not None else choose_marker(fs)
    return encode_seq(fs, e, mk)


def sync_marker(P: NcPoly, Q: NcPoly, s: int) -> Marker:
    return choose_marker(_sync_factors(P, Q, s))


def read_sync(f: NcPoly, P: NcPoly, Q: NcPoly, a, e: int = 3) -> int:
    """Return s after checking each interior slot i is proportional to P^i Q^i
    and successive slots satisfy g_(i+1) ~ P g_i Q."""
    fs = decode_seq(f, a, e)
    s = len(fs) - 2
    if not fs[0].is_constant() or not fs[-1].is_constant():
        raise SyncMismatch("outer slots must be scalars")
    prev = NcPoly.one(P.spec, P.n)
    for i in range(1, s + 1):
        g = fs[i]
        expect = (P * prev * Q)
        if g.monic() != expect.monic():
            raise SyncMismatch(f"slot {i} is not proportional to P^{i} Q^{i}")
        prev = g
    return s


def power_index(x: NcPoly, P: NcPoly) -> int:
    """n with x = P^n exactly, found by repeated left division."""
    one = NcPoly.one(P.spec, P.n)
    n, cur = 0, x
    while cur != one:
        nxt = left_divide(cur, P) if not cur.is_zero() else None
        if nxt is None or n > x.degree:
            raise SyncMismatch(f"{x} is not a power of {P}")
        cur, n = nxt, n + 1
    return n


def sync_map(x: NcPoly, P: NcPoly, Q: NcPoly, e: int = 3) -> NcPoly:
    """P^n -> Q^n read off the gadget: the last interior slot carries
    gamma P^n Q^n; peeling P^n on the left leaves Q^n up to the scalar,
    which is fixed by the leading coefficient lc(Q)^n."""
    n = power_index(x, P)
    if n == 0:
        return NcPoly.one(P.spec, P.n)
    mk = sync_marker(P, Q, n)
    g = sync_gadget(P, Q, n, e, mk)
    if read_sync(g, P, Q, mk, e) != n:
        raise SyncMismatch("gadget does not read back its own length")
    slot = decode_seq(g, mk, e)[n]
    q = left_divide(slot, P ** n)
    if q is None:
        raise SyncMismatch("last slot is not divisible by P^n")
    lc = Q.terms[Q.lead_word()]
    return q.monic().scale(Q.spec.raw_pow(lc, n))


# -- word trace --------------------------------------------------------------

def encode_word_trace(t: Sequence[int], p: int, n: int | None = None, spec: FieldSpec | None = None) -> NcPoly:
    """a^p M_1 a^(p+1) M_2 ... a^(p+m-1) M_m a^(p+m) with M_k = x_t1..x_tk
    and a = a_m, m = len(t)."""
    t = tuple(t)
    if not t:
        raise BadParam("t must be nonempty")
    if p < 3:
        raise BadExponent(f"p = {p} < 3")
    n = n or max(2, max(t))
    if any(not (1 <= x <= n) for x in t):
        raise BadParam(f"entries of t must lie in 1..{n}")
    spec = spec or FieldSpec.Q()
    a = marker_word(len(t))
    w = list(a * p)
    for k in range(1, len(t) + 1):
        w.extend(t[:k])
        w.extend(a * (p + k))
    return NcPoly(spec, n, {tuple(w): spec.one}, _raw=True)


def decode_word_trace(f: NcPoly, p: int) -> tuple[tuple, NcPoly]:
    """Return t and the final block M_t (as a monomial)."""
    if p < 3:
        raise BadExponent(f"p = {p} < 3")
    if len(f.terms) != 1:
        raise ChainBroken("a word trace is a single monomial")
    (w,) = f.terms
    m = 1
    while marker_length(m) * p <= len(w):
        a = marker_word(m)
        if w[: len(a) * p] == a * p and w[len(w) - len(a) * (p + m):] == a * (p + m):
            return _read_trace(f, w, a, m, p)
        m += 1
    raise NoMarkerRun("no marker power a_m^p heads the word")


def _read_trace(f, w, a, m, p):
    runs = maximal_runs(a, w)
    if runs.segments[0] or runs.segments[-1]:
        raise ChainBroken("head or tail is not a pure marker run")
    if list(runs.exponents) != list(range(p, p + m + 1)):
        raise ChainBroken(f"run exponents {list(runs.exponents)} are not {p}..{p + m}")
    blocks = runs.segments[1:-1]
    prev = ()
    for k, b in enumerate(blocks, start=1):
        if len(b) != k or b[:-1] != prev:
            raise ChainBroken(f"block {k} does not extend block {k - 1} by one letter")
        prev = b
    spec, n = f.spec, f.n
    return prev, NcPoly(spec, n, {prev: spec.one}, _raw=True)


# -- partial sums ---------------------------------------------------------------

def partial_sum_blocks(s: Sequence[Sequence[int]], coeffs: Sequence, spec: FieldSpec, n: int) -> list[NcPoly]:
    blocks = []
    h = NcPoly.zero(spec, n)
    for i, (word, c) in enumerate(zip(s, coeffs)):
        c = spec.canon(c)
        if c == 0:
            raise ZeroFactor(f"coefficient {i + 1} is zero; zero increments cannot be delimited")
        h = h + NcPoly(spec, n, {tuple(word): c}, _raw=True)
        if h.is_zero():
            raise ZeroFactor(f"partial sum {i + 1} vanishes")
        blocks.append(h)
    return blocks


def _sums_marker(s) -> Marker:
    return marker(max(1, max(len(w) for w in s)))


def encode_partial_sums(s: Sequence[Sequence[int]], coeffs: Sequence, p: int,
                        spec: FieldSpec | None = None, n: int | None = None) -> NcPoly:
    """a^(p+1) h_1 a^(p+2) h_2 ... a^(p+e) h_e a^(p+e+1), h_i the partial sums."""
    s = [tuple(w) for w in s]
    if not s or len(s) != len(coeffs):
        raise BadParam("need matching nonempty s and coeffs")
    if p < 3:
        raise BadExponent(f"p = {p} < 3")
    if spec is None:
        spec = coeffs[0].spec if isinstance(coeffs[0], FieldElem) else FieldSpec.Q()
    n = n or max(2, max((max(w) for w in s if w), default=1))
    blocks = partial_sum_blocks(s, coeffs, spec, n)
    one = NcPoly.one(spec, n)
    mk = _sums_marker(s)
    return encode_seq([one] + blocks + [one], p + 1, mk)


def decode_partial_sums(g: NcPoly, p: int) -> tuple[tuple, NcPoly]:
    """Recover s and f = h_e.  The encoding fixes the blocks only up to a
    common scalar (scaling every h_i by an e-th root of unity leaves the
    product unchanged), so f is returned monic under deglex."""
    if g.is_zero():
        raise ZeroInput("cannot decode the zero polynomial")
    lead = g.lead_word()
    m = 1
    while marker_length(m) * (p + 1) <= len(lead):
        a = marker_word(m)
        if lead[: len(a) * (p + 1)] == a * (p + 1):
            return _read_sums(g, a, p)
        m += 1
    raise NoMarkerRun("no marker power heads the encoding")


def _read_sums(g, a, p):
    fs = decode_seq(g, a, p + 1)
    if not fs[0].is_constant() or not fs[-1].is_constant():
        raise ChainBroken("outer slots must be scalars")
    blocks = fs[1:-1]
    if not blocks:
        raise ChainBroken("no partial-sum blocks")
    spec = g.spec
    s = []
    first = blocks[0]
    if len(first.terms) != 1:
        raise ChainBroken("first block is not a scalar monomial")
    s.append(first.lead_word())
    cur = first
    for k, nxt in enumerate(blocks[1:], start=2):
        word, scale = _increment(cur, nxt, spec)
        if word is None:
            raise ChainBroken(f"block {k} differs from block {k - 1} by more than one monomial")
        s.append(word)
        cur = nxt.scale(spec.inv(scale))
    return tuple(s), cur.monic()


def _increment(h: NcPoly, h2: NcPoly, spec):
    """Find (M, r) with h2 - r*h a scalar multiple of the word M.

    A word of h2 outside the support of h must be the increment; otherwise
    each word of h is tried in deglex order.  Returns (None, None) if no
    reading exists."""
    new = [w for w in h2.terms if w not in h.terms]
    if len(new) > 1:
        return None, None
    for M in new or sorted(h.terms, key=deglex_key):
        rest = [w for w in h.terms if w != M]
        if rest:
            ratios = {spec.div(h2.terms.get(w, spec.zero), h.terms[w]) for w in rest}
            if len(ratios) != 1:
                continue
            r = ratios.pop()
            if r == 0:
                continue
        else:
            if set(h2.terms) != {M}:
                continue
            r = spec.div(h2.terms[M], h.terms[M])
        diff = h2 - h.scale(r)
        if set(diff.terms) == {M} or (not diff.terms and not rest):
            return M, r
    return None, None
