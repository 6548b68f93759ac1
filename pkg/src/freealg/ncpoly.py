"""Noncommutative polynomials over an exact field.

A polynomial is a map from words (tuples of generator indices, the empty
tuple being 1) to nonzero raw coefficients.  Monomials are ordered deglex:
longer words are larger, equal lengths compare lexicographically with
x1 < x2 < ...  Rank one doubles as the commutative ring K[t].
"""
from __future__ import annotations

import enum
import itertools
import re
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    BadGenerator,
    ConstantTermPresent,
    DivisionByZero,
    ExprSyntaxError,
    FreeAlgError,
    NotInPower,
    RankMismatch,
    SpecMismatch,
    ZeroDivisorArg,
    ZeroPolynomial,
)
from .linalg import Echelon
from .scalars import FieldElem, FieldSpec
from .tribool import FALSE, TRUE, UNKNOWN, TriBool
from .words import occurrences


def deglex_key(w: tuple):
    return (len(w), w)


def words_upto(n: int, d: int) -> Iterator[tuple]:
    """All words over 1..n of length <= d, deglex ascending."""
    for k in range(d + 1):
        yield from itertools.product(range(1, n + 1), repeat=k)


def count_words(n: int, d: int) -> int:
    return sum(n ** k for k in range(d + 1))


class PolyClass(enum.Enum):
    ZERO = "Zero"
    UNIT = "Unit"
    SCALAR_MONOMIAL = "ScalarMonomial"
    GENERAL = "General"


class NcPoly:
    __slots__ = ("spec", "n", "terms", "_hash")

    def __init__(self, spec: FieldSpec, n: int, terms=None, *, _raw: bool = False):
        if n < 1:
            raise RankMismatch("rank must be at least 1")
        self.spec = spec
        self.n = n
        self._hash = None
        if _raw:
            self.terms = terms if terms is not None else {}
            return
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            for x in w:
                if not (isinstance(x, int) and 1 <= x <= n):
                    raise BadGenerator(f"generator index {x!r} outside 1..{n}")
            v = spec.add(clean.get(w, spec.zero), spec.canon(c))
            if v == 0:
                clean.pop(w, None)
            else:
                clean[w] = v
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, spec, n):
        return cls(spec, n, {}, _raw=True)

    @classmethod
    def const(cls, spec, n, c):
        return cls(spec, n, {(): c})

    @classmethod
    def one(cls, spec, n):
        return cls(spec, n, {(): spec.one}, _raw=True)

    @classmethod
    def gen(cls, spec, n, i):
        if not 1 <= i <= n:
            raise BadGenerator(f"x{i} outside rank {n}")
        return cls(spec, n, {(i,): spec.one}, _raw=True)

    @classmethod
    def monomial(cls, spec, n, word, c=1):
        return cls(spec, n, {tuple(word): c})

    @classmethod
    def parse(cls, text: str, spec: FieldSpec, n: int) -> "NcPoly":
        return parse_poly(text, spec, n)

    def _new(self, terms):
        return NcPoly(self.spec, self.n, terms, _raw=True)

    def like(self, c) -> "NcPoly":
        """A constant (or copy of a polynomial) in this ring."""
        if isinstance(c, NcPoly):
            self._check(c)
            return c
        return NcPoly.const(self.spec, self.n, c)

    # -- basic queries ------------------------------------------------
    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    @property
    def min_degree(self) -> int:
        return min((len(w) for w in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(len(w) == 0 for w in self.terms)

    @property
    def constant_term(self):
        return self.terms.get((), self.spec.zero)

    def coeff(self, word) -> FieldElem:
        return FieldElem(self.spec, self.terms.get(tuple(word), self.spec.zero))

    def support(self) -> list[tuple]:
        return sorted(self.terms, key=deglex_key)

    def lead_word(self) -> tuple:
        if not self.terms:
            raise ZeroPolynomial("leading term of zero")
        return max(self.terms, key=deglex_key)

    def leading(self) -> tuple[tuple, FieldElem]:
        w = self.lead_word()
        return w, FieldElem(self.spec, self.terms[w])

    def trail_word(self) -> tuple:
        if not self.terms:
            raise ZeroPolynomial("trailing term of zero")
        return min(self.terms, key=deglex_key)

    def classify(self) -> PolyClass:
        return classify(self)

    def homogeneous(self, k: int) -> "NcPoly":
        return self._new({w: c for w, c in self.terms.items() if len(w) == k})

    def truncate(self, d: int) -> "NcPoly":
        return self._new({w: c for w, c in self.terms.items() if len(w) <= d})

    def monic(self) -> "NcPoly":
        if not self.terms:
            raise ZeroPolynomial("cannot normalize zero")
        return self.scale(self.spec.inv(self.terms[self.lead_word()]))

    # -- arithmetic ---------------------------------------------------
    def _check(self, g: "NcPoly"):
        if g.spec != self.spec:
            raise SpecMismatch(f"{self.spec} vs {g.spec}")
        if g.n != self.n:
            raise RankMismatch(f"rank {self.n} vs {g.n}")

    def _coerce(self, g):
        if isinstance(g, NcPoly):
            self._check(g)
            return g
        if isinstance(g, (int, Fraction, FieldElem)) and not isinstance(g, bool):
            return NcPoly.const(self.spec, self.n, g)
        return None

    def __add__(self, g):
        g = self._coerce(g)
        if g is None:
            return NotImplemented
        spec = self.spec
        out = dict(self.terms)
        for w, c in g.terms.items():
            v = spec.add(out.get(w, spec.zero), c)
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        spec = self.spec
        return self._new({w: spec.neg(c) for w, c in self.terms.items()})

    def __sub__(self, g):
        g = self._coerce(g)
        if g is None:
            return NotImplemented
        return self + (-g)

    def __rsub__(self, g):
        g = self._coerce(g)
        if g is None:
            return NotImplemented
        return g + (-self)

    def scale(self, raw) -> "NcPoly":
        spec = self.spec
        if raw == 0:
            return self._new({})
        return self._new({w: spec.mul(c, raw) for w, c in self.terms.items()})

    def __mul__(self, g):
        if isinstance(g, (int, Fraction, FieldElem)) and not isinstance(g, bool):
            return self.scale(self.spec.canon(g))
        if not isinstance(g, NcPoly):
            return NotImplemented
        self._check(g)
        spec = self.spec
        out: dict = {}
        mul, add = spec.mul, spec.add
        for w1, c1 in self.terms.items():
            for w2, c2 in g.terms.items():
                w = w1 + w2
                v = add(out.get(w, spec.zero), mul(c1, c2))
                out[w] = v
        return self._new({w: c for w, c in out.items() if c != 0})

    def __rmul__(self, g):
        if isinstance(g, (int, Fraction, FieldElem)) and not isinstance(g, bool):
            return self.scale(self.spec.canon(g))
        return NotImplemented

    def __truediv__(self, g):
        g = self._coerce(g)
        if g is None:
            return NotImplemented
        if not g.is_constant() or g.is_zero():
            if g.is_zero():
                raise DivisionByZero("division by zero polynomial")
            raise ValueError("only division by nonzero constants is supported")
        return self.scale(self.spec.inv(g.constant_term))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = NcPoly.one(self.spec, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, g):
        if isinstance(g, NcPoly):
            return self.spec == g.spec and self.n == g.n and self.terms == g.terms
        if isinstance(g, (int, Fraction, FieldElem)) and not isinstance(g, bool):
            try:
                return self.terms == NcPoly.const(self.spec, self.n, g).terms
            except FreeAlgError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, self.n, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- substitution -------------------------------------------------
    def substitute(self, V: Sequence["NcPoly"]) -> "NcPoly":
        return substitute(self, V)

    # -- text ---------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"NcPoly({self.spec}, n={self.n}, {format_poly(self)!r})"

    def to_json(self) -> list:
        return [{"word": list(w), "coeff": self.spec.fmt(self.terms[w])} for w in self.support()]

    @classmethod
    def from_json(cls, data: list, spec: FieldSpec, n: int) -> "NcPoly":
        return cls(spec, n, {tuple(t["word"]): spec.parse(str(t["coeff"])) for t in data})


def classify(f: NcPoly) -> PolyClass:
    if not f.terms:
        return PolyClass.ZERO
    if len(f.terms) == 1:
        (w,) = f.terms
        return PolyClass.UNIT if not w else PolyClass.SCALAR_MONOMIAL
    return PolyClass.GENERAL


def leading(f: NcPoly) -> tuple[tuple, FieldElem]:
    return f.leading()


# -- printing and parsing ------------------------------------------------

def _format_word_powers(w: tuple) -> str:
    parts = []
    for letter, grp in itertools.groupby(w):
        k = len(list(grp))
        parts.append(f"x{letter}" if k == 1 else f"x{letter}^{k}")
    return "*".join(parts)


def format_poly(f: NcPoly) -> str:
    if not f.terms:
        return "0"
    spec = f.spec
    out = []
    for w in sorted(f.terms, key=deglex_key, reverse=True):
        c = f.terms[w]
        neg = spec.p is None and c < 0
        mag = -c if neg else c
        cs = spec.fmt(mag)
        if not w:
            body = cs
        elif mag == 1:
            body = _format_word_powers(w)
        else:
            body = f"{cs}*{_format_word_powers(w)}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(t)|([-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("gen", int(m.group(2)), start))
        elif m.group(3) is not None:
            toks.append(("t", None, start))
        else:
            toks.append((m.group(4), None, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, spec, n):
        self.toks = _tokenize(text)
        self.i = 0
        self.spec = spec
        self.n = n

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        f = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                f = f * self.unary()
            elif kind == "/":
                tok = self.take()
                g = self.unary()
                if not g.is_constant() or g.is_zero():
                    raise ExprSyntaxError("division only by nonzero constants", tok[2])
                f = f / g
            elif kind in ("num", "gen", "t", "("):
                f = f * self.unary()
            else:
                return f

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            base = base ** tok[1]
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return NcPoly.const(self.spec, self.n, val)
        if kind == "gen":
            if not 1 <= val <= self.n:
                raise BadGenerator(f"x{val} outside rank {self.n} (position {pos})")
            return NcPoly.gen(self.spec, self.n, val)
        if kind == "t":
            if self.n != 1:
                raise BadGenerator(f"'t' is only available in rank 1 (position {pos})")
            return NcPoly.gen(self.spec, 1, 1)
        if kind == "(":
            f = self.expr()
            self.take(")")
            return f
        raise ExprSyntaxError(f"unexpected {kind!r}", pos)


def parse_poly(text: str, spec: FieldSpec, n: int) -> NcPoly:
    p = _Parser(text, spec, n)
    if p.peek()[0] == "end":
        raise ExprSyntaxError("empty expression", 0)
    f = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ExprSyntaxError(f"unexpected {tok[0]!r}", tok[2])
    return f


# -- substitution --------------------------------------------------------

def substitute(f: NcPoly, V: Sequence[NcPoly]) -> NcPoly:
    """Image of f under the unital endomorphism x_i -> V[i-1]."""
    if len(V) != f.n:
        raise RankMismatch(f"need {f.n} images, got {len(V)}")
    target = V[0]
    for v in V:
        target._check(v)
        if v.spec != f.spec:
            raise SpecMismatch("image over a different field")
    cache: dict = {(): NcPoly.one(target.spec, target.n)}

    def image(w):
        hit = cache.get(w)
        if hit is None:
            hit = image(w[:-1]) * V[w[-1] - 1]
            cache[w] = hit
        return hit

    out = NcPoly.zero(target.spec, target.n)
    for w in sorted(f.terms, key=deglex_key):
        out = out + image(w).scale(f.terms[w])
    return out


# -- divisibility ----------------------------------------------------------

def left_divide(f: NcPoly, u: NcPoly) -> NcPoly | None:
    """h with f = u*h, or None.  Exact leading-term elimination."""
    if u.is_zero():
        raise ZeroDivisorArg("division by zero")
    spec = f.spec
    lu = u.lead_word()
    cu = spec.inv(u.terms[lu])
    r = f
    h: dict = {}
    while r.terms:
        L = r.lead_word()
        if len(L) < len(lu) or L[: len(lu)] != lu:
            return None
        c = spec.mul(r.terms[L], cu)
        w = L[len(lu):]
        h[w] = c
        r = r - u * NcPoly(spec, f.n, {w: c}, _raw=True)
    return NcPoly(spec, f.n, h, _raw=True)


def right_divide(f: NcPoly, v: NcPoly) -> NcPoly | None:
    """h with f = h*v, or None."""
    if v.is_zero():
        raise ZeroDivisorArg("division by zero")
    spec = f.spec
    lv = v.lead_word()
    cv = spec.inv(v.terms[lv])
    r = f
    h: dict = {}
    k = len(lv)
    while r.terms:
        L = r.lead_word()
        if len(L) < k or (k and L[-k:] != lv):
            return None
        c = spec.mul(r.terms[L], cv)
        w = L[: len(L) - k]
        h[w] = c
        r = r - NcPoly(spec, f.n, {w: c}, _raw=True) * v
    return NcPoly(spec, f.n, h, _raw=True)


class SearchTooLarge(FreeAlgError):
    pass


_ENUM_CAP = 1 << 16


def _rank_one_split(C: dict, spec):
    """If the matrix {(a, b): raw} has rank exactly one, return (col, row)
    dicts with C[a,b] = col[a]*row[b]; otherwise None."""
    nz = [(k, v) for k, v in C.items() if v != 0]
    if not nz:
        return None
    (a0, b0), p = nz[0]
    col = {a: v for (a, b), v in nz if b == b0}
    row = {b: spec.div(v, p) for (a, b), v in nz if a == a0}
    for (a, b), v in nz:
        if spec.mul(col.get(a, spec.zero), row.get(b, spec.zero)) != v:
            return None
    for a in col:
        for b in row:
            if (a, b) not in C or C[(a, b)] == 0:
                return None
    return col, row


def _combine(C0: dict, rels: list, lams, spec) -> dict:
    C = dict(C0)
    for lam, rel in zip(lams, rels):
        if lam == 0:
            continue
        for k, v in rel.items():
            C[k] = spec.add(C.get(k, spec.zero), spec.mul(lam, v))
    return C


def _rational_rank_one(C0, rels, spec):
    """Rank-one points of the affine family C0 + span(rels) over Q.

    The minors are quadratic in the family parameters; sympy's polynomial
    system solver finds the rational points, which are then re-verified.
    """
    import sympy

    lams = sympy.symbols(f"l0:{len(rels)}")
    keys = set(C0)
    for rel in rels:
        keys |= set(rel)
    expr = {k: sympy.Rational(C0.get(k, 0)) for k in keys}
    for lam, rel in zip(lams, rels):
        for k, v in rel.items():
            expr[k] += lam * sympy.Rational(v)
    rows = sorted({a for a, _ in keys}, key=deglex_key)
    cols = sorted({b for _, b in keys}, key=deglex_key)
    eqs = set()
    for i, a in enumerate(rows):
        for a2 in rows[i + 1:]:
            for j, b in enumerate(cols):
                for b2 in cols[j + 1:]:
                    e = sympy.expand(
                        expr.get((a, b), 0) * expr.get((a2, b2), 0)
                        - expr.get((a, b2), 0) * expr.get((a2, b), 0)
                    )
                    if e != 0:
                        eqs.add(e)
    if not eqs:
        candidates = [dict.fromkeys(lams, 0)]
    else:
        candidates = sympy.solve(list(eqs), lams, dict=True)
    for sol in candidates:
        vals = []
        for lam in lams:
            v = sympy.sympify(sol.get(lam, 0))
            v = v.subs({s: 0 for s in v.free_symbols})
            if not v.is_rational:
                break
            vals.append(Fraction(int(v.p), int(v.q)))
        else:
            C = _combine(C0, rels, vals, spec)
            split = _rank_one_split(C, spec)
            if split is not None:
                return split
    return None


def factor_divides(b: NcPoly, f: NcPoly, bound: int | None = None):
    """Find (u, v) with f = u*b*v and deg u, deg v <= bound, or None.

    Leading words multiply under deglex, so deg u is pinned by where lead(b)
    sits inside lead(f); for each placement the equation is linear in the
    coefficient matrix of u (x) v, and a witness exists iff that affine
    family contains a rank-one matrix.
    """
    f._check(b)
    if b.is_zero():
        raise ZeroDivisorArg("0 divides only 0 and has no witnesses")
    spec, n = f.spec, f.n
    one = NcPoly.one(spec, n)
    if f.is_zero():
        return NcPoly.zero(spec, n), NcPoly.zero(spec, n)
    if bound is None:
        bound = f.degree
    if b.is_constant():
        return one, f.scale(spec.inv(b.constant_term))
    if b.degree > f.degree:
        return None
    if n == 1:
        q, r = uv_divmod(f, b)
        if not r.is_zero():
            return None
        if q.degree <= bound:
            return one, q
    if len(f.terms) == 1 and len(b.terms) == 1:
        (wf,), (wb,) = f.terms, b.terms
        for i in occurrences(wb, wf):
            j = len(wf) - i - len(wb)
            if i <= bound and j <= bound:
                c = spec.div(f.terms[wf], b.terms[wb])
                return (NcPoly(spec, n, {wf[:i]: spec.one}, _raw=True),
                        NcPoly(spec, n, {wf[i + len(wb):]: c}, _raw=True))
        return None
    L, Lb = f.lead_word(), b.lead_word()
    for i in occurrences(Lb, L):
        j = len(L) - i - len(Lb)
        if i > bound or j > bound:
            continue
        U, V = L[:i], L[i + len(Lb):]
        left = [a for a in words_upto(n, i) if deglex_key(a) <= deglex_key(U)]
        right = [c for c in words_upto(n, j) if deglex_key(c) <= deglex_key(V)]
        ech = Echelon(spec, deglex_key)
        rels = []
        for a in left:
            for c in right:
                col = {}
                for wb, cb in b.terms.items():
                    col[a + wb + c] = cb
                rel = ech.add(col, (a, c))
                if rel is not None:
                    rels.append(rel)
        C0 = ech.solve(f.terms)
        if C0 is None:
            continue
        split = None
        if not rels:
            split = _rank_one_split(C0, spec)
        elif spec.is_finite:
            if spec.p ** len(rels) > _ENUM_CAP:
                raise SearchTooLarge(f"{spec.p}^{len(rels)} rank-one candidates")
            for lams in itertools.product(range(spec.p), repeat=len(rels)):
                split = _rank_one_split(_combine(C0, rels, lams, spec), spec)
                if split is not None:
                    break
        else:
            split = _rational_rank_one(C0, rels, spec)
        if split is None:
            continue
        col, row = split
        u = NcPoly(spec, n, col)
        v = NcPoly(spec, n, row)
        if u * b * v == f:
            return u, v
    return None


def divides(b: NcPoly, f: NcPoly) -> bool:
    """Two-sided divisibility b | f."""
    if b.is_zero():
        return f.is_zero()
    return factor_divides(b, f) is not None


# -- ideal powers of the augmentation ideal ----------------------------------

def aug_power_decompose(f: NcPoly, n: int) -> list[tuple[NcPoly, ...]]:
    """Write f (no constant term) as a sum of at most r^n products of n
    constant-term-free factors by grouping monomials on their length-n
    prefix.  Raises NotInPower when some monomial is shorter than n."""
    if n < 1:
        raise ValueError("power must be at least 1")
    if f.constant_term != 0:
        raise ConstantTermPresent("f has a nonzero constant term")
    if f.is_zero():
        return []
    short = [w for w in f.terms if len(w) < n]
    if short:
        raise NotInPower(f"monomial of degree {len(short[0])} < {n}")
    spec, r = f.spec, f.n
    groups: dict = {}
    for w in sorted(f.terms, key=deglex_key):
        groups.setdefault(w[:n], {})[w[n - 1:]] = f.terms[w]
    out = []
    for prefix in sorted(groups):
        factors = [NcPoly.gen(spec, r, x) for x in prefix[:-1]]
        factors.append(NcPoly(spec, r, groups[prefix], _raw=True))
        out.append(tuple(factors))
    return out


def product(factors: Iterable[NcPoly], spec: FieldSpec, n: int) -> NcPoly:
    out = NcPoly.one(spec, n)
    for g in factors:
        out = out * g
    return out


# -- finite degree slices ----------------------------------------------------

class DegreeSlice:
    """All polynomials over F_p in rank n supported on words of length <= d."""

    def __init__(self, spec: FieldSpec, n: int, d: int):
        if not spec.is_finite:
            raise ValueError("degree slices exist only over prime fields")
        self.spec, self.n, self.d = spec, n, d
        self.words = list(words_upto(n, d))

    def __len__(self):
        return self.spec.p ** len(self.words)

    def __iter__(self) -> Iterator[NcPoly]:
        spec, n, words = self.spec, self.n, self.words
        for coeffs in itertools.product(range(spec.p), repeat=len(words)):
            yield NcPoly(spec, n, {w: c for w, c in zip(words, coeffs) if c}, _raw=True)

    def __contains__(self, f) -> bool:
        return (isinstance(f, NcPoly) and f.spec == self.spec and f.n == self.n
                and f.degree <= self.d)

    def product(self, f: NcPoly, g: NcPoly) -> NcPoly | None:
        """Partial multiplication: None when the product leaves the slice."""
        h = f * g
        return h if h.degree <= self.d else None


# -- univariate toolkit (rank one, commutative) ----------------------------------

def _need_rank1(*fs):
    for f in fs:
        if f.n != 1:
            raise RankMismatch("univariate operations need rank 1")


def uv_coeffs(f: NcPoly) -> list:
    _need_rank1(f)
    out = [f.spec.zero] * (f.degree + 1)
    for w, c in f.terms.items():
        out[len(w)] = c
    return out


def uv_from_coeffs(spec: FieldSpec, coeffs: Sequence) -> NcPoly:
    return NcPoly(spec, 1, {(1,) * i: c for i, c in enumerate(coeffs) if c != 0})


def uv_divmod(f: NcPoly, g: NcPoly) -> tuple[NcPoly, NcPoly]:
    _need_rank1(f, g)
    f._check(g)
    if g.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    spec = f.spec
    r = uv_coeffs(f)
    gc = uv_coeffs(g)
    dg = len(gc) - 1
    inv = spec.inv(gc[-1])
    q = [spec.zero] * max(len(r) - dg, 1)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = spec.mul(c, inv)
        q[k - dg] = c
        for i, gv in enumerate(gc):
            r[k - dg + i] = spec.sub(r[k - dg + i], spec.mul(c, gv))
    return uv_from_coeffs(spec, q), uv_from_coeffs(spec, r[:dg] if dg else [])


def uv_gcd(f: NcPoly, g: NcPoly) -> NcPoly:
    """Monic gcd (zero when both inputs are zero)."""
    _need_rank1(f, g)
    a, b = f, g
    while not b.is_zero():
        a, b = b, uv_divmod(a, b)[1]
    return a if a.is_zero() else a.monic()


def uv_monic(spec: FieldSpec, deg: int) -> Iterator[NcPoly]:
    """All monic polynomials of the given degree over F_p."""
    for lower in itertools.product(range(spec.p), repeat=deg):
        yield uv_from_coeffs(spec, list(lower) + [1])


def _int_divisors(m: int) -> list[int]:
    m = abs(m)
    out = []
    k = 1
    while k * k <= m:
        if m % k == 0:
            out.append(k)
            out.append(m // k)
        k += 1
    return sorted(set(out))


def uv_rational_roots(f: NcPoly) -> list[Fraction]:
    """Rational roots of a rank-one polynomial over Q (rational root test)."""
    _need_rank1(f)
    cs = uv_coeffs(f)
    den = 1
    for c in cs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    roots = set()
    if ints and ints[0] == 0:
        roots.add(Fraction(0))
        while ints and ints[0] == 0:
            ints = ints[1:]
    if len(ints) <= 1:
        return sorted(roots)
    for p in _int_divisors(ints[0]):
        for q in _int_divisors(ints[-1]):
            for s in (1, -1):
                x = Fraction(s * p, q)
                if sum(c * x ** i for i, c in enumerate(ints)) == 0:
                    roots.add(x)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def uv_is_irreducible(f: NcPoly) -> TriBool:
    """Irreducibility in K[t]: exact over F_p, partial over Q."""
    _need_rank1(f)
    d = f.degree
    if d < 1:
        return FALSE
    if d == 1:
        return TRUE
    spec = f.spec
    if spec.is_finite:
        for k in range(1, d // 2 + 1):
            for g in uv_monic(spec, k):
                if uv_divmod(f, g)[1].is_zero():
                    return FALSE
        return TRUE
    if uv_rational_roots(f):
        return FALSE
    return TRUE if d <= 3 else UNKNOWN


# -- random inputs -------------------------------------------------------------

def random_scalar(rng, spec: FieldSpec, nonzero: bool = False):
    """A raw scalar; small numerators and denominators over Q."""
    while True:
        if spec.is_finite:
            c = rng.randrange(spec.p)
        else:
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if c != 0 or not nonzero:
            return c


def random_poly(rng, spec: FieldSpec, n: int, maxdeg: int, maxterms: int, nonzero: bool = False) -> NcPoly:
    while True:
        terms = {}
        for _ in range(rng.randint(1, maxterms)):
            d = rng.randint(0, maxdeg)
            w = tuple(rng.randint(1, n) for _ in range(d))
            terms[w] = random_scalar(rng, spec, nonzero=True)
        f = NcPoly(spec, n, terms)
        if not (nonzero and f.is_zero()):
            return f
