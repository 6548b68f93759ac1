"""Structures and the three-valued evaluator.

A quantifier ranges over whatever its range annotation enumerates.  The
enumeration reports whether it is exhaustive for the relativized quantifier;
a non-exhaustive range can still refute a universal (or witness an
existential) but otherwise contributes Unknown.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from ..errors import ConstantTermPresent, NotInPower, SortError, UnboundVariable, UnknownName, UnsupportedDomain
from ..ncpoly import (DegreeSlice, NcPoly, SearchTooLarge, aug_power_decompose,
                      deglex_key, factor_divides, left_divide, right_divide, uv_divmod,
                      uv_from_coeffs, words_upto)
from ..scalars import FieldSpec
from ..tribool import FALSE, TRUE, UNKNOWN, TriBool
from .syntax import (QUANTIFIERS, And, App, Bottom, Carrier, Const, DegreeAtMost, DivisorsOf, Eq,
                     Exists, FieldRange, Forall, Hint, Iff, Implies, Lit, Not, Or, Quotient, Rel, Top,
                     Var, free_vars, range_terms, term_vars)


class _Undefined:
    """Value of a term whose evaluation hit a partial table cell."""

    def __repr__(self):
        return "UNDEFINED"


UNDEFINED = _Undefined()


@dataclass
class Signature:
    sorts: tuple
    ops: dict            # name -> (arg sorts, result sort)
    rels: dict           # name -> arg sorts
    consts: dict         # name -> sort

    def op(self, name):
        if name not in self.ops:
            raise UnknownName(f"no operation {name!r}")
        return self.ops[name]

    def rel(self, name):
        if name not in self.rels:
            raise UnknownName(f"no relation {name!r}")
        return self.rels[name]


class Structure:
    """Interface shared by finite structures and the polynomial ring."""

    signature: Signature
    default_sort: str

    def apply(self, op, args):
        raise NotImplementedError

    def holds(self, rel, args) -> TriBool:
        raise NotImplementedError

    def constant(self, name):
        raise NotImplementedError

    def literal(self, text):
        raise NotImplementedError

    def sort_of(self, value):
        raise NotImplementedError

    def enumerate(self, rng, sort, args) -> tuple[Iterable, bool]:
        raise NotImplementedError

    def equal(self, a, b) -> TriBool:
        return TriBool.of(a == b)


# -- finite structures -------------------------------------------------------------

@dataclass
class FinStructure(Structure):
    """Finite multi-sorted structure given by tables.

    carriers: sort -> list of values.
    ops: name -> (arg sorts, result sort, table) where table maps argument
    tuples to values; a missing cell is a partial (undefined) cell.
    rels: name -> (arg sorts, set of tuples).
    consts: name -> (sort, value).
    """
    carriers: dict
    ops: dict = field(default_factory=dict)
    rels: dict = field(default_factory=dict)
    consts: dict = field(default_factory=dict)
    default_sort: str = ""
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.default_sort:
            self.default_sort = next(iter(self.carriers))
        self.signature = Signature(
            tuple(self.carriers),
            {k: (tuple(a), r) for k, (a, r, _) in self.ops.items()},
            {k: tuple(a) for k, (a, _) in self.rels.items()},
            {k: s for k, (s, _) in self.consts.items()},
        )
        self._index = {s: {v: i for i, v in enumerate(c)} for s, c in self.carriers.items()}

    def apply(self, op, args):
        _, _, table = self.ops[op]
        return table.get(tuple(args), UNDEFINED)

    def holds(self, rel, args):
        return TriBool.of(tuple(args) in self.rels[rel][1])

    def constant(self, name):
        return self.consts[name][1]

    def literal(self, text):
        if text in self.consts:
            return self.consts[text][1]
        for s in self.carriers:
            for v in self.carriers[s]:
                if str(v) == text:
                    return v
        raise UnknownName(f"literal {text!r} is not a carrier element")

    def sort_of(self, value):
        for s, idx in self._index.items():
            if value in idx:
                return s
        return None

    def enumerate(self, rng, sort, args):
        if not isinstance(rng, (Carrier, Hint)):
            raise UnsupportedDomain(f"finite structures support only carrier ranges, got {type(rng).__name__}")
        return list(self.carriers[sort]), True

    def size(self, sort=None) -> int:
        return len(self.carriers[sort or self.default_sort])

    def is_total(self) -> bool:
        for name, (asorts, _, table) in self.ops.items():
            for args in itertools.product(*(self.carriers[s] for s in asorts)):
                if args not in table:
                    return False
        return True


def ring_mod(n: int) -> FinStructure:
    """Z/n as a one-sorted ring structure."""
    R = list(range(n))
    add = {(a, b): (a + b) % n for a in R for b in R}
    mul = {(a, b): (a * b) % n for a in R for b in R}
    sub = {(a, b): (a - b) % n for a in R for b in R}
    neg = {(a,): (-a) % n for a in R}
    return FinStructure(
        {"R": R},
        ops={"+": (("R", "R"), "R", add), "*": (("R", "R"), "R", mul),
             "-": (("R", "R"), "R", sub), "neg": (("R",), "R", neg)},
        consts={"0": ("R", 0), "1": ("R", 1 % n)},
        name=f"Z/{n}",
    )


# -- the polynomial ring -----------------------------------------------------------

HINTS: dict[str, Callable] = {}


def register_hint(name):
    def deco(fn):
        HINTS[name] = fn
        return fn
    return deco


@register_hint("aug")
def _aug_hint(ring, args, index):
    """Candidates for factor (j, i) of a prefix-grouped decomposition of y
    into n-fold products: that factor (if it exists) and 0."""
    (y,), (n, j, i) = args, index
    zero = NcPoly.zero(ring.spec, ring.n)
    try:
        dec = aug_power_decompose(y, n)
    except (NotInPower, ConstantTermPresent):
        return [zero]
    if j <= len(dec):
        return [dec[j - 1][i - 1], zero]
    return [zero]


class PolyRing(Structure):
    """The free algebra over spec in rank n as a one-sorted ring.

    Terms are evaluated exactly.  Unannotated quantifiers range over the
    degree slice when one is given (exhaustive for the slice), otherwise over a
    small non-exhaustive sample.
    """

    default_sort = "A"

    def __init__(self, spec: FieldSpec, n: int, slice_degree: int | None = None, cap: int = 4096):
        self.spec, self.n, self.slice_degree, self.cap = spec, n, slice_degree, cap
        if slice_degree is not None and not spec.is_finite:
            raise UnsupportedDomain("degree slices need a prime field")
        consts = {"0": "A", "1": "A"}
        consts.update({f"x{i}": "A" for i in range(1, n + 1)})
        if n == 1:
            consts["t"] = "A"
        A = "A"
        self.signature = Signature(
            ("A",),
            {"+": ((A, A), A), "-": ((A, A), A), "*": ((A, A), A), "neg": ((A,), A)},
            {"divides": (A, A), "in-K": (A,)},
            consts,
        )
        self._div_cache: dict = {}

    def __repr__(self):
        sl = "" if self.slice_degree is None else f", slice {self.slice_degree}"
        return f"PolyRing({self.spec}, rank {self.n}{sl})"

    # values
    def apply(self, op, args):
        if op == "+":
            return args[0] + args[1]
        if op == "-":
            return args[0] - args[1]
        if op == "*":
            return args[0] * args[1]
        if op == "neg":
            return -args[0]
        raise UnknownName(op)

    def constant(self, name):
        if name == "t":
            name = "x1"
        return NcPoly.parse(name, self.spec, self.n)

    def literal(self, text):
        return NcPoly.parse(text, self.spec, self.n)

    def sort_of(self, value):
        if isinstance(value, NcPoly) and value.spec == self.spec and value.n == self.n:
            return "A"
        return None

    def holds(self, rel, args):
        if rel == "in-K":
            return TriBool.of(args[0].is_constant() and not args[0].is_zero())
        if rel == "divides":
            return self.divides(*args)
        raise UnknownName(rel)

    def divides(self, b: NcPoly, f: NcPoly) -> TriBool:
        if b.is_zero():
            return TriBool.of(f.is_zero())
        if self.n == 1:
            return TriBool.of(uv_divmod(f, b)[1].is_zero())
        try:
            return TriBool.of(factor_divides(b, f) is not None)
        except SearchTooLarge:
            return UNKNOWN

    # ranges
    def _sample(self):
        s, n = self.spec, self.n
        out = [NcPoly.zero(s, n), NcPoly.one(s, n)]
        for i in range(1, n + 1):
            g = NcPoly.gen(s, n, i)
            out += [g, g + 1]
        return out

    def enumerate(self, rng, sort, args):
        if isinstance(rng, Carrier):
            if self.slice_degree is not None:
                return DegreeSlice(self.spec, self.n, self.slice_degree), True
            return self._sample(), False
        if isinstance(rng, DegreeAtMost):
            if self.spec.is_finite:
                return DegreeSlice(self.spec, self.n, rng.d), True
            return [f for f in self._sample() if f.degree <= rng.d], False
        if isinstance(rng, FieldRange):
            if self.spec.is_finite:
                return [NcPoly.const(self.spec, self.n, c) for c in self.spec.raw_elements()], True
            return [NcPoly.const(self.spec, self.n, Fraction(c)) for c in (0, 1, -1, 2, -2, Fraction(1, 2))], False
        if isinstance(rng, Quotient):
            f, left, right = args
            return self._quotient(f, left, right), True
        if isinstance(rng, DivisorsOf):
            (f,) = args
            reps, exhaustive = self.monic_divisors(f)
            if rng.associates == "monic":
                return reps, exhaustive
            if not self.spec.is_finite:
                return reps, False
            units = [c for c in self.spec.raw_elements() if c != 0]
            return [r.scale(c) for r in reps for c in units], exhaustive
        if isinstance(rng, Hint):
            if rng.name not in HINTS:
                raise UnknownName(f"no hint generator {rng.name!r}")
            return HINTS[rng.name](self, args, rng.index), False
        raise UnsupportedDomain(f"unsupported range {rng!r}")

    def _quotient(self, f, left, right):
        y = f
        if left is not None:
            if left.is_zero():
                return []
            y = left_divide(y, left)
            if y is None:
                return []
        if right is not None:
            if right.is_zero():
                return []
            y = right_divide(y, right)
            if y is None:
                return []
        return [y]

    def monic_divisors(self, f: NcPoly) -> tuple[list, bool]:
        """One divisor per class of nonzero scalar multiples, and whether the
        list is complete."""
        key = f
        if key in self._div_cache:
            return self._div_cache[key]
        out = self._monic_divisors(f)
        self._div_cache[key] = out
        return out

    def _monic_divisors(self, f):
        spec, n = self.spec, self.n
        one = NcPoly.one(spec, n)
        if f.is_zero():
            extra = []
            if self.slice_degree is not None:
                extra = [g for g in DegreeSlice(spec, n, self.slice_degree) if not g.is_zero() and g.monic() == g]
            return _dedup([f] + self._sample()[1:] + extra), False
        if f.is_constant():
            return [one], True
        if len(f.terms) == 1:
            (w,) = f.terms
            subs = {w[i:j] for i in range(len(w) + 1) for j in range(i, len(w) + 1)}
            return [NcPoly(spec, n, {u: spec.one}, _raw=True) for u in sorted(subs, key=deglex_key)], True
        if n == 1:
            return self._uv_divisors(f)
        return self._general_divisors(f)

    def _uv_divisors(self, f):
        spec = self.spec
        d = f.degree
        if not spec.is_finite:
            return _rational_monic_divisors(f), True
        out = []
        for k in range(d + 1):
            for lower in itertools.product(range(spec.p), repeat=k):
                g = uv_from_coeffs(spec, list(lower) + [spec.one])
                if uv_divmod(f, g)[1].is_zero():
                    out.append(g)
        return out, True

    def _general_divisors(self, f):
        """Rank >= 2, non-monomial.  A divisor's leading word is a factor of
        lead(f); enumerate monic candidates with such a lead over F_p."""
        spec, n = self.spec, self.n
        trivial = [NcPoly.one(spec, n), f.monic()]
        if not spec.is_finite:
            return trivial, False
        L = f.lead_word()
        leads = sorted({L[i:j] for i in range(len(L) + 1) for j in range(i, len(L) + 1)}, key=deglex_key)
        total = 0
        plans = []
        for lw in leads:
            lower = [w for w in words_upto(n, len(lw)) if deglex_key(w) < deglex_key(lw)]
            total += spec.p ** len(lower)
            plans.append((lw, lower))
        if total > self.cap:
            return trivial, False
        out = []
        for lw, lower in plans:
            for coeffs in itertools.product(range(spec.p), repeat=len(lower)):
                terms = {w: c for w, c in zip(lower, coeffs) if c}
                terms[lw] = spec.one
                g = NcPoly(spec, n, terms, _raw=True)
                if g.is_constant() or factor_divides(g, f) is not None:
                    out.append(g)
        return out, True


def _dedup(xs):
    seen, out = set(), []
    for x in xs:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _rational_monic_divisors(f: NcPoly) -> list:
    """Monic divisors of a univariate polynomial over Q via factorization."""
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** len(w) for w, c in f.terms.items())
    _, factors = sympy.factor_list(sympy.Poly(expr, t, domain="QQ"))
    irreducible = []
    for g, mult in factors:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(g, t).monic().all_coeffs())]
        irreducible.append((uv_from_coeffs(f.spec, coeffs), mult))
    out = []
    for exps in itertools.product(*(range(m + 1) for _, m in irreducible)):
        g = NcPoly.one(f.spec, 1)
        for (h, _), e in zip(irreducible, exps):
            g = g * h ** e
        out.append(g)
    return sorted(out, key=lambda g: (g.degree, str(g)))


# -- sort checking -------------------------------------------------------------------

def check_sorts(phi, S: Structure, env_sorts: dict) -> None:
    """Raise SortError / UnboundVariable / UnknownName on ill-formed input."""
    sig = S.signature

    def term(t, scope):
        if isinstance(t, Var):
            if t.name not in scope:
                raise UnboundVariable(f"variable {t.name!r} is not bound")
            return scope[t.name]
        if isinstance(t, Const):
            if t.name not in sig.consts:
                raise UnknownName(f"no constant {t.name!r}")
            return sig.consts[t.name]
        if isinstance(t, Lit):
            return None
        if isinstance(t, App):
            asorts, res = sig.op(t.op)
            if len(asorts) != len(t.args):
                raise SortError(f"{t.op} takes {len(asorts)} arguments, got {len(t.args)}")
            for a, s in zip(t.args, asorts):
                got = term(a, scope)
                if got is not None and got != s:
                    raise SortError(f"argument of {t.op} has sort {got}, expected {s}")
            return res
        raise TypeError(f"not a term: {t!r}")

    def form(f, scope):
        if isinstance(f, (Top, Bottom)):
            return
        if isinstance(f, Eq):
            a, b = term(f.left, scope), term(f.right, scope)
            if a is not None and b is not None and a != b:
                raise SortError(f"equation between sorts {a} and {b}")
            return
        if isinstance(f, Rel):
            asorts = sig.rel(f.name)
            if len(asorts) != len(f.args):
                raise SortError(f"{f.name} takes {len(asorts)} arguments, got {len(f.args)}")
            for a, s in zip(f.args, asorts):
                got = term(a, scope)
                if got is not None and got != s:
                    raise SortError(f"argument of {f.name} has sort {got}, expected {s}")
            return
        if isinstance(f, Not):
            return form(f.body, scope)
        if isinstance(f, (And, Or)):
            for p in f.parts:
                form(p, scope)
            return
        if isinstance(f, (Implies, Iff)):
            form(f.left, scope)
            form(f.right, scope)
            return
        if isinstance(f, QUANTIFIERS):
            sort = f.sort or S.default_sort
            if sort not in sig.sorts:
                raise SortError(f"unknown sort {sort!r}")
            for t in range_terms(f.range):
                term(t, scope)
            form(f.body, {**scope, f.var: sort})
            return
        raise TypeError(f"not a formula: {f!r}")

    form(phi, dict(env_sorts))


# -- evaluation ----------------------------------------------------------------------------

def eval_term(S: Structure, t, env: dict):
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariable(f"variable {t.name!r} is not bound")
        return env[t.name]
    if isinstance(t, Const):
        return S.constant(t.name)
    if isinstance(t, Lit):
        return t.value if t.value is not None else S.literal(t.text)
    if isinstance(t, App):
        args = [eval_term(S, a, env) for a in t.args]
        if any(a is UNDEFINED for a in args):
            return UNDEFINED
        return S.apply(t.op, args)
    raise TypeError(f"not a term: {t!r}")


class Evaluator:
    """Three-valued evaluator.  Over finite structures quantifier results are
    memoized on the node and the values of its free variables."""

    def __init__(self, S: Structure, memo: bool = True):
        self.S = S
        self.memo = {} if isinstance(S, FinStructure) and memo is not False else None
        self._free = {}

    def __call__(self, phi, env: dict) -> TriBool:
        S = self.S
        if isinstance(phi, Top):
            return TRUE
        if isinstance(phi, Bottom):
            return FALSE
        if isinstance(phi, Eq):
            a, b = eval_term(S, phi.left, env), eval_term(S, phi.right, env)
            if a is UNDEFINED or b is UNDEFINED:
                return UNKNOWN
            return S.equal(a, b)
        if isinstance(phi, Rel):
            args = [eval_term(S, a, env) for a in phi.args]
            if any(a is UNDEFINED for a in args):
                return UNKNOWN
            return S.holds(phi.name, args)
        if isinstance(phi, Not):
            return ~self(phi.body, env)
        if isinstance(phi, And):
            acc = TRUE
            for p in phi.parts:
                acc = acc & self(p, env)
                if acc is FALSE:
                    return FALSE
            return acc
        if isinstance(phi, Or):
            acc = FALSE
            for p in phi.parts:
                acc = acc | self(p, env)
                if acc is TRUE:
                    return TRUE
            return acc
        if isinstance(phi, Implies):
            left = self(phi.left, env)
            if left is FALSE:
                return TRUE
            return left.implies(self(phi.right, env))
        if isinstance(phi, Iff):
            return self(phi.left, env).iff(self(phi.right, env))
        if isinstance(phi, QUANTIFIERS):
            if self.memo is None:
                return self._quantifier(phi, env)
            return self._memoized(phi, env)
        raise TypeError(f"not a formula: {phi!r}")

    def _memoized(self, phi, env):
        k = id(phi)
        if k not in self._free:
            self._free[k] = (phi, tuple(sorted(free_vars(phi))))
        names = self._free[k][1]
        try:
            key = (k, tuple(env[n] for n in names))
        except KeyError:
            return self._quantifier(phi, env)
        if key not in self.memo:
            plan = self._plan(phi) if isinstance(phi, Exists) else None
            self.memo[key] = self._quantifier(phi, env) if plan is None else self._join(plan, env)
        return self.memo[key]

    def _plan(self, phi):
        """For an existential chain over carriers whose matrix is a
        conjunction: the chain and, per chain position, the conjuncts whose
        free variables are all bound from that position on.  Conjuncts are
        then checked as early as possible while enumerating."""
        k = ("plan", id(phi))
        if k in self._free:
            return self._free[k][1]
        chain, body = [], phi
        while isinstance(body, Exists) and isinstance(body.range, Carrier):
            chain.append(body)
            body = body.body
        plan = None
        if len(chain) > 1 and isinstance(body, And) and len(chain) == len({q.var for q in chain}):
            pos = {q.var: i for i, q in enumerate(chain)}
            sched = [[] for _ in range(len(chain) + 1)]
            for part in body.parts:
                sched[max((pos[x] + 1 for x in free_vars(part) if x in pos), default=0)].append(part)
            plan = (chain, sched)
        self._free[k] = (phi, plan)
        return plan

    def _join(self, plan, env):
        chain, sched = plan
        acc = TRUE
        for part in sched[0]:
            acc = acc & self(part, env)
            if acc is FALSE:
                return FALSE
        inner = dict(env)

        def go(i, acc):
            if i == len(chain):
                return acc
            q = chain[i]
            out = FALSE
            for val in self.S.carriers[q.sort or self.S.default_sort]:
                inner[q.var] = val
                a = acc
                for part in sched[i + 1]:
                    a = a & self(part, inner)
                    if a is FALSE:
                        break
                if a is FALSE:
                    continue
                r = go(i + 1, a)
                if r is TRUE:
                    return TRUE
                if r is UNKNOWN:
                    out = UNKNOWN
            return out

        return go(0, acc)

    def _quantifier(self, phi, env):
        S = self.S
        sort = phi.sort or S.default_sort
        rargs = [None if t is None else eval_term(S, t, env) for t in _range_args(phi.range)]
        if any(a is UNDEFINED for a in rargs):
            values, exhaustive = [], False
        else:
            values, exhaustive = S.enumerate(phi.range, sort, rargs)
            if exhaustive and isinstance(S, FinStructure):
                pinned = _one_point(S, phi, env)
                if pinned is not None:
                    values = [pinned] if pinned in S._index[sort] else []
        universal = isinstance(phi, Forall)
        acc = TRUE if universal else FALSE
        stop = FALSE if universal else TRUE
        inner = dict(env)
        for val in values:
            inner[phi.var] = val
            r = self(phi.body, inner)
            if r is stop:
                return stop
            if r is UNKNOWN:
                acc = UNKNOWN
        if not exhaustive:
            acc = UNKNOWN
        return acc


def _pinning_conjuncts(phi):
    """Conjuncts that every relevant value of phi.var must satisfy: for an
    existential the conjuncts of its matrix, for a universal those of the
    antecedent (the body is vacuous elsewhere)."""
    body = phi.body
    kind = type(phi)
    chain = {phi.var}
    while isinstance(body, kind):
        chain.add(body.var)
        body = body.body
    if kind is Forall:
        if not isinstance(body, Implies):
            return [], chain
        body = body.left
    if isinstance(body, And):
        return list(body.parts), chain
    return [body], chain


def _one_point(S, phi, env):
    """If the quantified variable is forced to equal a term over already
    bound variables, return that term's value; else None."""
    parts, chain = _pinning_conjuncts(phi)
    for part in parts:
        if not isinstance(part, Eq):
            continue
        for side, other in ((part.left, part.right), (part.right, part.left)):
            if side == Var(phi.var) and not (chain & term_vars(other)):
                try:
                    val = eval_term(S, other, env)
                except UnboundVariable:
                    continue
                if val is not UNDEFINED:
                    return val
    return None


def _range_args(r):
    if isinstance(r, DivisorsOf):
        return [r.term]
    if isinstance(r, Quotient):
        return [r.f, r.left, r.right]
    if isinstance(r, Hint):
        return list(r.args)
    return []


def evaluate(S: Structure, phi, env: dict | None = None, check: bool = True) -> TriBool:
    env = dict(env or {})
    if check:
        env_sorts = {}
        for k, val in env.items():
            s = S.sort_of(val)
            if s is None:
                raise SortError(f"value for {k!r} is not an element of the structure")
            env_sorts[k] = s
        check_sorts(phi, S, env_sorts)
    return Evaluator(S)(phi, env)


def brute_force(S: FinStructure, phi, env: dict | None = None) -> bool:
    """Two-valued reference evaluation over a total finite structure, used to
    cross-check the three-valued evaluator."""
    env = dict(env or {})

    def go(f, e):
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Eq):
            return eval_term(S, f.left, e) == eval_term(S, f.right, e)
        if isinstance(f, Rel):
            return tuple(eval_term(S, a, e) for a in f.args) in S.rels[f.name][1]
        if isinstance(f, Not):
            return not go(f.body, e)
        if isinstance(f, And):
            return all(go(p, e) for p in f.parts)
        if isinstance(f, Or):
            return any(go(p, e) for p in f.parts)
        if isinstance(f, Implies):
            return (not go(f.left, e)) or go(f.right, e)
        if isinstance(f, Iff):
            return go(f.left, e) == go(f.right, e)
        if isinstance(f, QUANTIFIERS):
            vals = S.carriers[f.sort or S.default_sort]
            test = all if isinstance(f, Forall) else any
            return test(go(f.body, {**e, f.var: x}) for x in vals)
        raise TypeError(f)

    return go(phi, env)
