"""Formula syntax: terms, formulas, quantifier ranges, S-expression I/O."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Union

from ..errors import ExprSyntaxError


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    """A named constant of the signature (0, 1, x1, ...)."""
    name: str


@dataclass(frozen=True)
class Lit:
    """A literal value; `text` is resolved by the structure, `value` is used
    directly when present."""
    text: str
    value: object = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class App:
    op: str
    args: tuple


Term = Union[Var, Const, Lit, App]


# -- ranges -------------------------------------------------------------------

@dataclass(frozen=True)
class Carrier:
    pass


@dataclass(frozen=True)
class DivisorsOf:
    """Relativizes to u | term; associates='monic' enumerates one element per
    class of scalar multiples."""
    term: object
    associates: str = "all"


@dataclass(frozen=True)
class FieldRange:
    pass


@dataclass(frozen=True)
class DegreeAtMost:
    d: int


@dataclass(frozen=True)
class Quotient:
    """Relativizes to f = left * u * right; at most one element."""
    f: object
    left: object = None
    right: object = None


@dataclass(frozen=True)
class Hint:
    """Candidate values from a named generator; never exhaustive."""
    name: str
    args: tuple = ()
    index: tuple = ()


Range = Union[Carrier, DivisorsOf, FieldRange, DegreeAtMost, Quotient, Hint]


# -- formulas -------------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object
    sort: str | None = None
    range: object = Carrier()


@dataclass(frozen=True)
class Exists:
    var: str
    body: object
    sort: str | None = None
    range: object = Carrier()


Formula = Union[Top, Bottom, Eq, Rel, Not, And, Or, Implies, Iff, Forall, Exists]
QUANTIFIERS = (Forall, Exists)


# -- builders ---------------------------------------------------------------------

def v(name: str) -> Var:
    return Var(name)


def app(op, *args) -> App:
    return App(op, tuple(args))


def add(*args):
    out = args[0]
    for a in args[1:]:
        out = App("+", (out, a))
    return out


def mul(*args):
    out = args[0]
    for a in args[1:]:
        out = App("*", (out, a))
    return out


def sub(a, b):
    return App("-", (a, b))


def conj(*parts):
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(*parts):
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


def forall(names, body, sort=None, range=Carrier()):
    if isinstance(names, str):
        names = [names]
    for n in reversed(list(names)):
        body = Forall(n, body, sort, range)
    return body


def exists(names, body, sort=None, range=Carrier()):
    if isinstance(names, str):
        names = [names]
    for n in reversed(list(names)):
        body = Exists(n, body, sort, range)
    return body


# -- traversal -----------------------------------------------------------------------

def term_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        out = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def range_terms(r) -> list:
    if isinstance(r, DivisorsOf):
        return [r.term]
    if isinstance(r, Quotient):
        return [x for x in (r.f, r.left, r.right) if x is not None]
    if isinstance(r, Hint):
        return list(r.args)
    return []


def free_vars(phi) -> set:
    if isinstance(phi, (Top, Bottom)):
        return set()
    if isinstance(phi, Eq):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, Rel):
        out = set()
        for a in phi.args:
            out |= term_vars(a)
        return out
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = set()
        for p in phi.parts:
            out |= free_vars(p)
        return out
    if isinstance(phi, (Implies, Iff)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, QUANTIFIERS):
        out = free_vars(phi.body) - {phi.var}
        for t in range_terms(phi.range):
            out |= term_vars(t)
        return out
    raise TypeError(f"not a formula: {phi!r}")


def bound_vars(phi) -> set:
    if isinstance(phi, QUANTIFIERS):
        return {phi.var} | bound_vars(phi.body)
    if isinstance(phi, Not):
        return bound_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = set()
        for p in phi.parts:
            out |= bound_vars(p)
        return out
    if isinstance(phi, (Implies, Iff)):
        return bound_vars(phi.left) | bound_vars(phi.right)
    return set()


def is_sentence(phi) -> bool:
    return not free_vars(phi)


def subst_term(t, mapping: dict):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.op, tuple(subst_term(a, mapping) for a in t.args))
    return t


def _subst_range(r, mapping):
    if isinstance(r, DivisorsOf):
        return replace(r, term=subst_term(r.term, mapping))
    if isinstance(r, Quotient):
        return Quotient(*(None if x is None else subst_term(x, mapping) for x in (r.f, r.left, r.right)))
    if isinstance(r, Hint):
        return replace(r, args=tuple(subst_term(a, mapping) for a in r.args))
    return r


def fresh_name(base: str, avoid: set) -> str:
    for i in itertools.count(1):
        cand = f"{base}_{i}"
        if cand not in avoid:
            return cand


def substitute(phi, mapping: dict):
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return phi
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, mapping), subst_term(phi.right, mapping))
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(subst_term(a, mapping) for a in phi.args))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, mapping))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(substitute(p, mapping) for p in phi.parts))
    if isinstance(phi, (Implies, Iff)):
        return type(phi)(substitute(phi.left, mapping), substitute(phi.right, mapping))
    if isinstance(phi, QUANTIFIERS):
        rng = _subst_range(phi.range, mapping)
        inner = {k: t for k, t in mapping.items() if k != phi.var}
        incoming = set()
        for t in inner.values():
            incoming |= term_vars(t)
        var, body = phi.var, phi.body
        if var in incoming:
            new = fresh_name(var, incoming | free_vars(body) | bound_vars(body))
            body = substitute(body, {var: Var(new)})
            var = new
        return type(phi)(var, substitute(body, inner), phi.sort, rng)
    raise TypeError(f"not a formula: {phi!r}")


def normalize(phi, taken: set | None = None):
    """Rename bound variables so that no name is bound twice or shadows a
    free variable."""
    taken = set(free_vars(phi)) if taken is None else taken

    def go(f):
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, (And, Or)):
            return type(f)(tuple(go(p) for p in f.parts))
        if isinstance(f, (Implies, Iff)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, QUANTIFIERS):
            var, body = f.var, f.body
            if var in taken:
                new = fresh_name(var, taken | free_vars(body) | bound_vars(body))
                body = substitute(body, {var: Var(new)})
                var = new
            taken.add(var)
            return type(f)(var, go(body), f.sort, f.range)
        return f

    return go(phi)


def depth(phi) -> int:
    """Quantifier depth."""
    if isinstance(phi, QUANTIFIERS):
        return 1 + depth(phi.body)
    if isinstance(phi, Not):
        return depth(phi.body)
    if isinstance(phi, (And, Or)):
        return max((depth(p) for p in phi.parts), default=0)
    if isinstance(phi, (Implies, Iff)):
        return max(depth(phi.left), depth(phi.right))
    return 0


def subformulas(phi) -> Iterator:
    yield phi
    if isinstance(phi, QUANTIFIERS) or isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            yield from subformulas(p)
    elif isinstance(phi, (Implies, Iff)):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)


def unfold_ranges(phi):
    """Replace range annotations by explicit relativization in the plain
    language.  DegreeAtMost and Hint have no first-order rendering and are
    dropped (they bound the search, not the meaning, for Hint; DegreeAtMost
    is kept only as carrier restriction)."""
    if isinstance(phi, Not):
        return Not(unfold_ranges(phi.body))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(unfold_ranges(p) for p in phi.parts))
    if isinstance(phi, (Implies, Iff)):
        return type(phi)(unfold_ranges(phi.left), unfold_ranges(phi.right))
    if isinstance(phi, QUANTIFIERS):
        body = unfold_ranges(phi.body)
        guard = _range_guard(phi.var, phi.range)
        if guard is not None:
            body = Implies(guard, body) if isinstance(phi, Forall) else And((guard, body))
        return type(phi)(phi.var, body, phi.sort, Carrier())
    return phi


def _range_guard(var, r):
    u = Var(var)
    if isinstance(r, DivisorsOf):
        return Rel("divides", (u, r.term))
    if isinstance(r, FieldRange):
        return Or((Eq(u, Const("0")), Rel("in-K", (u,))))
    if isinstance(r, Quotient):
        prod = u
        if r.left is not None:
            prod = App("*", (r.left, prod))
        if r.right is not None:
            prod = App("*", (prod, r.right))
        return Eq(r.f, prod)
    return None


# -- S-expressions ---------------------------------------------------------------

def _tokenize(text: str):
    i, out = 0, []
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            out.append((c, i))
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ExprSyntaxError("unterminated string", pos=i)
            out.append(("str", text[i + 1:j], i))
            i = j + 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()";':
                j += 1
            out.append(("sym", text[i:j], i))
            i = j
    return out


def _read(tokens, k):
    tok = tokens[k]
    if tok[0] == "(":
        items, k = [], k + 1
        while True:
            if k >= len(tokens):
                raise ExprSyntaxError("unbalanced parenthesis", pos=tok[1])
            if tokens[k][0] == ")":
                return ("list", items, tok[1]), k + 1
            item, k = _read(tokens, k)
            items.append(item)
    if tok[0] == ")":
        raise ExprSyntaxError("unexpected ')'", pos=tok[1])
    return tok, k + 1


def read_sexpr(text: str):
    tokens = _tokenize(text)
    if not tokens:
        raise ExprSyntaxError("empty input", pos=0)
    node, k = _read(tokens, 0)
    if k != len(tokens):
        raise ExprSyntaxError("trailing input", pos=tokens[k][-1])
    return node


CONNECTIVES = {"and", "or", "not", "implies", "iff", "forall", "exists", "=", "true", "false"}
TERM_HEADS = {"lit"}


class _Reader:
    def __init__(self, constants=frozenset()):
        self.constants = set(constants)

    def term(self, node, bound):
        kind = node[0]
        if kind == "str":
            return Lit(node[1])
        if kind == "sym":
            s = node[1]
            if s in bound:
                return Var(s)
            if s in self.constants or _numeric(s):
                return Const(s) if not _numeric(s) else Lit(s)
            return Var(s)
        items = node[1]
        if not items or items[0][0] != "sym":
            raise ExprSyntaxError("term application needs an operator", pos=node[2])
        head = items[0][1]
        if head == "lit":
            if len(items) != 2 or items[1][0] not in ("str", "sym"):
                raise ExprSyntaxError("(lit \"...\") takes one string", pos=node[2])
            return Lit(items[1][1])
        return App(head, tuple(self.term(a, bound) for a in items[1:]))

    def formula(self, node, bound=frozenset()):
        if node[0] == "sym":
            if node[1] == "true":
                return Top()
            if node[1] == "false":
                return Bottom()
            raise ExprSyntaxError(f"expected a formula, got {node[1]!r}", pos=node[2])
        if node[0] == "str":
            raise ExprSyntaxError("expected a formula, got a string", pos=node[2])
        items = node[1]
        if not items or items[0][0] != "sym":
            raise ExprSyntaxError("formula head must be a symbol", pos=node[2])
        head, rest = items[0][1], items[1:]
        if head == "not":
            self._arity(node, rest, 1)
            return Not(self.formula(rest[0], bound))
        if head in ("and", "or"):
            parts = tuple(self.formula(r, bound) for r in rest)
            if not parts:
                return Top() if head == "and" else Bottom()
            return (And if head == "and" else Or)(parts)
        if head in ("implies", "iff"):
            self._arity(node, rest, 2)
            return (Implies if head == "implies" else Iff)(self.formula(rest[0], bound), self.formula(rest[1], bound))
        if head == "=":
            self._arity(node, rest, 2)
            return Eq(self.term(rest[0], bound), self.term(rest[1], bound))
        if head in ("forall", "exists"):
            self._arity(node, rest, 2)
            var, sort, rng = self.binder(rest[0], bound)
            body = self.formula(rest[1], bound | {var})
            return (Forall if head == "forall" else Exists)(var, body, sort, rng)
        return Rel(head, tuple(self.term(a, bound) for a in rest))

    def binder(self, node, bound):
        if node[0] != "list" or not node[1] or node[1][0][0] != "sym":
            raise ExprSyntaxError("binder must be (var [:key value ...])", pos=node[-1])
        items = node[1]
        var = items[0][1]
        sort, rng = None, Carrier()
        opts, k = {}, 1
        while k < len(items):
            key = items[k]
            if key[0] != "sym" or not key[1].startswith(":"):
                raise ExprSyntaxError("expected a :keyword in binder", pos=key[-1])
            name = key[1][1:]
            if name in ("field", "carrier"):
                opts[name] = True
                k += 1
                continue
            if k + 1 >= len(items):
                raise ExprSyntaxError(f"missing value for :{name}", pos=key[-1])
            if name == "hint":
                hargs = items[k + 1:]
                opts["hint"] = hargs
                break
            opts[name] = items[k + 1]
            k += 2
        if "sort" in opts:
            sort = opts.pop("sort")[1]
        if "divides" in opts:
            rng = DivisorsOf(self.term(opts.pop("divides"), bound), "all")
        elif "divides-monic" in opts:
            rng = DivisorsOf(self.term(opts.pop("divides-monic"), bound), "monic")
        elif "quot" in opts:
            f = self.term(opts.pop("quot"), bound)
            left = self.term(opts.pop("left"), bound) if "left" in opts else None
            right = self.term(opts.pop("right"), bound) if "right" in opts else None
            rng = Quotient(f, left, right)
        elif "degree" in opts:
            d = opts.pop("degree")
            if d[0] != "sym" or not d[1].isdigit():
                raise ExprSyntaxError(":degree takes a natural", pos=d[-1])
            rng = DegreeAtMost(int(d[1]))
        elif opts.pop("field", False):
            rng = FieldRange()
        elif "hint" in opts:
            hargs = opts.pop("hint")
            name = hargs[0][1]
            idx, args = [], []
            for h in hargs[1:]:
                if h[0] == "sym" and h[1].startswith("#"):
                    idx.append(int(h[1][1:]))
                else:
                    args.append(self.term(h, bound))
            rng = Hint(name, tuple(args), tuple(idx))
        opts.pop("carrier", None)
        if opts:
            raise ExprSyntaxError(f"unknown binder option :{next(iter(opts))}", pos=node[-1])
        return var, sort, rng

    @staticmethod
    def _arity(node, rest, k):
        if len(rest) != k:
            raise ExprSyntaxError(f"expected {k} argument(s)", pos=node[2])


def _numeric(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return bool(body) and all(part.isdigit() for part in body.split("/", 1)) and body.count("/") <= 1


def parse_formula(text: str, constants: Iterable[str] = ()) -> Formula:
    """Symbols not bound by a quantifier are variables unless listed in
    `constants`; numerals become literals."""
    return _Reader(constants).formula(read_sexpr(text))


def parse_term(text: str, constants: Iterable[str] = ()) -> Term:
    return _Reader(constants).term(read_sexpr(text), frozenset())


def format_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Lit):
        if _numeric(t.text):
            return t.text
        return f'(lit "{t.text}")'
    if isinstance(t, App):
        return "(" + " ".join([t.op] + [format_term(a) for a in t.args]) + ")"
    raise TypeError(f"not a term: {t!r}")


def _format_range(r) -> str:
    if isinstance(r, Carrier):
        return ""
    if isinstance(r, DivisorsOf):
        key = ":divides" if r.associates == "all" else ":divides-monic"
        return f" {key} {format_term(r.term)}"
    if isinstance(r, FieldRange):
        return " :field"
    if isinstance(r, DegreeAtMost):
        return f" :degree {r.d}"
    if isinstance(r, Quotient):
        out = f" :quot {format_term(r.f)}"
        if r.left is not None:
            out += f" :left {format_term(r.left)}"
        if r.right is not None:
            out += f" :right {format_term(r.right)}"
        return out
    if isinstance(r, Hint):
        parts = [r.name] + [format_term(a) for a in r.args] + [f"#{i}" for i in r.index]
        return " :hint " + " ".join(parts)
    raise TypeError(f"not a range: {r!r}")


def format_formula(phi) -> str:
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Eq):
        return f"(= {format_term(phi.left)} {format_term(phi.right)})"
    if isinstance(phi, Rel):
        return "(" + " ".join([phi.name] + [format_term(a) for a in phi.args]) + ")"
    if isinstance(phi, Not):
        return f"(not {format_formula(phi.body)})"
    if isinstance(phi, And):
        return "(and " + " ".join(format_formula(p) for p in phi.parts) + ")"
    if isinstance(phi, Or):
        return "(or " + " ".join(format_formula(p) for p in phi.parts) + ")"
    if isinstance(phi, Implies):
        return f"(implies {format_formula(phi.left)} {format_formula(phi.right)})"
    if isinstance(phi, Iff):
        return f"(iff {format_formula(phi.left)} {format_formula(phi.right)})"
    if isinstance(phi, QUANTIFIERS):
        head = "forall" if isinstance(phi, Forall) else "exists"
        sort = f" :sort {phi.sort}" if phi.sort else ""
        return f"({head} ({phi.var}{sort}{_format_range(phi.range)}) {format_formula(phi.body)})"
    raise TypeError(f"not a formula: {phi!r}")
