"""Interpretation schemes, formula translation and quotient structures.

A scheme of dimension n represents each source element by an n-tuple of
target elements: a domain formula picks the admissible tuples, an equivalence
formula identifies tuples, and one formula per symbol gives its graph on
tuples.  Scheme formulas name their tuple slots explicitly through `vars`
(flat lists, n slots per source argument, result last for operations);
parameters are extra free variables left free by translation.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import BadParams, NotEquivalence, NotWellDefined, SignatureMismatch, UnsupportedDomain
from .folog.semantics import Evaluator, FinStructure
from .folog.syntax import (QUANTIFIERS, And, App, Bottom, Carrier, Const, Eq, Exists, Forall, Iff,
                           Implies, Lit, Not, Or, Rel, Top, Var, bound_vars, format_formula,
                           free_vars, is_sentence, parse_formula, substitute)
from .tribool import TRUE, UNKNOWN


def tuple_vars(name: str, n: int) -> list[str]:
    return [name] if n == 1 else [f"{name}_{i}" for i in range(1, n + 1)]


@dataclass(frozen=True)
class Piece:
    """A formula together with the ordered list of its slot variables."""
    vars: tuple
    formula: object
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def instantiate(self, names):
        """The formula with its slots renamed; equal requests return the same
        object so evaluator memo tables are shared between uses."""
        if len(names) != len(self.vars):
            raise SignatureMismatch(f"expected {len(self.vars)} slots, got {len(names)}")
        if all(isinstance(n, str) for n in names):
            key = tuple(names)
            if key not in self._cache:
                self._cache[key] = substitute(self.formula, {v: Var(n) for v, n in zip(self.vars, names)})
            return self._cache[key]
        mapping = {v: (n if isinstance(n, (Var, Const, Lit, App)) else Var(n))
                   for v, n in zip(self.vars, names)}
        return substitute(self.formula, mapping)

    def to_json(self):
        return {"vars": list(self.vars), "formula": format_formula(self.formula)}


@dataclass(frozen=True)
class InterpScheme:
    name: str
    dim: int
    source_ops: dict          # op -> arity
    source_consts: tuple
    source_rels: dict         # rel -> arity
    domain: Piece
    equiv: Piece
    ops: dict = field(default_factory=dict)     # op -> Piece
    consts: dict = field(default_factory=dict)  # const -> Piece
    rels: dict = field(default_factory=dict)    # rel -> Piece
    params: tuple = ()
    source_sort: str = "R"

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise SignatureMismatch("dimension must be positive")
        if set(self.ops) != set(self.source_ops):
            raise SignatureMismatch(f"operation formulas {sorted(self.ops)} do not match {sorted(self.source_ops)}")
        if set(self.consts) != set(self.source_consts):
            raise SignatureMismatch("constant formulas do not match the source constants")
        if set(self.rels) != set(self.source_rels):
            raise SignatureMismatch("relation formulas do not match the source relations")
        checks = [("domain", self.domain, n), ("equiv", self.equiv, 2 * n)]
        checks += [(f"op {k}", p, (self.source_ops[k] + 1) * n) for k, p in self.ops.items()]
        checks += [(f"const {k}", p, n) for k, p in self.consts.items()]
        checks += [(f"rel {k}", p, self.source_rels[k] * n) for k, p in self.rels.items()]
        allowed = set(self.params)
        for label, piece, width in checks:
            if len(piece.vars) != width:
                raise SignatureMismatch(f"{label}: {len(piece.vars)} slots, expected {width}")
            extra = free_vars(piece.formula) - set(piece.vars) - allowed
            if extra:
                raise SignatureMismatch(f"{label}: unexpected free variables {sorted(extra)}")

    @property
    def symbols(self) -> set:
        return set(self.source_ops) | set(self.source_consts) | set(self.source_rels)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "params": list(self.params),
            "source": {"sort": self.source_sort, "ops": dict(self.source_ops),
                       "consts": list(self.source_consts), "rels": dict(self.source_rels)},
            "domain": self.domain.to_json(),
            "equiv": self.equiv.to_json(),
            "ops": {k: p.to_json() for k, p in self.ops.items()},
            "consts": {k: p.to_json() for k, p in self.consts.items()},
            "rels": {k: p.to_json() for k, p in self.rels.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "InterpScheme":
        try:
            src = doc["source"]

            def piece(d):
                return Piece(tuple(d["vars"]), parse_formula(d["formula"]))

            return cls(
                name=doc.get("name", ""),
                dim=int(doc["dim"]),
                source_ops={k: int(a) for k, a in src.get("ops", {}).items()},
                source_consts=tuple(src.get("consts", ())),
                source_rels={k: int(a) for k, a in src.get("rels", {}).items()},
                domain=piece(doc["domain"]),
                equiv=piece(doc["equiv"]),
                ops={k: piece(d) for k, d in doc.get("ops", {}).items()},
                consts={k: piece(d) for k, d in doc.get("consts", {}).items()},
                rels={k: piece(d) for k, d in doc.get("rels", {}).items()},
                params=tuple(doc.get("params", ())),
                source_sort=src.get("sort", "R"),
            )
        except (KeyError, TypeError) as exc:
            raise SignatureMismatch(f"malformed scheme document: {exc}") from None


def load_scheme(name_or_path) -> InterpScheme:
    """Load a scheme from a JSON file, or a shipped fixture by name."""
    p = Path(name_or_path)
    if p.suffix == ".json" and p.exists():
        text = p.read_text()
    else:
        stem = p.name[:-5] if p.name.endswith(".json") else p.name
        res = resources.files("freealg.data").joinpath(f"{stem}.json")
        if not res.is_file():
            raise FileNotFoundError(f"no scheme file or fixture named {name_or_path!r}")
        text = res.read_text()
    return InterpScheme.from_json(json.loads(text))


def shipped_schemes() -> list[str]:
    return sorted(r.name[:-5] for r in resources.files("freealg.data").iterdir() if r.name.endswith(".json"))


# -- translation --------------------------------------------------------------------

def _conjuncts(parts):
    out = []
    for p in parts:
        if isinstance(p, And):
            out.extend(_conjuncts(p.parts))
        elif not isinstance(p, Top):
            out.append(p)
    return out


def _flat_and(parts):
    out = _conjuncts(parts)
    if not out:
        return Top()
    return out[0] if len(out) == 1 else And(tuple(out))


class _Translator:
    def __init__(self, scheme: InterpScheme, phi):
        self.s = scheme
        for p in scheme.params:
            if p in free_vars(phi) or p in bound_vars(phi):
                raise SignatureMismatch(f"variable {p!r} clashes with a scheme parameter")
        taken = set(scheme.params)
        for name in free_vars(phi) | bound_vars(phi):
            taken |= set(tuple_vars(name, scheme.dim))
        self.taken = taken
        self.counter = itertools.count()

    def fresh(self) -> list[str]:
        while True:
            base = f"_t{next(self.counter)}"
            names = tuple_vars(base, self.s.dim)
            if not self.taken.intersection(names):
                self.taken.update(names)
                return names

    def delta(self, names):
        return self.s.domain.instantiate(names)

    def term(self, t):
        """Flatten t: returns (fresh variables, conjuncts, result slot names)."""
        s = self.s
        if isinstance(t, Var):
            return [], [], tuple_vars(t.name, s.dim)
        if isinstance(t, (Const, Lit)):
            name = t.name if isinstance(t, Const) else t.text
            if name not in s.consts:
                raise SignatureMismatch(f"constant {name!r} is not in the source signature")
            out = self.fresh()
            return list(out), [self.delta(out), s.consts[name].instantiate(out)], out
        if isinstance(t, App):
            if t.op not in s.ops:
                raise SignatureMismatch(f"operation {t.op!r} is not in the source signature")
            if len(t.args) != s.source_ops[t.op]:
                raise SignatureMismatch(f"{t.op} takes {s.source_ops[t.op]} arguments")
            new, parts, slots = [], [], []
            for a in t.args:
                n2, p2, r2 = self.term(a)
                new += n2
                parts += p2
                slots += r2
            out = self.fresh()
            new += out
            parts += [self.delta(out), s.ops[t.op].instantiate(slots + list(out))]
            return new, parts, out
        raise TypeError(f"not a term: {t!r}")

    def atom(self, new, parts, core):
        body = _flat_and(parts + [core])
        for name in reversed(new):
            body = Exists(name, body)
        return body

    def formula(self, phi):
        s = self.s
        if isinstance(phi, (Top, Bottom)):
            return phi
        if isinstance(phi, Eq):
            n1, p1, r1 = self.term(phi.left)
            n2, p2, r2 = self.term(phi.right)
            return self.atom(n1 + n2, p1 + p2, s.equiv.instantiate(list(r1) + list(r2)))
        if isinstance(phi, Rel):
            if phi.name not in s.rels:
                raise SignatureMismatch(f"relation {phi.name!r} is not in the source signature")
            if len(phi.args) != s.source_rels[phi.name]:
                raise SignatureMismatch(f"{phi.name} takes {s.source_rels[phi.name]} arguments")
            new, parts, slots = [], [], []
            for a in phi.args:
                n2, p2, r2 = self.term(a)
                new += n2
                parts += p2
                slots += r2
            return self.atom(new, parts, s.rels[phi.name].instantiate(slots))
        if isinstance(phi, Not):
            return Not(self.formula(phi.body))
        if isinstance(phi, (And, Or)):
            return type(phi)(tuple(self.formula(p) for p in phi.parts))
        if isinstance(phi, (Implies, Iff)):
            return type(phi)(self.formula(phi.left), self.formula(phi.right))
        if isinstance(phi, QUANTIFIERS):
            if not isinstance(phi.range, Carrier):
                raise UnsupportedDomain("only plain quantifiers can be translated")
            names = tuple_vars(phi.var, s.dim)
            guard = self.delta(names)
            body = self.formula(phi.body)
            if isinstance(guard, Top):
                inner = body
            elif isinstance(phi, Forall):
                inner = Implies(guard, body)
            else:
                inner = _flat_and([guard, body])
            for name in reversed(names):
                inner = type(phi)(name, inner)
            return inner
        raise TypeError(f"not a formula: {phi!r}")


def translate(scheme: InterpScheme, phi):
    """The target-signature formula true of tuples exactly when phi is true
    of the elements they represent; free variables become tuples, scheme
    parameters stay free."""
    return _Translator(scheme, phi).formula(phi)


# -- quotient structures ------------------------------------------------------------

def _env_for(names_values):
    env = {}
    for names, vals in names_values:
        env.update(zip(names, vals))
    return env


def _slots(prefix, k, n):
    return [tuple_vars(f"{prefix}{i}", n) for i in range(k)]


def induced_structure(scheme: InterpScheme, B: FinStructure, params: dict | None = None) -> FinStructure:
    """The structure the scheme defines inside B: admissible tuples modulo
    the equivalence, with induced tables.  Classes are numbered 0..m-1 in
    order of their first tuple; meta['classes'] lists the member tuples."""
    params = dict(params or {})
    missing = set(scheme.params) - set(params)
    if missing:
        raise BadParams(f"missing parameter values {sorted(missing)}")
    n = scheme.dim
    ev = Evaluator(B)
    carrier = B.carriers[B.default_sort]

    def holds(piece, tuples, what, err):
        env = dict(params)
        for vars_, t in zip(_chunks(piece.vars, n), tuples):
            env.update(zip(vars_, t))
        r = ev(piece.formula, env)
        if r is UNKNOWN:
            raise err(f"{what} is undetermined on {tuples}")
        return r is TRUE

    tuples = [t for t in itertools.product(carrier, repeat=n)
              if holds(scheme.domain, [t], "domain formula", NotEquivalence)]
    if not tuples:
        raise NotEquivalence("the domain formula defines the empty set")
    N = len(tuples)
    eq = [[holds(scheme.equiv, [a, b], "equivalence", NotEquivalence) for b in tuples] for a in tuples]
    for i in range(N):
        if not eq[i][i]:
            raise NotEquivalence(f"not reflexive at {tuples[i]}")
        for j in range(N):
            if eq[i][j] != eq[j][i]:
                raise NotEquivalence(f"not symmetric at {tuples[i]}, {tuples[j]}")
            if eq[i][j]:
                for k in range(N):
                    if eq[j][k] and not eq[i][k]:
                        raise NotEquivalence(f"not transitive at {tuples[i]}, {tuples[j]}, {tuples[k]}")
    cls_of, classes = {}, []
    for i, t in enumerate(tuples):
        if t in cls_of:
            continue
        members = [tuples[j] for j in range(N) if eq[i][j]]
        for m in members:
            cls_of[m] = len(classes)
        classes.append(members)
    sort = scheme.source_sort
    elems = list(range(len(classes)))

    def output_class(piece, args, what):
        found = {cls_of[y] for y in tuples if holds(piece, list(args) + [y], what, NotWellDefined)}
        if len(found) != 1:
            raise NotWellDefined(f"{what} gives {len(found)} classes on {list(args)}")
        return found.pop()

    ops = {}
    for name, piece in scheme.ops.items():
        k = scheme.source_ops[name]
        table = {}
        for args in itertools.product(tuples, repeat=k):
            key = tuple(cls_of[a] for a in args)
            c = output_class(piece, args, f"operation {name}")
            if table.setdefault(key, c) != c:
                raise NotWellDefined(f"operation {name} depends on representatives at classes {key}")
        ops[name] = ((sort,) * k, sort, table)
    consts = {name: (sort, output_class(piece, [], f"constant {name}")) for name, piece in scheme.consts.items()}
    rels = {}
    for name, piece in scheme.rels.items():
        k = scheme.source_rels[name]
        truth = {}
        for args in itertools.product(tuples, repeat=k):
            key = tuple(cls_of[a] for a in args)
            r = holds(piece, args, f"relation {name}", NotWellDefined)
            if truth.setdefault(key, r) != r:
                raise NotWellDefined(f"relation {name} depends on representatives at classes {key}")
        rels[name] = ((sort,) * k, {key for key, r in truth.items() if r})
    return FinStructure({sort: elems}, ops=ops, rels=rels, consts=consts, default_sort=sort,
                        name=f"{scheme.name}({B.name})", meta={"classes": classes})


def _chunks(seq, n):
    return [tuple(seq[i:i + n]) for i in range(0, len(seq), n)]


# -- composition ----------------------------------------------------------------------

def compose(s1: InterpScheme, s2: InterpScheme, name: str | None = None) -> InterpScheme:
    """s1 interprets A in B, s2 interprets B in C; the result interprets A in
    C with dimension dim(s1) * dim(s2)."""
    n2 = s2.dim
    used = set()
    for p in [s1.domain, s1.equiv, *s1.ops.values(), *s1.consts.values(), *s1.rels.values()]:
        used |= _symbols_used(p.formula)
    unknown = used - s2.symbols
    if unknown:
        raise SignatureMismatch(f"{sorted(unknown)} not interpreted by {s2.name or 'the inner scheme'}")
    if set(s1.params) & set(s2.params):
        raise SignatureMismatch("parameter names of the two schemes overlap")

    def lift(piece: Piece) -> Piece:
        slots = []
        for v in piece.vars:
            slots += tuple_vars(v, n2)
        guards = [s2.domain.instantiate(tuple_vars(v, n2)) for v in piece.vars]
        body = _flat_and(guards + [translate(s2, piece.formula)])
        return Piece(tuple(slots), body)

    params = tuple(itertools.chain.from_iterable(tuple_vars(p, n2) for p in s1.params)) + s2.params
    return InterpScheme(
        name=name or f"{s1.name}.{s2.name}",
        dim=s1.dim * n2,
        source_ops=dict(s1.source_ops),
        source_consts=tuple(s1.source_consts),
        source_rels=dict(s1.source_rels),
        domain=lift(s1.domain),
        equiv=lift(s1.equiv),
        ops={k: lift(p) for k, p in s1.ops.items()},
        consts={k: lift(p) for k, p in s1.consts.items()},
        rels={k: lift(p) for k, p in s1.rels.items()},
        params=params,
        source_sort=s1.source_sort,
    )


def _symbols_used(phi) -> set:
    out = set()

    def term(t):
        if isinstance(t, Const):
            out.add(t.name)
        elif isinstance(t, Lit):
            out.add(t.text)
        elif isinstance(t, App):
            out.add(t.op)
            for a in t.args:
                term(a)

    def form(f):
        if isinstance(f, Eq):
            term(f.left)
            term(f.right)
        elif isinstance(f, Rel):
            out.add(f.name)
            for a in f.args:
                term(a)
        elif isinstance(f, Not):
            form(f.body)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                form(p)
        elif isinstance(f, (Implies, Iff)):
            form(f.left)
            form(f.right)
        elif isinstance(f, QUANTIFIERS):
            form(f.body)

    form(phi)
    return out


# -- verification ---------------------------------------------------------------------

@dataclass
class VerifyReport:
    sentence: str
    source_value: str
    target_value: str
    agree: bool
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"sentence": self.sentence, "source": self.source_value, "target": self.target_value,
                "agree": self.agree, "counterexample": self.counterexample}


def verify_translation(scheme: InterpScheme, B: FinStructure, phi, params: dict | None = None,
                       model: FinStructure | None = None, _evaluators=None) -> VerifyReport:
    """Compare B |= translate(phi) with model |= phi.  `model` defaults to the
    induced structure; a model built from another scheme over the same
    domain and equivalence can be passed to check a modified scheme against
    it.  On disagreement the counterexample is the innermost source
    environment (classes and representative tuples) where the two sides
    still differ."""
    if not is_sentence(phi):
        raise BadParams(f"not a sentence: free variables {sorted(free_vars(phi))}")
    params = dict(params or {})
    model = model or induced_structure(scheme, B, params)
    classes = model.meta["classes"]
    src_ev, tgt_ev = _evaluators or (Evaluator(model), Evaluator(B))

    def values(psi, env):
        tenv = dict(params)
        for var, c in env.items():
            tenv.update(zip(tuple_vars(var, scheme.dim), classes[c][0]))
        return src_ev(psi, env), tgt_ev(translate(scheme, psi), tenv)

    def descend(psi, env):
        a, b = values(psi, env)
        if a == b:
            return None
        subs = []
        if isinstance(psi, Not):
            subs = [(psi.body, env)]
        elif isinstance(psi, (And, Or)):
            subs = [(p, env) for p in psi.parts]
        elif isinstance(psi, (Implies, Iff)):
            subs = [(psi.left, env), (psi.right, env)]
        elif isinstance(psi, QUANTIFIERS):
            subs = [(psi.body, {**env, psi.var: c}) for c in model.carriers[model.default_sort]]
        for sub, e in subs:
            found = descend(sub, e)
            if found is not None:
                return found
        return {
            "formula": format_formula(psi),
            "source": str(a),
            "target": str(b),
            "env": {var: {"class": c, "tuple": list(classes[c][0])} for var, c in env.items()},
        }

    a, b = values(phi, {})
    report = VerifyReport(format_formula(phi), str(a), str(b), a == b)
    if not report.agree:
        report.counterexample = descend(phi, {})
    return report


def is_isomorphic(A: FinStructure, B: FinStructure) -> dict | None:
    """An isomorphism A -> B of one-sorted finite structures as a dict, or
    None; brute force over bijections fixing the constants."""
    ca, cb = A.carriers[A.default_sort], B.carriers[B.default_sort]
    if len(ca) != len(cb) or set(A.ops) != set(B.ops) or set(A.consts) != set(B.consts) \
            or set(A.rels) != set(B.rels):
        return None
    fixed = {}
    for name in A.consts:
        a, b = A.constant(name), B.constant(name)
        if fixed.setdefault(a, b) != b:
            return None
    if len(set(fixed.values())) != len(fixed):
        return None
    free_a = [x for x in ca if x not in fixed]
    free_b = [y for y in cb if y not in set(fixed.values())]
    for perm in itertools.permutations(free_b):
        h = dict(fixed)
        h.update(zip(free_a, perm))
        if _is_hom(A, B, h):
            return h
    return None


def _is_hom(A, B, h) -> bool:
    ca = A.carriers[A.default_sort]
    for name, (asorts, _, table) in A.ops.items():
        for args in itertools.product(ca, repeat=len(asorts)):
            if args not in table:
                continue
            if B.apply(name, [h[x] for x in args]) != h[table[args]]:
                return False
    for name, (asorts, tuples) in A.rels.items():
        for args in itertools.product(ca, repeat=len(asorts)):
            if (args in tuples) != (tuple(h[x] for x in args) in B.rels[name][1]):
                return False
    return True


# -- sentence generators ----------------------------------------------------------------

def random_term(rng: random.Random, names, ops=("+", "*"), consts=("0", "1"), size: int = 2):
    if size <= 0 or rng.random() < 0.4:
        pool = [Var(x) for x in names] + [Lit(c) for c in consts]
        return rng.choice(pool)
    op = rng.choice(list(ops))
    return App(op, (random_term(rng, names, ops, consts, size - 1),
                    random_term(rng, names, ops, consts, size - 1)))


def random_sentence(rng: random.Random, depth: int = 3, ops=("+", "*"), consts=("0", "1"),
                    names=("x", "y", "z")):
    """A random sentence of quantifier depth <= depth, with terms of at most
    two nested operations."""

    def go(d, bound, budget):
        if bound and (d == 0 or rng.random() < 0.25):
            if budget > 0 and rng.random() < 0.4:
                kind = rng.choice(["not", "and", "or", "implies"])
                if kind == "not":
                    return Not(go(d, bound, budget - 1))
                left, right = go(d, bound, budget - 1), go(d, bound, budget - 1)
                return {"and": lambda: And((left, right)), "or": lambda: Or((left, right)),
                        "implies": lambda: Implies(left, right)}[kind]()
            return Eq(random_term(rng, bound, ops, consts), random_term(rng, bound, ops, consts))
        var = names[len(bound) % len(names)] if len(bound) < len(names) else f"v{len(bound)}"
        Q = rng.choice([Forall, Exists])
        return Q(var, go(d - 1, bound + [var], budget))

    return go(depth, [], 2)


def small_sentences(ops=("+", "*"), max_vars: int = 3):
    """Every prenex sentence Q1 v1 .. Qk vk (s op t = u) with k <= max_vars
    and s, t, u among the bound variables."""
    names = ["x", "y", "z", "w"][:max_vars]
    for k in range(1, max_vars + 1):
        vs = names[:k]
        for qs in itertools.product((Forall, Exists), repeat=k):
            for op in ops:
                for s, t, u in itertools.product(vs, repeat=3):
                    body = Eq(App(op, (Var(s), Var(t))), Var(u))
                    for Q, var in zip(reversed(qs), reversed(vs)):
                        body = Q(var, body)
                    yield body


def sweep(scheme: InterpScheme, B: FinStructure, sentences, params: dict | None = None,
          model: FinStructure | None = None) -> list[VerifyReport]:
    """Verify each sentence; returns the disagreeing reports."""
    model = model or induced_structure(scheme, B, params)
    evs = (Evaluator(model), Evaluator(B))
    bad = []
    for phi in sentences:
        r = verify_translation(scheme, B, phi, params, model, evs)
        if not r.agree:
            bad.append(r)
    return bad
