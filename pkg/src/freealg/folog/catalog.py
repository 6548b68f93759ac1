"""Named defining formulas over polynomial rings, with direct oracles.

Each entry is built once per shape and cached, so every use of e.g. Irr is
the very same Formula object regardless of field or rank.  Parameters (the
element a in Nat, P in FPmember, ...) are free variables bound at
evaluation time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from ..bigpowers import recognize_marker
from ..centralizers import expand_in_powers
from ..errors import BadParams, NotMember, UnknownName, UnsupportedDomain
from ..ncpoly import NcPoly, aug_power_decompose, left_divide, uv_divmod, uv_is_irreducible
from ..tribool import TRUE, UNKNOWN, TriBool
from .semantics import PolyRing, evaluate
from .syntax import (And, App, Const, DivisorsOf, Eq, Exists, FieldRange, Forall, Hint, Implies, Lit,
                     Not, Or, Quotient, Rel, Top, Var, substitute)

ZERO = Lit("0")
ONE = Lit("1")


def _mul(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = App("*", (out, t))
    return out


def _pow(t, k):
    if k == 0:
        return ONE
    return _mul(*([t] * k))


def _word(letters):
    """A monomial as a product of generator constants."""
    if not letters:
        return ONE
    return _mul(*(Const(f"x{i}") for i in letters))


def _divides(a, b):
    return Rel("divides", (a, b))


# -- building blocks -----------------------------------------------------------

def unit_formula():
    x = Var("x")
    y = "y"
    return Exists(y, Eq(_mul(x, Var(y)), ONE), range=Quotient(ONE, left=x))


def _unit(t):
    return substitute(unit_formula(), {"x": t})


def irr_formula(associates="monic"):
    x = Var("x")
    u, w = Var("u"), Var("v")
    split = Forall("u", Forall("v", Implies(Eq(x, _mul(u, w)), Or((_unit(u), _unit(w)))),
                               range=Quotient(x, left=u)),
                   range=DivisorsOf(x, associates))
    return And((Not(Eq(x, ZERO)), Not(_unit(x)), split))


def fpmember_formula():
    Q, P = Var("Q"), Var("P")
    return Forall("alpha", Exists("beta", _divides(App("-", (P, Var("alpha"))), App("-", (Q, Var("beta")))),
                                  range=FieldRange()), range=FieldRange())


def natchar0_formula():
    a, u, v, b = Var("a"), Var("u"), Var("v"), Var("b")
    inner = Forall("b", Implies(_divides(App("+", (u, b)), v),
                                Or((_divides(App("+", (App("+", (u, b)), ONE)), v), Eq(b, a)))),
                   range=FieldRange())
    return Forall("u", Implies(And((Not(_unit(u)), Not(Eq(u, ZERO)))),
                               Exists("v", And((_divides(u, v), inner)))))


def nat_phi1(associates="monic"):
    x, a, u = Var("x"), Var("a"), Var("u")
    return Forall("u", Or((_unit(u), _divides(a, u))), range=DivisorsOf(x, associates))


def nat_phi2():
    return _divides(App("-", (Var("a"), ONE)), App("-", (Var("x"), ONE)))


def nat_formula(associates="monic"):
    return And((nat_phi1(associates), nat_phi2()))


def _nat(t, a, associates="monic"):
    return substitute(nat_formula(associates), {"x": t, "a": a})


def pow_add_formula():
    x, y, z, a = Var("x"), Var("y"), Var("z"), Var("a")
    return And((_nat(x, a), _nat(y, a), _nat(z, a), Eq(_mul(x, y), z)))


def pow_div_formula():
    x, y, a = Var("x"), Var("y"), Var("a")
    return And((_nat(x, a), _nat(y, a), _divides(App("-", (x, ONE)), App("-", (y, ONE)))))


def natp1_formula(m: int, k: int):
    """x is a nonzero scalar multiple of P^m: every irreducible b dividing xP
    occurs in x exactly m times as often as in P (checked for b^j, j <= k+1,
    where k bounds the multiplicities in P)."""
    x, P, b = Var("x"), Var("P"), Var("b")
    clauses = []
    for j in range(1, k + 2):
        clauses.append(Implies(_divides(_pow(b, j), P), _divides(_pow(b, m * j), x)))
        clauses.append(Implies(Not(_divides(_pow(b, j), P)), Not(_divides(_pow(b, m * (j - 1) + 1), x))))
    irr_b = substitute(irr_formula(), {"x": b})
    body = Implies(irr_b, And(tuple(clauses)))
    return And((Not(Eq(x, ZERO)), Forall("b", body, range=DivisorsOf(_mul(x, P), "monic"))))


def natp_formula(m: int, k: int):
    return And((natp1_formula(m, k), _divides(App("-", (Var("P"), ONE)), App("-", (Var("x"), ONE)))))


def kmx_formula(n: int):
    a, b = Var("a"), Var("b")
    gens = tuple(_divides(Const(f"x{i}"), b) for i in range(1, n + 1))
    return Forall("b", Or((_unit(b),) + gens), range=DivisorsOf(a, "monic"))


def markerpair_formula(m: int):
    """x is a nonzero scalar multiple of the marker monomial a_m."""
    if m < 1:
        raise BadParams("marker index must be at least 1")
    x = Var("x")
    x1, x2 = Const("x1"), Const("x2")
    parts = [Not(Eq(x, ZERO)), substitute(kmx_formula(2), {"a": x})]
    b = Var("b")
    parts.append(Forall("b", Implies(substitute(irr_formula(), {"x": b}), Or((Eq(b, x1), Eq(b, x2)))),
                        range=DivisorsOf(x, "monic")))
    if m == 1:
        parts.append(Exists("w", Rel("in-K", (Var("w"),)), range=Quotient(x, right=_word((1, 2)))))
        return And(tuple(parts))
    parts.append(Exists("w", Eq(x, _mul(_word((1, 2, 1)), Var("w"))), range=Quotient(x, left=_word((1, 2, 1)))))
    tail = _word((1,) + (2,) * m)
    parts.append(Exists("w", Eq(x, _mul(Var("w"), tail)), range=Quotient(x, right=tail)))
    w1, w2 = Var("w1"), Var("w2")
    for j in range(1, m):
        block = _word((1,) + (2,) * j + (1,))
        if j < m - 1:
            nxt = _word((2,) * (j + 1) + (1,))
            follow = Exists("w3", Top(), range=Quotient(w2, left=nxt))
        else:
            follow = Exists("w3", Rel("in-K", (Var("w3"),)), range=Quotient(w2, left=_word((2,) * m)))
        parts.append(Forall("w1", Forall("w2", follow, range=Quotient(x, left=_mul(w1, block))),
                            range=DivisorsOf(x, "monic")))
        # uniqueness of the occurrence up to scalars
        u1, u2 = Var("u1"), Var("u2")
        same = And((_divides(w1, u1), _divides(u1, w1), _divides(w2, u2), _divides(u2, w2)))
        parts.append(Forall("w1", Forall("w2", Forall("u1", Forall("u2", same,
                                                                   range=Quotient(x, left=_mul(u1, block))),
                                                      range=DivisorsOf(x, "monic")),
                                         range=Quotient(x, left=_mul(w1, block))),
                            range=DivisorsOf(x, "monic")))
    return And(tuple(parts))


def width_formula(n: int, k: int):
    """y is a sum of k n-fold products of constant-free elements; witnesses
    come from prefix grouping."""
    if n < 1 or k < 0:
        raise BadParams("width needs n >= 1, k >= 0")
    y = Var("y")
    if k == 0:
        return Eq(y, ZERO)
    summands = [_mul(*(Var(f"w_{j}_{i}") for i in range(1, n + 1))) for j in range(1, k + 1)]
    total = summands[0]
    for s in summands[1:]:
        total = App("+", (total, s))
    body = Eq(y, total)
    for j in range(k, 0, -1):
        for i in range(n, 0, -1):
            body = Exists(f"w_{j}_{i}", body, range=Hint("aug", (y,), (n, j, i)))
    return body


def width_sentence(n: int, k: int):
    """W_{n,k}: psi_{n,k} and not psi_{n,k-1}, psi_{n,k} = forall y
    (phi_{n,k+1}(y) -> phi_{n,k}(y))."""
    def psi(kk):
        return Forall("y", Implies(width_formula(n, kk + 1), width_formula(n, kk)))
    if k < 1:
        raise BadParams("W needs k >= 1")
    return And((psi(k), Not(psi(k - 1))))


# -- catalog -------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    formula: object
    free: tuple
    shape: tuple = ()
    needs: dict = field(default_factory=dict, compare=False, hash=False)

    def evaluate(self, ring: PolyRing, **values) -> TriBool:
        env = {}
        for k in self.free:
            if k not in values:
                raise BadParams(f"{self.name} needs a value for {k}")
            val = values[k]
            env[k] = ring.literal(val) if isinstance(val, str) else val
        extra = set(values) - set(self.free)
        if extra:
            raise BadParams(f"{self.name} has no parameter {sorted(extra)[0]}")
        _validate(self.name, ring, env)
        return evaluate(ring, self.formula, env)


_BUILDERS = {
    "unit": (lambda: unit_formula(), ("x",)),
    "Irr": (lambda associates="monic": irr_formula(associates), ("x",)),
    "FPmember": (lambda: fpmember_formula(), ("Q", "P")),
    "NatChar0": (lambda: natchar0_formula(), ("a",)),
    "Nat": (lambda associates="monic": nat_formula(associates), ("x", "a")),
    "Nat.phi1": (lambda associates="monic": nat_phi1(associates), ("x", "a")),
    "pow_add": (lambda: pow_add_formula(), ("x", "y", "z", "a")),
    "pow_div": (lambda: pow_div_formula(), ("x", "y", "a")),
    "NatP": (lambda m, k: natp_formula(m, k), ("x", "P")),
    "NatP.phi1": (lambda m, k: natp1_formula(m, k), ("x", "P")),
    "KMX": (lambda n: kmx_formula(n), ("a",)),
    "markerpair": (lambda m: markerpair_formula(m), ("x",)),
    "width": (lambda n, k: width_formula(n, k), ("y",)),
    "W": (lambda n, k: width_sentence(n, k), ()),
}

NAMES = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def _cached(name, shape):
    build, free = _BUILDERS[name]
    try:
        phi = build(**dict(shape))
    except TypeError as exc:
        raise BadParams(f"{name}: {exc}") from None
    return CatalogEntry(name, phi, free, shape)


def catalog(name: str, **shape) -> CatalogEntry:
    """Look up a catalog entry.  `shape` holds structural parameters that
    change the formula (m, k, n, associates); element parameters are bound at
    evaluation."""
    if name not in _BUILDERS:
        raise UnknownName(f"no catalog entry {name!r}")
    return _cached(name, tuple(sorted(shape.items())))


def _validate(name, ring, env):
    if name in ("Nat", "Nat.phi1", "pow_add", "pow_div"):
        a = env["a"]
        if a.is_constant():
            raise BadParams("the base a must be a non-unit, nonzero element")
    if name in ("NatP", "NatP.phi1", "FPmember"):
        P = env["P"]
        if P.is_constant():
            raise BadParams("P must be a non-unit, nonzero element")
    if name in ("markerpair",) and ring.n < 2:
        raise BadParams("markers need at least two generators")


# -- oracles ----------------------------------------------------------------------------

def _power_of(x: NcPoly, a: NcPoly) -> int | None:
    """k with x = a^k, by repeated exact division."""
    one = NcPoly.one(a.spec, a.n)
    k, cur = 0, x
    while cur != one:
        if cur.is_zero() or cur.degree < a.degree or cur.is_constant():
            return None
        if a.n == 1:
            q, r = uv_divmod(cur, a)
            if not r.is_zero():
                return None
        else:
            q = left_divide(cur, a)
            if q is None:
                return None
        cur, k = q, k + 1
    return k


def _in_power_ring(Q: NcPoly, P: NcPoly) -> bool:
    try:
        expand_in_powers(Q, P)
        return True
    except NotMember:
        return False


def oracle(name: str, ring: PolyRing, **values) -> bool:
    """Direct decision procedures, independent of the formula evaluator."""
    vals = {k: ring.literal(v) if isinstance(v, str) else v for k, v in values.items()}
    if name == "unit":
        x = vals["x"]
        return x.is_constant() and not x.is_zero()
    if name == "Irr":
        x = vals["x"]
        if ring.n != 1:
            raise UnsupportedDomain("the irreducibility oracle covers rank 1")
        if x.is_constant():
            return False
        verdict = uv_is_irreducible(x)
        if verdict is UNKNOWN:
            raise UnsupportedDomain("irreducibility over Q is decided only up to degree 3")
        return verdict is TRUE
    if name == "FPmember":
        return _in_power_ring(vals["Q"], vals["P"])
    if name == "Nat":
        return _power_of(vals["x"], vals["a"]) is not None
    if name == "Nat.phi1":
        x, a = vals["x"], vals["a"]
        if x.is_zero():
            return False
        return _power_of(x.monic(), a.monic()) is not None
    if name == "pow_add":
        ks = [_power_of(vals[k], vals["a"]) for k in ("x", "y", "z")]
        return None not in ks and ks[0] + ks[1] == ks[2]
    if name == "pow_div":
        ks = [_power_of(vals[k], vals["a"]) for k in ("x", "y")]
        if None in ks:
            return False
        n, m = ks
        return m == 0 if n == 0 else m % n == 0
    if name in ("NatP", "NatP.phi1"):
        m = values.get("m")
        if m is None:
            raise BadParams("NatP oracle needs m")
        x, P = vals["x"], vals["P"]
        target = P ** m
        if name == "NatP":
            return x == target
        return not x.is_zero() and x.monic() == target.monic()
    if name == "KMX":
        a = vals["a"]
        return len(a.terms) == 1
    if name == "markerpair":
        return recognize_marker(vals["x"]) == values.get("m")
    if name == "width":
        y, n, k = vals["y"], values["n"], values["k"]
        if y.constant_term != 0 or (not y.is_zero() and y.min_degree < n):
            return False
        if k >= ring.n ** n or len(aug_power_decompose(y, n)) <= k:
            return True
        raise UnsupportedDomain("minimal width below the prefix bound is not decided")
    if name == "NatChar0":
        raise UnsupportedDomain("NatChar0 has no finite oracle")
    raise UnknownName(f"no oracle for {name!r}")
