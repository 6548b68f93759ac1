import itertools
import random

import pytest
from hypothesis import given, strategies as st

from freealg.errors import BadParams, SortError, UnboundVariable, UnknownName
from freealg.folog import (And, Eq, Exists, Forall, Not, PolyRing, Var, brute_force, catalog, evaluate,
                           format_formula, free_vars, is_sentence, normalize, oracle, parse_formula,
                           ring_mod, substitute)
from freealg.interp import random_sentence
from freealg.ncpoly import NcPoly, uv_from_coeffs
from freealg.tribool import FALSE, TRUE, UNKNOWN

from conftest import F2, F3, Q


def f2_slice_polys(p=2, d=4):
    spec = F2 if p == 2 else F3
    for coeffs in itertools.product(range(p), repeat=d + 1):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        yield uv_from_coeffs(spec, c)


@pytest.fixture(scope="module")
def slice_f2():
    return PolyRing(F2, 1, slice_degree=4)


# -- syntax ------------------------------------------------------------------------

def test_parse_and_format():
    phi = parse_formula("(forall (x) (exists (y) (= (+ x y) 0)))")
    assert isinstance(phi, Forall) and isinstance(phi.body, Exists)
    assert is_sentence(phi)
    assert parse_formula(format_formula(phi)) == phi
    psi = parse_formula("(and (= x y) (not (= y 1)))")
    assert free_vars(psi) == {"x", "y"}


def test_substitution_avoids_capture():
    phi = parse_formula("(exists (y) (= x (* y y)))")
    out = substitute(phi, {"x": Var("y")})
    assert free_vars(out) == {"y"}
    assert out.var != "y"


@given(st.integers(0, 10 ** 6))
def test_random_sentences_roundtrip(seed):
    phi = random_sentence(random.Random(seed), depth=3)
    assert is_sentence(phi)
    assert parse_formula(format_formula(phi)) == phi
    assert is_sentence(normalize(phi))


# -- semantics ---------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_evaluator_matches_brute_force(n):
    S = ring_mod(n)
    rng = random.Random(n)
    for _ in range(60):
        phi = random_sentence(rng, depth=3)
        assert (evaluate(S, phi) is TRUE) == brute_force(S, phi)
        assert evaluate(S, phi) is not UNKNOWN


def test_ring_axioms_hold_in_z_mod_n():
    axioms = ["(forall (x) (forall (y) (= (+ x y) (+ y x))))",
              "(forall (x) (forall (y) (forall (z) (= (* x (+ y z)) (+ (* x y) (* x z))))))",
              "(forall (x) (exists (y) (= (+ x y) 0)))"]
    for n in (2, 5, 6):
        for text in axioms:
            assert evaluate(ring_mod(n), parse_formula(text)) is TRUE
    field = parse_formula("(forall (x) (or (= x 0) (exists (y) (= (* x y) 1))))")
    assert evaluate(ring_mod(5), field) is TRUE
    assert evaluate(ring_mod(6), field) is FALSE


def test_evaluation_errors():
    S = ring_mod(3)
    with pytest.raises(UnboundVariable):
        evaluate(S, parse_formula("(= x 0)"))
    with pytest.raises(SortError):
        evaluate(S, parse_formula("(= x 0)"), {"x": "not an element"})
    with pytest.raises(UnknownName):
        catalog("NoSuchFormula")
    with pytest.raises(BadParams):
        catalog("Nat").evaluate(PolyRing(F2, 1, slice_degree=2), x="t", a="1")


def test_slice_examples(slice_f2):
    irr = catalog("Irr")
    assert irr.evaluate(slice_f2, x="t^2 + t + 1") is TRUE
    assert irr.evaluate(slice_f2, x="t^2") is FALSE
    inv = parse_formula("(exists (y) (= (* x y) 1))")
    assert evaluate(slice_f2, inv, {"x": slice_f2.literal("t")}) is FALSE


def test_nat_defines_powers_of_t(slice_f2):
    nat = catalog("Nat")
    defined = {str(f) for f in f2_slice_polys() if nat.evaluate(slice_f2, x=f, a="t") is TRUE}
    expected = {str(NcPoly.parse(s, F2, 1)) for s in ("1", "t", "t^2", "t^3", "t^4")}
    assert defined == expected


def test_fpmember_examples(slice_f2):
    fpm = catalog("FPmember")
    assert fpm.evaluate(slice_f2, Q="t^4 + t^2 + 1", P="t^2") is TRUE
    assert fpm.evaluate(slice_f2, Q="t^3", P="t^2") is FALSE


def test_width_example():
    R = PolyRing(Q, 2)
    assert catalog("width", n=2, k=5).evaluate(R, y="x1*x2") is TRUE


@pytest.mark.parametrize("p", [2, 3])
def test_catalog_agrees_with_oracles_on_slices(p):
    spec = F2 if p == 2 else F3
    R = PolyRing(spec, 1, slice_degree=4)
    checks = [("Irr", {}), ("unit", {}), ("Nat", {"a": "t"}), ("FPmember", {"P": "t^2"})]
    for f in f2_slice_polys(p):
        for name, extra in checks:
            key = "Q" if name == "FPmember" else "x"
            if name == "Irr" and f.is_zero():
                continue
            got = catalog(name).evaluate(R, **{key: f}, **extra)
            assert got is not UNKNOWN, (name, str(f))
            assert (got is TRUE) == oracle(name, R, **{key: f}, **extra), (name, str(f))


@pytest.mark.parametrize("name", ["Irr", "Nat"])
def test_associate_conventions_agree(name, slice_f2):
    all_ = catalog(name, associates="all")
    monic = catalog(name, associates="monic")
    extra = {"a": "t"} if name == "Nat" else {}
    for f in f2_slice_polys(2, 3):
        if f.is_zero():
            continue
        assert all_.evaluate(slice_f2, x=f, **extra) is monic.evaluate(slice_f2, x=f, **extra)


def test_oracle_examples():
    assert oracle("Irr", PolyRing(F2, 1), x="t^3 + t + 1")
    R = PolyRing(Q, 2)
    assert oracle("KMX", R, a="3*x1*x2") and not oracle("KMX", R, a="x1 + x2")
    assert oracle("FPmember", R, Q="(x1*x2 + 1)^2", P="x1*x2 + 1")


@pytest.mark.parametrize("text", ["3*x1*x2", "x1*x2*x1*x2*x2", "x1*x1", "x1 + x2", "x1*x2*x1", "2*x2*x1"])
def test_kmx_and_marker_formulas_agree_with_oracles(text):
    R = PolyRing(Q, 2)
    assert (catalog("KMX", n=2).evaluate(R, a=text) is TRUE) == oracle("KMX", R, a=text)
    for m in (1, 2):
        got = catalog("markerpair", m=m).evaluate(R, x=text)
        assert got is not UNKNOWN
        assert (got is TRUE) == oracle("markerpair", R, x=text, m=m)


def test_formula_builders_are_connectives():
    phi = catalog("Irr").formula
    assert free_vars(phi) == {"x"}
    assert isinstance(And((Eq(Var("x"), Var("x")),)), And)
    assert isinstance(Not(phi), Not)
