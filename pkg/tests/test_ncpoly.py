from itertools import product as cartesian

import pytest
from hypothesis import assume, given, strategies as st

from freealg.errors import BadGenerator, ExprSyntaxError, NotInPower
from freealg.ncpoly import (NcPoly, PolyClass, aug_power_decompose, classify, count_words, divides,
                            factor_divides, format_poly, leading, parse_poly, substitute, uv_divmod,
                            uv_gcd, uv_is_irreducible, words_upto)
from freealg.tribool import FALSE, TRUE

from conftest import F2, F3, Q, P, polys


def test_noncommutative_products():
    assert P("x1") * P("x2") == P("x1*x2")
    assert P("x1*x2") != P("x2*x1")
    assert P("(x1+1)*(x1-1)") == P("x1^2 - 1")
    f = P("3*x1*x2 - x2 + 1/2")
    assert (f + (-f)).is_zero()


def test_classify_examples():
    assert classify(P("3")) is PolyClass.UNIT
    assert classify(P("2*x1*x2")) is PolyClass.SCALAR_MONOMIAL
    assert classify(P("x1 + x2")) is PolyClass.GENERAL


def test_leading_examples():
    assert leading(P("x1 + x2^2")) == ((2, 2), 1)
    assert leading(P("3*x1*x2 + 2*x2*x1")) == ((2, 1), 2)
    assert leading(P("5")) == ((), 5)


def test_factor_divides_examples():
    assert factor_divides(P("x1"), P("x2*x1*x2")) == (P("x2"), P("x2"))
    assert factor_divides(P("x1^2"), P("x1*x2*x1")) is None
    u, v = factor_divides(P("2"), P("x1"))
    assert u * P("2") * v == P("x1")


def test_substitution_examples():
    assert substitute(P("x1*x2"), [P("x2"), P("x1")]) == P("x2*x1")
    assert substitute(P("x1"), [P("x1 + x2^2"), P("x2")]) == P("x1 + x2^2")
    assert substitute(P("x1^2"), [P("x1+1"), P("x2")]) == P("x1^2 + 2*x1 + 1")


def test_aug_power_examples():
    parts = aug_power_decompose(P("x1*x2 + x2*x1*x1"), 2)
    assert parts == [(P("x1"), P("x2")), (P("x2"), P("x1^2"))]
    with pytest.raises(NotInPower):
        aug_power_decompose(P("x1"), 2)
    assert aug_power_decompose(P("0"), 3) == []


def test_univariate_examples():
    g = uv_gcd(P("t^2 - 1", 1), P("t - 1", 1))
    assert g == P("t - 1", 1)
    assert uv_is_irreducible(P("t^2 + t + 1", 1, F2)) is TRUE
    assert uv_is_irreducible(P("t^2", 1, F2)) is FALSE


def test_parser_examples_and_errors():
    f = parse_poly("2*x1*x2^2 + 3", Q, 2)
    assert len(f.terms) == 2
    assert not P("x1*x2 - x2*x1").is_zero()
    with pytest.raises(BadGenerator):
        parse_poly("x3", Q, 2)
    with pytest.raises(ExprSyntaxError):
        parse_poly("x1 +* x2", Q, 2)


def test_word_counts():
    assert count_words(2, 3) == 1 + 2 + 4 + 8
    assert len(list(words_upto(3, 2))) == count_words(3, 2)


# -- properties ----------------------------------------------------------------------

@pytest.mark.parametrize("spec", [Q, F2, F3], ids=str)
def test_ring_axioms(spec):
    @given(polys(spec), polys(spec), polys(spec))
    def check(f, g, h):
        assert f + g == g + f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert (f + g) * h == f * h + g * h
        assert f * NcPoly.one(spec, 2) == f == NcPoly.one(spec, 2) * f
        if not f.is_zero() and not g.is_zero():
            assert (f * g).degree == f.degree + g.degree
    check()


@pytest.mark.parametrize("spec", [Q, F3], ids=str)
def test_print_parse_fixpoint(spec):
    @given(polys(spec, 3))
    def check(f):
        text = format_poly(f)
        assert parse_poly(text, spec, 3) == f
        assert format_poly(parse_poly(text, spec, 3)) == text
    check()


@given(polys(Q), polys(Q))
def test_substitution_is_a_homomorphism(f, g):
    V = [P("x1 + x2^2"), P("x2 - 3")]
    assert substitute(f * g, V) == substitute(f, V) * substitute(g, V)
    assert substitute(f + g, V) == substitute(f, V) + substitute(g, V)


@given(polys(Q, max_len=2, max_terms=3), polys(Q, max_len=2, max_terms=3), polys(Q, max_len=2, max_terms=3))
def test_factor_divides_finds_planted_factor(u, b, v):
    f = u * b * v
    assume(not f.is_zero())
    got = factor_divides(b, f)
    assert got is not None
    assert got[0] * b * got[1] == f
    assert divides(b, f)


@given(polys(Q, max_len=3, max_terms=3), st.integers(1, 3))
def test_aug_power_decomposition_recombines(f, n):
    f = f - f.like(f.constant_term)
    try:
        parts = aug_power_decompose(f, n)
    except NotInPower:
        assert any(len(w) < n for w in f.terms)
        return
    total = NcPoly.zero(Q, 2)
    for factors in parts:
        assert len(factors) == n
        assert all(g.constant_term == 0 for g in factors)
        prod = NcPoly.one(Q, 2)
        for g in factors:
            prod = prod * g
        total = total + prod
    assert total == f


def _monic_f2(deg):
    for tail in cartesian((0, 1), repeat=deg):
        yield NcPoly(F2, 1, {(1,) * i: c for i, c in enumerate(tail)} | {(1,) * deg: 1})


@pytest.mark.parametrize("deg", [1, 2, 3, 4, 5])
def test_f2_irreducibility_against_product_table(deg):
    reducible = set()
    for a in range(1, deg // 2 + 1):
        for f in _monic_f2(a):
            for g in _monic_f2(deg - a):
                reducible.add(f * g)
    for f in _monic_f2(deg):
        assert (uv_is_irreducible(f) is TRUE) == (f not in reducible)


@given(polys(Q, 1, 4, 4), polys(Q, 1, 3, 3))
def test_univariate_division_and_gcd(f, g):
    assume(not g.is_zero())
    q, r = uv_divmod(f, g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree
    h = uv_gcd(f * g, g)
    assert uv_divmod(g, h)[1].is_zero()
    assert uv_divmod(f * g, h)[1].is_zero()
