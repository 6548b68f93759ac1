from itertools import product as cartesian

import pytest
from hypothesis import given, strategies as st

from freealg.centralizers import (centralizer_window, commutator_kernel, evaluate_powers, expand_in_powers,
                                  generator, is_self_generating, map_centralizer, transport_seq)
from freealg.errors import MalformedPair, NotMember, NotProper, WindowTooSmall
from freealg.ncpoly import NcPoly, words_upto

from conftest import F2, Q, P, raw_scalars


def test_window_examples():
    W = centralizer_window(P("x1"), 2)
    assert W.basis == (P("1"), P("x1"), P("x1^2"))
    assert W.generator == P("x1")
    assert centralizer_window(P("x1^2"), 3).generator == P("x1")
    with pytest.raises(NotProper):
        centralizer_window(P("5"), 2)
    with pytest.raises(WindowTooSmall):
        centralizer_window(P("x1^3"), 2)


def test_self_generating_examples():
    assert is_self_generating(P("x1"))
    assert not is_self_generating(P("x1^2"))
    assert is_self_generating(P("x1*x2"), 6)


def test_expansion_examples():
    assert expand_in_powers(P("3*x1^2 + x1 + 5"), P("x1")) == (5, 1, 3)
    assert expand_in_powers(P("1"), P("x1")) == (1,)
    with pytest.raises(NotMember):
        expand_in_powers(P("x2"), P("x1"))


def test_map_examples():
    assert map_centralizer(P("x1"), P("x2"), P("3*x1^2 + x1 + 5")) == P("3*x2^2 + x2 + 5")
    assert map_centralizer(P("x1"), P("x2"), P("7")) == P("7")
    with pytest.raises(NotMember):
        map_centralizer(P("x1"), P("x2"), P("x2"))


def test_transport_examples():
    assert transport_seq(P("x1"), P("x2"), (P("1 + 2*x1^2"), P("x1^2"))) == (P("1 + 2*x2^2"), P("x2^2"))
    assert transport_seq(P("x1"), P("x2"), (P("4"), P("1"))) == (P("4"), P("1"))
    with pytest.raises(MalformedPair):
        transport_seq(P("x1"), P("x2"), (P("x1"), P("x1 + 1")))


def _all_f2_polys(d):
    ws = list(words_upto(2, d))
    for bits in cartesian((0, 1), repeat=len(ws)):
        yield NcPoly(F2, 2, {w: 1 for w, b in zip(ws, bits) if b})


@pytest.mark.parametrize("text,d", [("x1", 2), ("x1*x2", 2), ("x1 + x2", 2), ("x1^2", 2),
                                    ("x1*x2 + x2*x1", 2), ("x1", 3), ("x1*x2", 3)])
def test_window_matches_exhaustive_commutant_over_f2(text, d):
    Pf = NcPoly.parse(text, F2, 2)
    commuting = [Z for Z in _all_f2_polys(d) if Pf * Z == Z * Pf]
    W = centralizer_window(Pf, max(d, Pf.degree))
    assert len(commuting) == 2 ** len(commutator_kernel(Pf, d))
    if d >= Pf.degree:
        assert len(commuting) == 2 ** W.dimension
        for Z in commuting:
            Z2 = evaluate_powers(expand_in_powers(Z, W.generator), W.generator)
            assert Z2 == Z


@given(st.lists(raw_scalars(Q), min_size=1, max_size=4))
def test_expansion_roundtrip(cs):
    g = P("x1*x2 - x2")
    f = evaluate_powers(cs, g)
    got = expand_in_powers(f, g)
    trimmed = list(cs)
    while len(trimmed) > 1 and trimmed[-1] == 0:
        trimmed.pop()
    assert list(got) == trimmed


@pytest.mark.parametrize("text", ["x1", "x1^2", "x1*x2", "x1*x2*x1", "x1 + x2^2", "(x1*x2)^2"])
def test_generator_commutes_and_generates_P(text):
    Pp = P(text)
    g = generator(Pp)
    assert g * Pp == Pp * g
    assert g.constant_term == 0
    assert evaluate_powers(expand_in_powers(Pp, g), g) == Pp


@given(st.lists(raw_scalars(Q), min_size=1, max_size=4))
def test_map_is_a_ring_homomorphism_on_powers(cs):
    Pp, Qp = P("x1*x2"), P("x2^2 + x1")
    f = evaluate_powers(cs, Pp)
    h = P("x1*x2 + 2")
    assert map_centralizer(Pp, Qp, f * h) == map_centralizer(Pp, Qp, f) * map_centralizer(Pp, Qp, h)
    assert map_centralizer(Pp, Qp, f + h) == map_centralizer(Pp, Qp, f) + map_centralizer(Pp, Qp, h)
