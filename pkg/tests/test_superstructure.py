import pytest
from hypothesis import given, strategies as st

from freealg.errors import MalformedPair
from freealg.ncpoly import NcPoly
from freealg.superstructure import (TuplePair, decode_pair, encode_poly, kt_component, kt_concat,
                                    kt_decode_seq, kt_encode_seq, kt_length, odot, odot_cell, oplus,
                                    pair_equiv, red, sk_concat, sk_length, sk_member, zero_pair)

from conftest import F3, Q, P, polys, raw_scalars, words


def T(coeffs, mons, spec=Q):
    return TuplePair(tuple(spec(c) for c in coeffs), tuple(mons))


def test_encode_examples():
    assert encode_poly(P("0")) == T((0,), ((),))
    assert encode_poly(P("1")) == T((1,), ((),))
    assert encode_poly(P("2*x1*x2 + 3")) == T((3, 2), ((), (1, 2)))


def test_decode_examples():
    assert decode_pair(T((1, 1), ((1,), (1,))), 2) == P("2*x1")
    assert decode_pair(zero_pair(Q), 2).is_zero()
    assert decode_pair(T((2, 3), ((1, 2), ())), 2) == P("2*x1*x2 + 3")


def test_red_examples():
    assert red(T((1, 2, -3), ((1,), (2,), (1,)))) == T((-2, 2), ((1,), (2,)))
    assert red(T((1, -1), ((1,), (1,)))) == zero_pair(Q)
    q = encode_poly(P("x1 - 4*x2*x1"))
    assert red(q) == q


def test_equivalence_examples():
    assert pair_equiv(T((1, 2), ((1,), (2,))), T((2, 1), ((2,), (1,))))
    assert not pair_equiv(T((1,), ((1,),)), T((1,), ((2,),)))


def test_sum_and_product_examples():
    assert oplus(T((1,), ((1,),)), T((1,), ((2,),))) == T((1, 1), ((1,), (2,)))
    assert decode_pair(oplus(encode_poly(P("x1")), encode_poly(P("-x1"))), 2).is_zero()
    assert odot(encode_poly(P("x1")), encode_poly(P("x2"))) == T((1,), ((1, 2),))
    assert len(odot(encode_poly(P("x1 + 1")), encode_poly(P("x1")))) == 2
    assert decode_pair(odot(encode_poly(P("x1 - x2")), zero_pair(Q)), 2).is_zero()


def test_malformed_pairs():
    with pytest.raises(MalformedPair):
        TuplePair((Q(1),), ((1,), (2,)))
    with pytest.raises(MalformedPair):
        TuplePair((), ())
    with pytest.raises(MalformedPair):
        TuplePair((Q(1), F3(1)), ((1,), (2,)))


def test_kt_examples():
    t = lambda s: NcPoly.parse(s, Q, 1)
    assert kt_encode_seq([Q(5)]) == (t("5"), t("1"))
    assert kt_encode_seq([Q(1), Q(0), Q(2)]) == (t("1 + 2*t^2"), t("t^2"))
    assert kt_decode_seq(t("1 + 2*t^2"), t("t^2")) == (1, 0, 2)
    with pytest.raises(MalformedPair):
        kt_decode_seq(t("t^3"), t("t^2"))
    with pytest.raises(MalformedPair):
        kt_decode_seq(t("t"), t("t + 1"))


def test_scalar_sequences():
    s = (Q(1), Q(2))
    assert sk_length(s) == 2
    assert sk_member(Q(2), s) and not sk_member(Q(3), s)
    assert sk_concat(s, (Q(7),)) == (Q(1), Q(2), Q(7))


pairs = st.lists(st.tuples(st.integers(-3, 3), words(2, 3)), min_size=1, max_size=5).map(
    lambda xs: T([c for c, _ in xs], [m for _, m in xs]))


@given(polys(Q))
def test_encode_decode_roundtrip(f):
    q = encode_poly(f)
    assert q.is_reduced()
    assert decode_pair(q, 2) == f


@given(pairs)
def test_red_preserves_value_and_is_idempotent(q):
    r = red(q)
    assert decode_pair(r, 2) == decode_pair(q, 2)
    assert red(r) == r and r.is_reduced()
    assert pair_equiv(q, r)


@given(pairs, pairs)
def test_operations_are_homomorphic(q1, q2):
    f, g = decode_pair(q1, 2), decode_pair(q2, 2)
    assert decode_pair(oplus(q1, q2), 2) == f + g
    prod = odot(q1, q2)
    assert decode_pair(prod, 2) == f * g
    assert len(prod) == len(q1) * len(q2)
    for r in range(1, len(prod) + 1):
        x, y = odot_cell(q1, q2, r)
        assert prod.mons[r - 1] == q1.mons[x - 1] + q2.mons[y - 1]


@given(pairs, pairs)
def test_equivalence_is_equality_of_values(q1, q2):
    assert pair_equiv(q1, q2) == (decode_pair(q1, 2) == decode_pair(q2, 2))


@given(st.lists(raw_scalars(Q), min_size=1, max_size=5), st.lists(raw_scalars(Q), min_size=1, max_size=5))
def test_kt_sequence_operations(a, b):
    a, b = [Q(x) for x in a], [Q(x) for x in b]
    pa, pb = kt_encode_seq(a), kt_encode_seq(b)
    assert kt_decode_seq(*pa) == tuple(a)
    assert kt_decode_seq(*kt_concat(pa, pb)) == tuple(a + b)
    assert kt_length(pa).degree == len(a)
    assert [kt_component(pa, i) for i in range(len(a))] == a


def test_json_roundtrip():
    q = encode_poly(P("1/2*x1*x2 - 3"))
    assert TuplePair.from_json(q.to_json(), Q) == q
