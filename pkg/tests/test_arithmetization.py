import pytest
from hypothesis import given, strategies as st

from freealg.arithmetization import (NTupleCode, cantor_pair, cantor_unpair, component_code, concat_code,
                                     decode_nested, decode_tuple, length_code, nested_component,
                                     nested_concat, nested_length, nested_tuple_code, rect_index,
                                     rect_unindex, tuple_code)
from freealg.errors import IndexOutOfRange

naturals = st.integers(0, 40)
tuples = st.lists(naturals, max_size=5).map(tuple)
nested = st.lists(st.one_of(naturals, tuples), max_size=4).map(tuple)


def test_pairing_examples():
    assert cantor_pair(0, 0) == 0
    assert cantor_pair(1, 0) == 1 and cantor_pair(0, 1) == 2
    assert cantor_unpair(cantor_pair(7, 11)) == (7, 11)


def test_tuple_code_examples():
    assert length_code(tuple_code(())) == 0
    assert component_code(tuple_code((4, 9)), 2) == 9
    assert concat_code(tuple_code((1,)), tuple_code((2, 3))) == tuple_code((1, 2, 3))
    with pytest.raises(IndexOutOfRange):
        component_code(tuple_code((4, 9)), 3)


def test_nested_examples():
    c = nested_tuple_code(((1, 2), 3))
    assert decode_nested(c) == ((1, 2), 3)
    assert nested_length(nested_tuple_code(((1,), (2,), (3,)))) == 3
    assert nested_component(nested_tuple_code(((1, 2), (3, 4))), 1) == tuple_code((1, 2))


def test_rect_examples():
    assert rect_index(2, 3, 1, 1) == 1
    assert rect_index(2, 3, 2, 3) == 6
    assert rect_index(2, 3, 1, 3) == 3
    with pytest.raises(IndexOutOfRange):
        rect_index(2, 3, 3, 1)


def test_pairing_matches_closed_form_and_is_bijective():
    seen = set()
    for x in range(30):
        for y in range(30):
            z = cantor_pair(x, y)
            assert z == (x + y) * (x + y + 1) // 2 + y
            seen.add(z)
    assert set(range(30 * 31 // 2)) <= seen


def test_tuple_code_is_a_bijection_on_initial_segment():
    decoded = [decode_tuple(c) for c in range(400)]
    assert len(set(decoded)) == 400
    assert all(tuple_code(s).code == c for c, s in enumerate(decoded))


@given(tuples, tuples)
def test_tuple_code_operations(s, t):
    c = tuple_code(s)
    assert decode_tuple(c) == s
    assert NTupleCode.from_code(c.code) == c
    assert length_code(c) == len(s)
    for i in range(1, len(s) + 1):
        assert component_code(c, i) == s[i - 1]
    assert decode_tuple(concat_code(c, tuple_code(t))) == s + t


@given(nested, nested)
def test_nested_code_operations(s, t):
    c = nested_tuple_code(s)
    assert decode_nested(c) == s
    assert nested_length(c) == len(s)
    for i, x in enumerate(s, 1):
        got = nested_component(c, i)
        assert (got == x) if isinstance(x, int) else (got.decoded == x)
    assert decode_nested(nested_concat(c, nested_tuple_code(t))) == s + t


@given(st.integers(1, 9), st.integers(1, 9), st.data())
def test_rect_roundtrip(p, q, data):
    r = data.draw(st.integers(1, p * q))
    x, y = rect_unindex(p, q, r)
    assert rect_index(p, q, x, y) == r
