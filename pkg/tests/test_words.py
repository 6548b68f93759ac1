import pytest
from hypothesis import given

from freealg.errors import BadIndex, BadMarker
from freealg.words import (Word, contains, format_word, is_primitive, is_unbordered, maximal_runs,
                           occurrences, parse_word)

from conftest import words

A2 = (1, 2, 1, 2, 2)


def slow_primitive(w):
    n = len(w)
    return n > 0 and not any(n % k == 0 and w[:k] * (n // k) == w for k in range(1, n))


def slow_unbordered(w):
    return len(w) > 0 and not any(w[:k] == w[-k:] for k in range(1, len(w)))


def slow_occurrences(p, t):
    return [i for i in range(len(t) - len(p) + 1) if t[i:i + len(p)] == p]


@pytest.mark.parametrize("w,expected", [((1, 1), False), ((1, 2), True), ((1, 2) * 3, False)])
def test_primitive_examples(w, expected):
    assert is_primitive(w) is expected


@pytest.mark.parametrize("w,expected", [((1, 2, 1), False), ((1, 2), True), (A2, True)])
def test_unbordered_examples(w, expected):
    assert is_unbordered(w) is expected


def test_occurrence_examples():
    assert occurrences((1, 2), A2) == [0, 2]
    assert occurrences((1,), (2, 2)) == []
    assert occurrences(A2, A2) == [0]


def test_maximal_runs_examples():
    r = maximal_runs((1, 2), (1, 2) * 3 + (1,))
    assert r.segments == ((), (1,)) and r.exponents == (3,)
    r = maximal_runs((1, 2), (2,))
    assert r.segments == ((2,),) and r.exponents == ()
    with pytest.raises(BadMarker):
        maximal_runs((1, 2, 1), (1, 2))


@given(words(3, 7))
def test_primitive_and_unbordered_agree_with_brute_force(w):
    if w:
        assert is_primitive(w) == slow_primitive(w)
        assert is_unbordered(w) == slow_unbordered(w)


@given(words(2, 3), words(2, 9))
def test_occurrences_agree_with_scan(p, t):
    if p:
        assert occurrences(p, t) == slow_occurrences(p, t)
        assert contains(p, t) == bool(slow_occurrences(p, t))


@given(words(2, 12))
def test_runs_rebuild_text(t):
    a = (1, 2)
    r = maximal_runs(a, t)
    assert r.rebuild(a) == t
    assert all(j >= 1 for j in r.exponents)
    # maximality: no segment between runs starts or ends with a copy of a
    for seg in r.segments[1:-1]:
        assert seg[:2] != a and seg[-2:] != a
    for seg in r.segments:
        assert not contains(a, seg)


@given(words(3, 6))
def test_word_text_roundtrip(w):
    assert parse_word(format_word(w)) == w


def test_word_rejects_out_of_range_letters():
    with pytest.raises(BadIndex):
        Word((1, 3), 2)
    assert str(Word((1, 2), 2) * Word((2,), 2)) == format_word((1, 2, 2))
