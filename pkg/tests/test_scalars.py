from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from freealg.errors import DivisionByZero, NotPrime, SpecMismatch
from freealg.scalars import FieldSpec, field_inv, is_prime

from conftest import F5, Q, SPECS, raw_scalars


def test_inverse_mod_5():
    assert field_inv(F5(2)) == 3
    assert field_inv(F5(1)) == 1
    with pytest.raises(DivisionByZero):
        field_inv(F5(0))
    with pytest.raises(DivisionByZero):
        field_inv(Q(0))


def test_arithmetic_examples():
    assert Q(Fraction(2, 3)) + Q(Fraction(1, 3)) == 1
    assert F5(3) * F5(4) == 2
    with pytest.raises(SpecMismatch):
        F5(1) + Q(1)


def test_field_spec_parsing():
    assert FieldSpec.from_string("q") == Q
    assert FieldSpec.from_string("fp:5") == F5
    with pytest.raises(NotPrime):
        FieldSpec.Fp(4)


def test_is_prime_matches_trial_division():
    def slow(p):
        return p >= 2 and all(p % d for d in range(2, p))
    assert [p for p in range(60) if is_prime(p)] == [p for p in range(60) if slow(p)]


def test_finite_field_elements():
    assert [e.value for e in FieldSpec.Fp(3).elements()] == [0, 1, 2]
    assert F5.characteristic == 5 and Q.characteristic == 0


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_field_axioms(spec):
    @given(raw_scalars(spec), raw_scalars(spec), raw_scalars(spec))
    def check(a, b, c):
        a, b, c = spec(a), spec(b), spec(c)
        assert a + b == b + a and a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0 and a + (-a) == 0
        if not a.is_zero():
            assert a * field_inv(a) == 1
            assert (b / a) * a == b
    check()


@given(st.integers(-50, 50))
def test_canonical_residues(k):
    assert F5(k).value == k % 5
    assert F5(k) == F5(k + 5)


def test_format_and_parse_roundtrip(spec):
    for x in ([0, 1, 2, -1] if spec.is_finite else [0, 1, Fraction(-3, 4), Fraction(5, 2)]):
        v = spec.canon(x)
        assert spec.parse(spec.fmt(v)) == v
