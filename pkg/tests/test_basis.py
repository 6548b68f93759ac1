import random

import pytest
from hypothesis import given, strategies as st

from freealg.basis import (Status, Verdict, graded_unreachable, is_basis, random_automorphism_image,
                           rank_witness_check, recheck_graded, recheck_verdict, split_unit)
from freealg.errors import NoSplit, NotUnique, RankMismatch
from freealg.ncpoly import NcPoly, substitute

from conftest import F5, Q, P


def V(*texts, spec=Q):
    return [NcPoly.parse(t, spec, 2) for t in texts]


def is_inverse(Vt, G):
    gens = V("x1", "x2", spec=Vt[0].spec)
    return ([substitute(g, Vt) for g in G] == gens and [substitute(v, G) for v in Vt] == gens)


def test_split_examples():
    s = split_unit(P("x1 + 3"), V("x1", "x2"), 2)
    assert s.a_prime == P("x1") and s.alpha == 3
    s = split_unit(P("x2*x1 + x2"), V("x2"), 2)
    assert s.alpha == 0 and s.cofactors == (P("x1 + 1"),)
    # the ideal is v A (generators on the left), so x1*x2 + x2 has no split over (x2,)
    with pytest.raises(NoSplit):
        split_unit(P("x1*x2 + x2"), V("x2"), 2)
    with pytest.raises(NoSplit):
        split_unit(P("x1"), V("x1*x2", "x2*x1"), 2)
    with pytest.raises(NotUnique):
        split_unit(P("x1"), V("2", "x2"), 2)


@given(st.integers(-5, 5), st.sampled_from(["x1", "x2*x1", "x1^2 - x2"]), st.sampled_from(["1", "x2", "x1*x2"]))
def test_split_recombines(alpha, c1, c2):
    gens = V("x1 + x2^2", "x2")
    a = gens[0] * P(c1) + gens[1] * P(c2) + P(str(alpha))
    s = split_unit(a, gens, 3)
    assert s.alpha == alpha
    assert sum((v * c for v, c in zip(gens, s.cofactors)), P("0")) == s.a_prime
    assert s.a_prime + P(str(alpha)) == a


def test_rank_witness_examples():
    r = rank_witness_check(V("x1", "x2"), 3)
    assert all(c.status is Status.PASS for c in r.values())
    assert r["phi4"].detail == "dimension 3"
    r = rank_witness_check(V("x1*x2", "x2*x1"), 3)
    assert r["phi1"].status is Status.FAIL
    assert recheck_graded(r["phi1"].certificate, P("x1"), V("x1*x2", "x2*x1"))
    r = rank_witness_check(V("x1", "x1"), 3)
    assert r["phi4"].status is Status.FAIL and "2" in r["phi4"].detail


def test_graded_certificate_is_independent_of_the_split_solver():
    cert = graded_unreachable(P("x1"), V("x1*x2", "x2*x1"), with_alpha=True)
    assert cert is not None
    assert recheck_graded(cert, P("x1"), V("x1*x2", "x2*x1"))
    assert graded_unreachable(P("x1*x2*x1"), V("x1*x2", "x2*x1"), with_alpha=True) is None


@pytest.mark.parametrize("texts,inverse", [
    (("x1", "x2"), ("x1", "x2")),
    (("x1 + x2^2", "x2"), ("x1 - x2^2", "x2")),
    (("x2", "x1"), ("x2", "x1")),
    (("x1 + 1", "x2"), ("x1 - 1", "x2")),
])
def test_yes_examples(texts, inverse):
    Vt = V(*texts)
    v = is_basis(Vt)
    assert v.verdict is Verdict.YES
    assert v.inverse == tuple(V(*inverse))
    assert is_inverse(Vt, v.inverse)


@pytest.mark.parametrize("texts", [("x1*x2", "x2*x1"), ("x1", "x1"), ("x1^2", "x2")])
def test_no_examples(texts):
    Vt = V(*texts)
    v = is_basis(Vt)
    assert v.verdict is Verdict.NO
    assert v.certificate is not None
    assert recheck_verdict(Vt, v)


def test_wrong_length_tuple():
    with pytest.raises(RankMismatch):
        is_basis(V("x1"))
    with pytest.raises(RankMismatch):
        split_unit(P("x1"), [], 2)


@pytest.mark.parametrize("seed", range(100))
def test_elementary_images_are_bases(seed):
    Vt = random_automorphism_image(random.Random(seed), F5)
    cap = 2 * max(v.degree for v in Vt) ** 2
    v = is_basis(list(Vt), cap=max(cap, 2))
    assert v.verdict is Verdict.YES
    assert is_inverse(list(Vt), v.inverse)


@pytest.mark.parametrize("seed", range(20))
def test_verdict_invariant_under_permutation_and_scaling(seed):
    rng = random.Random(seed)
    Vt = list(random_automorphism_image(rng, F5))
    if seed % 2:
        Vt[0] = Vt[0] * Vt[1]      # usually not a basis
    base = is_basis(Vt, cap=4).verdict
    assert is_basis(Vt[::-1], cap=4).verdict is base
    assert is_basis([Vt[0].scale(2), Vt[1].scale(3)], cap=4).verdict is base
