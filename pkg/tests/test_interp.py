import copy
import random

import pytest

from freealg.errors import BadParams, NotEquivalence, NotWellDefined, SignatureMismatch
from freealg.folog import (Exists, Forall, Implies, brute_force, evaluate, format_formula, free_vars, is_sentence,
                           parse_formula, ring_mod)
from freealg.folog.semantics import FinStructure
from freealg.interp import (InterpScheme, compose, induced_structure, is_isomorphic, load_scheme,
                            random_sentence, shipped_schemes, small_sentences, sweep, translate,
                            tuple_vars, verify_translation)


def core(n):
    """Z/n restricted to + and * with constants 0 and 1."""
    R = ring_mod(n)
    return FinStructure(R.carriers, ops={k: R.ops[k] for k in ("+", "*")}, consts=R.consts, name=R.name)


def variant(name, **changes):
    doc = copy.deepcopy(load_scheme(name).to_json())
    for key, value in changes.items():
        section, _, item = key.partition("__")
        if item:
            doc[section][item]["formula"] = value
        else:
            doc[section]["formula"] = value
    return InterpScheme.from_json(doc)


F = parse_formula
COMM = "(forall (x) (forall (y) (= (+ x y) (+ y x))))"


def test_shipped_fixtures_load():
    assert {"id", "z2_in_z4", "z4_in_z8", "z2xz2_in_z2"} <= set(shipped_schemes())
    for name in shipped_schemes():
        s = load_scheme(name)
        assert InterpScheme.from_json(s.to_json()) == s


def test_tuple_vars():
    assert tuple_vars("x", 1) == ["x"]
    assert tuple_vars("x", 2) == ["x_1", "x_2"]


def test_identity_translation_keeps_truth():
    s = load_scheme("id")
    B = core(3)
    for text in [COMM, "(exists (x) (and (= (* x x) x) (not (= x 0))))", "(forall (x) (= (* x 0) 1))"]:
        phi = F(text)
        psi = translate(s, phi)
        assert is_sentence(psi)
        assert brute_force(B, psi) == brute_force(B, phi)


def test_structural_translation_of_reflexivity():
    s = variant("z2_in_z4", domain="(not (= x 1))")
    psi = translate(s, F("(forall (x) (= x x))"))
    assert isinstance(psi, Forall) and isinstance(psi.body, Implies)
    assert psi.body.left == s.domain.instantiate([psi.var])
    assert psi.body.right == s.equiv.instantiate([psi.var, psi.var])


def test_nonzero_self_inverse_exists_on_both_sides():
    # Z/2 has x = 1 with x + x = 0, so the sentence holds in the quotient and its translation holds in Z/4
    s, B = load_scheme("z2_in_z4"), core(4)
    phi = F("(exists (x) (and (= (+ x x) 0) (not (= x 0))))")
    assert brute_force(core(2), phi) is True
    assert brute_force(B, translate(s, phi)) is True
    r = verify_translation(s, B, phi)
    assert r.agree and r.source_value == "True"


def test_quotient_of_z4_is_z2():
    model = induced_structure(load_scheme("z2_in_z4"), core(4))
    assert model.size() == 2
    assert sorted(map(sorted, model.meta["classes"])) == [[(0,), (2,)], [(1,), (3,)]]
    assert is_isomorphic(model, core(2)) is not None
    assert is_isomorphic(model, core(3)) is None


def test_degenerate_equivalence_gives_one_point():
    s = variant("z2_in_z4", equiv="true")
    assert induced_structure(s, core(4)).size() == 1


def test_non_transitive_relation_is_rejected():
    s = variant("z2_in_z4", equiv="(or (= x y) (or (= x (+ y 1)) (= y (+ x 1))))")
    with pytest.raises(NotEquivalence):
        induced_structure(s, core(4))


def test_incompatible_operation_is_rejected():
    # 0 ~ 1 but 0 + 1 = 1 and 1 + 1 = 2 are not related
    s = variant("z2_in_z4", equiv="(or (= x y) (or (and (= x 0) (= y 1)) (and (= x 1) (= y 0))))")
    with pytest.raises(NotWellDefined):
        induced_structure(s, core(4))


def test_dimension_two_quotient():
    model = induced_structure(load_scheme("z2xz2_in_z2"), core(2))
    assert model.size() == 4
    assert brute_force(model, F("(exists (x) (and (not (= x 0)) (and (not (= x 1)) (= (* x x) x))))"))


def test_idempotent_sentence_agrees_everywhere():
    phi = F("(exists (x) (= (* x x) x))")
    for name, n in [("id", 5), ("z2_in_z4", 4), ("z4_in_z8", 8), ("z2xz2_in_z2", 2)]:
        assert verify_translation(load_scheme(name), core(n), phi).agree


def test_random_sentences_agree_on_z4():
    s, B = load_scheme("z2_in_z4"), core(4)
    rng = random.Random(0)
    sentences = [random_sentence(rng, depth=3) for _ in range(50)]
    assert all(is_sentence(phi) for phi in sentences)
    assert sweep(s, B, sentences) == []


def test_small_sentence_sweep_agrees():
    sentences = list(small_sentences(max_vars=2))
    assert sweep(load_scheme("z2_in_z4"), core(4), sentences) == []


def test_corrupted_addition_is_caught():
    good = load_scheme("z2_in_z4")
    B = core(4)
    model = induced_structure(good, B)
    doc = good.to_json()
    doc["ops"]["+"]["formula"] = "(= r (+ a (+ b a)))"
    bad = InterpScheme.from_json(doc)
    r = verify_translation(bad, B, F(COMM), model=model)
    assert not r.agree
    cx = r.counterexample
    assert cx is not None and cx["source"] != cx["target"]
    assert {v["class"] for v in cx["env"].values()} == {0, 1}


def test_composition():
    s1, s2 = load_scheme("z2_in_z4"), load_scheme("z4_in_z8")
    c = compose(s1, s2)
    assert c.dim == 1
    model = induced_structure(c, core(8))
    assert model.size() == 2 and is_isomorphic(model, core(2)) is not None
    assert compose(s1, load_scheme("z2xz2_in_z2")).dim == 2


def test_compose_with_identity_behaves_like_the_scheme():
    s = load_scheme("z2_in_z4")
    c = compose(load_scheme("id"), s)
    B = core(4)
    assert is_isomorphic(induced_structure(c, B), induced_structure(s, B)) is not None
    rng = random.Random(3)
    for _ in range(15):
        phi = random_sentence(rng, depth=2)
        assert evaluate(B, translate(c, phi)) is evaluate(B, translate(s, phi))


def test_translation_preserves_sentencehood():
    s = load_scheme("z2xz2_in_z2")
    rng = random.Random(7)
    for _ in range(30):
        phi = random_sentence(rng, depth=3)
        assert is_sentence(translate(s, phi))
    psi = translate(s, F("(= (+ x 1) y)"))
    assert free_vars(psi) == {"x_1", "x_2", "y_1", "y_2"}


def test_signature_errors():
    s = load_scheme("id")
    with pytest.raises(SignatureMismatch):
        translate(s, F("(forall (x) (= (- x x) 0))"))
    doc = s.to_json()
    doc["equiv"]["vars"] = ["x"]
    with pytest.raises(SignatureMismatch):
        InterpScheme.from_json(doc)
    with pytest.raises(BadParams):
        verify_translation(s, core(2), F("(= x 0)"))


def test_quantifier_nodes_use_domain_guard():
    psi = translate(variant("id", domain="(not (= x 0))"), F("(exists (x) (= x 1))"))
    assert isinstance(psi, Exists)
    assert "(not" in format_formula(psi)
