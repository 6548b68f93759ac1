"""Three-valued truth and the sparse linear algebra behind the windows."""
import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from freealg.linalg import Echelon, dense_rank, kernel
from freealg.tribool import FALSE, TRUE, UNKNOWN, TriBool

from conftest import F5, Q

VALUES = [FALSE, UNKNOWN, TRUE]


def test_kleene_tables():
    assert (TRUE & UNKNOWN) is UNKNOWN and (FALSE & UNKNOWN) is FALSE
    assert (TRUE | UNKNOWN) is TRUE and (FALSE | UNKNOWN) is UNKNOWN
    assert ~UNKNOWN is UNKNOWN and ~TRUE is FALSE
    assert FALSE.implies(UNKNOWN) is TRUE and UNKNOWN.iff(UNKNOWN) is UNKNOWN
    with pytest.raises(TypeError):
        bool(UNKNOWN)


def test_kleene_agrees_with_two_valued_logic_on_definite_values():
    for a, b in itertools.product([False, True], repeat=2):
        A, B = TriBool.of(a), TriBool.of(b)
        assert (A & B) is TriBool.of(a and b)
        assert (A | B) is TriBool.of(a or b)
        assert A.implies(B) is TriBool.of((not a) or b)
        assert A.iff(B) is TriBool.of(a == b)


def test_kleene_de_morgan():
    for a, b in itertools.product(VALUES, repeat=2):
        assert ~(a & b) is (~a | ~b)


matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=5))


@given(matrices)
def test_echelon_rank_matches_sympy_over_q(rows):
    cols = [(j, {i: r[j] for i, r in enumerate(rows) if r[j]}) for j in range(len(rows[0]))]
    ech, rels = kernel(Q, cols)
    rank = sympy.Matrix(rows).rank()
    assert len(ech) == rank
    assert len(rels) == len(cols) - rank
    assert dense_rank(Q, rows) == rank
    for rel in rels:
        for i in range(len(rows)):
            assert sum(Q.mul(c, rows[i][j]) for j, c in rel.items()) == 0


@given(matrices, st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_echelon_solve_over_f5(rows, coeffs):
    ncols = len(rows[0])
    cols = [(j, {i: F5.canon(r[j]) for i, r in enumerate(rows) if F5.canon(r[j])}) for j in range(ncols)]
    ech = Echelon(F5)
    for label, col in cols:
        ech.add(col, label)
    target = {}
    for j in range(ncols):
        for i, x in cols[j][1].items():
            target[i] = F5.add(target.get(i, 0), F5.mul(F5.canon(coeffs[j]), x))
    target = {i: x for i, x in target.items() if x}
    sol = ech.solve(target)
    assert sol is not None
    got = {}
    for j, c in sol.items():
        for i, x in cols[j][1].items():
            got[i] = F5.add(got.get(i, 0), F5.mul(c, x))
    assert {i: x for i, x in got.items() if x} == target
    assert dense_rank(F5, [[F5.canon(x) for x in r] for r in rows]) == len(ech)
