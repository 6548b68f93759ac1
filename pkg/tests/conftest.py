from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from freealg.ncpoly import NcPoly
from freealg.scalars import FieldSpec

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Q = FieldSpec.Q()
F2 = FieldSpec.Fp(2)
F3 = FieldSpec.Fp(3)
F5 = FieldSpec.Fp(5)
SPECS = [Q, F2, F3, F5]


def P(text, n=2, spec=Q):
    return NcPoly.parse(text, spec, n)


def raw_scalars(spec):
    if spec.is_finite:
        return st.integers(0, spec.p - 1)
    return st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def words(n=2, max_len=4):
    return st.lists(st.integers(1, n), max_size=max_len).map(tuple)


def polys(spec=Q, n=2, max_len=3, max_terms=4):
    terms = st.dictionaries(words(n, max_len), raw_scalars(spec), max_size=max_terms)
    return terms.map(lambda t: NcPoly(spec, n, t))


@pytest.fixture(params=SPECS, ids=str)
def spec(request):
    return request.param
