"""The acceptance battery: twelve end-to-end checks against independent
oracles.  Shared by `freealg selftest` and the test suite.

Each check is deterministic given its seed.  `quick` shrinks the sample
sizes (and skips nothing) so the battery doubles as a smoke test.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .arithmetization import decode_nested, decode_tuple, nested_tuple_code, rect_index, rect_unindex, tuple_code
from .basis import Verdict, is_basis, random_automorphism_image, recheck_verdict
from .bigpowers import choose_marker, decode_seq, encode_seq
from .centralizers import centralizer_window, map_centralizer
from .errors import ConstantTermPresent, DecodeError, NotInPower
from .folog import PolyRing, catalog
from .interp import compose, induced_structure, is_isomorphic, load_scheme, random_sentence, small_sentences, sweep
from .folog.semantics import ring_mod
from .linalg import dense_rank
from .ncpoly import NcPoly, aug_power_decompose, product, random_poly, random_scalar, uv_from_coeffs, words_upto
from .scalars import FieldElem, FieldSpec
from .superstructure import TuplePair, decode_pair, encode_poly, odot, oplus, pair_equiv
from .tribool import TRUE, UNKNOWN
from .words import is_primitive, is_unbordered

Q = FieldSpec.Q()
F5 = FieldSpec.Fp(5)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3), **self.data}


def _n(quick, full, small):
    return small if quick else full


# 1 -----------------------------------------------------------------------------

def encoding_roundtrip(seed=0, quick=False):
    rng = random.Random(seed)
    count = _n(quick, 1000, 100)
    bad = 0
    for i in range(count):
        spec = Q if i % 2 == 0 else F5
        n = rng.randint(2, 3)
        f = random_poly(rng, spec, n, 6, 8)
        if decode_pair(encode_poly(f), n) != f:
            bad += 1
    return bad == 0, f"{count - bad}/{count} roundtrips exact", {"budget": 5.0}


# 2 -----------------------------------------------------------------------------

def homomorphism(seed=0, quick=False):
    rng = random.Random(seed)
    count = _n(quick, 500, 50)
    bad = 0
    for i in range(count):
        spec = Q if i % 2 == 0 else F5
        n = rng.randint(2, 3)
        f, g = random_poly(rng, spec, n, 6, 8), random_poly(rng, spec, n, 6, 8)
        ef, eg = encode_poly(f), encode_poly(g)
        if decode_pair(oplus(ef, eg), n) != f + g or decode_pair(odot(ef, eg), n) != f * g:
            bad += 1
    return bad == 0, f"{count - bad}/{count} pairs respect sum and product", {"budget": 10.0}


# 3 -----------------------------------------------------------------------------

def dereduce(rng, q: TuplePair) -> TuplePair:
    """A pair denoting the same polynomial: split coefficients, insert zero
    entries and cancelling entries, then shuffle."""
    spec = q.spec
    entries = list(zip((c.value for c in q.coeffs), q.mons))
    out = []
    for c, m in entries:
        if rng.random() < 0.5:
            c1 = random_scalar(rng, spec)
            out += [(c1, m), (spec.sub(c, c1), m)]
        else:
            out.append((c, m))
    for _ in range(rng.randint(0, 3)):
        m = rng.choice([m for _, m in entries] + [(1,), (2, 1), ()])
        if rng.random() < 0.5:
            out.append((spec.zero, m))
        else:
            c = random_scalar(rng, spec, nonzero=True)
            out += [(c, m), (spec.neg(c), m)]
    rng.shuffle(out)
    return TuplePair(tuple(FieldElem(spec, c) for c, _ in out), tuple(m for _, m in out))


def near_miss(rng, f: NcPoly) -> NcPoly:
    """f altered in one place: a reversed word, a shifted coefficient, or an
    extra term."""
    spec, n = f.spec, f.n
    words = [w for w in f.terms if len(w) >= 2 and w != w[::-1]]
    pick = rng.random()
    if words and pick < 0.4:
        w = rng.choice(words)
        terms = dict(f.terms)
        c = terms.pop(w)
        terms[w[::-1]] = spec.add(terms.get(w[::-1], spec.zero), c)
        return NcPoly(spec, n, terms)
    if f.terms and pick < 0.7:
        w = rng.choice(sorted(f.terms))
        return f + NcPoly.monomial(spec, n, w, random_scalar(rng, spec, nonzero=True))
    return f + NcPoly.monomial(spec, n, tuple(rng.randint(1, n) for _ in range(rng.randint(0, 4))),
                               random_scalar(rng, spec, nonzero=True))


def equivalence_oracle(seed=0, quick=False):
    rng = random.Random(seed)
    count = _n(quick, 500, 50)
    bad = same = 0
    for i in range(count):
        spec = Q if i % 2 == 0 else F5
        n = rng.randint(2, 3)
        f = random_poly(rng, spec, n, 4, 6)
        g = f if rng.random() < 0.5 else near_miss(rng, f)
        q1, q2 = dereduce(rng, encode_poly(f)), dereduce(rng, encode_poly(g))
        truth = decode_pair(q1, n) == decode_pair(q2, n)
        same += truth
        if pair_equiv(q1, q2) != truth:
            bad += 1
    return bad == 0, f"{count - bad}/{count} verdicts match ({same} equal pairs)", {}


# 4 -----------------------------------------------------------------------------

def _encode_with(fs, exps, word):
    spec, n = fs[0].spec, fs[0].n
    out = fs[0]
    for k, f in zip(exps, fs[1:]):
        out = out * NcPoly(spec, n, {word * k: spec.one}, _raw=True) * f
    return out


def bigpowers_roundtrip(seed=0, quick=False):
    rng = random.Random(seed)
    count = _n(quick, 300, 30)
    e = 3
    bad, tampered, missed = 0, 0, 0
    for i in range(count):
        spec = Q if i % 2 == 0 else F5
        s = rng.randint(0, 4)
        fs = [random_poly(rng, spec, 2, 3, 4, nonzero=True) for _ in range(s + 2)]
        a = choose_marker(fs)
        enc = encode_seq(fs, e, a)
        lead = spec.one
        for f in fs[:-1]:
            lead = spec.mul(lead, f.leading()[1].value)
        expected = [f.monic() for f in fs[:-1]] + [fs[-1].scale(lead)]
        if decode_seq(enc, a, e) != expected:
            bad += 1
        exps = [e + j for j in range(s + 1)]
        for j in range(len(exps)):
            for delta in (1, -1):
                alt = list(exps)
                alt[j] += delta
                tampered += 1
                try:
                    decode_seq(_encode_with(fs, alt, a.word), a, e)
                    missed += 1
                except DecodeError:
                    pass
    ok = bad == 0 and missed == 0
    return ok, f"{count - bad}/{count} roundtrips; {tampered - missed}/{tampered} tamperings rejected", \
        {"budget": 30.0}


# 5 -----------------------------------------------------------------------------

def _bordered_brute(w):
    return any(w[:k] == w[-k:] for k in range(1, len(w)))


def _primitive_brute(w):
    n = len(w)
    return not any(n % k == 0 and w == w[:k] * (n // k) for k in range(1, n))


def _pmp_split(w):
    n = len(w)
    return any(w[:k] == w[n - k:] for k in range(1, n) if n - 2 * k >= 1)


def word_combinatorics(seed=0, quick=False):
    words = [w for L in range(1, 11) for w in itertools.product((1, 2), repeat=L)]
    bad = 0
    for w in words:
        lhs = is_unbordered(w)
        rhs = _primitive_brute(w) and not _pmp_split(w)
        if lhs != rhs or lhs == _bordered_brute(w) or is_primitive(w) != _primitive_brute(w):
            bad += 1
    return bad == 0, f"{len(words) - bad}/{len(words)} words agree", {}


# 6 -----------------------------------------------------------------------------

BATTERY = ("x1", "x1^2", "x1^3", "x1*x2", "x1*x2*x1*x2")
BATTERY_ROOTS = ("x1", "x1", "x1", "x1*x2", "x1*x2")


def dense_commutant_dimension(P: NcPoly, d: int) -> int:
    """Nullity of Z -> PZ - ZP on polynomials of degree <= d, by a dense
    matrix and textbook elimination."""
    spec, n = P.spec, P.n
    cols = list(words_upto(n, d))
    rows_index = {w: i for i, w in enumerate(words_upto(n, d + P.degree))}
    M = [[spec.zero] * len(cols) for _ in rows_index]
    for j, w in enumerate(cols):
        Z = NcPoly.monomial(spec, n, w)
        for u, c in (P * Z - Z * P).terms.items():
            M[rows_index[u]][j] = c
    return len(cols) - dense_rank(spec, M)


def centralizer_window_check(seed=0, quick=False):
    d = 6
    problems = []
    for text, root in zip(BATTERY, BATTERY_ROOTS):
        P = NcPoly.parse(text, Q, 2)
        W = centralizer_window(P, d)
        g = NcPoly.parse(root, Q, 2)
        if W.generator != g or W.dimension != d // g.degree + 1:
            problems.append(f"{text}: got g={W.generator}, dim {W.dimension}")
    F2 = FieldSpec.Fp(2)
    checks = 0
    for text in ("x1", "x1^2", "x1*x2"):
        P = NcPoly.parse(text, F2, 2)
        for dd in range(P.degree, 5):
            checks += 1
            if centralizer_window(P, dd).dimension != dense_commutant_dimension(P, dd):
                problems.append(f"{text} over fp:2 at d={dd}: dimension mismatch")
    ok = not problems
    return ok, ("battery and %d dense cross-checks agree" % checks) if ok else "; ".join(problems), {}


# 7 -----------------------------------------------------------------------------

def _trial_irreducible(c, p):
    """c: coefficient list (low to high) over F_p, trimmed; direct trial
    division by every monic polynomial of degree 1..deg/2."""
    d = len(c) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            r = list(c)
            for i in range(len(r) - 1, k - 1, -1):
                q = r[i] % p
                if q:
                    for j in range(k + 1):
                        r[i - k + j] = (r[i - k + j] - q * g[j]) % p
            if not any(x % p for x in r[:k]):
                return False
    return True


def formula_oracle(seed=0, quick=False):
    problems, total = [], 0
    for p in (2, 3):
        spec = FieldSpec.Fp(p)
        R = PolyRing(spec, 1, slice_degree=4)
        t, t2 = R.literal("t"), R.literal("t^2")
        irr, nat, fpm = catalog("Irr"), catalog("Nat"), catalog("FPmember")
        defined = set()
        for coeffs in itertools.product(range(p), repeat=5):
            c = list(coeffs)
            while c and c[-1] == 0:
                c.pop()
            f = uv_from_coeffs(spec, c)
            total += 1
            v = irr.evaluate(R, x=f)
            if v is UNKNOWN or (v is TRUE) != _trial_irreducible(c, p):
                problems.append(f"Irr({f}) over fp:{p}")
            v = nat.evaluate(R, x=f, a=t)
            if v is UNKNOWN:
                problems.append(f"Nat({f}) unknown")
            elif v is TRUE:
                defined.add(tuple(c))
            v = fpm.evaluate(R, Q=f, P=t2)
            member = all(x == 0 for x in c[1::2])
            if v is UNKNOWN or (v is TRUE) != member:
                problems.append(f"FPmember({f}) over fp:{p}")
        powers = {tuple([0] * k + [1]) for k in range(5)}
        if defined != powers:
            problems.append(f"Nat over fp:{p} defines {sorted(defined)}")
    ok = not problems
    return ok, f"{total} polynomials checked" if ok else "; ".join(problems[:5]), {}


# 8 -----------------------------------------------------------------------------

def translation_agreement(seed=0, quick=False):
    rng = random.Random(seed)
    s1, s2 = load_scheme("z2_in_z4"), load_scheme("z4_in_z8")
    cases = [(s1, ring_mod(4)), (compose(s1, s2), ring_mod(8))]
    count = _n(quick, 50, 10)
    sentences = [random_sentence(rng, depth=3) for _ in range(count)]
    small = list(small_sentences(max_vars=3 if not quick else 2))
    z2 = _ring_core(2)
    problems, checked = [], 0
    for scheme, B in cases:
        model = induced_structure(scheme, B)
        if model.size() != 2 or is_isomorphic(model, z2) is None:
            problems.append(f"{scheme.name}: quotient is not Z/2")
        bad = sweep(scheme, B, sentences, model=model) + sweep(scheme, B, small, model=model)
        checked += len(sentences) + len(small)
        problems += [f"{scheme.name}: {r.sentence}" for r in bad]
    ok = not problems
    return ok, f"{checked} sentence checks agree" if ok else "; ".join(problems[:3]), {}


def _ring_core(n):
    """Z/n with only + and * (the fixtures' source signature)."""
    from .folog.semantics import FinStructure
    R = ring_mod(n)
    return FinStructure(R.carriers, ops={k: R.ops[k] for k in ("+", "*")}, consts=R.consts, name=R.name)


# 9 -----------------------------------------------------------------------------

def centralizer_isomorphism(seed=0, quick=False):
    rng = random.Random(seed)
    d = 6
    polys = [NcPoly.parse(t, Q, 2) for t in BATTERY]
    roots = {P: centralizer_window(P, d).generator for P in polys}
    pairs = list(itertools.product(polys, repeat=2))
    count = _n(quick, 200, 25)
    problems = []
    one = NcPoly.one(Q, 2)
    for P, Qp in pairs:
        if map_centralizer(P, Qp, one) != one:
            problems.append(f"map {P}->{Qp} is not unital")
    for i in range(count):
        P, Qp = pairs[i % len(pairs)]
        g = roots[P]
        k = d // g.degree
        f = _random_in_window(rng, g, k)
        h = _random_in_window(rng, g, k)
        mf, mh = map_centralizer(P, Qp, f), map_centralizer(P, Qp, h)
        if mf * Qp != Qp * mf:
            problems.append(f"image of {f} does not commute with {Qp}")
        if map_centralizer(Qp, P, mf) != f:
            problems.append(f"roundtrip fails on {f} for {P}, {Qp}")
        if map_centralizer(P, Qp, f + h) != mf + mh or map_centralizer(P, Qp, f * h) != mf * mh:
            problems.append(f"not a ring map on {f}, {h} for {P}, {Qp}")
    ok = not problems
    return ok, f"{len(pairs)} pairs, {count} elements" if ok else "; ".join(problems[:3]), {}


def _random_in_window(rng, g, k):
    out = NcPoly.zero(g.spec, g.n)
    power = NcPoly.one(g.spec, g.n)
    for _ in range(k + 1):
        out = out + power.scale(random_scalar(rng, g.spec))
        power = power * g
    return out


# 10 ----------------------------------------------------------------------------

def basis_verdicts(seed=0, quick=False):
    rng = random.Random(seed)
    problems = []
    fixed = [("x1, x2", Verdict.YES), ("x1+x2^2, x2", Verdict.YES),
             ("x1*x2, x2*x1", Verdict.NO), ("x1, x1", Verdict.NO)]
    for text, want in fixed:
        V = [NcPoly.parse(s, Q, 2) for s in text.split(",")]
        v = is_basis(V, cap=8)
        if v.verdict is not want or not recheck_verdict(V, v):
            problems.append(f"({text}): {v.verdict.value}")
        if want is Verdict.NO and not v.certificate:
            problems.append(f"({text}): no certificate")
    count = _n(quick, 100, 15)
    for _ in range(count):
        V = random_automorphism_image(rng, F5)
        v = is_basis(V, cap=8)
        if v.verdict is not Verdict.YES or not recheck_verdict(V, v):
            problems.append(f"({', '.join(map(str, V))}): {v.verdict.value}")
    ok = not problems
    return ok, f"4 fixed cases and {count} automorphism images" if ok else "; ".join(problems[:3]), {}


# 11 ----------------------------------------------------------------------------

def width_decomposition(seed=0, quick=False):
    rng = random.Random(seed)
    count = _n(quick, 200, 30)
    problems = []
    for i in range(count):
        spec = Q if i % 2 else F5
        n = rng.randint(1, 4)
        terms = {}
        for _ in range(rng.randint(1, 6)):
            w = tuple(rng.randint(1, 2) for _ in range(rng.randint(n, n + 3)))
            terms[w] = random_scalar(rng, spec, nonzero=True)
        f = NcPoly(spec, 2, terms)
        parts = aug_power_decompose(f, n)
        total = NcPoly.zero(spec, 2)
        for fac in parts:
            if len(fac) != n or any(g.is_zero() or g.constant_term != 0 for g in fac):
                problems.append(f"bad factors for {f}")
            total = total + product(fac, spec, 2)
        if len(parts) > 2 ** n or total != f:
            problems.append(f"decomposition of {f} at n={n}")
    for i in range(count):
        spec = Q if i % 2 else F5
        n = rng.randint(1, 4)
        f = random_poly(rng, spec, 2, 6, 5)
        member = f.is_zero() or (f.constant_term == 0 and f.min_degree >= n)
        try:
            aug_power_decompose(f, n)
            verdict = True
        except (NotInPower, ConstantTermPresent):
            verdict = False
        if verdict != member:
            problems.append(f"membership of {f} at n={n}")
    ok = not problems
    return ok, f"{count} decompositions and {count} membership verdicts" if ok else "; ".join(problems[:3]), {}


# 12 ----------------------------------------------------------------------------

def arithmetization_codes(seed=0, quick=False):
    rng = random.Random(seed)
    problems = []
    for p in range(1, 7):
        for q in range(1, 7):
            cells = [rect_index(p, q, x, y) for x in range(1, p + 1) for y in range(1, q + 1)]
            if sorted(cells) != list(range(1, p * q + 1)):
                problems.append(f"rect_index {p}x{q} not onto")
            if any(rect_unindex(p, q, rect_index(p, q, x, y)) != (x, y)
                   for x in range(1, p + 1) for y in range(1, q + 1)):
                problems.append(f"rect_unindex {p}x{q}")
    count = _n(quick, 1000, 100)
    for _ in range(count):
        s = tuple(rng.randint(0, 50) for _ in range(rng.randint(0, 6)))
        if decode_tuple(tuple_code(s).code) != s:
            problems.append(f"tuple {s}")
        nested = tuple(rng.randint(0, 20) if rng.random() < 0.5 else
                       tuple(rng.randint(0, 9) for _ in range(rng.randint(0, 3)))
                       for _ in range(rng.randint(0, 4)))
        if decode_nested(nested_tuple_code(nested)) != nested:
            problems.append(f"nested {nested}")
    ok = not problems
    return ok, f"36 grids and {count} tuple pairs" if ok else "; ".join(problems[:3]), {}


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "encoding roundtrip", encoding_roundtrip),
    (2, "encoding homomorphism", homomorphism),
    (3, "pair equivalence oracle", equivalence_oracle),
    (4, "big-powers roundtrip and tampering", bigpowers_roundtrip),
    (5, "unbordered word characterization", word_combinatorics),
    (6, "centralizer windows", centralizer_window_check),
    (7, "catalog formulas vs oracles", formula_oracle),
    (8, "interpretation translation", translation_agreement),
    (9, "centralizer isomorphisms", centralizer_isomorphism),
    (10, "basis verdicts", basis_verdicts),
    (11, "ideal power width", width_decomposition),
    (12, "tuple codes", arithmetization_codes),
]


def run_criterion(number: int, seed: int = 0, quick: bool = False) -> CriterionResult:
    num, name, fn = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    ok, detail, data = fn(seed=seed, quick=quick)
    dt = time.perf_counter() - t0
    budget = data.pop("budget", None)
    if budget is not None and dt > budget:
        ok = False
        detail += f"; over the {budget:.0f}s budget"
    return CriterionResult(num, name, ok, detail, dt, data)


def run_all(seed: int = 0, quick: bool = False, only=None) -> list[CriterionResult]:
    return [run_criterion(num, seed, quick) for num, _, _ in CRITERIA if only is None or num in only]
