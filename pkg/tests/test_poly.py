import random
from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cartankit.poly import Poly, PolyVF, vf_bracket

NV = 3
SYMS = sympy.symbols("a b c")
terms = st.dictionaries(
    st.tuples(*[st.integers(0, 3)] * NV), st.fractions(min_value=-4, max_value=4, max_denominator=3), max_size=5)
polys = terms.map(lambda t: Poly(NV, t))


def to_sympy(p):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.prod([s ** k for s, k in zip(SYMS, e)])
                for e, c in p.terms.items()), sympy.Integer(0))


@settings(max_examples=200, deadline=None)
@given(polys, polys)
def test_ring_ops_match_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p - q) - (to_sympy(p) - to_sympy(q))) == 0


@settings(max_examples=100, deadline=None)
@given(polys, st.integers(0, NV - 1))
def test_diff_matches_sympy(p, i):
    assert sympy.expand(to_sympy(p.diff(i)) - sympy.diff(to_sympy(p), SYMS[i])) == 0


@settings(max_examples=100, deadline=None)
@given(polys, st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=NV, max_size=NV))
def test_evaluate(p, pt):
    want = to_sympy(p).subs(dict(zip(SYMS, [sympy.Rational(x.numerator, x.denominator) for x in pt])))
    assert p.evaluate(pt) == Fraction(int(sympy.fraction(want)[0]), int(sympy.fraction(want)[1]))


def _rand_vf(rng):
    return PolyVF(NV, {k: Poly(NV, {tuple(rng.randint(0, 2) for _ in range(NV)): rng.randint(-2, 2)})
                       for k in range(NV)})


def test_vector_field_bracket_jacobi_and_skew():
    rng = random.Random(0)
    for _ in range(30):
        X, Y, Z = _rand_vf(rng), _rand_vf(rng), _rand_vf(rng)
        assert vf_bracket(X, Y) == vf_bracket(Y, X).scale(-1)
        j = vf_bracket(X, vf_bracket(Y, Z)) + vf_bracket(Y, vf_bracket(Z, X)) + vf_bracket(Z, vf_bracket(X, Y))
        assert not j


def test_bracket_is_commutator_on_functions():
    rng = random.Random(1)
    for _ in range(20):
        X, Y = _rand_vf(rng), _rand_vf(rng)
        f = Poly(NV, {(1, 2, 1): 1, (0, 1, 0): 3})
        assert vf_bracket(X, Y).apply(f) == X.apply(Y.apply(f)) - Y.apply(X.apply(f))
