import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cartankit import linalg
from cartankit import octonion as o

coef = st.fractions(min_value=-5, max_value=5, max_denominator=4)
octs = st.lists(coef, min_size=8, max_size=8).map(o.ZornOct.from_vec)
ims = st.lists(coef, min_size=7, max_size=7).map(o.from_im)


@settings(max_examples=200, deadline=None)
@given(octs, octs)
def test_norm_multiplicative(x, y):
    assert o.norm(o.zorn_mul(x, y)) == o.norm(x) * o.norm(y)


@settings(max_examples=200, deadline=None)
@given(octs, octs, octs)
def test_alternator_alternating(x, y, z):
    a = o.alternator(x, y, z)
    assert a == o.alternator(y, z, x) == o.alternator(z, x, y)
    assert a == -o.alternator(y, x, z)
    assert not o.alternator(x, x, y)


@settings(max_examples=100, deadline=None)
@given(octs)
def test_unit_and_conjugation(x):
    assert o.zorn_mul(o.ONE, x) == x == o.zorn_mul(x, o.ONE)
    assert o.zorn_mul(x, x.conj()) == o.ONE.scale(o.norm(x))


@settings(max_examples=100, deadline=None)
@given(ims, ims, ims)
def test_theta_alternating_and_commutator_form(x, y, z):
    t = o.theta(x, y, z)
    assert t == o.theta(y, z, x) == -o.theta(y, x, z)
    assert t == o.theta_commutator(x, y, z)
    if o.polar(x, y) == 0:
        assert o.scalar_identity_holds(x, y, z)
    else:
        with pytest.raises(ValueError):
            o.scalar_identity_holds(x, y, z)


def test_scalar_identity_on_isotropic_planes():
    rng = random.Random(11)
    for _ in range(5):
        x, y, z = o.random_open_plane(rng).vectors
        assert o.scalar_identity_holds(x, y, z)


def test_theta_rejects_non_imaginary():
    with pytest.raises(ValueError):
        o.theta(o.ONE, o.unit(1), o.unit(2))


def test_norm_signature_4_4_and_im_3_4():
    gram = [[o.polar(o.unit(i), o.unit(j)) for j in range(8)] for i in range(8)]
    assert linalg.inertia(gram)[:2] == (4, 4)
    assert linalg.inertia(o.im_gram())[:2] == (3, 4)


def test_derivations_rank_14_against_sympy():
    ders = o.derivation_algebra()
    assert len(ders) == 14
    flat = sympy.Matrix([[x for row in D for x in row] for D in ders])
    assert flat.rank() == 14
    rep = o.derivation_report()
    assert all(rep[k] for k in ("kills_unit", "preserves_im", "skew_for_N", "kills_theta"))


def test_derivations_satisfy_leibniz():
    rng = random.Random(4)
    for D in o.derivation_algebra():
        x, y = o.random_oct(rng), o.random_oct(rng)
        lhs = o.apply(D, o.zorn_mul(x, y))
        rhs = o.zorn_mul(o.apply(D, x), y) + o.zorn_mul(x, o.apply(D, y))
        assert lhs == rhs


def test_theta_stabilizer_equals_derivations():
    ders = [o.restrict_to_im(D) for D in o.derivation_algebra()]
    stab = o.theta_stabilizer()
    assert len(stab) == 14
    assert o.same_subspace(ders, stab)


@pytest.mark.parametrize("seed", range(5))
def test_plane_classification(seed):
    rng = random.Random(seed)
    B = o.random_open_plane(rng)
    assert B.is_isotropic() and o.classify_plane(B) == "Open"
    basis, dim = o.stabilizer_in_g2(B)
    assert dim == 8 and o.killing_rank(basis) == 8
    C = o.random_closed_plane(rng)
    assert C.is_isotropic() and o.classify_plane(C) == "Closed"
    basis, dim = o.stabilizer_in_g2(C)
    assert dim == 9 and o.killing_rank(basis) < 9


def test_octonionic_triple_normalisation():
    rng = random.Random(7)
    x, y, z = o.octonionic_triple(o.random_open_plane(rng))
    assert o.theta(x, y, z) == Fraction(1, 2)
    # the eight table elements form a basis
    els = o.triple_elements(x, y, z)
    assert linalg.rank([els[k].vec() for k in o.COORD_NAMES], 8) == 8


@pytest.mark.parametrize("seed", range(10))
def test_table_is_basis_independent(seed):
    rng = random.Random(seed)
    t = o.triple_table(*o.octonionic_triple(o.random_open_plane(rng)))
    t0 = o.triple_table(*o.octonionic_triple(o.random_open_plane(random.Random(100))))
    assert t == t0


def test_table_differs_only_in_scalar_parts():
    rng = random.Random(0)
    t = o.triple_table(*o.octonionic_triple(o.random_open_plane(rng)))
    mism = o.table_mismatches(t)
    assert sorted(mism) == sorted([("a", "a"), ("x", "yz"), ("y", "zx"), ("z", "xy"),
                                   ("yz", "x"), ("zx", "y"), ("xy", "z")])
    assert o.table_matches(t, unit_sign=-1)


def test_triple_table_preconditions():
    rng = random.Random(1)
    x, y, z = o.random_open_plane(rng).vectors
    if o.theta(x, y, z) != Fraction(1, 2):
        with pytest.raises(ValueError):
            o.triple_table(x, y, z)
    with pytest.raises(ValueError):
        o.two_sided_kernel(o.unit(0) + o.unit(7))
