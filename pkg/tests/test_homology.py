import random
from fractions import Fraction

import pytest
import sympy

from cartankit import homology
from cartankit.exactalg import graded_basis, structure_constants
from cartankit.homology import Chain, codifferential


def test_degree_one_is_bracket():
    n = 3
    gb = graded_basis(n)
    sc = structure_constants(n)
    for u in gb.p_perp:
        for v in range(gb.dim):
            d = codifferential(Chain(n, 1, {((u,), v): 1}))
            want = sc.get((u, v)) if u < v else {k: -c for k, c in (sc.get((v, u)) or {}).items()}
            assert {k[1]: c for k, c in d.coeffs.items()} == {k: Fraction(c) for k, c in (want or {}).items()}


def test_chain_normalises_slot_order():
    a = Chain(3, 2, {((5, 3), 0): 1})
    assert a.coeffs == {((3, 5), 0): -1}
    assert not Chain(3, 2, {((4, 4), 0): 1})


@pytest.mark.parametrize("n,c", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_codiff_squares_to_zero(n, c):
    assert homology.codiff_square_zero(n, c)


def test_codiff_squares_to_zero_random_chains():
    rng = random.Random(5)
    n = 3
    pp = graded_basis(n).p_perp
    for _ in range(20):
        coeffs = {}
        for _ in range(6):
            slots = tuple(rng.sample(pp, 3))
            coeffs[(slots, rng.randrange(graded_basis(n).dim))] = rng.randint(-3, 3)
        ch = Chain(n, 3, coeffs)
        assert not codifferential(codifferential(ch))


@pytest.mark.parametrize("n,expected", [(2, {3: 4}), (3, {3: 27}), (4, {1: 60})])
def test_homology_dims(n, expected):
    assert homology.homology_dims(n) == expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_weight_and_homogeneity_blocking_agree(n):
    assert homology.homology_dims(n, "weight") == homology.homology_dims(n, "homogeneity")


def test_basis_permutation_independence():
    n = 3
    order = list(range(graded_basis(n).dim))
    random.Random(2).shuffle(order)
    assert homology.homology_dims(n, "weight", tuple(order)) == homology.homology_dims(n)


def test_block_ranks_match_sympy():
    n = 3
    for key in list(homology.homology_blocks(n))[:4]:
        h = homology._block_homology(n, key, "weight")
        assert h["rank_d2"] == sympy.Matrix(h["d2"]).rank()
        if h["d3cols"]:
            assert h["rank_d3"] == sympy.Matrix(h["d3cols"]).rank()


@pytest.mark.parametrize("n,carrier,verdict", [
    (2, ((1, 2), 0), "torsion-free class"),
    (3, ((1, 2), 0), "torsion-free class"),
    (4, ((1, 2), -2), "torsion class"),
])
def test_location_and_dichotomy(n, carrier, verdict):
    rep = homology.torsion_dichotomy_report(n)
    assert rep["verdict"] == verdict
    assert [list(carrier[0]), carrier[1]] in rep["carrier_types"]


def test_minimal_homogeneity():
    gb = graded_basis(3)
    v1 = gb.index(("v", 0))
    b = gb.index(("b", 0, 1))
    y = gb.index(("y", 0, 1))
    assert homology.minimal_homogeneity(Chain(3, 2, {((v1, b), y): 1})) == 1
    with pytest.raises(ValueError):
        homology.minimal_homogeneity(Chain(3, 2))


def test_max_n_guard(monkeypatch):
    monkeypatch.setenv("CARTANKIT_MAX_N", "3")
    with pytest.raises(ValueError):
        homology.homology_dims(4)
