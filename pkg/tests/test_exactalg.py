import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cartankit import linalg
from cartankit.exactalg import (
    LieElement, bracket, graded_basis, invariant_form, is_skew_for, metric_J,
    nilradical_check, sl3_distribution_check, structure_constants, trace_gram,
)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dimensions(n):
    gb = graded_basis(n)
    m = n * (n - 1) // 2
    assert gb.dims() == (m, n, n * n, n, m)
    assert gb.dim == (2 * n + 1) * 2 * n // 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_basis_is_skew_for_J(n):
    J = metric_J(n)
    for i in range(graded_basis(n).dim):
        assert is_skew_for(LieElement.basis(n, i).matrix(), J)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_grading_element(n):
    gb = graded_basis(n)
    e = gb.eps0
    for i, g in enumerate(gb.grades):
        x = LieElement.basis(n, i)
        assert bracket(e, x) == x * g


def test_y_is_bracket_of_x():
    n = 4
    for j in range(n):
        for k in range(j + 1, n):
            xj, xk = LieElement.basis(n, ("x", j)), LieElement.basis(n, ("x", k))
            assert bracket(xj, xk) == LieElement.basis(n, ("y", j, k))


@pytest.mark.parametrize("n", [2, 3])
def test_structure_constants_match_sympy_commutators(n):
    gb = graded_basis(n)
    sc = structure_constants(n)
    mats = [sympy.Matrix(LieElement.basis(n, i).matrix()) for i in range(gb.dim)]
    flat = sympy.Matrix([list(m) for m in mats]).T
    for i in range(gb.dim):
        for j in range(gb.dim):
            c = mats[i] * mats[j] - mats[j] * mats[i]
            sol = flat.solve_least_squares(sympy.Matrix(list(c)))
            want = {k: int(v) for k, v in enumerate(sol) if v}
            got = sc.get((i, j)) or {}
            if i > j:
                got = {k: -v for k, v in (sc.get((j, i)) or {}).items()}
            assert got == want


def _rand(rng, n):
    dim = graded_basis(n).dim
    return LieElement.from_dict(n, {i: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for i in rng.sample(range(dim), 5)})


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_jacobi(n, seed):
    rng = random.Random(seed)
    x, y, z = _rand(rng, n), _rand(rng, n), _rand(rng, n)
    assert not (bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y)))


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_matrix_roundtrip_and_invariance(n, seed):
    rng = random.Random(seed)
    x, y, z = _rand(rng, n), _rand(rng, n), _rand(rng, n)
    assert LieElement.from_matrix(x.matrix()) == x
    assert invariant_form(bracket(x, y), z) == invariant_form(x, bracket(y, z))


def test_from_matrix_rejects_non_members():
    m = linalg.identity(5)
    with pytest.raises(ValueError):
        LieElement.from_matrix(m)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trace_form_nondegenerate(n):
    gb = graded_basis(n)
    g = trace_gram(n)
    mat = [[g.get((min(i, j), max(i, j)), 0) for j in range(gb.dim)] for i in range(gb.dim)]
    assert linalg.rank(mat) == gb.dim


@pytest.mark.parametrize("n", [2, 3, 4])
def test_nilradical(n):
    r = nilradical_check(n)
    assert r["ideal"] and r["nilpotent"] and r["orthocomplement"]
    assert r["nilpotency_step"] == 2


def test_sl3_distribution():
    assert all(sl3_distribution_check().values())


def test_blocks_roundtrip():
    rng = random.Random(1)
    x = _rand(rng, 3)
    A, v, B, w, C = x.blocks()
    assert LieElement.from_blocks(A, v, B, w, C) == x
    with pytest.raises(ValueError):
        LieElement.from_blocks(A, v, [[1, 0, 0], [0, 0, 0], [0, 0, 0]], w, C)
