import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cartankit import _elim_py, linalg

small_int = st.integers(-6, 6)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    assert linalg.rank(m, len(m[0])) == sympy.Matrix(m).rank()


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_right_size(m):
    ncols = len(m[0])
    ker = linalg.nullspace(m, ncols)
    assert len(ker) == ncols - sympy.Matrix(m).rank()
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)


@pytest.mark.skipif(linalg._elim_c is None, reason="compiled kernel not built")
@settings(max_examples=300, deadline=None)
@given(matrices(8, 8))
def test_backends_agree(m):
    ncols = len(m[0])
    assert linalg._elim_c.bareiss_echelon(m, ncols) == _elim_py.bareiss_echelon(m, ncols)


@pytest.mark.skipif(linalg._elim_c is None, reason="compiled kernel not built")
def test_overflow_falls_back():
    big = 2 ** 40
    m = [[big + i * j + (i == j) for j in range(6)] for i in range(6)]
    with pytest.raises(OverflowError):
        linalg._elim_c.bareiss_echelon(m, 6)
    assert linalg.echelon_int(m, 6, backend="cython") == _elim_py.bareiss_echelon(m, 6)
    assert linalg.rank(m, 6) == sympy.Matrix(m).rank()


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_and_inverse(m):
    d = linalg.det(m)
    assert d == sympy.Matrix(m).det()
    if d:
        inv = linalg.inverse(m)
        assert linalg.matmul(m, inv) == linalg.identity(len(m))


def test_inertia_against_eigenvalues():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 5)
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        s = [[a[i][j] + a[j][i] for j in range(n)] for i in range(n)]
        ev = sympy.Matrix(s).eigenvals()
        pos = sum(k for e, k in ev.items() if sympy.re(sympy.N(e, 30)) > 1e-20)
        neg = sum(k for e, k in ev.items() if sympy.re(sympy.N(e, 30)) < -1e-20)
        assert linalg.inertia(s) == (pos, neg, n - pos - neg)


def test_solve_inconsistent_returns_none():
    assert linalg.solve([[1, 1], [2, 2]], [1, 3]) is None
    assert linalg.solve([[1, 1], [1, -1]], [2, 0]) == [1, 1]


def test_span_incremental():
    s = linalg.Span()
    assert s.add({0: 1, 1: 2})
    assert s.add({1: 1, 2: 1})
    assert not s.add({0: 1, 1: 3, 2: 1})
    assert s.contains({0: 2, 1: 4})
    assert len(s) == 2


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_integer_rows_int_and_fraction_inputs_agree(m):
    assert linalg.integer_rows(m) == linalg.integer_rows([[Fraction(x) for x in r] for r in m])
