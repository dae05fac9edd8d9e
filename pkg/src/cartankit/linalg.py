"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`. Rank and kernel computations clear
denominators row by row and run fraction-free Bareiss elimination on the
resulting integer matrix. The elimination kernel is the compiled
``_elim_c`` extension when it is importable, else the pure-Python
``_elim_py``; an int64 overflow in the compiled kernel reruns the call in
Python, so results never depend on the backend.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import _elim_py

try:
    if os.environ.get("CARTANKIT_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _elim_c
except ImportError:  # pragma: no cover - depends on the build
    _elim_c = None

BACKEND = "cython" if _elim_c is not None else "python"

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def echelon_int(rows: Sequence[Sequence[int]], ncols: int, backend: str | None = None):
    """Bareiss echelon form of an integer matrix on the selected backend."""
    backend = backend or BACKEND
    if backend == "cython" and _elim_c is not None:
        try:
            return _elim_c.bareiss_echelon(rows, ncols)
        except OverflowError:
            pass
    return _elim_py.bareiss_echelon(rows, ncols)


def integer_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    """Scale each rational row to a primitive integer row (same row space)."""
    out = []
    for row in rows:
        if all(type(x) is int for x in row):
            g = 0
            for x in row:
                if x:
                    g = gcd(g, x)
            out.append([x // g for x in row] if g > 1 else list(row))
            continue
        den = 1
        for x in row:
            if x:
                den = lcm(den, Fraction(x).denominator)
        ints = [int(Fraction(x) * den) for x in row]
        g = 0
        for x in ints:
            if x:
                g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(echelon_int(integer_rows(rows), ncols)[1])


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row-echelon form with Fraction entries; returns (rows, pivots)."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [], []
    if ncols is None:
        ncols = len(rows[0])
    ech, piv = echelon_int(integer_rows(rows), ncols)
    red = [[Fraction(x) for x in r] for r in ech]
    for i in range(len(red) - 1, -1, -1):
        c = piv[i]
        p = red[i][c]
        red[i] = [x / p for x in red[i]]
        for k in range(i):
            f = red[k][c]
            if f:
                rk, ri = red[k], red[i]
                red[k] = [a - f * b for a, b in zip(rk, ri)]
    return red, piv


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}; one vector per free column, free entry = 1."""
    red, piv = rref(rows, ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for i, c in enumerate(piv):
            v[c] = -red[i][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of A x = b, or None when the system is inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for i, c in enumerate(piv):
        x[c] = red[i][ncols]
    return x


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(r, c) if x and y), ZERO) for c in bt] for r in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(r, v) if x and y), ZERO) for r in a]


def identity(n: int) -> list[list[Fraction]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list[list[Fraction]]:
    return [[ZERO] * c for _ in range(r)]


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(r) + e for r, e in zip(m, identity(n))]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant via Bareiss: the last pivot of the fraction-free form."""
    n = len(m)
    if n == 0:
        return ONE
    dens = []
    for row in m:
        d = 1
        for x in row:
            if x:
                d = lcm(d, Fraction(x).denominator)
        dens.append(d)
    ints = [[int(Fraction(x) * d) for x in row] for row, d in zip(m, dens)]
    # track the row swaps so the sign is right
    a = [list(r) for r in ints]
    sign = 1
    prev = 1
    for k in range(n):
        p = k
        while p < n and a[p][k] == 0:
            p += 1
        if p == n:
            return ZERO
        if p != k:
            a[p], a[k] = a[k], a[p]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    scale = 1
    for d in dens:
        scale *= d
    return Fraction(sign * a[n - 1][n - 1], scale)


def inertia(sym: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Congruence diagonalisation; a zero diagonal with a nonzero off-diagonal
    entry is first repaired by adding the partner row/column.
    """
    a = [[Fraction(x) for x in r] for r in sym]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row_i += row_j, col_i += col_j  (congruence)
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            k = i
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            f = a[i][k] / d
            if f:
                for j in active:
                    a[i][j] -= f * a[k][j]
        for i in active:
            a[i][k] = a[k][i] = ZERO
    return pos, neg, n - pos - neg


class Span:
    """Incrementally maintained row space of sparse rational vectors.

    Vectors are dicts ``key -> Fraction``; keys must be sortable. The basis is
    kept reduced so ``reduce`` returns a canonical remainder.
    """

    def __init__(self):
        self.rows = {}  # pivot key -> vector with pivot coefficient 1

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = {k: Fraction(c) for k, c in vec.items() if c}
        for k in sorted(v):
            c = v.get(k)
            if c and k in self.rows:
                for kk, cc in self.rows[k].items():
                    nv = v.get(kk, ZERO) - c * cc
                    if nv:
                        v[kk] = nv
                    else:
                        v.pop(kk, None)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; True iff it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        c = v[piv]
        v = {k: x / c for k, x in v.items()}
        for key, row in self.rows.items():
            f = row.get(piv)
            if f:
                for kk, cc in v.items():
                    nv = row.get(kk, ZERO) - f * cc
                    if nv:
                        row[kk] = nv
                    else:
                        row.pop(kk, None)
        self.rows[piv] = v
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        return [dict(self.rows[k]) for k in sorted(self.rows)]
