"""so(n+1,n) in block form, graded by the isotropic n-plane V.

An element is stored as the embedded (2n+1)x(2n+1) matrix

    [[A,  v,   B ],
     [w,  0,  -v^t],
     [C, -w^t, -A^t]]

with B, C skew, which is skew for J = [[0,0,I],[0,1,0],[I,0,0]].
Grades: C -2, w -1, A 0, v +1, B +2.

Basis order (used everywhere else in the package):
    y_jk (j<k)  grade -2,  y_jk = [x_j, x_k]  (C[j,k] = -1, C[k,j] = +1)
    x_i         grade -1,  w = -e_i            (so x_i (0,1,0)^t = e_{n+1+i})
    a_ij        grade  0,  A = E_ij
    v_i         grade +1,  v = e_i
    b_jk (j<k)  grade +2,  B = E_jk - E_kj
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg

ZERO = Fraction(0)


def pairs(n):
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class GradedBasis:
    """Labels, grades and torus weights of the standard basis of so(n+1,n)."""

    n: int
    labels: tuple
    grades: tuple
    weights: tuple  # weight under the diagonal torus of gl(n), as n-tuples
    by_grade: dict = field(hash=False, compare=False)

    @property
    def dim(self):
        return len(self.labels)

    def index(self, label):
        return self.labels.index(label)

    def dims(self):
        return tuple(len(self.by_grade[g]) for g in (-2, -1, 0, 1, 2))

    @property
    def p(self):
        return self.by_grade[0] + self.by_grade[1] + self.by_grade[2]

    @property
    def p_perp(self):
        return self.by_grade[1] + self.by_grade[2]

    @property
    def g_minus(self):
        return self.by_grade[-2] + self.by_grade[-1]

    @property
    def eps0(self):
        """Grading element: A = identity."""
        c = [ZERO] * self.dim
        for i in range(self.n):
            c[self.index(("a", i, i))] = Fraction(1)
        return LieElement(self.n, tuple(c))


@lru_cache(maxsize=None)
def graded_basis(n: int) -> GradedBasis:
    if n < 1:
        raise ValueError("n must be at least 1")
    labels, grades, weights = [], [], []

    def unit(*idx):
        e = [0] * n
        for s, i in idx:
            e[i] += s
        return tuple(e)

    for j, k in pairs(n):
        labels.append(("y", j, k)); grades.append(-2); weights.append(unit((-1, j), (-1, k)))
    for i in range(n):
        labels.append(("x", i)); grades.append(-1); weights.append(unit((-1, i)))
    for i in range(n):
        for j in range(n):
            labels.append(("a", i, j)); grades.append(0); weights.append(unit((1, i), (-1, j)))
    for i in range(n):
        labels.append(("v", i)); grades.append(1); weights.append(unit((1, i)))
    for j, k in pairs(n):
        labels.append(("b", j, k)); grades.append(2); weights.append(unit((1, j), (1, k)))
    by_grade = {g: [i for i, gg in enumerate(grades) if gg == g] for g in range(-2, 3)}
    return GradedBasis(n, tuple(labels), tuple(grades), tuple(weights), by_grade)


def _basis_matrix(n, label):
    """Sparse embedded matrix {(r, c): int} of a basis label."""
    m = {}
    lo, mid, hi = 0, n, n + 1  # block offsets
    kind = label[0]
    if kind == "y":
        _, j, k = label
        m[(hi + j, lo + k)] = -1
        m[(hi + k, lo + j)] = 1
    elif kind == "x":
        i = label[1]
        m[(mid, lo + i)] = -1
        m[(hi + i, mid)] = 1
    elif kind == "a":
        _, i, j = label
        m[(lo + i, lo + j)] = 1
        m[(hi + j, hi + i)] = -1
    elif kind == "v":
        i = label[1]
        m[(lo + i, mid)] = 1
        m[(mid, hi + i)] = -1
    elif kind == "b":
        _, j, k = label
        m[(lo + j, hi + k)] = 1
        m[(lo + k, hi + j)] = -1
    return m


def _read_coords(n, mat):
    """Basis coordinates of an embedded matrix given as {(r,c): value}."""
    gb = graded_basis(n)
    lo, mid, hi = 0, n, n + 1
    out = [ZERO] * gb.dim
    for idx, lab in enumerate(gb.labels):
        kind = lab[0]
        if kind == "y":
            val = -mat.get((hi + lab[1], lo + lab[2]), 0)
        elif kind == "x":
            val = -mat.get((mid, lo + lab[1]), 0)
        elif kind == "a":
            val = mat.get((lo + lab[1], lo + lab[2]), 0)
        elif kind == "v":
            val = mat.get((lo + lab[1], mid), 0)
        else:
            val = mat.get((lo + lab[1], hi + lab[2]), 0)
        out[idx] = Fraction(val)
    return out


def _sparse_mul(a, b):
    out = {}
    brows = {}
    for (r, c), v in b.items():
        brows.setdefault(r, []).append((c, v))
    for (r, k), v in a.items():
        for c, w in brows.get(k, ()):
            out[(r, c)] = out.get((r, c), 0) + v * w
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def structure_constants(n: int):
    """{(i, j): {k: c}} with [e_i, e_j] = sum_k c e_k, integer c."""
    gb = graded_basis(n)
    mats = [_basis_matrix(n, lab) for lab in gb.labels]
    table = {}
    for i in range(gb.dim):
        for j in range(i + 1, gb.dim):
            ab = _sparse_mul(mats[i], mats[j])
            ba = _sparse_mul(mats[j], mats[i])
            comm = dict(ab)
            for k, v in ba.items():
                comm[k] = comm.get(k, 0) - v
            comm = {k: v for k, v in comm.items() if v}
            if not comm:
                continue
            coords = _read_coords(n, comm)
            vec = {k: int(c) for k, c in enumerate(coords) if c}
            table[(i, j)] = vec
            table[(j, i)] = {k: -c for k, c in vec.items()}
    return table


@lru_cache(maxsize=None)
def trace_gram(n: int):
    """Gram matrix of tr(xy) on the basis, as {(i, j): int}."""
    gb = graded_basis(n)
    mats = [_basis_matrix(n, lab) for lab in gb.labels]
    gram = {}
    for i in range(gb.dim):
        for j in range(i, gb.dim):
            prod = _sparse_mul(mats[i], mats[j])
            t = sum(v for (r, c), v in prod.items() if r == c)
            if t:
                gram[(i, j)] = gram[(j, i)] = t
    return gram


@dataclass(frozen=True)
class LieElement:
    """Element of so(n+1,n) as a coordinate tuple in the standard basis."""

    n: int
    coords: tuple

    @classmethod
    def zero(cls, n):
        return cls(n, (ZERO,) * graded_basis(n).dim)

    @classmethod
    def basis(cls, n, label_or_index):
        gb = graded_basis(n)
        idx = label_or_index if isinstance(label_or_index, int) else gb.index(label_or_index)
        c = [ZERO] * gb.dim
        c[idx] = Fraction(1)
        return cls(n, tuple(c))

    @classmethod
    def from_dict(cls, n, d):
        c = [ZERO] * graded_basis(n).dim
        for k, v in d.items():
            c[k] = Fraction(v)
        return cls(n, tuple(c))

    @classmethod
    def from_blocks(cls, A, v, B, w, C):
        n = len(A)
        mat = {}
        for i in range(n):
            for j in range(n):
                if A[i][j]:
                    mat[(i, j)] = Fraction(A[i][j])
                if B[i][j]:
                    mat[(i, n + 1 + j)] = Fraction(B[i][j])
                if C[i][j]:
                    mat[(n + 1 + i, j)] = Fraction(C[i][j])
            if v[i]:
                mat[(i, n)] = Fraction(v[i])
            if w[i]:
                mat[(n, i)] = Fraction(w[i])
        for i in range(n):
            for j in range(n):
                if B[i][j] != -B[j][i] or C[i][j] != -C[j][i]:
                    raise ValueError("B and C must be skew")
        return cls(n, tuple(_read_coords(n, mat)))

    @classmethod
    def from_matrix(cls, mat):
        """From a dense embedded matrix; raises if it is not in so(n+1,n)."""
        size = len(mat)
        n = (size - 1) // 2
        sparse = {(r, c): Fraction(mat[r][c]) for r in range(size) for c in range(size) if mat[r][c]}
        x = cls(n, tuple(_read_coords(n, sparse)))
        if x.matrix() != [[Fraction(e) for e in row] for row in mat]:
            raise ValueError("matrix is not in so(n+1,n) for the anti-diagonal metric")
        return x

    def matrix(self):
        size = 2 * self.n + 1
        out = linalg.zeros(size, size)
        gb = graded_basis(self.n)
        for idx, c in enumerate(self.coords):
            if c:
                for (r, cc), v in _basis_matrix(self.n, gb.labels[idx]).items():
                    out[r][cc] += c * v
        return out

    def blocks(self):
        m = self.matrix()
        n = self.n
        A = [row[:n] for row in m[:n]]
        v = [m[i][n] for i in range(n)]
        B = [row[n + 1:] for row in m[:n]]
        w = m[n][:n]
        C = [row[:n] for row in m[n + 1:]]
        return A, v, B, w, C

    def __add__(self, other):
        _check(self, other)
        return LieElement(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        _check(self, other)
        return LieElement(self.n, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return LieElement(self.n, tuple(-a for a in self.coords))

    def __mul__(self, s):
        s = Fraction(s)
        return LieElement(self.n, tuple(s * a for a in self.coords))

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.coords)

    def grade_part(self, g):
        gb = graded_basis(self.n)
        keep = set(gb.by_grade.get(g, ()))
        return LieElement(self.n, tuple(c if i in keep else ZERO for i, c in enumerate(self.coords)))

    def grades(self):
        gb = graded_basis(self.n)
        return sorted({gb.grades[i] for i, c in enumerate(self.coords) if c})


def _check(x, y):
    if x.n != y.n:
        raise ValueError(f"rank mismatch: {x.n} vs {y.n}")


def bracket_coords(n, x, y):
    """Bracket on sparse coordinate dicts {index: coeff}."""
    sc = structure_constants(n)
    out = {}
    for i, a in x.items():
        if not a:
            continue
        for j, b in y.items():
            if not b:
                continue
            t = sc.get((i, j))
            if t:
                ab = a * b
                for k, c in t.items():
                    out[k] = out.get(k, 0) + ab * c
    return {k: v for k, v in out.items() if v}


def bracket(x: LieElement, y: LieElement) -> LieElement:
    _check(x, y)
    xd = {i: c for i, c in enumerate(x.coords) if c}
    yd = {i: c for i, c in enumerate(y.coords) if c}
    return LieElement.from_dict(x.n, bracket_coords(x.n, xd, yd))


def form_coords(n, x, y):
    gram = trace_gram(n)
    s = ZERO
    for i, a in x.items():
        for j, b in y.items():
            g = gram.get((i, j))
            if g:
                s += a * b * g
    return s


def invariant_form(x: LieElement, y: LieElement) -> Fraction:
    """Trace form tr(xy) of the embedded matrices."""
    _check(x, y)
    xd = {i: c for i, c in enumerate(x.coords) if c}
    yd = {i: c for i, c in enumerate(y.coords) if c}
    return Fraction(form_coords(x.n, xd, yd))


def ad_matrix(x: LieElement):
    """Matrix of ad(x) in the standard basis (columns are images)."""
    n = x.n
    dim = graded_basis(n).dim
    xd = {i: c for i, c in enumerate(x.coords) if c}
    cols = []
    for j in range(dim):
        cols.append(bracket_coords(n, xd, {j: Fraction(1)}))
    return [[cols[j].get(i, ZERO) for j in range(dim)] for i in range(dim)]


def metric_J(n):
    size = 2 * n + 1
    J = linalg.zeros(size, size)
    for i in range(n):
        J[i][n + 1 + i] = J[n + 1 + i][i] = Fraction(1)
    J[n][n] = Fraction(1)
    return J


def is_skew_for(mat, metric):
    """X^t J + J X == 0."""
    lhs = linalg.matmul(linalg.transpose(mat), metric)
    rhs = linalg.matmul(metric, mat)
    return all(a + b == 0 for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb))


def span_rank(elements):
    return linalg.rank([list(e.coords) for e in elements]) if elements else 0


def nilradical_check(n: int) -> dict:
    gb = graded_basis(n)
    sc = structure_constants(n)
    pset = set(gb.p)
    pperp = set(gb.p_perp)
    ideal = all(
        set(sc.get((i, j), {})) <= pperp for i in pset for j in pperp
    )
    # lower central series of p_perp
    series = [sorted(pperp)]
    current = [{i: Fraction(1)} for i in pperp]
    step = 0
    while current:
        nxt = []
        for u in current:
            for j in pperp:
                b = bracket_coords(n, u, {j: Fraction(1)})
                if b:
                    nxt.append(b)
        dim = gb.dim
        rows = [[d.get(k, ZERO) for k in range(dim)] for d in nxt]
        r = linalg.rank(rows, dim) if rows else 0
        step += 1
        if r == 0:
            break
        current = nxt
        if step > 2 * n + 2:
            break
    # orthocomplement of p under the trace form
    gram = trace_gram(n)
    rows = [[Fraction(gram.get((i, j), 0)) for j in range(gb.dim)] for i in sorted(pset)]
    orth = linalg.nullspace(rows, gb.dim)
    orth_rows = [list(v) for v in orth]
    target = [[Fraction(1) if k == i else ZERO for k in range(gb.dim)] for i in sorted(pperp)]
    same = len(orth_rows) == len(target) and linalg.rank(orth_rows + target, gb.dim) == len(target)
    return {
        "n": n,
        "ideal": ideal,
        "nilpotent": step <= 2 * n + 2,
        "nilpotency_step": step,
        "orthocomplement": same,
        "dim_p_perp": len(pperp),
    }


def _sl3_comm(a, b):
    ab = linalg.matmul(a, b)
    ba = linalg.matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def _flat(m):
    return [e for row in m for e in row]


def _elem(i, j):
    m = linalg.zeros(3, 3)
    m[i][j] = Fraction(1)
    return m


def sl3_distribution_check() -> dict:
    """Bracket relations between H = span(E12, E23, E31), its transpose and the torus."""
    H = [_elem(0, 1), _elem(1, 2), _elem(2, 0)]
    Ht = [linalg.transpose(h) for h in H]
    torus = [
        [[Fraction(1), 0, 0], [0, Fraction(-1), 0], [0, 0, 0]],
        [[0, 0, 0], [0, Fraction(1), 0], [0, 0, Fraction(-1)]],
    ]

    def span_of(ms):
        return [_flat(m) for m in ms]

    def contained(ms, target):
        t = span_of(target)
        r = linalg.rank(t, 9)
        return linalg.rank(t + span_of(ms), 9) == r

    def equal(ms, target):
        return contained(ms, target) and linalg.rank(span_of(ms), 9) == linalg.rank(span_of(target), 9)

    h_torus = [_sl3_comm(h, t) for h in H for t in torus]
    hh = [_sl3_comm(a, b) for a in H for b in H]
    tt = [_sl3_comm(a, b) for a in Ht for b in Ht]
    return {
        "torus_preserves_H": contained(h_torus, H),
        "H_bracket_is_Ht": equal(hh, Ht),
        "Ht_bracket_is_H": equal(tt, H),
        "dim_H_bracket": linalg.rank(span_of(hh), 9),
    }
