"""Split octonions as Zorn vector matrices (a, v; w, b).

Product (the version that makes N multiplicative):

    (a, v; w, b)(a', v'; w', b') =
        (aa' + v.w',  a v' + b' v + w x w',
         a' w + b w' - v x v',  bb' + v'.w)

N(x, x) = ab - v.w, conjugate (b, -v; -w, a), imaginary iff a = -b.
Coordinates are ordered (a, v1, v2, v3, w1, w2, w3, b). On Im the basis is
h = (1, 0; 0, -1), then the three v units, then the three w units.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import linalg

ZERO = Fraction(0)
HALF = Fraction(1, 2)


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


@dataclass(frozen=True)
class ZornOct:
    a: Fraction
    v: tuple
    w: tuple
    b: Fraction

    @classmethod
    def from_vec(cls, c):
        c = [Fraction(x) for x in c]
        return cls(c[0], tuple(c[1:4]), tuple(c[4:7]), c[7])

    def vec(self):
        return [self.a, *self.v, *self.w, self.b]

    def __add__(self, o):
        return ZornOct.from_vec([x + y for x, y in zip(self.vec(), o.vec())])

    def __sub__(self, o):
        return ZornOct.from_vec([x - y for x, y in zip(self.vec(), o.vec())])

    def __neg__(self):
        return ZornOct.from_vec([-x for x in self.vec()])

    def scale(self, s):
        s = Fraction(s)
        return ZornOct.from_vec([s * x for x in self.vec()])

    def __mul__(self, o):
        if isinstance(o, ZornOct):
            return zorn_mul(self, o)
        return self.scale(o)

    def __rmul__(self, s):
        return self.scale(s)

    def __bool__(self):
        return any(self.vec())

    def conj(self):
        return ZornOct(self.b, tuple(-x for x in self.v), tuple(-x for x in self.w), self.a)

    def is_imaginary(self):
        return self.a == -self.b


ONE = ZornOct.from_vec([1, 0, 0, 0, 0, 0, 0, 1])


def zorn_mul(x: ZornOct, y: ZornOct) -> ZornOct:
    a, v, w, b = x.a, x.v, x.w, x.b
    a2, v2, w2, b2 = y.a, y.v, y.w, y.b
    ww = _cross(w, w2)
    vv = _cross(v, v2)
    return ZornOct(
        a * a2 + _dot(v, w2),
        tuple(a * v2[i] + b2 * v[i] + ww[i] for i in range(3)),
        tuple(a2 * w[i] + b * w2[i] - vv[i] for i in range(3)),
        b * b2 + _dot(v2, w),
    )


def norm(x: ZornOct) -> Fraction:
    return x.a * x.b - _dot(x.v, x.w)


def polar(x: ZornOct, y: ZornOct) -> Fraction:
    """Symmetric bilinear form with polar(x, x) = N(x, x)."""
    return (x.a * y.b + y.a * x.b - _dot(x.v, y.w) - _dot(y.v, x.w)) / 2


def alternator(x, y, z):
    return zorn_mul(zorn_mul(x, y), z) - zorn_mul(x, zorn_mul(y, z))


def theta(x, y, z) -> Fraction:
    """theta(x, y, z) = N(xy, z) on imaginary octonions."""
    for u in (x, y, z):
        if not u.is_imaginary():
            raise ValueError("theta takes imaginary arguments")
    return polar(zorn_mul(x, y), z)


def theta_commutator(x, y, z) -> Fraction:
    """theta as N(1/2 [x, y], z)."""
    c = zorn_mul(x, y) - zorn_mul(y, x)
    return polar(c.scale(HALF), z)


# --- bases and structure constants -----------------------------------------

def unit(k):
    c = [0] * 8
    c[k] = 1
    return ZornOct.from_vec(c)


@lru_cache(maxsize=None)
def im_basis():
    h = ZornOct.from_vec([1, 0, 0, 0, 0, 0, 0, -1])
    return (h,) + tuple(unit(k) for k in range(1, 7))


def im_coords(x: ZornOct):
    """Coordinates of an imaginary octonion in im_basis()."""
    if not x.is_imaginary():
        raise ValueError("not imaginary")
    return [x.a, *x.v, *x.w]


def from_im(c):
    c = [Fraction(t) for t in c]
    return ZornOct(c[0], tuple(c[1:4]), tuple(c[4:7]), -c[0])


@lru_cache(maxsize=None)
def mult_table():
    """m[i][j] = coordinates of e_i e_j in the 8-dim coordinate basis."""
    return [[zorn_mul(unit(i), unit(j)).vec() for j in range(8)] for i in range(8)]


def im_gram():
    B = im_basis()
    return [[polar(x, y) for y in B] for x in B]


@lru_cache(maxsize=None)
def theta_tensor():
    B = im_basis()
    return {
        (i, j, k): t
        for i, j, k in product(range(7), repeat=3)
        if (t := theta(B[i], B[j], B[k]))
    }


# --- derivations -------------------------------------------------------------

@lru_cache(maxsize=None)
def derivation_algebra():
    """Basis of Der as 8x8 matrices acting on coordinate columns."""
    m = mult_table()
    rows = []
    # unknown D[r][c] at index 8*r + c; D e_i = sum_l D[l][i] e_l
    for i in range(8):
        for j in range(8):
            for k in range(8):
                row = [0] * 64
                for l in range(8):
                    # D(e_i e_j)_k
                    if m[i][j][l]:
                        row[8 * k + l] += m[i][j][l]
                    # -(D e_i) e_j
                    if m[l][j][k]:
                        row[8 * l + i] -= m[l][j][k]
                    # -e_i (D e_j)
                    if m[i][l][k]:
                        row[8 * l + j] -= m[i][l][k]
                if any(row):
                    rows.append(row)
    basis = linalg.nullspace(rows, 64)
    return [[[v[8 * r + c] for c in range(8)] for r in range(8)] for v in basis]


def apply(D, x: ZornOct) -> ZornOct:
    return ZornOct.from_vec(linalg.matvec(D, x.vec()))


def restrict_to_im(D):
    """7x7 matrix of D on im_basis() (D must preserve Im)."""
    cols = []
    for e in im_basis():
        img = apply(D, e)
        cols.append(im_coords(img))
    return linalg.transpose(cols)


def derivation_report():
    ders = derivation_algebra()
    B = im_basis()
    kills_one = all(not apply(D, ONE) for D in ders)
    preserves_im = all(apply(D, e).is_imaginary() for D in ders for e in B)
    skew = all(
        polar(apply(D, unit(i)), unit(j)) + polar(unit(i), apply(D, unit(j))) == 0
        for D in ders for i in range(8) for j in range(8)
    )
    th = theta_tensor()
    kills_theta = all(_theta_action(restrict_to_im(D), th) == {} for D in ders)
    return {
        "dim": len(ders),
        "kills_unit": kills_one,
        "preserves_im": preserves_im,
        "skew_for_N": skew,
        "kills_theta": kills_theta,
    }


def _theta_action(X, th):
    """Nonzero entries of theta(X e_i, e_j, e_k) + theta(e_i, X e_j, e_k) + theta(e_i, e_j, X e_k)."""
    out = {}
    for i, j, k in product(range(7), repeat=3):
        s = ZERO
        for l in range(7):
            if X[l][i]:
                s += X[l][i] * th.get((l, j, k), 0)
            if X[l][j]:
                s += X[l][j] * th.get((i, l, k), 0)
            if X[l][k]:
                s += X[l][k] * th.get((i, j, l), 0)
        if s:
            out[(i, j, k)] = s
    return out


def theta_stabilizer():
    """Basis of {X in so(Im, N) : X . theta = 0} as 7x7 matrices."""
    G = im_gram()
    th = theta_tensor()
    rows = []
    # skewness: (X^t G + G X)_{ij} = sum_l X_li G_lj + G_il X_lj
    for i in range(7):
        for j in range(i, 7):
            row = [ZERO] * 49
            for l in range(7):
                row[7 * l + i] += G[l][j]
                row[7 * l + j] += G[i][l]
            if any(row):
                rows.append(row)
    for i, j, k in product(range(7), repeat=3):
        if not (i < j < k):
            continue  # theta is totally skew, so X.theta is too
        row = [ZERO] * 49
        for l in range(7):
            row[7 * l + i] += th.get((l, j, k), 0)
            row[7 * l + j] += th.get((i, l, k), 0)
            row[7 * l + k] += th.get((i, j, l), 0)
        if any(row):
            rows.append(row)
    basis = linalg.nullspace(rows, 49)
    return [[[v[7 * r + c] for c in range(7)] for r in range(7)] for v in basis]


def same_subspace(mats_a, mats_b):
    fa = [[x for row in m for x in row] for m in mats_a]
    fb = [[x for row in m for x in row] for m in mats_b]
    ncols = len(fa[0]) if fa else 0
    ra, rb = linalg.rank(fa, ncols), linalg.rank(fb, ncols)
    return ra == rb == linalg.rank(fa + fb, ncols)


# --- isotropic planes ----------------------------------------------------------

class ImSubspace:
    """Span of linearly independent imaginary octonions."""

    def __init__(self, vectors):
        vectors = list(vectors)
        for x in vectors:
            if not x.is_imaginary():
                raise ValueError("spanning vectors must be imaginary")
        if linalg.rank([im_coords(x) for x in vectors], 7) != len(vectors):
            raise ValueError("spanning vectors are linearly dependent")
        self.vectors = vectors
        self.gram = [[polar(x, y) for y in vectors] for x in vectors]

    def __len__(self):
        return len(self.vectors)

    def is_isotropic(self):
        return not any(any(r) for r in self.gram)

    def contains(self, x: ZornOct):
        rows = [im_coords(v) for v in self.vectors]
        return linalg.rank(rows + [im_coords(x)], 7) == len(rows)


def _require_plane(B: ImSubspace):
    if len(B) != 3:
        raise ValueError("need a 3-plane")
    if not B.is_isotropic():
        raise ValueError("plane is not isotropic")


def classify_plane(B: ImSubspace) -> str:
    _require_plane(B)
    x, y, z = B.vectors
    if theta(x, y, z) != 0:
        return "Open"
    prods = [zorn_mul(u, w) for u in B.vectors for w in B.vectors]
    if not all(B.contains(p) for p in prods if p):
        raise ArithmeticError("theta vanishes but B.B is not inside B")
    if not any(prods):
        raise ArithmeticError("theta vanishes but B.B = 0")
    return "Closed"


def two_sided_kernel(z: ZornOct) -> ImSubspace:
    if not z or not z.is_imaginary() or norm(z) != 0:
        raise ValueError("z must be a nonzero isotropic imaginary octonion")
    rows = []
    for k in range(8):
        left = [zorn_mul(z, e).vec()[k] for e in im_basis()]
        right = [zorn_mul(e, z).vec()[k] for e in im_basis()]
        rows += [left, right]
    ker = linalg.nullspace(rows, 7)
    return ImSubspace([from_im(v) for v in ker])


def stabilizer_in_g2(B: ImSubspace):
    """Derivations D with D(B) inside B; returns (basis as 7x7 matrices, dim)."""
    _require_plane(B)
    ders = [restrict_to_im(D) for D in derivation_algebra()]
    bcoords = [im_coords(b) for b in B.vectors]
    ann = linalg.nullspace(bcoords, 7)  # functionals vanishing on B
    rows = []
    for phi in ann:
        for b in bcoords:
            rows.append([sum(p * q for p, q in zip(phi, linalg.matvec(D, b))) for D in ders])
    coeffs = linalg.nullspace(rows, len(ders))
    basis = []
    for c in coeffs:
        M = linalg.zeros(7, 7)
        for ck, D in zip(c, ders):
            if ck:
                for r in range(7):
                    for s in range(7):
                        M[r][s] += ck * D[r][s]
        basis.append(M)
    return basis, len(basis)


def killing_rank(basis):
    """Rank of the Killing form of the matrix Lie algebra spanned by ``basis``."""
    k = len(basis)
    flat = [[x for row in m for x in row] for m in basis]
    # coordinates through k independent entry positions
    _, piv = linalg.rref(flat, len(flat[0]))
    if len(piv) != k:
        raise ValueError("basis is linearly dependent")
    inv = linalg.inverse([[f[p] for f in flat] for p in piv])

    def coords(m):
        fm = [x for row in m for x in row]
        c = linalg.matvec(inv, [fm[p] for p in piv])
        if [sum((ci * f[j] for ci, f in zip(c, flat) if ci), ZERO) for j in range(len(fm))] != fm:
            raise ArithmeticError("basis does not close under the bracket")
        return c

    ad = []
    for i in range(k):
        cols = []
        for j in range(k):
            a, b = basis[i], basis[j]
            c = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(linalg.matmul(a, b), linalg.matmul(b, a))]
            cols.append(coords(c))
        ad.append(linalg.transpose(cols))
    gram = [[sum((ad[i][t][u] * ad[j][u][t] for t in range(k) for u in range(k) if ad[i][t][u] and ad[j][u][t]), ZERO)
             for j in range(k)] for i in range(k)]
    return linalg.rank(gram, k)


# --- random fixtures -------------------------------------------------------------

def _rand_q(rng, lo=-3, hi=3, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_oct(rng):
    return ZornOct.from_vec([_rand_q(rng) for _ in range(8)])


def random_imaginary(rng):
    return from_im([_rand_q(rng) for _ in range(7)])


def random_open_plane(rng) -> ImSubspace:
    """Cayley transform of the v-unit plane by a random element of so(Im, N).

    The v-unit plane is isotropic with theta = 1/2 on its basis; an orthogonal
    image stays isotropic and is in the open orbit unless theta happens to
    vanish, in which case we retry.
    """
    G = im_gram()
    Ginv = linalg.inverse(G)
    base = [unit(k) for k in (1, 2, 3)]
    while True:
        S = linalg.zeros(7, 7)
        for i in range(7):
            for j in range(i + 1, 7):
                S[i][j] = _rand_q(rng, -2, 2, 2)
                S[j][i] = -S[i][j]
        K = linalg.matmul(Ginv, S)
        I = linalg.identity(7)
        minus = [[I[i][j] - K[i][j] for j in range(7)] for i in range(7)]
        plus = [[I[i][j] + K[i][j] for j in range(7)] for i in range(7)]
        try:
            Q = linalg.matmul(linalg.inverse(minus), plus)
        except ZeroDivisionError:
            continue
        vecs = [from_im(linalg.matvec(Q, im_coords(b))) for b in base]
        # random change of basis inside the plane
        while True:
            M = [[_rand_q(rng) for _ in range(3)] for _ in range(3)]
            if linalg.det(M):
                break
        vecs = [
            from_im([sum(M[r][s] * im_coords(vecs[s])[t] for s in range(3)) for t in range(7)])
            for r in range(3)
        ]
        B = ImSubspace(vecs)
        if theta(*vecs) != 0:
            return B


def random_closed_plane(rng) -> ImSubspace:
    """Two-sided kernel of a random isotropic imaginary octonion."""
    while True:
        a = _rand_q(rng)
        v = [_rand_q(rng) for _ in range(3)]
        w = [_rand_q(rng) for _ in range(3)]
        if v[0] == 0:
            continue
        w[0] = (-a * a - v[1] * w[1] - v[2] * w[2]) / v[0]
        z = ZornOct(a, tuple(v), tuple(w), -a)
        if z and norm(z) == 0:
            return two_sided_kernel(z)


def octonionic_triple(B: ImSubspace):
    """Rescale a basis of an open plane so that theta(x, y, z) = 1/2."""
    x, y, z = B.vectors
    t = theta(x, y, z)
    if t == 0:
        raise ValueError("theta vanishes on this plane")
    return x.scale(HALF / t), y, z


# --- the multiplication table ----------------------------------------------

TABLE_NAMES = ("a", "x", "y", "z", "yz", "zx", "xy")
COORD_NAMES = ("1", "a", "x", "y", "z", "yz", "zx", "xy")


def _t(**kw):
    return {k: Fraction(v) for k, v in kw.items()}


_H = Fraction(1, 2)
# rows are the left factor, columns the right factor
REFERENCE_TABLE = {
    "a": {"a": {"1": -1}, "x": {"x": 1}, "y": {"y": 1}, "z": {"z": 1},
          "yz": {"yz": -1}, "zx": {"zx": -1}, "xy": {"xy": -1}},
    "x": {"a": {"x": -1}, "x": {}, "y": {"xy": 1}, "z": {"zx": -1},
          "yz": {"1": _H, "a": -_H}, "zx": {}, "xy": {}},
    "y": {"a": {"y": -1}, "x": {"xy": -1}, "y": {}, "z": {"yz": 1},
          "yz": {}, "zx": {"1": _H, "a": -_H}, "xy": {}},
    "z": {"a": {"z": -1}, "x": {"zx": 1}, "y": {"yz": -1}, "z": {},
          "yz": {}, "zx": {}, "xy": {"1": _H, "a": -_H}},
    "yz": {"a": {"yz": 1}, "x": {"1": _H, "a": _H}, "y": {}, "z": {},
           "yz": {}, "zx": {"z": 1}, "xy": {"y": -1}},
    "zx": {"a": {"zx": 1}, "x": {}, "y": {"1": _H, "a": _H}, "z": {},
           "yz": {"z": -1}, "zx": {}, "xy": {"x": 1}},
    "xy": {"a": {"xy": 1}, "x": {}, "y": {}, "z": {"1": _H, "a": _H},
           "yz": {"y": 1}, "zx": {"x": -1}, "xy": {}},
}


def triple_elements(x, y, z):
    xy, yz, zx = zorn_mul(x, y), zorn_mul(y, z), zorn_mul(z, x)
    a = zorn_mul(xy, z) - zorn_mul(z, xy)
    return {"1": ONE, "a": a, "x": x, "y": y, "z": z, "yz": yz, "zx": zx, "xy": xy}


def triple_table(x, y, z):
    """7x7 table of products over {a, x, y, z, yz, zx, xy}, each entry a
    coefficient dict in the basis {1, a, x, y, z, yz, zx, xy}."""
    if theta(x, y, z) != HALF:
        raise ValueError("theta(x, y, z) must equal 1/2")
    B = ImSubspace([x, y, z])
    if not B.is_isotropic():
        raise ValueError("x, y, z do not span an isotropic plane")
    els = triple_elements(x, y, z)
    cols = linalg.transpose([els[k].vec() for k in COORD_NAMES])
    inv = linalg.inverse(cols)
    table = {}
    for r in TABLE_NAMES:
        table[r] = {}
        for c in TABLE_NAMES:
            p = zorn_mul(els[r], els[c])
            coeff = linalg.matvec(inv, p.vec())
            table[r][c] = {k: v for k, v in zip(COORD_NAMES, coeff) if v}
    return table


def reference_entry(r, c, unit_sign=1):
    """Reference table entry; ``unit_sign=-1`` reads the table's 1 as -1."""
    return {
        k: Fraction(v) * (unit_sign if k == "1" else 1)
        for k, v in REFERENCE_TABLE[r][c].items()
    }


def table_mismatches(table, unit_sign=1):
    return [
        (r, c)
        for r in TABLE_NAMES for c in TABLE_NAMES
        if table[r][c] != reference_entry(r, c, unit_sign)
    ]


def table_matches(table, unit_sign=1) -> bool:
    """Exact entry-for-entry comparison with the reference table.

    In any alternative algebra with multiplicative N, imaginary u, w satisfy
    uw + wu = -2 N(u, w) 1, so with theta(x, y, z) = 1/2 one gets
    x(yz) + (yz)x = -1 and a a = +1. The reference has the opposite sign on
    those seven scalar parts; with ``unit_sign=-1`` they are compared with
    the unit read as -1.
    """
    return not table_mismatches(table, unit_sign)


def scalar_identity_holds(x, y, z) -> bool:
    """theta(x, y, z) 1 = -1/2 ((xy)z + z(xy)) for imaginary x, y, z with
    N(x, y) = 0 (so that xy is imaginary)."""
    if polar(x, y) != 0:
        raise ValueError("needs N(x, y) = 0")
    xy = zorn_mul(x, y)
    lhs = ONE.scale(theta(x, y, z))
    rhs = (zorn_mul(xy, z) + zorn_mul(z, xy)).scale(-HALF)
    return lhs == rhs


def format_entry(d):
    if not d:
        return "0"
    parts = []
    for k in COORD_NAMES:
        if k in d:
            c = d[k]
            name = "" if k == "1" else k
            if c == 1 and name:
                s = name
            elif c == -1 and name:
                s = "-" + name
            else:
                s = f"{c}{name}" if name else f"{c}"
            parts.append(s)
    return " + ".join(parts).replace("+ -", "- ")
