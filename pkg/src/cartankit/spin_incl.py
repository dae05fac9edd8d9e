"""Low-dimensional isomorphisms and the inclusion dimension counts.

* sl(4,R) acting on Lambda^2 R^4 with the wedge pairing into Lambda^4 R^4.
* su(2,2) acting on Lambda^2 C^4, cut down to the fixed space of a real
  structure built from H = diag(1,1,-1,-1) and the volume form.
* stabilisers of 3- and 4-forms inside orthogonal algebras.
* g / p / p-hat intersection dimensions for the three inclusions.

Complex scalars are Gaussian rationals (:class:`QI`), so everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import linalg, octonion

ZERO = Fraction(0)
ONE = Fraction(1)


# --- Gaussian rationals ------------------------------------------------------

@dataclass(frozen=True)
class QI:
    re: Fraction = ZERO
    im: Fraction = ZERO

    def __add__(self, o):
        o = _qi(o)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _qi(o)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _qi(o) - self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __mul__(self, o):
        o = _qi(o)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return QI(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)


def _qi(x):
    return x if isinstance(x, QI) else QI(Fraction(x), ZERO)


I_UNIT = QI(ZERO, ONE)


def cmatmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = [[QI() for _ in range(p)] for _ in range(n)]
    for i in range(n):
        for k in range(m):
            if a[i][k]:
                for j in range(p):
                    if b[k][j]:
                        out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def ccomm(a, b):
    ab, ba = cmatmul(a, b), cmatmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


# --- exterior algebra helpers -------------------------------------------------

PAIRS4 = list(combinations(range(4), 2))


def perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


def wedge_pairing():
    """<e_P, e_Q> = coefficient of e_0123 in e_P ^ e_Q, on Lambda^2 R^4."""
    return [[Fraction(perm_sign(P + Q)) for Q in PAIRS4] for P in PAIRS4]


def lambda2_action(X, zero=ZERO):
    """Matrix of X acting on Lambda^2 of its space, basis PAIRS4 (works for QI)."""
    idx = {P: i for i, P in enumerate(PAIRS4)}
    M = [[zero for _ in PAIRS4] for _ in PAIRS4]
    for col, (i, j) in enumerate(PAIRS4):
        # X(e_i ^ e_j) = X e_i ^ e_j + e_i ^ X e_j
        for l in range(4):
            c = X[l][i]
            if c and l != j:
                s = perm_sign((l, j))
                M[idx[tuple(sorted((l, j)))]][col] = M[idx[tuple(sorted((l, j)))]][col] + c * s
            c = X[l][j]
            if c and l != i:
                s = perm_sign((i, l))
                M[idx[tuple(sorted((i, l)))]][col] = M[idx[tuple(sorted((i, l)))]][col] + c * s
    return M


def _flat(m):
    return [x for row in m for x in row]


def _comm(a, b):
    ab, ba = linalg.matmul(a, b), linalg.matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def _eq(a, b):
    return all(x == y for r, s in zip(a, b) for x, y in zip(r, s))


@dataclass
class RepMap:
    source: list  # basis matrices of the source algebra
    form: list  # target bilinear form
    images: list  # image matrix per basis element
    bracket_ok: bool = False
    skew_ok: bool = False
    image_dim: int = 0
    signature: tuple = ()


def _check_rep(source, images, form, comm_src, coords_src):
    skew = all(_eq(linalg.matmul(linalg.transpose(M), form), [[-x for x in r] for r in linalg.matmul(form, M)]) for M in images)
    ok = True
    for i, j in combinations(range(len(source)), 2):
        c = coords_src(comm_src(source[i], source[j]))
        lhs = linalg.zeros(len(form), len(form))
        for ck, M in zip(c, images):
            if ck:
                for r in range(len(form)):
                    for s in range(len(form)):
                        lhs[r][s] += ck * M[r][s]
        if not _eq(lhs, _comm(images[i], images[j])):
            ok = False
            break
    return ok, skew


# --- sl(4, R) -> so(3, 3) ---------------------------------------------------------

def sl4_basis():
    basis = []
    for i in range(4):
        for j in range(4):
            if i != j:
                m = linalg.zeros(4, 4)
                m[i][j] = ONE
                basis.append(m)
    for k in range(3):
        m = linalg.zeros(4, 4)
        m[k][k], m[k + 1][k + 1] = ONE, -ONE
        basis.append(m)
    return basis


def _coords_in(basis):
    cols = linalg.transpose([_flat(m) for m in basis])

    def coords(m):
        sol = linalg.solve(cols, _flat(m))
        if sol is None:
            raise ArithmeticError("element outside the span")
        return sol

    return coords


def sl4_to_so33() -> RepMap:
    src = sl4_basis()
    W = wedge_pairing()
    imgs = [lambda2_action(X) for X in src]
    ok, skew = _check_rep(src, imgs, W, _comm, _coords_in(src))
    pos, neg, _ = linalg.inertia(W)
    return RepMap(src, W, imgs, ok, skew, linalg.rank([_flat(m) for m in imgs], 36), (pos, neg))


# --- su(2, 2) -> so(4, 2) ---------------------------------------------------------

HERM = (1, 1, -1, -1)


def su22_basis():
    """Real basis of su(2,2) = {X : X^* H + H X = 0, tr X = 0} as QI matrices."""
    anti = []  # anti-Hermitian K; X = H K
    for k in range(4):
        m = [[QI() for _ in range(4)] for _ in range(4)]
        m[k][k] = I_UNIT
        anti.append(m)
    for k, l in combinations(range(4), 2):
        m = [[QI() for _ in range(4)] for _ in range(4)]
        m[k][l], m[l][k] = QI(ONE), QI(-ONE)
        anti.append(m)
        m = [[QI() for _ in range(4)] for _ in range(4)]
        m[k][l], m[l][k] = I_UNIT, I_UNIT
        anti.append(m)
    us = [[[K[r][c] * HERM[r] for c in range(4)] for r in range(4)] for K in anti]
    # trace is purely imaginary on u(2,2); impose it vanishes
    row = [sum((X[r][r] for r in range(4)), QI()).im for X in us]
    out = []
    for v in linalg.nullspace([row], len(us)):
        M = [[QI() for _ in range(4)] for _ in range(4)]
        for c, X in zip(v, us):
            if c:
                for r in range(4):
                    for s in range(4):
                        M[r][s] = M[r][s] + X[r][s] * c
        out.append(M)
    return out


def _complement(P):
    return tuple(k for k in range(4) if k not in P)


def kappa(P):
    i, j = P
    k, l = _complement(P)
    return HERM[i] * HERM[j] * perm_sign((i, j, k, l))


def real_structure(vec):
    """rho(sum c_P e_P) = sum conj(c_P) kappa_P e_{P'} on Lambda^2 C^4."""
    idx = {P: i for i, P in enumerate(PAIRS4)}
    out = [QI() for _ in PAIRS4]
    for P, c in zip(PAIRS4, vec):
        if c:
            out[idx[_complement(P)]] = out[idx[_complement(P)]] + c.conj() * kappa(P)
    return out


def real_basis():
    """Basis of the rho-fixed real 6-space: e_P + kappa e_P', i e_P - i kappa e_P'."""
    idx = {P: i for i, P in enumerate(PAIRS4)}
    basis = []
    for P in PAIRS4:
        if 0 not in P:
            continue
        Pc = _complement(P)
        a = [QI() for _ in PAIRS4]
        a[idx[P]], a[idx[Pc]] = QI(ONE), QI(Fraction(kappa(P)))
        b = [QI() for _ in PAIRS4]
        b[idx[P]], b[idx[Pc]] = I_UNIT, I_UNIT * (-kappa(P))
        basis += [a, b]
    return basis


def _real_coords(vec, basis):
    """Real coordinates of a complex vector in a real basis, or None."""
    rows = []
    rhs = []
    for k in range(len(vec)):
        rows.append([b[k].re for b in basis]); rhs.append(vec[k].re)
        rows.append([b[k].im for b in basis]); rhs.append(vec[k].im)
    return linalg.solve(rows, rhs)


def su22_to_so42():
    src = su22_basis()
    rb = real_basis()
    W = wedge_pairing()
    rho_sq = all(real_structure(real_structure(e)) == e for e in (
        [QI(ONE) if i == k else QI() for i in range(6)] for k in range(6)))
    # induced real metric: minus the complex wedge pairing, real on the fixed space
    G = []
    real_metric = True
    for a in rb:
        row = []
        for b in rb:
            s = QI()
            for i in range(6):
                for j in range(6):
                    if W[i][j] and a[i] and b[j]:
                        s = s + a[i] * b[j] * W[i][j]
            if s.im:
                real_metric = False
            row.append(-s.re)
        G.append(row)
    imgs = []
    is_real = True
    for X in src:
        A = lambda2_action(X, QI())
        cols = []
        for b in rb:
            img = [sum((A[r][c] * b[c] for c in range(6) if A[r][c] and b[c]), QI()) for r in range(6)]
            rc = _real_coords(img, rb)
            if rc is None:
                is_real = False
                rc = [ZERO] * 6
            cols.append(rc)
        imgs.append(linalg.transpose(cols))

    flat_src = [[t for row in m for z in row for t in (z.re, z.im)] for m in src]
    src_cols = linalg.transpose(flat_src)

    def coords(m):
        sol = linalg.solve(src_cols, [t for row in m for z in row for t in (z.re, z.im)])
        if sol is None:
            raise ArithmeticError("bracket leaves su(2,2)")
        return sol

    ok, skew = _check_rep(src, imgs, G, ccomm, coords)
    pos, neg, _ = linalg.inertia(G)
    rep = RepMap(src, G, imgs, ok, skew, linalg.rank([_flat(m) for m in imgs], 36), (pos, neg))
    rep.rho_squared_identity = rho_sq
    rep.real_action = is_real
    rep.real_metric = real_metric
    return rep


# --- form stabilisers -----------------------------------------------------------

def so_basis(G):
    """Basis of {X : X^t G + G X = 0} as X = G^-1 S with S skew."""
    n = len(G)
    Gi = linalg.inverse(G)
    out = []
    for i, j in combinations(range(n), 2):
        S = linalg.zeros(n, n)
        S[i][j], S[j][i] = ONE, -ONE
        out.append(linalg.matmul(Gi, S))
    return out


class Form:
    """Alternating k-form stored by its components on sorted index tuples."""

    def __init__(self, dim, k, coeffs):
        self.dim, self.k = dim, k
        self.coeffs = {}
        for idx, c in coeffs.items():
            s = perm_sign(idx)
            if s and c:
                key = tuple(sorted(idx))
                self.coeffs[key] = self.coeffs.get(key, ZERO) + s * Fraction(c)
        self.coeffs = {k_: v for k_, v in self.coeffs.items() if v}

    def __call__(self, *idx):
        s = perm_sign(idx)
        return s * self.coeffs.get(tuple(sorted(idx)), ZERO) if s else ZERO

    def __add__(self, o):
        d = dict(self.coeffs)
        for k_, v in o.coeffs.items():
            d[k_] = d.get(k_, ZERO) + v
        return Form(self.dim, self.k, d)

    def scale(self, s):
        return Form(self.dim, self.k, {k_: v * s for k_, v in self.coeffs.items()})

    def wedge(self, o):
        d = {}
        for a, x in self.coeffs.items():
            for b, y in o.coeffs.items():
                idx = a + b
                s = perm_sign(idx)
                if s:
                    key = tuple(sorted(idx))
                    d[key] = d.get(key, ZERO) + s * x * y
        return Form(self.dim, self.k + o.k, d)


def action_rows(form: Form, basis):
    """Linear conditions on coefficients c so that (sum c_i X_i) . form = 0."""
    rows = []
    for idx in combinations(range(form.dim), form.k):
        row = []
        for X in basis:
            s = ZERO
            for slot in range(form.k):
                for l in range(form.dim):
                    x = X[l][idx[slot]]
                    if x:
                        t = list(idx)
                        t[slot] = l
                        s += x * form(*t)
            row.append(s)
        if any(row):
            rows.append(row)
    return rows


@dataclass
class FormStabilizer:
    ambient_dim: int
    form: Form
    basis: list

    @property
    def dim(self):
        return len(self.basis)


def four_form_stabilizer(form: Form, metric) -> FormStabilizer:
    amb = so_basis(metric)
    rows = action_rows(form, amb)
    coeffs = linalg.nullspace(rows, len(amb)) if rows else [
        [ONE if i == j else ZERO for j in range(len(amb))] for i in range(len(amb))
    ]
    n = len(metric)
    basis = []
    for c in coeffs:
        M = linalg.zeros(n, n)
        for ck, X in zip(c, amb):
            if ck:
                for r in range(n):
                    for s in range(n):
                        M[r][s] += ck * X[r][s]
        basis.append(M)
    return FormStabilizer(len(amb), form, basis)


def real_four_form_data():
    """(metric, Re v, mu) on R^8 = C^4 with coordinates (x1..x4, y1..y4).

    Metric Re h = sum H_k (x_k^2 + y_k^2) (signature (4,4)), mu = sum H_k dx_k ^ dy_k,
    v = dz_1 ^ dz_2 ^ dz_3 ^ dz_4.
    """
    metric = linalg.zeros(8, 8)
    for k in range(4):
        metric[k][k] = metric[4 + k][4 + k] = Fraction(HERM[k])
    re_v = {}
    for choice in product((0, 1), repeat=4):  # 0 -> dx, 1 -> i dy
        m = sum(choice)
        if m % 2:
            continue
        idx = tuple(k + 4 * c for k, c in enumerate(choice))
        re_v[idx] = Fraction((-1) ** (m // 2))
    mu = Form(8, 2, {(k, 4 + k): HERM[k] for k in range(4)})
    return metric, Form(8, 4, re_v), mu


def mu_squared(mu: Form) -> Form:
    """sum_{k<l} mu_k ^ mu_l, i.e. half of mu ^ mu."""
    return mu.wedge(mu).scale(Fraction(1, 2))


def su_four_form():
    metric, re_v, mu = real_four_form_data()
    return metric, re_v + mu_squared(mu).scale(-1)


def realify(X):
    """Complex 4x4 (QI) matrix as a real 8x8 matrix on (x, y)."""
    M = linalg.zeros(8, 8)
    for r in range(4):
        for c in range(4):
            z = X[r][c]
            M[r][c], M[r][4 + c] = z.re, -z.im
            M[4 + r][c], M[4 + r][4 + c] = z.im, z.re
    return M


def in_span(mats, M):
    flat = [_flat(m) for m in mats]
    n = len(flat[0])
    return linalg.rank(flat + [_flat(M)], n) == linalg.rank(flat, n)


def four_form_report():
    metric, lam = su_four_form()
    stab = four_form_stabilizer(lam, metric)
    metric0, re_v, mu = real_four_form_data()
    full = four_form_stabilizer(Form(8, 4, {}), metric)
    su = [realify(X) for X in su22_basis()]
    Jc = realify([[I_UNIT if r == c else QI() for c in range(4)] for r in range(4)])
    contains = all(in_span(stab.basis, M) for M in su)
    complex_linear = all(_eq(linalg.matmul(M, Jc), linalg.matmul(Jc, M)) for M in su)
    # alternative normalisation, for the record
    alt = four_form_stabilizer(re_v + mu.wedge(mu).scale(-1), metric)
    return {
        "dim": stab.dim,
        "ambient_dim": stab.ambient_dim,
        "zero_form_dim": full.dim,
        "contains_su22": contains,
        "su22_complex_linear": complex_linear,
        "dim_with_full_mu_wedge_mu": alt.dim,
    }


def sl4_split_report():
    """sl(4) on R^4 + R^4* preserves the pairing metric and both summands."""
    G = linalg.zeros(8, 8)
    for k in range(4):
        G[k][4 + k] = G[4 + k][k] = ONE
    ok_metric = ok_split = True
    for X in sl4_basis():
        M = linalg.zeros(8, 8)
        for r in range(4):
            for c in range(4):
                M[r][c] = X[r][c]
                M[4 + r][4 + c] = -X[c][r]
        ok_metric &= _eq(linalg.matmul(linalg.transpose(M), G), [[-x for x in r] for r in linalg.matmul(G, M)])
        ok_split &= all(M[r][c] == 0 for r in range(8) for c in range(8) if (r < 4) != (c < 4))
    return {"preserves_metric": ok_metric, "preserves_splitting": ok_split}


def theta_stabilizer() -> FormStabilizer:
    basis = octonion.theta_stabilizer()
    th = octonion.theta_tensor()
    form = Form(7, 3, {k: v for k, v in th.items() if k[0] < k[1] < k[2]})
    return FormStabilizer(21, form, basis)


def theta_stabilizer_report():
    st = theta_stabilizer()
    ders = [octonion.restrict_to_im(D) for D in octonion.derivation_algebra()]
    G = octonion.im_gram()
    in_so = all(_eq(linalg.matmul(linalg.transpose(X), G), [[-x for x in r] for r in linalg.matmul(G, X)]) for X in st.basis)
    return {"dim": st.dim, "equals_derivations": octonion.same_subspace(st.basis, ders), "in_so34": in_so}


# --- inclusion dimension counts -----------------------------------------------------

def _combine(coeffs, basis, n):
    out = []
    for c in coeffs:
        M = linalg.zeros(n, n)
        for ck, X in zip(c, basis):
            if ck:
                for r in range(n):
                    for s in range(n):
                        M[r][s] += ck * X[r][s]
        out.append(M)
    return out


def stabilizer_of_subspace(basis, W):
    """Elements X of span(basis) with X W inside W (W given by spanning vectors)."""
    n = len(basis[0])
    ann = linalg.nullspace(W, n)
    rows = []
    for phi in ann:
        for w in W:
            rows.append([sum(p * q for p, q in zip(phi, linalg.matvec(X, w))) for X in basis])
    coeffs = linalg.nullspace(rows, len(basis)) if rows else [
        [ONE if i == j else ZERO for j in range(len(basis))] for i in range(len(basis))
    ]
    return _combine(coeffs, basis, n)


def annihilator_of_vector(basis, u):
    n = len(basis[0])
    rows = [[linalg.matvec(X, u)[r] for X in basis] for r in range(n)]
    return _combine(linalg.nullspace(rows, len(basis)), basis, n)


def span_dim(mats):
    if not mats:
        return 0
    flat = [_flat(m) for m in mats]
    return linalg.rank(flat, len(flat[0]))


def intersection_dim(a, b):
    return span_dim(a) + span_dim(b) - span_dim(a + b)


def _metric_J(n, extra=None):
    """Anti-diagonal metric on R^(2n+1), optionally with an extra diagonal entry."""
    size = 2 * n + 1 + (1 if extra is not None else 0)
    J = linalg.zeros(size, size)
    for i in range(n):
        J[i][n + 1 + i] = J[n + 1 + i][i] = ONE
    J[n][n] = ONE
    if extra is not None:
        J[size - 1][size - 1] = Fraction(extra)
    return J


def _vec(size, entries):
    v = [ZERO] * size
    for k, c in entries.items():
        v[k] = Fraction(c)
    return v


def _pad(M, size):
    out = linalg.zeros(size, size)
    for r, row in enumerate(M):
        for c, x in enumerate(row):
            out[r][c] = x
    return out


def fefferman_dims(case: str, n: int = 3, transverse: bool = True) -> dict:
    """Intersection dimensions for the inclusions g in g-hat.

    case: "spinorial" (so(n+1,n) in so(n+1,n+1)), "cr" (so(4,2) in so(4,3)),
    "lagrangian" (so(3,3) in so(4,3), transverse or not).
    """
    if case == "spinorial":
        Jh = _metric_J(n, extra=-1)
        size = 2 * n + 2
        ghat = so_basis(Jh)
        g = [_pad(X, size) for X in so_basis(_metric_J(n))]
        V = [_vec(size, {i: 1}) for i in range(n)]
        Vhat = V + [_vec(size, {n: 1, size - 1: 1})]
        phat = stabilizer_of_subspace(ghat, Vhat)
        p = stabilizer_of_subspace(g, V)
        inter = intersection_dim(g, phat)
        p_in_phat = all(in_span(phat, X) for X in p)
        out = {
            "case": "spinorial", "n": n,
            "dim_ghat": span_dim(ghat), "dim_phat": span_dim(phat),
            "dim_g": span_dim(g), "dim_p": span_dim(p),
            "dim_g_cap_phat": inter,
            "dim_g_plus_phat": span_dim(g + phat),
        }
        out["g_cap_phat_is_p"] = p_in_phat and inter == out["dim_p"]
        out["transverse"] = out["dim_g_plus_phat"] == out["dim_ghat"]
        return out

    J = _metric_J(3)  # R^(4,3), coordinates e1..e3, e0, f1..f3
    ghat = so_basis(J)
    V = [_vec(7, {i: 1}) for i in range(3)]
    phat = stabilizer_of_subspace(ghat, V)
    if case == "cr":
        u = _vec(7, {0: 1, 4: -1})  # e1 - f1, negative
        C = [_vec(7, {1: 1}), _vec(7, {2: 1})]
    elif case == "lagrangian":
        u = _vec(7, {0: 1, 4: 1}) if transverse else _vec(7, {3: 1})
        # V intersected with the orthogonal complement of u
        uperp = [sum(J[r][c] * u[c] for c in range(7)) for r in range(7)]
        C = [_flat([[x] for x in v]) for v in _span_intersect_perp(V, uperp)]
    else:
        raise ValueError(f"unknown case {case!r}")
    norm_u = sum(u[r] * J[r][c] * u[c] for r in range(7) for c in range(7))
    if norm_u == 0:
        raise ValueError("degenerate embedding: u is null")
    g = annihilator_of_vector(ghat, u)
    p = stabilizer_of_subspace(g, C)
    inter = intersection_dim(g, phat)
    out = {
        "case": case,
        "dim_ghat": span_dim(ghat), "dim_phat": span_dim(phat),
        "dim_g": span_dim(g), "dim_p": span_dim(p),
        "dim_g_cap_phat": inter,
        "dim_g_plus_phat": span_dim(g + phat),
        "u_norm_sign": 1 if norm_u > 0 else -1,
    }
    if case == "lagrangian":
        out["transverse_choice"] = transverse
    out["chain"] = [out["dim_ghat"], out["dim_phat"], out["dim_g"], out["dim_p"], inter]
    out["rank_identity"] = inter + out["dim_g_plus_phat"] == out["dim_g"] + out["dim_phat"]
    out["transverse"] = out["dim_g_plus_phat"] == out["dim_ghat"]
    return out


def _span_intersect_perp(V, functional):
    """Vectors of span(V) killed by a linear functional."""
    vals = [[sum(f * x for f, x in zip(functional, v)) for v in V]]
    coeffs = linalg.nullspace(vals, len(V))
    return [[sum(c * v[k] for c, v in zip(cf, V)) for k in range(len(V[0]))] for cf in coeffs]
