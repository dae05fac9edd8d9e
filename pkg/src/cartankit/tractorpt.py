"""Pointwise standard tractors T = H* + R + H for the rank n model (n = 3 by default).

A tractor is (v, tau, X) with v in H* (top slot, the invariant subspace),
tau a scalar and X in H. In the standard representation of so(n+1, n)
(exactalg block form) the column vector is simply (v, tau, X), and

    h(t1, t2) = 1/2 (v1(X2) + v2(X1) + tau1 tau2) = 1/2 t1^T J t2.

Braces are algebraic brackets in exactalg: Y2 in g_2 is a skew matrix B
(b_jk coordinates), X in g_-1 is sum X_i x_i, v in g_1 is sum v_i v_i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .exactalg import LieElement, bracket, graded_basis, pairs

ZERO = Fraction(0)


def _vec(xs):
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class TractorVec:
    v: tuple
    tau: Fraction
    X: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", _vec(self.v))
        object.__setattr__(self, "X", _vec(self.X))
        object.__setattr__(self, "tau", Fraction(self.tau))
        if len(self.v) != len(self.X):
            raise ValueError("v and X must have the same length")

    @property
    def n(self):
        return len(self.X)

    def column(self):
        return list(self.v) + [self.tau] + list(self.X)

    @classmethod
    def from_column(cls, col):
        n = (len(col) - 1) // 2
        return cls(col[:n], col[n], col[n + 1:])

    def __add__(self, o):
        return TractorVec.from_column([a + b for a, b in zip(self.column(), o.column())])

    def __mul__(self, s):
        return TractorVec.from_column([a * s for a in self.column()])

    __rmul__ = __mul__


@dataclass(frozen=True)
class UpsilonData:
    """Y1 in H* and Y2 as a skew n x n array (the g_2 block B)."""

    u1: tuple
    u2: tuple

    def __post_init__(self):
        object.__setattr__(self, "u1", _vec(self.u1))
        object.__setattr__(self, "u2", tuple(_vec(r) for r in self.u2))
        n = len(self.u1)
        if any(self.u2[i][j] != -self.u2[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Y2 must be skew")


@dataclass(frozen=True)
class ConnectionData:
    """Inputs of the tractor derivative at a point along Z = Z_-2 + Z_-1.

    nabla_* are the values of the underlying derivative, z2 and p2 are skew
    arrays (C block of Z_-2, B block of P(Z)_2), z1 and p1 are vectors.
    """

    nabla_v: tuple
    nabla_tau: Fraction
    nabla_X: tuple
    z1: tuple
    z2: tuple
    p1: tuple
    p2: tuple


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def tractor_metric(t1: TractorVec, t2: TractorVec) -> Fraction:
    return (dot(t2.v, t1.X) + dot(t1.v, t2.X) + t1.tau * t2.tau) / 2


def gram(n=3):
    basis = [TractorVec.from_column([Fraction(int(i == j)) for j in range(2 * n + 1)])
             for i in range(2 * n + 1)]
    return [[tractor_metric(a, b) for b in basis] for a in basis]


def signature(n=3):
    pos, neg, zero = linalg.inertia(gram(n))
    return pos, neg


# --- algebraic brackets -----------------------------------------------------------

def _g2(B):
    n = len(B)
    gb = graded_basis(n)
    return LieElement.from_dict(n, {gb.index(("b", j, k)): B[j][k] for j, k in pairs(n)})


def _gm2(C):
    n = len(C)
    gb = graded_basis(n)
    # y_jk has C[k][j] = +1
    return LieElement.from_dict(n, {gb.index(("y", j, k)): C[k][j] for j, k in pairs(n)})


def _read(n, z, kind):
    gb = graded_basis(n)
    return tuple(z.coords[gb.index((kind, i))] for i in range(n))


def brace_g2_h(B, X):
    """{Y2, X} in H* = g_1."""
    n = len(X)
    gb = graded_basis(n)
    x = LieElement.from_dict(n, {gb.index(("x", i)): X[i] for i in range(n)})
    return _read(n, bracket(_g2(B), x), "v")


def brace_gm2_hstar(C, v):
    """{Z_-2, v} in H = g_-1."""
    n = len(v)
    gb = graded_basis(n)
    w = LieElement.from_dict(n, {gb.index(("v", i)): v[i] for i in range(n)})
    return _read(n, bracket(_gm2(C), w), "x")


# --- operations -------------------------------------------------------------------

def change_splitting(t: TractorVec, ups: UpsilonData) -> TractorVec:
    u1 = ups.u1
    ux = dot(u1, t.X)
    br = brace_g2_h(ups.u2, t.X)
    v = [a + t.tau * u - b - ux * u / 2 for a, u, b in zip(t.v, u1, br)]
    return TractorVec(v, t.tau - ux, t.X)


def tractor_deriv(t: TractorVec, d: ConnectionData) -> TractorVec:
    p1, z1 = _vec(d.p1), _vec(d.z1)
    br_p = brace_g2_h(d.p2, t.X)
    br_z = brace_gm2_hstar(d.z2, t.v)
    v = [a + t.tau * p - b for a, p, b in zip(_vec(d.nabla_v), p1, br_p)]
    tau = Fraction(d.nabla_tau) - dot(t.v, z1) - dot(p1, t.X)
    X = [a + t.tau * z + b for a, z, b in zip(_vec(d.nabla_X), z1, br_z)]
    return TractorVec(v, tau, X)


def projection_chain(t: TractorVec):
    """Images under T -> H + R and T -> H (the second is pi^2)."""
    return (t.tau, t.X), t.X


def pi2(t: TractorVec):
    return t.X


# --- standard representation oracle ------------------------------------------------

def _act(mat, t):
    return TractorVec.from_column(linalg.matvec(mat, t.column()))


def upsilon_element(ups: UpsilonData) -> LieElement:
    """p_+ element whose exponential realizes change_splitting.

    The displayed law corresponds to exp(Y1 - Y2) with Y2 read as a g_2
    element, i.e. T_2^* is identified with g_2 up to sign.
    """
    n = len(ups.u1)
    gb = graded_basis(n)
    d = {gb.index(("v", i)): ups.u1[i] for i in range(n)}
    for j, k in pairs(n):
        d[gb.index(("b", j, k))] = -ups.u2[j][k]
    return LieElement.from_dict(n, d)


def exp_nilpotent(mat):
    """exp of a matrix with mat^3 = 0."""
    m2 = linalg.matmul(mat, mat)
    size = len(mat)
    return [[Fraction(int(i == j)) + mat[i][j] + m2[i][j] / 2 for j in range(size)]
            for i in range(size)]


def change_splitting_rep(t, ups):
    return _act(exp_nilpotent(upsilon_element(ups).matrix()), t)


def tractor_deriv_rep(t, d: ConnectionData):
    """nabla-values plus the standard action of Z + P(Z) (P_2 entering with minus)."""
    n = t.n
    gb = graded_basis(n)
    dd = {gb.index(("x", i)): Fraction(d.z1[i]) for i in range(n)}
    dd.update({gb.index(("v", i)): Fraction(d.p1[i]) for i in range(n)})
    for j, k in pairs(n):
        dd[gb.index(("y", j, k))] = Fraction(d.z2[k][j])
        dd[gb.index(("b", j, k))] = -Fraction(d.p2[j][k])
    alg = _act(LieElement.from_dict(n, dd).matrix(), t)
    return alg + TractorVec(d.nabla_v, d.nabla_tau, d.nabla_X)


def compose_upsilon(a: UpsilonData, b: UpsilonData) -> UpsilonData:
    """Single Y with change(change(t, a), b) == change(t, c).

    exp(B) exp(A) = exp(A + B + 1/2 [B, A]) since [A, B] lies in g_2.
    """
    ea, eb = upsilon_element(a), upsilon_element(b)
    c = ea + eb + bracket(eb, ea) * Fraction(1, 2)
    n = len(a.u1)
    gb = graded_basis(n)
    u1 = [c.coords[gb.index(("v", i))] for i in range(n)]
    u2 = [[ZERO] * n for _ in range(n)]
    for j, k in pairs(n):
        val = -c.coords[gb.index(("b", j, k))]
        u2[j][k], u2[k][j] = val, -val
    return UpsilonData(u1, u2)


# --- random fixtures --------------------------------------------------------------

def _rq(rng, span=5):
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def _skew(rng, n):
    m = [[ZERO] * n for _ in range(n)]
    for j, k in pairs(n):
        x = _rq(rng)
        m[j][k], m[k][j] = x, -x
    return m


def random_tractor(rng, n=3):
    return TractorVec([_rq(rng) for _ in range(n)], _rq(rng), [_rq(rng) for _ in range(n)])


def random_upsilon(rng, n=3):
    return UpsilonData([_rq(rng) for _ in range(n)], _skew(rng, n))


def random_connection_data(rng, n=3):
    return ConnectionData(
        [_rq(rng) for _ in range(n)], _rq(rng), [_rq(rng) for _ in range(n)],
        [_rq(rng) for _ in range(n)], _skew(rng, n), [_rq(rng) for _ in range(n)], _skew(rng, n),
    )


def tractor_report(seed=0, trials=200, n=3) -> dict:
    rng = random.Random(seed)
    e = lambda i: [Fraction(int(i == j)) for j in range(n)]
    z = [ZERO] * n
    examples = {
        "h_tau_tau": tractor_metric(TractorVec(z, 1, z), TractorVec(z, 1, z)) == Fraction(1, 2),
        "h_v_X": tractor_metric(TractorVec(e(0), 0, z), TractorVec(z, 0, e(0))) == Fraction(1, 2),
        "h_null_sanity": tractor_metric(TractorVec(e(0), 0, [-x for x in e(0)]),
                                        TractorVec(e(0), 0, [-x for x in e(0)])) == -1,
    }
    inv = split_oracle = pi_inv = comp = deriv_oracle = compat = additive = True
    for _ in range(trials):
        t1, t2 = random_tractor(rng, n), random_tractor(rng, n)
        u, u2 = random_upsilon(rng, n), random_upsilon(rng, n)
        c1, c2 = change_splitting(t1, u), change_splitting(t2, u)
        inv &= tractor_metric(c1, c2) == tractor_metric(t1, t2)
        split_oracle &= c1 == change_splitting_rep(t1, u)
        pi_inv &= pi2(c1) == pi2(t1)
        pi_inv &= change_splitting(TractorVec(t1.v, 0, z), u) == TractorVec(t1.v, 0, z)
        comp &= change_splitting(c1, u2) == change_splitting(t1, compose_upsilon(u, u2))
        d = random_connection_data(rng, n)
        dt1 = tractor_deriv(t1, d)
        deriv_oracle &= dt1 == tractor_deriv_rep(t1, d)
        # Leibniz: feed nabla-values of t2 separately, Z.h computed from them
        d2 = random_connection_data(rng, n)
        d2 = ConnectionData(d2.nabla_v, d2.nabla_tau, d2.nabla_X, d.z1, d.z2, d.p1, d.p2)
        dt2 = tractor_deriv(t2, d2)
        zh = tractor_metric(TractorVec(d.nabla_v, d.nabla_tau, d.nabla_X), t2) + tractor_metric(
            t1, TractorVec(d2.nabla_v, d2.nabla_tau, d2.nabla_X))
        compat &= tractor_metric(dt1, t2) + tractor_metric(t1, dt2) == zh
        zero_d = ConnectionData(z, 0, z, d.z1, d.z2, d.p1, d.p2)
        additive &= tractor_deriv(t1 + t2, zero_d) == tractor_deriv(t1, zero_d) + tractor_deriv(t2, zero_d)
    sig = signature(n)
    return {
        "examples": examples,
        "signature": list(sig),
        "signature_is_n_plus_1_n": sig == (n + 1, n),
        "trials": trials,
        "seed": seed,
        "h_invariant": inv,
        "change_matches_exp": split_oracle,
        "pi2_and_Hstar_invariant": pi_inv,
        "composition": comp,
        "deriv_matches_rep": deriv_oracle,
        "metric_compatible": compat,
        "additive": additive,
    }
