"""Sparse multivariate polynomials with rational coefficients, and
polynomial vector fields.

A Poly is a dict {exponent tuple: Fraction}; all variables of a ring share
one exponent length ``nvars``. Vector fields map a coordinate index to a
Poly coefficient of d/d(coordinate).
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = Fraction(c)

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i, power=1, coeff=1):
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{e}" for e, c in sorted(self.terms.items()))

    def copy(self):
        p = Poly(self.nvars)
        p.terms = dict(self.terms)
        return p

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Fraction(other)
            if not other:
                return Poly(self.nvars)
            p = Poly(self.nvars)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ee = list(e)
                ee[i] = k - 1
                out[tuple(ee)] = c * k
        return Poly(self.nvars, out)

    def evaluate(self, point):
        s = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            s += t
        return s

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, ZERO)


class PolyVF:
    """Vector field sum_c f_c d/dz_c with Poly coefficients."""

    __slots__ = ("nvars", "comps")

    def __init__(self, nvars, comps=None):
        self.nvars = nvars
        self.comps = {}
        if comps:
            for k, p in comps.items():
                if not isinstance(p, Poly):
                    p = Poly.const(nvars, p)
                if p:
                    self.comps[k] = p

    @classmethod
    def coordinate(cls, nvars, i):
        return cls(nvars, {i: Poly.const(nvars, 1)})

    def __bool__(self):
        return bool(self.comps)

    def __eq__(self, other):
        return self.comps == other.comps

    def __repr__(self):
        return "{" + ", ".join(f"d{k}: {p}" for k, p in sorted(self.comps.items())) + "}"

    def __add__(self, other):
        out = dict(self.comps)
        for k, p in other.comps.items():
            out[k] = out[k] + p if k in out else p
        return PolyVF(self.nvars, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, f):
        """Multiply by a scalar or Poly."""
        return PolyVF(self.nvars, {k: p * f for k, p in self.comps.items()})

    def apply(self, f: Poly) -> Poly:
        out = Poly(self.nvars)
        for k, p in self.comps.items():
            d = f.diff(k)
            if d:
                out = out + p * d
        return out

    def at(self, point):
        return {k: p.evaluate(point) for k, p in self.comps.items()}


def vf_bracket(X: PolyVF, Y: PolyVF) -> PolyVF:
    """[X, Y]^k = X(Y^k) - Y(X^k)."""
    if X.nvars != Y.nvars:
        raise ValueError("vector fields live on different spaces")
    out = {}
    for k in set(X.comps) | set(Y.comps):
        p = Poly(X.nvars)
        if k in Y.comps:
            p = p + X.apply(Y.comps[k])
        if k in X.comps:
            p = p - Y.apply(X.comps[k])
        if p:
            out[k] = p
    return PolyVF(X.nvars, out)
