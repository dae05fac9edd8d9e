"""Chains in Lambda^c p_perp (x) g, the Kostant codifferential, and H_2(p_perp, g).

A basis chain is a pair (slots, v): ``slots`` a strictly increasing tuple of
p_perp basis indices, ``v`` a g basis index (indices from exactalg).

    d*(u_1 ^ ... ^ u_c (x) v)
        = sum_{j<k} (-1)^(j+k+1) [u_j, u_k] ^ u_1 ^ ..^u_j^..^u_k^.. ^ u_c (x) v
        + sum_j (-1)^(j+1) u_1 ^ ..^u_j^.. ^ u_c (x) [u_j, v]

(hats mark omitted factors, indices 1-based). The sign on the first sum is
the one that makes d* square to zero while keeping d*(u (x) v) = [u, v].
Homology is ker(d* on Lambda^2) / im(d* from Lambda^3), computed block by
block. Blocks are torus weights by default,
which refine the homogeneity grading, so each homogeneity block is a direct
sum of weight blocks.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .exactalg import graded_basis, structure_constants

ZERO = Fraction(0)


@dataclass(frozen=True)
class HomogeneityIndex:
    slots: tuple  # grades of the p_perp factors
    value: int  # grade of the g factor

    @property
    def total(self):
        return sum(self.slots) + self.value


@dataclass
class Chain:
    """Sparse element of Lambda^c p_perp (x) g."""

    n: int
    c: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (slots, v), a in self.coeffs.items():
            key, sign = _normalize(slots)
            if sign == 0 or not a:
                continue
            if len(key) != self.c:
                raise ValueError("slot count does not match the exterior degree")
            k = (key, v)
            clean[k] = clean.get(k, ZERO) + sign * Fraction(a)
        self.coeffs = {k: a for k, a in clean.items() if a}

    def __add__(self, other):
        d = dict(self.coeffs)
        for k, a in other.coeffs.items():
            d[k] = d.get(k, ZERO) + a
        return Chain(self.n, self.c, d)

    def __mul__(self, s):
        return Chain(self.n, self.c, {k: a * s for k, a in self.coeffs.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (self.n, self.c, self.coeffs) == (other.n, other.c, other.coeffs)

    def homogeneities(self):
        gb = graded_basis(self.n)
        return {
            k: HomogeneityIndex(tuple(gb.grades[s] for s in k[0]), gb.grades[k[1]])
            for k in self.coeffs
        }


def _normalize(slots):
    """Sort a slot tuple; return (sorted, sign) with sign 0 on repeats."""
    s = list(slots)
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
            elif s[j] == s[j + 1]:
                return tuple(s), 0
    if len(set(s)) != len(s):
        return tuple(s), 0
    return tuple(s), sign


def _codiff_basis(n, slots, v):
    """d* of one basis chain as {(slots, v): coeff}."""
    sc = structure_constants(n)
    out = defaultdict(int)
    c = len(slots)
    for j in range(c):
        for k in range(j + 1, c):
            br = sc.get((slots[j], slots[k]))
            if not br:
                continue
            rest = slots[:j] + slots[j + 1:k] + slots[k + 1:]
            sgn = 1 if (j + k) % 2 else -1  # (-1)^(j+k+1)
            for u, a in br.items():
                key, s2 = _normalize((u,) + rest)
                if s2:
                    out[(key, v)] += sgn * s2 * a
    for j in range(c):
        br = sc.get((slots[j], v))
        if not br:
            continue
        rest = slots[:j] + slots[j + 1:]
        sgn = 1 if j % 2 == 0 else -1  # (-1)^(j+1), 1-based j
        for w, a in br.items():
            out[(rest, w)] += sgn * a
    return {k: a for k, a in out.items() if a}


def codifferential(chain: Chain) -> Chain:
    if chain.c < 1:
        raise ValueError("codifferential needs exterior degree c >= 1")
    out = defaultdict(lambda: ZERO)
    for (slots, v), a in chain.coeffs.items():
        for k, b in _codiff_basis(chain.n, slots, v).items():
            out[k] += a * b
    return Chain(chain.n, chain.c - 1, dict(out))


def minimal_homogeneity(chain: Chain) -> int:
    if not chain:
        raise ValueError("zero chain has no minimal homogeneity")
    return min(h.total for h in chain.homogeneities().values())


def _key(n, slots, v, blocking):
    gb = graded_basis(n)
    if blocking == "homogeneity":
        return sum(gb.grades[s] for s in slots) + gb.grades[v]
    w = list(gb.weights[v])
    for s in slots:
        for i, x in enumerate(gb.weights[s]):
            w[i] += x
    return tuple(w)


@lru_cache(maxsize=None)
def chain_blocks(n, c, blocking="weight", order=None):
    """{block key: [basis chains]} for Lambda^c p_perp (x) g.

    ``order`` optionally permutes the enumeration (tuple of g indices) to
    check basis-order independence.
    """
    gb = graded_basis(n)
    pp = gb.p_perp
    gidx = list(order) if order else list(range(gb.dim))
    blocks = defaultdict(list)
    for slots in combinations(pp, c):
        for v in gidx:
            blocks[_key(n, slots, v, blocking)].append((slots, v))
    return dict(blocks)


def codiff_matrix(n, c, key, blocking="weight", order=None):
    """Matrix of d*: block of Lambda^c -> block of Lambda^(c-1) (rows = targets)."""
    src = chain_blocks(n, c, blocking, order).get(key, [])
    tgt = chain_blocks(n, c - 1, blocking, order).get(key, [])
    pos = {b: i for i, b in enumerate(tgt)}
    m = [[0] * len(src) for _ in tgt]
    for j, (slots, v) in enumerate(src):
        for k, a in _codiff_basis(n, slots, v).items():
            m[pos[k]][j] += a
    return m, src, tgt


def _block_homology(n, key, blocking, order=None):
    lam2 = chain_blocks(n, 2, blocking, order).get(key, [])
    if not lam2:
        return None
    d2, _, _ = codiff_matrix(n, 2, key, blocking, order)
    d3, src3, _ = codiff_matrix(n, 3, key, blocking, order)
    r2 = linalg.rank(d2, len(lam2)) if d2 else 0
    # image of d3 lives in lam2; use its columns as rows
    d3cols = linalg.transpose(d3) if src3 else []
    r3 = linalg.rank(d3cols, len(lam2)) if d3cols else 0
    return {
        "dim_chains": len(lam2),
        "rank_d2": r2,
        "rank_d3": r3,
        "dim_ker": len(lam2) - r2,
        "dim": len(lam2) - r2 - r3,
        "d2": d2,
        "d3cols": d3cols,
        "basis": lam2,
    }


def homology_blocks(n, blocking="weight", order=None):
    """{block key: block data} for blocks with nonzero H_2."""
    out = {}
    for key in chain_blocks(n, 2, blocking, order):
        h = _block_homology(n, key, blocking, order)
        if h and h["dim"]:
            out[key] = h
    return out


def _max_n():
    import os

    return int(os.environ.get("CARTANKIT_MAX_N", "5"))


def homology_dims(n, blocking="weight", order=None) -> dict:
    """{homogeneity: dim H_2} over homogeneities with nonzero homology."""
    if n < 2 or n > _max_n():
        raise ValueError(f"n must lie in 2..{_max_n()}")
    gb = graded_basis(n)
    dims = defaultdict(int)
    for key, h in homology_blocks(n, blocking, order).items():
        hom = key if blocking == "homogeneity" else sum(key)
        dims[hom] += h["dim"]
    return dict(sorted(dims.items()))


def slot_type(n, slots, v):
    gb = graded_basis(n)
    return (tuple(sorted(gb.grades[s] for s in slots)), gb.grades[v])


def _representable_in(h, allowed):
    """Every class in the block has a cycle representative supported on ``allowed``."""
    basis = h["basis"]
    cols = [i for i, b in enumerate(basis) if b in allowed]
    if not cols:
        return h["dim"] == 0
    d2 = h["d2"]
    sub = [[row[i] for i in cols] for row in d2] if d2 else []
    ker_sub = linalg.nullspace(sub, len(cols)) if sub else [
        [Fraction(int(i == j)) for j in range(len(cols))] for i in range(len(cols))
    ]
    full = []
    for vec in ker_sub:
        row = [ZERO] * len(basis)
        for i, c in zip(cols, vec):
            row[i] = c
        full.append(row)
    rows = full + [list(map(Fraction, r)) for r in h["d3cols"]]
    return linalg.rank(rows, len(basis)) == h["dim_ker"]


def homology_location(n, blocking="weight") -> dict:
    """Which slot types carry the homology.

    Returns per-homogeneity dims, the slot types each nonzero block can be
    represented in on its own, and whether a single slot type carries it all.
    """
    blocks = homology_blocks(n, blocking)
    types = set()
    for h in blocks.values():
        for slots, v in h["basis"]:
            types.add(slot_type(n, slots, v))
    carriers = []
    for t in sorted(types):
        ok = all(
            _representable_in(h, {b for b in h["basis"] if slot_type(n, *b) == t})
            for h in blocks.values()
        )
        if ok:
            carriers.append(t)
    dims = defaultdict(int)
    for key, h in blocks.items():
        dims[key if blocking == "homogeneity" else sum(key)] += h["dim"]
    return {
        "n": n,
        "dims_by_homogeneity": dict(sorted(dims.items())),
        "total": sum(dims.values()),
        "carrier_types": carriers,
    }


def torsion_dichotomy_report(n) -> dict:
    """Curvature type (value grade >= 0) vs torsion type (value grade < 0)."""
    blocks = homology_blocks(n)
    gb = graded_basis(n)
    curv = all(
        _representable_in(h, {b for b in h["basis"] if gb.grades[b[1]] >= 0})
        for h in blocks.values()
    )
    tors = all(
        _representable_in(h, {b for b in h["basis"] if gb.grades[b[1]] < 0})
        for h in blocks.values()
    )
    loc = homology_location(n)
    if curv and not tors:
        verdict = "torsion-free class"
    elif tors and not curv:
        verdict = "torsion class"
    else:
        verdict = "mixed"
    return {
        "n": n,
        "verdict": verdict,
        "curvature_type": curv,
        "torsion_type": tors,
        "dims_by_homogeneity": loc["dims_by_homogeneity"],
        "carrier_types": [[list(s), v] for s, v in loc["carrier_types"]],
    }


def codiff_square_zero(n, c) -> bool:
    """d* o d* == 0 on Lambda^c, checked blockwise as an exact matrix product."""
    for key in chain_blocks(n, c):
        m1, src, mid = codiff_matrix(n, c, key)
        if c - 1 < 1 or not mid:
            continue
        m2, _, _ = codiff_matrix(n, c - 1, key)
        for row in m2:
            for j in range(len(src)):
                if sum(row[k] * m1[k][j] for k in range(len(mid)) if row[k]):
                    return False
    return True
