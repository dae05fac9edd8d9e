"""Polynomial frames for free n-distributions, their curvature, normality and
infinitesimal holonomy.

Coordinates: x_1..x_n, then y_jk (j<k) in lexicographic order. The flat frame
is Y_jk = d/dy_jk and X_i = d/dx_i - sum_{p>i} x_p Y_ip, so [X_j, X_k] = Y_jk.
Modified frames add polynomial multiples of Y fields to X_1 (and X_2).

The frame is identified with g_- by X_i -> x_i, Y_jk -> y_jk (exactalg basis).
With the flat connection annihilating the frame and rho tensor zero,

    kappa(U, V) = phi([U, V]) - [phi U, phi V],

so the flat frame has kappa = 0 and kappa(Y_12, X_1 + y_12 Y_34) = +Y_34.
The tractor derivative of a g-valued section s along a frame field Z is
Z(s) + [phi Z, s].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial

from . import linalg
from .exactalg import bracket_coords, graded_basis, trace_gram
from .poly import Poly, PolyVF, vf_bracket

ZERO = Fraction(0)


class ModelError(ValueError):
    """Invalid model description."""


@dataclass
class Modification:
    """kind is 'none', 'single_y34' or 'general'.

    beta maps (j, k) with 3 <= j < k <= n, gamma and delta map j with
    4 <= j <= n; all indices 1-based, values positive integers.
    ``extra`` holds raw additions (frame index i, Poly coefficient, (j, k))
    with 0-based indices, for custom perturbations.
    """

    kind: str = "none"
    beta: dict = field(default_factory=dict)
    gamma: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)
    extra: list = field(default_factory=list)

    def summands(self):
        return len(self.beta) + len(self.gamma) + len(self.delta)


def _check_injective(name, table):
    vals = list(table.values())
    for v in vals:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ModelError(f"{name} values must be positive integers, got {v!r}")
    if len(set(vals)) != len(vals):
        raise ModelError(f"{name} must be injective")


class FrameModel:
    def __init__(self, n, modification=None):
        mod = modification or Modification()
        if n < 2:
            raise ModelError("n must be at least 2")
        self.n = n
        self.mod = mod
        self.ypairs = list(combinations(range(n), 2))
        self.nvars = n + len(self.ypairs)
        self.labels = [("X", i) for i in range(n)] + [("Y", j, k) for j, k in self.ypairs]
        self.gb = graded_basis(n)
        self.phi = [self.gb.index(("x", i)) for i in range(n)] + [
            self.gb.index(("y", j, k)) for j, k in self.ypairs
        ]
        self._validate()
        self.frame = self._build()

    # coordinates
    def yvar(self, j, k):
        return self.n + self.ypairs.index((min(j, k), max(j, k)))

    def frame_index(self, label):
        return self.labels.index(label)

    def label_str(self, idx):
        lab = self.labels[idx]
        if lab[0] == "X":
            s = f"X{lab[1] + 1}"
            if self._modified.get(lab[1]):
                s += "'"
            return s
        return f"Y{lab[1] + 1}{lab[2] + 1}"

    def _validate(self):
        m, n = self.mod, self.n
        if m.kind not in ("none", "single_y34", "general"):
            raise ModelError(f"unknown modification {m.kind!r}")
        if m.kind == "single_y34" and n < 4:
            raise ModelError("single_y34 needs n >= 4")
        if m.kind == "general":
            if n < 3:
                raise ModelError("general modification needs n >= 3")
            for (j, k) in m.beta:
                if not (3 <= j < k <= n):
                    raise ModelError(f"beta index ({j},{k}) out of range")
            for name, t in (("gamma", m.gamma), ("delta", m.delta)):
                for j in t:
                    if not (4 <= j <= n):
                        raise ModelError(f"{name} index {j} out of range")
            _check_injective("beta", m.beta)
            _check_injective("gamma", m.gamma)
            _check_injective("delta", m.delta)

    def additions(self):
        """[(frame index, Poly coefficient, (j, k) 0-based)] added to X fields."""
        m, N = self.mod, self.nvars
        out = []
        if m.kind == "single_y34":
            out.append((0, Poly.var(N, self.yvar(0, 1)), (2, 3)))
        elif m.kind == "general":
            for (j, k), b in sorted(m.beta.items()):
                out.append((0, Poly.var(N, self.yvar(0, 1), b, Fraction(1, factorial(b))), (j - 1, k - 1)))
            for j, c in sorted(m.gamma.items()):
                out.append((0, Poly.var(N, self.yvar(0, 2), c, Fraction(1, factorial(c))), (1, j - 1)))
            for j, d in sorted(m.delta.items()):
                out.append((1, Poly.var(N, self.yvar(1, 2), d, Fraction(1, factorial(d))), (0, j - 1)))
        out.extend(m.extra)
        return out

    def _build(self):
        N, n = self.nvars, self.n
        frame = []
        for i in range(n):
            comps = {i: Poly.const(N, 1)}
            for p in range(i + 1, n):
                comps[self.yvar(i, p)] = -Poly.var(N, p)
            frame.append(PolyVF(N, comps))
        self._modified = {}
        for i, coeff, (j, k) in self.additions():
            frame[i] = frame[i] + PolyVF(N, {self.yvar(j, k): coeff})
            self._modified[i] = True
        for j, k in self.ypairs:
            frame.append(PolyVF.coordinate(N, self.yvar(j, k)))
        return frame

    # frame algebra
    def expand(self, V: PolyVF):
        """Frame coefficients {frame index: Poly} of a vector field."""
        n = self.n
        out = {}
        a = {}
        for i in range(n):
            p = V.comps.get(i)
            if p:
                a[i] = p
                out[i] = p
        for idx in range(n, len(self.frame)):
            var = idx  # Y fields sit at frame index == coordinate index
            coeff = V.comps.get(var, Poly(self.nvars))
            for i, ai in a.items():
                c = self.frame[i].comps.get(var)
                if c:
                    coeff = coeff - ai * c
            if coeff:
                out[idx] = coeff
        return out

    def to_g(self, coeffs):
        """Section phi(V) from frame coefficients."""
        return {self.phi[k]: p for k, p in coeffs.items() if p}

    def from_g_const(self, vec):
        """Frame combination {frame index: Fraction} of a constant element of g_-."""
        inv = {g: f for f, g in enumerate(self.phi)}
        out = {}
        for g, c in vec.items():
            if c:
                if g not in inv:
                    raise ValueError("element is not in g_-")
                out[inv[g]] = c
        return out

    def origin(self):
        return [ZERO] * self.nvars


# --- sections of the adjoint bundle -------------------------------------------

def sec_add(a, b, scale=1):
    out = dict(a)
    for k, p in b.items():
        q = out[k] + p * scale if k in out else p * scale
        if q:
            out[k] = q
        else:
            out.pop(k, None)
    return out


def sec_eval(s, point):
    return {k: v for k, p in s.items() if (v := p.evaluate(point))}


def sec_is_zero(s):
    return not any(s.values())


def alg_bracket_const_sec(n, nvars, const, s):
    """[const, s] for a constant g element and a polynomial section."""
    out = {}
    for g, p in s.items():
        br = bracket_coords(n, const, {g: Fraction(1)})
        for k, c in br.items():
            q = out.get(k, Poly(nvars)) + p * c
            if q:
                out[k] = q
            else:
                out.pop(k, None)
    return out


# --- operations -------------------------------------------------------------------

def build_model(n, modification=None) -> FrameModel:
    return FrameModel(n, modification)


def curvature(model: FrameModel):
    """{(a, b): section} over ordered frame pairs with a nonzero value."""
    out = {}
    F = model.frame
    for a, b in combinations(range(len(F)), 2):
        br = model.to_g(model.expand(vf_bracket(F[a], F[b])))
        alg = bracket_coords(model.n, {model.phi[a]: Fraction(1)}, {model.phi[b]: Fraction(1)})
        val = sec_add(br, {k: Poly.const(model.nvars, c) for k, c in alg.items()}, -1)
        if not sec_is_zero(val):
            out[(a, b)] = val
            out[(b, a)] = {k: -p for k, p in val.items()}
    return out


def kappa(model, curv, a, b):
    if a == b:
        return {}
    return curv.get((a, b), {})


def tractor_derivative(model: FrameModel, direction, s):
    """Z(s) + [phi Z, s] for a frame field Z (index or label)."""
    z = direction if isinstance(direction, int) else model.frame_index(direction)
    Z = model.frame[z]
    out = {}
    for g, p in s.items():
        d = Z.apply(p)
        if d:
            out[g] = d
    alg = alg_bracket_const_sec(model.n, model.nvars, {model.phi[z]: Fraction(1)}, s)
    return sec_add(out, alg)


def dual_frame(model: FrameModel):
    """Z^l in p_perp with tr(Z^l phi(Z_m)) = delta_lm, as coordinate dicts."""
    gram = trace_gram(model.n)
    pp = model.gb.p_perp
    # M[l][q] = tr(phi Z_l, e_q) for q in p_perp
    M = [[Fraction(gram.get((model.phi[l], q), 0)) for q in pp] for l in range(len(model.phi))]
    inv = linalg.inverse(M)  # M * inv = I, so column l of inv gives Z^l
    return [{pp[q]: inv[q][l] for q in range(len(pp)) if inv[q][l]} for l in range(len(model.phi))]


def normality_check(model: FrameModel, curv=None):
    """Evaluate sum_l [Z^l, k(Z_l, X)] - 1/2 k([Z^l, X]_-, Z_l) for X in the frame."""
    curv = curvature(model) if curv is None else curv
    duals = dual_frame(model)
    nf = len(model.frame)
    gminus = set(model.gb.g_minus)
    values = {}
    for x in range(nf):
        total = {}
        for l in range(nf):
            k = kappa(model, curv, l, x)
            if k:
                total = sec_add(total, alg_bracket_const_sec(model.n, model.nvars, duals[l], k))
            br = bracket_coords(model.n, duals[l], {model.phi[x]: Fraction(1)})
            br = {g: c for g, c in br.items() if g in gminus}
            for m, c in model.from_g_const(br).items():
                km = kappa(model, curv, m, l)
                if km:
                    total = sec_add(total, km, -Fraction(1, 2) * c)
        values[model.label_str(x)] = total
    ok = all(sec_is_zero(v) for v in values.values())
    return {"normal": ok, "nonzero": {k: _sec_repr(model, v) for k, v in values.items() if not sec_is_zero(v)}}


def var_names(model):
    return [f"x{i + 1}" for i in range(model.n)] + [f"y{j + 1}{k + 1}" for j, k in model.ypairs]


def poly_str(model, p: Poly) -> str:
    if not p:
        return "0"
    names = var_names(model)
    parts = []
    for e, c in sorted(p.terms.items(), reverse=True):
        mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _sec_repr(model, s):
    return {g_label(model, g): poly_str(model, p) for g, p in s.items()}


def g_label(model, g):
    lab = model.gb.labels[g]
    if lab[0] == "y":
        return f"Y{lab[1] + 1}{lab[2] + 1}"
    if lab[0] == "x":
        return f"X{lab[1] + 1}"
    return "".join(str(t) if isinstance(t, str) else str(t + 1) for t in lab)


def curvature_report(model: FrameModel, curv=None):
    curv = curvature(model) if curv is None else curv
    grades = model.gb.grades
    entries = []
    shape_ok = True
    for (a, b), val in sorted(curv.items()):
        if a > b:
            continue
        la, lb = model.labels[a], model.labels[b]
        targets = [model.gb.labels[g] for g in val]
        if model.mod.kind != "none":
            # expect Y_jk ^ X_l (x) Y_ab with {a,b} disjoint from {j,k,l}
            ys = [t for t in (la, lb) if t[0] == "Y"]
            xs = [t for t in (la, lb) if t[0] == "X"]
            if len(ys) != 1 or len(xs) != 1:
                shape_ok = False
            else:
                used = {ys[0][1], ys[0][2], xs[0][1]}
                for t in targets:
                    if t[0] != "y" or used & {t[1], t[2]}:
                        shape_ok = False
        entries.append({
            "pair": [model.label_str(a), model.label_str(b)],
            "value": _sec_repr(model, val),
        })
    antisym = all(
        curv.get((b, a)) == {k: -p for k, p in v.items()} for (a, b), v in curv.items()
    )
    grade_m2 = all(grades[g] == -2 for v in curv.values() for g in v)
    return {"entries": entries, "antisymmetric": antisym, "values_in_grade_minus2": grade_m2, "shape_ok": shape_ok}


def free_check(model: FrameModel, points):
    """H fields and their brackets span T at each point."""
    n = model.n
    H = model.frame[:n]
    fields = list(H) + [vf_bracket(H[i], H[j]) for i, j in combinations(range(n), 2)]
    for pt in points:
        rows = [[f.comps.get(c, Poly(model.nvars)).evaluate(pt) for c in range(model.nvars)] for f in fields]
        if linalg.rank(rows, model.nvars) != model.nvars:
            return False
    return True


def frame_determinant(model: FrameModel, point):
    rows = [[f.comps.get(c, Poly(model.nvars)).evaluate(point) for c in range(model.nvars)] for f in model.frame]
    return linalg.det(rows)


def random_points(model, count, seed=0):
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(model.nvars)] for _ in range(count)]


def _sec_vector(s):
    out = {}
    for g, p in s.items():
        for e, c in p.terms.items():
            out[(g, e)] = c
    return out


def _max_param(model):
    vals = list(model.mod.beta.values()) + list(model.mod.gamma.values()) + list(model.mod.delta.values())
    for _, coeff, _ in model.additions():
        vals.append(coeff.degree())
    return max(vals, default=1)


def infinitesimal_holonomy(model: FrameModel, curv=None, npoints=3, seed=0):
    """Span of kappa and its iterated tractor derivatives, closed under bracket.

    Evaluated at the origin and at ``npoints`` random rational points.
    """
    curv = curvature(model) if curv is None else curv
    mx = _max_param(model)
    cap = 2 * mx + 4
    points = [model.origin()] + random_points(model, npoints, seed)
    sections = linalg.Span()
    frontier = []
    for (a, b), val in sorted(curv.items()):
        if a < b and sections.add(_sec_vector(val)):
            frontier.append(val)
    value_spans = [linalg.Span() for _ in points]
    history = []
    order = 0
    closed = False
    stable = 0
    while True:
        for s in frontier:
            for vs, pt in zip(value_spans, points):
                vs.add(sec_eval(s, pt))
        history.append(len(value_spans[0]))
        if len(history) >= 2 and history[-1] == history[-2]:
            stable += 1
        else:
            stable = 0
        if not frontier:
            closed = True
            break
        if stable >= 2 and order >= mx + 1:
            break
        if order >= cap:
            break
        nxt = []
        for s in frontier:
            for z in range(len(model.frame)):
                d = tractor_derivative(model, z, s)
                if d and sections.add(_sec_vector(d)):
                    nxt.append(d)
        frontier = nxt
        order += 1
    stabilized = closed or (stable >= 2 and order >= mx + 1)
    # close under the algebraic bracket
    for vs in value_spans:
        changed = True
        while changed:
            changed = False
            basis = vs.basis()
            for u in basis:
                for v in basis:
                    if vs.add(bracket_coords(model.n, u, v)):
                        changed = True
    origin = value_spans[0]
    basis = origin.basis()
    abelian = all(not bracket_coords(model.n, u, v) for u in basis for v in basis)
    return {
        "dim": len(origin),
        "basis": [{g_label(model, g): str(c) for g, c in sorted(b.items())} for b in basis],
        "basis_raw": basis,
        "dims_at_points": [len(vs) for vs in value_spans],
        "orders": order,
        "history": history,
        "stabilized": stabilized,
        "abelian": abelian,
    }


def iterated_derivative_leading_terms(model: FrameModel, curv=None):
    """Check the three families of leading-term identities at the origin.

    For each summand c * y^m / m! Y_jk of X_i' along Y_pq, the value of
    (tractor derivative along Y_pq)^(m-1) kappa(X_i', Y_pq) at the origin is
    reported with its Y_jk coefficient.
    """
    if model.mod.kind != "general":
        raise ModelError("leading terms are defined for general models")
    curv = curvature(model) if curv is None else curv
    m = model.mod
    cases = []
    fam = [("beta", 0, (0, 1), {(j - 1, k - 1): v for (j, k), v in m.beta.items()}),
           ("gamma", 0, (0, 2), {(1, j - 1): v for j, v in m.gamma.items()}),
           ("delta", 1, (1, 2), {(0, j - 1): v for j, v in m.delta.items()})]
    origin = model.origin()
    for name, xi, ypq, table in fam:
        zi = model.frame_index(("Y",) + ypq)
        for target, power in sorted(table.items()):
            s = kappa(model, curv, xi, zi)
            for _ in range(power - 1):
                s = tractor_derivative(model, zi, s)
            val = sec_eval(s, origin)
            g = model.gb.index(("y",) + target)
            coeff = val.get(g, ZERO)
            cases.append({
                "family": name,
                "target": g_label(model, g),
                "order": power - 1,
                "coefficient": str(coeff),
                "value": {g_label(model, k): str(v) for k, v in val.items()},
                "ok": abs(coeff) == 1 and set(val) == {g},
            })
    return {"cases": cases, "ok": all(c["ok"] for c in cases)}


def excluded_labels_absent(model, hol):
    """Y12, Y13, Y23 have zero coefficient in every holonomy basis element."""
    bad = {model.gb.index(("y", 0, 1)), model.gb.index(("y", 0, 2)), model.gb.index(("y", 1, 2))}
    return all(not (set(b) & bad) for b in hol["basis_raw"])


# --- JSON model specs -------------------------------------------------------------

def model_from_json(doc) -> FrameModel:
    try:
        n = int(doc["n"])
        kind = doc.get("modification", "none")
        beta = {(int(j), int(k)): v for j, k, v in doc.get("beta", [])}
        gamma = {int(j): v for j, v in doc.get("gamma", [])}
        delta = {int(j): v for j, v in doc.get("delta", [])}
        if len(beta) != len(doc.get("beta", [])) or len(gamma) != len(doc.get("gamma", [])) or len(delta) != len(doc.get("delta", [])):
            raise ModelError("duplicate index in beta/gamma/delta")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"malformed model document: {exc}") from exc
    return build_model(n, Modification(kind, beta, gamma, delta))


def saturated_general(n, start=1):
    """General model with every beta, gamma, delta summand present."""
    beta = {(j, k): start + i for i, (j, k) in enumerate((j, k) for j in range(3, n + 1) for k in range(j + 1, n + 1))}
    gamma = {j: start + i for i, j in enumerate(range(4, n + 1))}
    delta = {j: start + i for i, j in enumerate(range(4, n + 1))}
    return Modification("general", beta, gamma, delta)


def _summands(mod):
    return ([("beta", k) for k in sorted(mod.beta)] + [("gamma", k) for k in sorted(mod.gamma)]
            + [("delta", k) for k in sorted(mod.delta)])


def remove_summands(mod, drop):
    tables = {"beta": dict(mod.beta), "gamma": dict(mod.gamma), "delta": dict(mod.delta)}
    for fam, key in drop:
        del tables[fam][key]
    return Modification("general", tables["beta"], tables["gamma"], tables["delta"])


def summand_removal_check(n, max_k=None, seed=0):
    """Holonomy dimension drops by exactly k when k summands are removed
    from the saturated model; every subset with k <= max_k is tried."""
    full = saturated_general(n)
    items = _summands(full)
    base = infinitesimal_holonomy(build_model(n, full), seed=seed)["dim"]
    rows = []
    ok = True
    top = len(items) if max_k is None else max_k
    for k in range(0, top + 1):
        for drop in combinations(items, k):
            mod = remove_summands(full, drop)
            d = infinitesimal_holonomy(build_model(n, mod), seed=seed)["dim"]
            good = d == base - k
            ok &= good
            rows.append({"removed": [f"{f}{''.join(map(str, key)) if isinstance(key, tuple) else key}"
                                     for f, key in drop], "dim": d, "ok": good})
    return {"n": n, "full_dim": base, "cases": rows, "ok": ok}
