"""Named checks with descriptive anchors, shared by the CLI and the acceptance tests.

Each check returns a CheckReport; payloads are JSON-ready (strings for
rationals, sorted lists).
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import conformal3, exactalg, flatmodels, homology, octonion, spin_incl, tractorpt
from .poly import Poly


@dataclass
class CheckReport:
    id: str
    anchor: str
    status: str  # pass, fail or skipped
    payload: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self):
        return asdict(self)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _run(cid, anchor, fn):
    t = time.perf_counter()
    try:
        ok, payload = fn()
        status = "pass" if ok else "fail"
    except flatmodels.ModelError:
        raise
    except Exception as exc:  # report, do not crash the batch
        ok, payload, status = False, {"error": f"{type(exc).__name__}: {exc}"}, "fail"
    return CheckReport(cid, anchor, status, _jsonable(payload), round(time.perf_counter() - t, 3))


# --- octonions ------------------------------------------------------------------

def octonion_table(seed=0):
    def fn():
        rng = random.Random(seed)
        x, y, z = octonion.octonionic_triple(octonion.random_open_plane(rng))
        table = octonion.triple_table(x, y, z)
        mism = octonion.table_mismatches(table)
        payload = {
            "table": {r: {c: octonion.format_entry(table[r][c]) for c in octonion.TABLE_NAMES}
                      for r in octonion.TABLE_NAMES},
            "mismatches": [f"{r}*{c}: computed {octonion.format_entry(table[r][c])}, "
                           f"reference {octonion.format_entry(octonion.reference_entry(r, c))}"
                           for r, c in mism],
            "matches_with_unit_read_as_minus_one": octonion.table_matches(table, -1),
            "scalar_identity": octonion.scalar_identity_holds(x, y, z),
        }
        return not mism, payload
    return _run("octonion.table", "multiplication table of an octonionic triple", fn)


def octonion_derivations():
    def fn():
        d = octonion.derivation_report()
        t = spin_incl.theta_stabilizer_report()
        payload = {"derivations": d, "theta_stabilizer": t}
        ok = d["dim"] == 14 and all(v for k, v in d.items() if k != "dim") and t["dim"] == 14 \
            and t["equals_derivations"] and t["in_so34"]
        return ok, payload
    return _run("octonion.derivations", "derivations of the split octonions form g2' (rank 14)", fn)


def octonion_classify(seed=0, planes=20):
    def fn():
        rng = random.Random(seed)
        rows = {"Open": [], "Closed": []}
        for _ in range(planes):
            B = octonion.random_open_plane(rng)
            basis, dim = octonion.stabilizer_in_g2(B)
            rows["Open"].append((octonion.classify_plane(B), dim, octonion.killing_rank(basis)))
        for _ in range(planes):
            B = octonion.random_closed_plane(rng)
            basis, dim = octonion.stabilizer_in_g2(B)
            rows["Closed"].append((octonion.classify_plane(B), dim, octonion.killing_rank(basis)))
        ok = all(c == "Open" and d == 8 and k == 8 for c, d, k in rows["Open"]) and all(
            c == "Closed" and d == 9 and k < 9 for c, d, k in rows["Closed"])
        payload = {
            "planes_per_orbit": planes,
            "open_stabilizer_dims": sorted({d for _, d, _ in rows["Open"]}),
            "open_killing_ranks": sorted({k for _, _, k in rows["Open"]}),
            "closed_stabilizer_dims": sorted({d for _, d, _ in rows["Closed"]}),
            "closed_killing_ranks": sorted({k for _, _, k in rows["Closed"]}),
        }
        return ok, payload
    return _run("octonion.classify", "isotropic 3-planes: open orbit sl(3), closed orbit parabolic", fn)


def octonion_properties(seed=0, trials=200):
    def fn():
        rng = random.Random(seed)
        mult = alt = True
        for _ in range(trials):
            x, y, z = (octonion.random_oct(rng) for _ in range(3))
            mult &= octonion.norm(octonion.zorn_mul(x, y)) == octonion.norm(x) * octonion.norm(y)
            a = octonion.alternator(x, y, z)
            alt &= a == octonion.alternator(y, z, x) and a == -octonion.alternator(y, x, z)
        return mult and alt, {"trials": trials, "norm_multiplicative": mult, "alternator_antisymmetric": alt}
    return _run("octonion.properties", "norm multiplicativity and alternativity", fn)


# --- Lie algebra ------------------------------------------------------------------

def algebra_properties(seed=0, trials=200):
    def fn():
        rng = random.Random(seed)
        jac = grades = True
        for t in range(trials):
            n = 2 + t % 3
            gb = exactalg.graded_basis(n)

            def rand_el():
                return exactalg.LieElement.from_dict(
                    n, {i: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for i in rng.sample(range(gb.dim), 4)})

            x, y, z = rand_el(), rand_el(), rand_el()
            br = exactalg.bracket
            jac &= not (br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y)))
            i, j = rng.randrange(gb.dim), rng.randrange(gb.dim)
            val = br(exactalg.LieElement.basis(n, i), exactalg.LieElement.basis(n, j))
            g = gb.grades[i] + gb.grades[j]
            grades &= all(gb.grades[k] == g for k, c in enumerate(val.coords) if c)
        return jac and grades, {"trials": trials, "jacobi": jac, "grade_additive": grades}
    return _run("algebra.properties", "so(n+1,n) bracket: Jacobi identity and grading", fn)


def algebra_structure(n=3):
    def fn():
        nil = exactalg.nilradical_check(n)
        sl3 = exactalg.sl3_distribution_check()
        ok = all(v for v in nil.values() if isinstance(v, bool)) and all(sl3.values())
        return ok, {"dims": list(exactalg.graded_basis(n).dims()), "nilradical": nil, "sl3": sl3}
    return _run(f"algebra.structure.n{n}", "p_perp is the nilradical of p; grading element", fn)


# --- homology ------------------------------------------------------------------

EXPECTED_HOMOLOGY = {
    2: (((1, 2), 0), "torsion-free class"),
    3: (((1, 2), 0), "torsion-free class"),
    4: (((1, 2), -2), "torsion class"),
    5: (((1, 2), -2), "torsion class"),
}


def homology_check(n):
    def fn():
        rep = homology.torsion_dichotomy_report(n)
        carriers = [(tuple(s), v) for s, v in rep["carrier_types"]]
        payload = dict(rep)
        if n in EXPECTED_HOMOLOGY:
            want, verdict = EXPECTED_HOMOLOGY[n]
            single_hom = len(rep["dims_by_homogeneity"]) == 1
            if n <= 3:
                single_hom &= list(rep["dims_by_homogeneity"]) == [3]
            ok = want in carriers and rep["verdict"] == verdict and single_hom
            payload["expected_carrier"] = [list(want[0]), want[1]]
            payload["expected_verdict"] = verdict
        else:
            ok = rep["verdict"] == "torsion class"
        return ok, payload
    return _run(f"homology.n{n}", "location of H_2(p_perp, g); torsion for n >= 4", fn)


def codiff_check(nmax=4):
    def fn():
        res = {f"n{n}_c{c}": homology.codiff_square_zero(n, c) for n in range(2, nmax + 1) for c in (2, 3)}
        return all(res.values()), res
    return _run("homology.codiff_square", "the codifferential squares to zero", fn)


# --- inclusions -------------------------------------------------------------------

def inclusion_checks(case="all"):
    out = []
    if case in ("all", "spinorial"):
        def fn():
            r3, r4 = spin_incl.fefferman_dims("spinorial", 3), spin_incl.fefferman_dims("spinorial", 4)
            ok = all(r["g_cap_phat_is_p"] and r["transverse"] for r in (r3, r4))
            return ok, {"n3": r3, "n4": r4}
        out.append(_run("inclusions.spinorial", "spin(n+1,n) in so(n+1,n+1): g cap p^ = p, g + p^ = g^", fn))
    if case in ("all", "cr"):
        def fn():
            r = spin_incl.fefferman_dims("cr")
            return r["chain"] == [21, 15, 15, 10, 9] and r["transverse"], r
        out.append(_run("inclusions.cr", "CR Fefferman chain 21, 15, 15, 10, 9", fn))
    if case in ("all", "lagrangian"):
        def fn():
            t, nt = spin_incl.fefferman_dims("lagrangian", 3, True), spin_incl.fefferman_dims("lagrangian", 3, False)
            return t["dim_g_cap_phat"] == 9 and t["transverse"] and not nt["transverse"], \
                {"transverse": t, "non_transverse": nt}
        out.append(_run("inclusions.lagrangian", "Lagrangian contact case, transverse choice", fn))
    if case in ("all", "exceptional"):
        def fn():
            a, b = spin_incl.sl4_to_so33(), spin_incl.su22_to_so42()
            pa = {k: v for k, v in vars(a).items() if not isinstance(v, (list, dict))}
            pb = {k: v for k, v in vars(b).items() if not isinstance(v, (list, dict))}
            ok = (a.bracket_ok and a.skew_ok and a.image_dim == 15 and tuple(a.signature) == (3, 3)
                  and b.bracket_ok and b.skew_ok and b.image_dim == 15 and tuple(b.signature) == (4, 2)
                  and b.rho_squared_identity and b.real_action and b.real_metric)
            pa["signature"], pb["signature"] = list(a.signature), list(b.signature)
            return ok, {"sl4_so33": pa, "su22_so42": pb, "split": spin_incl.sl4_split_report()}
        out.append(_run("inclusions.exceptional", "sl(4,R) = so(3,3) and su(2,2) = so(4,2)", fn))
    if case in ("all", "fourform"):
        def fn():
            r = spin_incl.four_form_report()
            return r["dim"] == 21 and r["contains_su22"], r
        out.append(_run("inclusions.fourform", "stabilizer of Re(v) - mu^2 in so(4,4)", fn))
    if not out:
        raise ValueError(f"unknown inclusion case {case!r}")
    return out


# --- flat models -------------------------------------------------------------------

def holonomy_checks(model, name="model", expect=None, seed=0):
    """Curvature shape, normality, holonomy; ``expect`` may give 'dim' and 'basis'."""
    def fn():
        curv = flatmodels.curvature(model)
        shape = flatmodels.curvature_report(model, curv)
        normal = flatmodels.normality_check(model, curv)
        hol = flatmodels.infinitesimal_holonomy(model, curv, seed=seed)
        payload = {
            "curvature": shape,
            "normal": normal["normal"],
            "holonomy_dim": hol["dim"],
            "holonomy_basis": hol["basis"],
            "dims_at_points": hol["dims_at_points"],
            "stabilized": hol["stabilized"],
            "abelian": hol["abelian"],
        }
        ok = normal["normal"] and hol["stabilized"] and all(
            v for k, v in shape.items() if isinstance(v, bool))
        if model.mod.kind == "general":
            payload["excludes_Y12_Y13_Y23"] = flatmodels.excluded_labels_absent(model, hol)
            lead = flatmodels.iterated_derivative_leading_terms(model, curv)
            payload["leading_terms"] = lead
            ok = ok and payload["excludes_Y12_Y13_Y23"] and lead["ok"]
        if expect:
            if "dim" in expect:
                ok = ok and hol["dim"] == expect["dim"]
            if "basis" in expect:
                ok = ok and hol["basis"] == expect["basis"]
            payload["expected"] = expect
        return ok, payload
    return _run(f"holonomy.{name}", "normal free distributions with holonomy in g_-2", fn)


def removal_check(n):
    def fn():
        r = flatmodels.summand_removal_check(n)
        return r["ok"], {"n": n, "full_dim": r["full_dim"], "subsets": len(r["cases"]),
                         "failures": [c for c in r["cases"] if not c["ok"]]}
    return _run(f"holonomy.removal.n{n}", "removing k summands lowers the holonomy by k", fn)


def preset_models():
    single = flatmodels.build_model(4, flatmodels.Modification("single_y34"))
    out = [(single, "n4_single", {"dim": 1, "basis": [{"Y34": "1"}]})]
    for n in (4, 5):
        m = flatmodels.build_model(n, flatmodels.saturated_general(n))
        out.append((m, f"n{n}_saturated", {"dim": n * (n - 1) // 2 - 3}))
    return out


# --- n = 3 conformal and tractors --------------------------------------------------

def conformal_checks():
    keys = ["formula_skew", "matches_direct_solve", "permuted_frames_agree", "p_con", "conformal_one",
            "conformal_two", "signature_samples_all_3_3", "metric_symmetric", "upsilon_invariant",
            "conformal_class_independent_of_sigma", "sigma_times_3_same_connection",
            "sigma_times_3_metric_over_3"]

    def flat():
        r = conformal3.conformal_report()
        ok = all(r[k] for k in keys) and r["connection_zero"] and r["signature_origin"] == [3, 3] \
            and all(r["conformal_two_parts"].values()) and r["transversality_det_origin"] in ("1", "-1")
        ok = ok and all(t["H"] == ["0"] * 3 for t in r["transverse"])
        return ok, r

    def perturbed():
        m = flatmodels.FrameModel(3, flatmodels.Modification(
            extra=[(0, Poly.var(6, 3, 2, Fraction(1, 2)), (1, 2)), (0, Poly.var(6, 4), (0, 1))]))
        s = Poly.const(6, 2) + Poly.var(6, 0, 2)
        r = conformal3.conformal_report(m, s=s)
        ok = all(r[k] for k in keys) and not r["connection_zero"] and r["signature_origin"] == [3, 3]
        return ok, r

    return [
        _run("conformal3.flat", "split-signature conformal structure from a 3-distribution", flat),
        _run("conformal3.perturbed", "Levi-Civita-like partial connection, curved example", perturbed),
    ]


def tractor_check(seed=0, trials=200):
    def fn():
        r = tractorpt.tractor_report(seed, trials)
        r["stated_signature_label"] = "(n+1, 1)"
        r["signature_discrepancy"] = r["signature"] != [4, 1]
        ok = all(v for k, v in r.items() if isinstance(v, bool) and k != "signature_discrepancy") \
            and all(r["examples"].values())
        return ok, r
    return _run("tractor.pointwise", "standard tractor metric and change of splitting", fn)


# --- aggregate --------------------------------------------------------------------

def verify_all(seed=0, trials=200, max_n=5, planes=20):
    reports = [
        algebra_properties(seed, trials),
        algebra_structure(3),
        octonion_table(seed),
        octonion_derivations(),
        octonion_classify(seed, planes),
        octonion_properties(seed, trials),
        codiff_check(min(4, max_n)),
    ]
    reports += [homology_check(n) for n in range(2, max_n + 1)]
    reports += inclusion_checks("all")
    reports += [holonomy_checks(m, name, exp, seed) for m, name, exp in preset_models() if m.n <= max_n]
    reports += [removal_check(n) for n in (4, 5) if n <= max_n]
    reports += conformal_checks()
    reports.append(tractor_check(seed, trials))
    return sorted(reports, key=lambda r: r.id)
