from fractions import Fraction

import pytest

from cartankit import flatmodels as fm
from cartankit.poly import Poly


@pytest.fixture(scope="module")
def single():
    m = fm.build_model(4, fm.Modification("single_y34"))
    return m, fm.curvature(m)


@pytest.mark.parametrize("n", [3, 4])
def test_flat_model_is_flat(n):
    m = fm.build_model(n)
    assert fm.curvature(m) == {}
    assert fm.frame_determinant(m, m.origin()) in (1, -1)
    assert fm.free_check(m, fm.random_points(m, 3))


def test_single_y34_curvature(single):
    m, curv = single
    rep = fm.curvature_report(m, curv)
    assert rep["antisymmetric"] and rep["values_in_grade_minus2"] and rep["shape_ok"]
    a, b = m.frame_index(("Y", 0, 1)), m.frame_index(("X", 0))
    val = fm.kappa(m, curv, a, b)
    y34 = m.gb.index(("y", 2, 3))
    assert set(val) == {y34}
    assert val[y34] == Poly.const(m.nvars, 1)
    assert fm.kappa(m, curv, b, a)[y34] == Poly.const(m.nvars, -1)


def test_single_y34_normal_and_holonomy(single):
    m, curv = single
    assert fm.normality_check(m, curv)["normal"]
    hol = fm.infinitesimal_holonomy(m, curv)
    assert hol["dim"] == 1
    assert hol["basis"] == [{"Y34": "1"}]
    assert hol["stabilized"] and hol["abelian"]
    assert hol["dims_at_points"] == [1] * len(hol["dims_at_points"])


def test_tractor_derivative_of_constant_section(single):
    # kappa is constant Y34, and Y34 commutes with the other grade -2 fields
    m, curv = single
    a, b = m.frame_index(("Y", 0, 1)), m.frame_index(("X", 0))
    s = fm.kappa(m, curv, a, b)
    for z in range(len(m.frame)):
        d = fm.tractor_derivative(m, z, s)
        assert all(m.gb.grades[g] <= -2 for g in d)


@pytest.mark.parametrize("n,dim", [(4, 3), (5, 7)])
def test_saturated_holonomy(n, dim):
    m = fm.build_model(n, fm.saturated_general(n))
    curv = fm.curvature(m)
    assert fm.normality_check(m, curv)["normal"]
    hol = fm.infinitesimal_holonomy(m, curv)
    assert hol["dim"] == dim == n * (n - 1) // 2 - 3
    assert fm.excluded_labels_absent(m, hol)
    assert fm.iterated_derivative_leading_terms(m, curv)["ok"]


def test_leading_terms_orders():
    mod = fm.Modification("general", beta={(3, 4): 3}, gamma={4: 2}, delta={4: 1})
    m = fm.build_model(4, mod)
    lead = fm.iterated_derivative_leading_terms(m)
    orders = {c["family"]: c["order"] for c in lead["cases"]}
    assert orders == {"beta": 2, "gamma": 1, "delta": 0}
    assert lead["ok"]


def test_leading_terms_requires_general(single):
    with pytest.raises(fm.ModelError):
        fm.iterated_derivative_leading_terms(single[0])


def test_summand_removal_n4():
    r = fm.summand_removal_check(4)
    assert r["full_dim"] == 3
    assert len(r["cases"]) == 2 ** 3
    assert r["ok"]


def test_poly_str():
    m = fm.build_model(3)
    p = Poly.var(m.nvars, 0, 2) + Poly.const(m.nvars, 2)
    assert fm.poly_str(m, p) == "x1^2 + 2"
    assert fm.poly_str(m, Poly(m.nvars)) == "0"


@pytest.mark.parametrize("doc", [
    {},
    {"n": "x"},
    {"n": 4, "modification": "general", "beta": [[3, 4, 1], [3, 4, 2]]},
    {"n": 4, "modification": "general", "beta": [[3, 4, 0]]},
    {"n": 4, "modification": "general", "gamma": [[4, 1]], "delta": [[4, Fraction(1, 2)]]},
    {"n": 4, "modification": "nonsense"},
    {"n": 4, "modification": "general", "beta": [[1, 2, 1]]},
])
def test_model_from_json_rejects(doc):
    with pytest.raises(fm.ModelError):
        fm.model_from_json(doc)


def test_model_from_json_roundtrip():
    m = fm.model_from_json({"n": 4, "modification": "general", "beta": [[3, 4, 2]], "gamma": [[4, 1]]})
    assert m.mod.beta == {(3, 4): 2} and m.mod.gamma == {4: 1} and m.mod.summands() == 2
