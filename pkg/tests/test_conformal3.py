from fractions import Fraction

import pytest

from cartankit import conformal3 as c3
from cartankit.flatmodels import FrameModel, Modification, ModelError, build_model
from cartankit.poly import Poly


def perturbed():
    m = FrameModel(3, Modification(
        extra=[(0, Poly.var(6, 3, 2, Fraction(1, 2)), (1, 2)), (0, Poly.var(6, 4), (0, 1))]))
    return m, Poly.const(6, 2) + Poly.var(6, 0, 2)


def all_zero(d):
    return all(not p for v in d.values() for p in v)


@pytest.fixture(scope="module")
def flat_report():
    return c3.conformal_report()


@pytest.fixture(scope="module")
def curved_report():
    m, s = perturbed()
    return c3.conformal_report(m, s=s)


def test_flat_connection_is_zero(flat_report):
    r = flat_report
    assert r["connection_zero"]
    assert set(r["connection"].values()) == {"0"}


def test_flat_tm2_is_span_of_y_fields(flat_report):
    # zero connection: Pi(Y) = 0, so the transverse frame has no H part
    assert all(t["H"] == ["0"] * 3 for t in flat_report["transverse"])
    assert flat_report["transversality_det_origin"] in ("1", "-1")


@pytest.mark.parametrize("key", [
    "formula_skew", "matches_direct_solve", "permuted_frames_agree", "p_con", "conformal_one",
    "conformal_two", "signature_samples_all_3_3", "metric_symmetric", "upsilon_invariant",
    "conformal_class_independent_of_sigma", "sigma_times_3_same_connection",
    "sigma_times_3_metric_over_3",
])
def test_report_flags(flat_report, curved_report, key):
    assert flat_report[key]
    assert curved_report[key]


def test_signature_and_rank(flat_report, curved_report):
    for r in (flat_report, curved_report):
        assert r["signature_origin"] == [3, 3]
        assert r["direct_system_rank"] == 27
        assert all(r["conformal_two_parts"].values())


def test_curved_connection_nonzero(curved_report):
    assert not curved_report["connection_zero"]
    assert curved_report["sigma"] == "x1^2 + 2"


def test_tampered_connection_breaks_torsion_conditions():
    m, s = perturbed()
    c = c3.Conformal3(m, s)
    N = c.levi_civita_like()
    assert all_zero(c.p_con_residual(N)) and all_zero(c.residual_one(N))
    bad = [[list(v) for v in row] for row in N]
    bad[0][1][2] = bad[0][1][2] + Poly.const(6, 1)
    assert not all_zero(c.p_con_residual(bad))
    # (one) only fixes Pi(Y) from N, so it is the (two) part that notices
    assert all_zero(c.residual_one(bad))
    assert not all_zero(c.residual_two(bad))


def test_mu_shift_still_solves():
    c = c3.Conformal3(build_model(3), 1, [1, -2, 3])
    N = c.levi_civita_like()
    assert c.solve_direct()[0] == N
    assert all_zero(c.p_con_residual(N))


def test_metric_isotropic_h_and_upsilon_map():
    c = c3.Conformal3(build_model(3))
    N = c.levi_civita_like()
    G, den = c.metric(N)
    assert all(not G[i][j] for i in range(3) for j in range(3))
    phi = c3.ad_upsilon_map(c, [Fraction(2), Fraction(-1), Fraction(3)])
    assert any(x for row in phi for x in row)
    assert c3.metric_after_shift(c, N, phi)[0] == G


def test_arbitrary_shift_changes_metric():
    # only ad(g_1) shifts preserve the T_-2 block; a generic one does not
    c = c3.Conformal3(build_model(3))
    N = c.levi_civita_like()
    phi = [[Fraction(1), 0, 0], [0, 0, 0], [0, 0, 0]]
    assert c3.metric_after_shift(c, N, phi)[0] != c.metric(N)[0]


def test_rejects_bad_input():
    with pytest.raises(ModelError):
        c3.Conformal3(build_model(4))
    with pytest.raises(ModelError):
        c3.Conformal3(build_model(3), 0)
    m = FrameModel(3, Modification(extra=[(1, Poly.var(6, 4), (0, 2))]))
    with pytest.raises(ModelError):
        c3.Conformal3(m)
