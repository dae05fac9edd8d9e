from fractions import Fraction

import pytest

from cartankit import linalg
from cartankit import spin_incl as si


def test_gaussian_rationals():
    i = si.I_UNIT
    assert i * i == si.QI(Fraction(-1))
    z = si.QI(Fraction(2), Fraction(3))
    assert z * z.conj() == si.QI(Fraction(13))


def test_wedge_pairing_split():
    assert linalg.inertia(si.wedge_pairing())[:2] == (3, 3)


def test_sl4_to_so33():
    r = si.sl4_to_so33()
    assert r.bracket_ok and r.skew_ok and r.image_dim == 15 and tuple(r.signature) == (3, 3)


def test_su22_to_so42():
    r = si.su22_to_so42()
    assert r.bracket_ok and r.skew_ok and r.image_dim == 15 and tuple(r.signature) == (4, 2)
    assert r.rho_squared_identity and r.real_action and r.real_metric


def test_four_form_stabilizer():
    r = si.four_form_report()
    assert r["dim"] == 21 and r["ambient_dim"] == 28 and r["zero_form_dim"] == 28
    assert r["contains_su22"] and r["su22_complex_linear"]


def test_sl4_split_and_theta_stabilizer():
    assert all(si.sl4_split_report().values())
    r = si.theta_stabilizer_report()
    assert r["dim"] == 14 and r["equals_derivations"] and r["in_so34"]


@pytest.mark.parametrize("n,dims", [(3, (28, 22, 21, 15, 15)), (4, (45, 35, 36, 26, 26))])
def test_spinorial_fefferman(n, dims):
    r = si.fefferman_dims("spinorial", n)
    assert (r["dim_ghat"], r["dim_phat"], r["dim_g"], r["dim_p"], r["dim_g_cap_phat"]) == dims
    assert r["g_cap_phat_is_p"] and r["transverse"]
    assert r["dim_g_plus_phat"] == r["dim_ghat"]


def test_cr_chain():
    r = si.fefferman_dims("cr")
    assert r["chain"] == [21, 15, 15, 10, 9] and r["transverse"]


def test_lagrangian_transverse_and_not():
    t = si.fefferman_dims("lagrangian", 3, True)
    nt = si.fefferman_dims("lagrangian", 3, False)
    assert t["transverse"] and t["dim_g_cap_phat"] == 9
    assert not nt["transverse"] and nt["dim_g_cap_phat"] == 12


def test_unknown_case():
    with pytest.raises(ValueError):
        si.fefferman_dims("nonsense")
