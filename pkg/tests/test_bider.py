# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import pytest

from ainfinity.bider import (BD, BiderivativeSolver, Region, bd0, classify,
                             coderivation_cochain, derivation_cochain,
                             fixed_point, group_by_arrow, home_face_cech,
                             home_face_wedge, is_stable, omega_from_generators,
                             project_sum, project_top_wedge, tau, top_cech,
                             top_wedge)
from ainfinity.cochain import Cochain
from ainfinity.err import ArityMismatch, InvalidData
from ainfinity.monomat import MonomialSum, parse_monomial
from ainfinity.permuta import OrderedPartition
from ainfinity.prop_expr import Generator

MU = Generator("mu", 1, 2)
DELTA = Generator("Delta", 2, 1)
THETA = Generator("theta", 2, 2, 1)
THETA32 = Generator("t32", 3, 2, 2)
D = Generator("d", 1, 1, -1, differential=True)
REGISTRY = {g.name: g for g in (MU, DELTA, THETA, THETA32, D)}


def face(text: str) -> OrderedPartition:
    return OrderedPartition.parse(text)


def msum(text: str) -> MonomialSum:
    return parse_monomial(text, REGISTRY)


def mono(text: str):
    return msum(text).monomials()[0]


def cochain(values: dict) -> Cochain:
    return Cochain({face(f): msum(v) for f, v in values.items()})


@pytest.mark.parametrize("text, region", [
    ("1", Region.U0),
    ("d", Region.U0),
    ("[d 1]", Region.U0),
    ("theta", Region.UV),
    ("t32", Region.UV),
    ("mu", Region.U0_ROW),
    ("[mu 1]", Region.U0_ROW),
    ("Delta", Region.V0),
    ("[1; Delta]", Region.V0),
    ("[Delta Delta]", Region.U),
    ("[mu; mu]", Region.V),
    ("[mu mu; mu mu]", Region.OTHER),
    ("[theta; theta]", Region.V),
])
def test_classify(text, region):
    assert classify(mono(text)) == region


def test_project_sum():
    s = msum("mu") + msum("Delta") + msum("theta") + msum("d")
    assert project_sum(s, {Region.U0_ROW, Region.UV}) == msum("mu") + msum("theta")


def test_home_faces():
    assert home_face_wedge(mono("t32")) == face("1")
    assert home_face_cech(mono("t32")) == face("12")
    assert home_face_wedge(mono("mu")) == home_face_cech(mono("mu")) == face("1")
    assert home_face_wedge(mono("Delta")) == home_face_cech(mono("Delta")) == face("1")
    assert home_face_wedge(mono("[1 mu]")) == face("2|1")
    assert home_face_wedge(mono("d")) is None


def test_top_cochains_evaluate_back():
    s = msum("mu") + msum("[1 mu]") + msum("[mu 1]") + msum("t32")
    assert top_wedge(s).evaluate() == s
    assert top_cech(s).evaluate() == s
    assert top_wedge(s)[face("2|1")] == msum("[1 mu]").scale(-1)
    assert not top_wedge(msum("d"))


def test_project_top_wedge():
    xi = cochain({"1": "mu"}) + Cochain({face("1|2"): msum("mu(mu(x)1)") + msum("[mu 1]")})
    assert project_top_wedge(xi) == cochain({"1": "mu", "1|2": "[mu 1]"})


def test_coderivation_cochain():
    phi = top_wedge(msum("mu"))
    assert coderivation_cochain(phi, 3) == cochain({
        "1": "mu", "1|2": "[mu 1]", "2|1": "[1 mu]",
    })
    assert coderivation_cochain(phi, 2) == cochain({"1": "mu"})


def test_derivation_cochain():
    psi = top_cech(msum("Delta"))
    assert derivation_cochain(psi, 3) == cochain({
        "1": "Delta", "1|2": "[Delta; 1]", "2|1": "[1; Delta]",
    })


def test_tau_swaps_wedge_and_cech_homes():
    phi = top_wedge(msum("t32"))
    assert phi.faces() == [face("1")]
    swapped = tau(phi)
    assert swapped == cochain({"12": "t32"})
    assert tau(swapped) == phi
    assert not tau(top_wedge(msum("mu") + msum("[mu 1]")))


def test_bd0():
    spread = bd0(msum("d"), 2)
    assert len(spread) == 9
    for text in ["d", "[d 1]", "[1 d]", "[d; 1]", "[1; d]", "[d 1; 1 1]", "[1 1; 1 d]"]:
        assert mono(text) in spread, text
    assert bd0(msum("d"), 1) == msum("d")
    assert not bd0(MonomialSum(), 3)
    with pytest.raises(ArityMismatch):
        bd0(msum("mu"), 2)


def test_differential_alone_spreads_freely():
    result = fixed_point(msum("d"), 2)
    assert result.d_omega == bd0(msum("d"), 2)


def test_product_alone():
    result = fixed_point(omega_from_generators([MU]), 3)
    for text in ["mu", "[mu 1]", "[1 mu]", "[mu; mu]"]:
        assert mono(text) in result.d_omega, text
    assert result.d_omega.coefficient(mono("mu")) == 1
    assert mono("mu(mu(x)1)") in result.d_omega
    assert mono("mu(1(x)mu)") in result.d_omega
    assert mono("mu(mu(x)1)") in result.expansion
    assert is_stable(result)


def test_coproduct_alone():
    result = fixed_point(omega_from_generators([DELTA]), 3)
    for text in ["Delta", "[Delta; 1]", "[1; Delta]", "[Delta Delta]"]:
        assert mono(text) in result.d_omega, text
    assert mono("(Delta(x)1)Delta") in result.d_omega
    assert mono("(1(x)Delta)Delta") in result.d_omega


def test_worked_example_composites_are_in_d_omega():
    result = fixed_point(omega_from_generators([D, MU, THETA, DELTA]), 3)
    for text in ["mu(mu(x)1)", "mu(1(x)mu)", "(Delta(x)1)Delta", "(1(x)Delta)Delta"]:
        assert mono(text) in result.d_omega, text
        assert mono(text) in result.expansion, text
    for text in ["d", "[d 1]", "[1; d]", "theta", "[theta; mu]", "[Delta theta]"]:
        assert mono(text) in result.d_omega, text
        assert mono(text) not in result.expansion, text


def test_worked_example_at_window_four():
    omega = omega_from_generators([D, MU, THETA, DELTA])
    result = fixed_point(omega, 4)
    assert is_stable(result)
    assert result.d_omega.truncate(3) == fixed_point(omega, 3).d_omega
    for text in ["[mu 1 1]", "[1; 1; Delta]", "[d 1 1 1]", "mu(mu(mu(x)1)(x)1)"]:
        assert mono(text) in result.d_omega, text
    for m, _ in result.d_omega:
        assert sum(m.x) <= 4 and sum(m.y) <= 4, m.render(True)


def test_zero_omega():
    result = fixed_point(MonomialSum(), 3)
    assert not result.d_omega
    assert result.iterations == 1


def test_everything_stays_in_the_window():
    omega = omega_from_generators([D, MU, DELTA, THETA])
    result = fixed_point(omega, 3)
    for m, _ in result.d_omega:
        assert sum(m.x) <= 3 and sum(m.y) <= 3, m.render(True)
    assert is_stable(result)


def test_bd_is_idempotent_at_the_fixed_point():
    result = fixed_point(omega_from_generators([MU, DELTA]), 3)
    assert BD(result.phi, result.psi, 3) == (result.phi, result.psi)


def test_solver_validation():
    with pytest.raises(InvalidData):
        BiderivativeSolver(msum("mu"), 1)
    with pytest.raises(InvalidData):
        BiderivativeSolver(msum("[mu 1]"), 3)
    with pytest.raises(InvalidData):
        BD(Cochain(), Cochain(), 1)


def test_group_by_arrow():
    s = msum("mu") + msum("[mu 1]") + msum("Delta")
    groups = group_by_arrow(s)
    assert [key for key, _ in groups] == sorted(key for key, _ in groups)
    assert dict(groups)[((2, 1), (1, 1))] == msum("mu")
    assert dict(groups)[((3, 1), (2, 1))] == msum("[mu 1]")
