from pathlib import Path

import pytest

from coringkit.algebra import Bimodule, poly_quotient, upper_triangular
from coringkit.comodule import Bicomodule, regular_right
from coringkit.coring import (BaseChange, CoringMorphism, base_change_comparison,
                              divided_power_coalgebra, grouplike_coalgebra, matrix_coalgebra,
                              trivial_coring)
from coringkit.equivalence import (EquivalenceCertificate, adjunction_spotcheck, can_and_phi,
                                   induction_equivalence, sigma_equivalence, verify_certificate)
from coringkit.instance import parse_instance
from coringkit.linalg import GF, QQ, Matrix
from coringkit.verdict import StructureError

from generators import column_comodule, column_module, nonfaithful_module
from oracles import rows_of, textbook_rank

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def sigma_fixtures():
    return {
        "matrix2_on_columns": column_module(QQ, 2),
        "matrix3_on_columns_gf5": column_module(GF(5), 3),
        "nonfaithful": nonfaithful_module(QQ),
        "column_comodule": column_comodule(QQ, 2),
        "column_comodule_gf5": column_comodule(GF(5), 3),
        "regular_divided": regular_right(divided_power_coalgebra(QQ, 2)),
        "regular_grouplike": regular_right(grouplike_coalgebra(QQ, 2)),
        "instance_morita": parse_instance(INSTANCES / "morita_m2.cri").get("Sigma"),
    }


EXPECTED = {
    "matrix2_on_columns": "verified",
    "matrix3_on_columns_gf5": "verified",
    "nonfaithful": "refuted",
    "column_comodule": "verified",
    "column_comodule_gf5": "verified",
    "regular_divided": "refuted",
    "regular_grouplike": "refuted",
    "instance_morita": "verified",
}


@pytest.mark.parametrize("name", list(EXPECTED))
def test_adjunction_diagrams_commute(name):
    sd = can_and_phi(sigma_fixtures()[name])
    v = adjunction_spotcheck(sd)
    assert v.verified, v.reason
    assert v.checks["unit_counit_diagram"]
    assert any(k.startswith("unit_diagram") for k in v.checks)
    assert any(k.startswith("counit_diagram") for k in v.checks)


@pytest.mark.parametrize("name", list(EXPECTED))
@pytest.mark.parametrize("branch", ["faithfully_flat", "coseparable"])
def test_sigma_verdicts(name, branch):
    sd = can_and_phi(sigma_fixtures()[name])
    assert sigma_equivalence(sd, branch).outcome == EXPECTED[name]


def test_matrix_algebra_positive_instance():
    sd = can_and_phi(column_module(QQ, 2))
    v = sigma_equivalence(sd)
    assert v.verified
    assert v.checks["completely_faithful"] and v.checks["faithfully_flat"] and v.checks["can_bijective"]
    assert v.witnesses["phi_bijective"]


def test_nonfaithful_instance_has_an_annihilating_element():
    s = nonfaithful_module(QQ)
    v = sigma_equivalence(can_and_phi(s))
    assert v.outcome == "refuted"
    b = v.witnesses["annihilating_element"]
    assert b == (0, 1)
    # the element acts as zero on Sigma and is not in the (zero) radical
    assert s.module.act_left(b).is_zero()


def test_sigma_needs_projectivity():
    dual = poly_quotient(QQ, [0, 0, 1])
    simple = Bimodule.right_module(dual, 1, [Matrix(QQ, [[1]]), Matrix(QQ, [[0]])])
    s = Bicomodule(trivial_coring(simple.left), trivial_coring(dual), simple)
    with pytest.raises(StructureError):
        can_and_phi(s)


def test_unit_and_counit_are_isomorphisms_exactly_when_verified():
    for name, s in sigma_fixtures().items():
        v = adjunction_spotcheck(can_and_phi(s))
        all_bijective = all(v.witnesses.values())
        assert all_bijective == (EXPECTED[name] == "verified"), name


# certificates

def certificate_fixture():
    return parse_instance(INSTANCES / "cert_matrix2.cri").get("Cert")


def test_certificate_verifies():
    v = verify_certificate(certificate_fixture())
    assert v.verified
    assert v.checks["square_1"] and v.checks["square_2"]


def test_certificate_with_unnormalised_pairing_fails_a_square():
    cert = certificate_fixture()
    bad = EquivalenceCertificate(cert.x, cert.lam, cert.f, cert.g.scale(2))
    v = verify_certificate(bad)
    assert v.outcome == "refuted"
    assert v.checks["f_bijective"] and v.checks["g_bijective"]
    assert not (v.checks["square_1"] and v.checks["square_2"])


def test_certificate_with_a_singular_map():
    cert = certificate_fixture()
    bad = EquivalenceCertificate(cert.x, cert.lam, Matrix.zeros(QQ, *cert.f.shape), cert.g)
    v = verify_certificate(bad)
    assert v.outcome == "refuted" and not v.checks["f_bijective"]


# induction along coring morphisms

def test_induction_along_the_counit_of_a_trivial_coring():
    mor = CoringMorphism.counit(trivial_coring(upper_triangular(QQ, 2)))
    v = induction_equivalence(mor)
    assert v.verified


def test_induction_along_the_counit_of_matrix_coalgebra():
    mor = CoringMorphism.counit(matrix_coalgebra(QQ, 2))
    v = induction_equivalence(mor)
    assert v.outcome == "refuted"
    assert v.reason.endswith("refuted (canonical)")
    assert v.witnesses["bcb_dim"] == 4 and v.witnesses["target_dim"] == 1
    assert v.witnesses["omega_rank"] == 1
    omega = base_change_comparison(BaseChange(mor))
    assert textbook_rank(rows_of(omega)) == 1


@pytest.mark.parametrize("c", [grouplike_coalgebra(QQ, 2), divided_power_coalgebra(QQ, 2)],
                         ids=["grouplike2", "divided2"])
def test_induction_along_identities(c):
    assert induction_equivalence(CoringMorphism.identity(c)).verified


def test_induction_rejects_a_non_morphism():
    c = divided_power_coalgebra(QQ, 2)
    mor = CoringMorphism(c, c, Matrix(QQ, [[0, 1], [1, 0]]))
    v = induction_equivalence(mor)
    assert v.outcome == "refuted" and v.reason.startswith("not a coring morphism")
