from fractions import Fraction

import pytest

from gaudin_sov.classical import SystemConfig
from gaudin_sov.deltamodule import delta_module
from gaudin_sov.quantum import (
    QuantumAlgebras,
    SeparationOperators,
    hitchin_checks,
    ideal_member,
    residue_identity_check,
    normalizer_family,
    quantum_bm,
    separation_checks,
    symbol_checks,
    vacuum_image,
    what_phi,
)
from gaudin_sov.opalgebra import commutator

CFG1 = SystemConfig(1, (0, 1, 2, 3))
CFG1C = SystemConfig(1, (0, 1, 2, 3), (3, 1, 1, 1))


@pytest.fixture(scope="module")
def q1():
    return QuantumAlgebras(CFG1, (), True)


def test_casimir_sign(q1):
    C1 = q1.A.coeff(q1.A.ring.var("C1"))
    assert q1.casimir_element(0) == C1
    assert q1.casimir_element(0, sign=-1) == -C1


def test_vacuum_annihilators(q1):
    assert ideal_member(q1, q1.ell0())
    assert ideal_member(q1, q1.ell1())
    assert ideal_member(q1, q1.sum_h_minus_2())
    assert ideal_member(q1, q1.ell0() * q1.f(0).scale(Fraction(1, 3)))
    assert not ideal_member(q1, q1.f(0))


def test_h1_vacuum_has_two_layers(q1):
    v = vacuum_image(q1, q1.h(0))
    assert sorted(v.layers) == [(0, 0), (1, 0)]


def test_what_phi_of_zero():
    assert what_phi(QuantumAlgebras(CFG1, ("t",)), [0]).is_zero()


def test_gaudin_identities_genus_one(q1):
    checks = {c.name: c for c in hitchin_checks(q1)}
    assert all(c.passed for c in checks.values()), [n for n, c in checks.items() if not c.passed]
    assert checks["gaudin/exact/ell1-remainder"].detail["printed_sign_holds"] is False


def test_symbol_constant(q1):
    (c,) = symbol_checks(q1)
    assert c.passed and c.detail["kappa"] == "1/4"


def test_quantum_bm_commute_genus_two():
    H = quantum_bm(QuantumAlgebras(SystemConfig(2, (0, 1, 2, 3, 5)), (), True))
    assert commutator(H[0], H[1]).is_zero()


def test_residue_identity_needs_standard_residue():
    for phi in ([1], [0, 1], [0, 0, 1]):
        ok, witness, plain = residue_identity_check(CFG1C, phi)
        assert ok, witness
        assert not plain


def test_separation_quarter_convention_only():
    q = QuantumAlgebras(CFG1C)
    dm = delta_module(CFG1C, (), "extended")
    assert SeparationOperators(q, dm, -1, Fraction(1, 4)).failures() == []
    assert SeparationOperators(q, dm, -1).failures() != []
    assert SeparationOperators(q, dm, 1).failures() != []


def test_separation_requires_casimir_hypothesis():
    with pytest.raises(ValueError):
        separation_checks(SystemConfig(1, (0, 1, 2, 3), (1, 1, 1, 1)))


def test_normalizer_family_size():
    # v0, the ratios F_k/F_3 for k > 3 and their pairwise products
    assert len(normalizer_family(delta_module(CFG1))) == 3
    assert len(normalizer_family(delta_module(SystemConfig(2, (0, 1, 2, 3, 5))))) == 6
