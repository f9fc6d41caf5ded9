from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_m03, brute_r12, brute_rc
from realwdvv.potentials import assemble_omega, assemble_phi_phi
from realwdvv.series import StructuralError
from realwdvv.target import p2
from realwdvv.thm3 import (CERTIFICATE, Certificate, JetInstance, m03res, r12, random_instance,
                           rc, run_trials, series_jet, verify_certificate)

P2 = p2()


def zero_instance(n):
    z = Fraction(0)
    g = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    return JetInstance(g, [[[z] * n for _ in range(n)] for _ in range(n)],
                       [[z] * n for _ in range(n)], [z] * n, z)


def as_tuple(inst):
    return inst.ginv, inst.phi3, inst.omega2, inst.omega_u, inst.omega_uu


# -- residual examples ----------------------------------------------------------

def test_zero_instance():
    inst = zero_instance(2)
    assert r12(inst, 0, 1) == 0 and rc(inst, 0, 1, 1, 0) == 0 and m03res(inst, 0, 0, 1) == 0


def test_r12_vanishes_without_real_first_order_data():
    inst = random_instance(3, random.Random(1))
    inst.omega_u = [Fraction(0)] * 3
    inst.omega2 = [[Fraction(0)] * 3 for _ in range(3)]
    assert all(r12(inst, a, b) == 0 for a in range(3) for b in range(3))


def test_trivial_antisymmetry():
    inst = random_instance(3, random.Random(2))
    for a in range(3):
        for b in range(3):
            assert rc(inst, a, b, b, 0) == 0
            assert m03res(inst, a, b, b) == 0


def test_rc_vanishes_without_phi():
    inst = random_instance(2, random.Random(3))
    inst.phi3 = [[[Fraction(0)] * 2 for _ in range(2)] for _ in range(2)]
    assert all(rc(inst, 0, 1, 0, i) == 0 for i in range(2))


def test_index_errors_and_validation():
    inst = random_instance(2, random.Random(4))
    with pytest.raises(IndexError):
        r12(inst, 0, 2)
    with pytest.raises(IndexError):
        m03res(inst, 0, 0, -1)
    inst.omega2[0][1] += 1
    with pytest.raises(StructuralError):
        inst.validate()
    with pytest.raises(ValueError):
        random_instance(0, random.Random(0))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_residuals_match_direct_expansion(n):
    rng = random.Random(n)
    for _ in range(20):
        inst = random_instance(n, rng).validate()
        g, P, O2, OU, OUU = as_tuple(inst)
        a, b, c, i = (rng.randrange(n) for _ in range(4))
        assert r12(inst, a, b) == brute_r12(g, P, O2, OU, OUU, a, b)
        assert rc(inst, a, b, c, i) == brute_rc(g, P, a, b, c, i)
        assert m03res(inst, a, b, c) == brute_m03(g, P, O2, OU, a, b, c)


# -- certificate ------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_certificate_random_trials(n):
    rep = run_trials(n, 100, seed=7)
    assert rep.passed == 100, rep.failures[:1]


def test_certificate_all_index_triples():
    rng = random.Random(11)
    for n in (2, 3):
        inst = random_instance(n, rng)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    chk = verify_certificate(inst, a, b, c)
                    assert chk.passed, chk.to_dict()


def test_wrong_coefficients_fail():
    bad = Certificate((1, 1, 1, -1, -1))
    rep = run_trials(3, 20, seed=1, cert=bad)
    assert rep.failures
    assert not rep.failures[0]["passed"]


def test_zero_real_data_reduces_to_zero():
    inst = random_instance(3, random.Random(5))
    inst.omega2 = [[Fraction(0)] * 3 for _ in range(3)]
    inst.omega_u = [Fraction(0)] * 3
    inst.omega_uu = Fraction(0)
    chk = verify_certificate(inst, 0, 1, 2)
    assert chk.lhs == 0 and chk.rhs == 0


def test_trials_are_deterministic():
    assert run_trials(3, 10, seed=3).to_dict() == run_trials(3, 10, seed=3).to_dict()


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2 ** 32))
def test_certificate_property(n, seed):
    rng = random.Random(seed)
    inst = random_instance(n, rng)
    a, b, c = (rng.randrange(n) for _ in range(3))
    assert verify_certificate(inst, a, b, c).passed


def test_certificate_with_relations_forces_m03(complex_p2, real_p2):
    # on solved potentials every residual is the zero series, hence so is m03
    pp = assemble_phi_phi(complex_p2[0], P2, 8, 3)
    om = assemble_omega(real_p2[0], 8, 3)
    inst = series_jet(pp, om, P2.ginv())
    n = inst.n
    for a in range(n):
        for b in range(n):
            assert r12(inst, a, b).is_zero()
            for c in range(n):
                assert m03res(inst, a, b, c).is_zero()
                assert all(rc(inst, a, b, c, i).is_zero() for i in range(n))
    chk = verify_certificate(inst, 0, 1, 2)
    assert chk.passed and chk.lhs.is_zero()
    assert not inst.omega_uu.is_zero()


def test_series_certificate_on_unsolved_potentials(complex_p2):
    # the identity holds for arbitrary series, not only for solutions
    from realwdvv.potentials import InvariantTable, InvariantKey

    t = InvariantTable(P2)
    for k, l in ((2, 0), (0, 1)):
        t.set(InvariantKey.real((1,), (0, 0, l), k), 3)
    for k, l in ((5, 0), (3, 1), (1, 2)):
        t.set(InvariantKey.real((2,), (0, 0, l), k), Fraction(-2, 7))
    pp = assemble_phi_phi(complex_p2[0], P2, 6, 2)
    om = assemble_omega(t, 6, 2)
    inst = series_jet(pp, om, P2.ginv())
    assert any(not m03res(inst, 1, b, c).is_zero() for b in range(3) for c in range(3))
    for a, b, c in ((1, 0, 1), (1, 1, 2), (2, 0, 1), (2, 1, 0)):
        assert verify_certificate(inst, a, b, c).passed
    assert CERTIFICATE.coefficients == (1, -1, 1, -1, -1)


def test_division_step_is_flagged(complex_p2, real_p2):
    inst = random_instance(2, random.Random(6))
    assert verify_certificate(inst, 0, 1, 1).division_step == "holds"
    inst.omega_uu = Fraction(0)
    assert verify_certificate(inst, 0, 1, 1).division_step == "fails"
    pp = assemble_phi_phi(complex_p2[0], P2, 6, 2)
    om = assemble_omega(real_p2[0], 6, 2)
    chk = verify_certificate(series_jet(pp, om, P2.ginv()), 1, 0, 2)
    assert chk.division_step == "unchecked" and chk.to_dict()["division_step"] == "unchecked"
