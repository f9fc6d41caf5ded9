from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from realwdvv.potentials import (COMPLEX, REAL, IncompleteTableError, InvariantKey,
                                 InvariantTable, assemble_omega, assemble_phi,
                                 assemble_phi_phi, complex_dimension_ok, divisor_reduce,
                                 extract_invariant, real_dimension_ok, reduce_key,
                                 required_keys, ring_for)
from realwdvv.series import OutOfRangeError, Series, StructuralError
from realwdvv.target import p2, projective_space

P2 = p2()
PLAIN = projective_space(2)    # no sign twist on the doubled potential


def N(d, model=P2):
    return InvariantKey.complex((d,), (0, 0, 3 * d - 1))


def W(d, k, l):
    return InvariantKey.real((d,), (0, 0, l), k)


def mono(t1=0, t2=0, t3=0, u=0, q=0):
    return (t1, t2, t3, u, q)


def table(model, entries):
    t = InvariantTable(model)
    for k, v in entries.items():
        t.set(k, v)
    return t


# -- assembly examples ----------------------------------------------------------------

def test_phi_single_line():
    phi = assemble_phi(table(P2, {N(1): 1}), 4, 1)
    assert phi.coeff(mono(t3=2, q=1)) == Fraction(1, 2)
    # the divisor axiom puts h insertions back with multiplier d = 1
    assert phi.coeff(mono(t2=1, t3=2, q=1)) == Fraction(1, 2)


def test_phi_empty_table():
    assert assemble_phi(InvariantTable(P2), 5, 3).is_zero()
    assert assemble_phi_phi(InvariantTable(P2), P2, 5, 3).is_zero()
    assert assemble_omega(InvariantTable(P2), 5, 3).is_zero()


def test_phi_degree_three():
    phi = assemble_phi(table(P2, {N(1): 1, N(2): 1, N(3): 12}), 8, 3)
    assert phi.coeff(mono(t3=8, q=3)) == Fraction(12, factorial(8))


def test_phi_incomplete_table_names_key():
    with pytest.raises(IncompleteTableError) as err:
        assemble_phi(table(P2, {N(1): 1, N(3): 12}), 8, 3)
    assert err.value.key == N(2)


def test_phi_phi_doubles_degree():
    t = table(P2, {N(1): 1})
    assert assemble_phi_phi(t, PLAIN, 4, 3).coeff(mono(t3=2, q=2)) == Fraction(1, 2)
    # the plane's default convention twists class d by (-1)^d
    assert assemble_phi_phi(t, P2, 4, 3).coeff(mono(t3=2, q=2)) == Fraction(-1, 2)
    pp = assemble_phi_phi(table(P2, {N(1): 1, N(2): 1}), P2, 6, 5)
    assert all(m[-1] % 2 == 0 for m in pp.terms())


def test_omega_examples():
    t = table(P2, {W(1, 2, 0): 1, W(1, 0, 1): 1})
    om = assemble_omega(t, 4, 1)
    assert om.coeff(mono(u=2, q=1)) == 1
    assert om.coeff(mono(t3=1, q=1)) == 1


def test_omega_extract_weighted_key(real_p2):
    t = real_p2[0].copy()
    t.set(W(2, 1, 2), 5)
    om = assemble_omega(t, 6, 2)
    assert om.coeff(mono(t3=2, u=1, q=2)) == Fraction(5, 4)   # 2^-1 / (1! 2!)
    assert extract_invariant(om, W(2, 1, 2)) == 5


def test_extract_from_zero():
    zero = Series.zero(ring_for(P2), 6, 3)
    assert extract_invariant(zero, N(2)) == 0
    with pytest.raises(OutOfRangeError):
        extract_invariant(zero, N(3))


def test_spin_tags_never_merge():
    t = table(P2, {W(1, 2, 0): 1, W(1, 0, 1): 1,
                   InvariantKey.real((1,), (0, 0, 0), 2, "other"): 1,
                   InvariantKey.real((1,), (0, 0, 1), 0, "other"): 3})
    with pytest.raises(StructuralError):
        assemble_omega(t, 4, 1)
    assert assemble_omega(t, 4, 1, spin="other").coeff(mono(u=2, q=1)) == 1


# -- divisor reduction ------------------------------------------------------------------

def test_divisor_reduce_complex():
    key, m = divisor_reduce(P2, InvariantKey.complex((3,), (0, 2, 8)), 1)
    assert key == InvariantKey.complex((3,), (0, 1, 8)) and m == 3
    _, m0 = divisor_reduce(P2, InvariantKey.complex((0,), (1, 1, 0)), 1)
    assert m0 == 0
    with pytest.raises(StructuralError):
        divisor_reduce(P2, N(2), 2)


def test_divisor_reduce_real_default_multiplier():
    key, m = divisor_reduce(P2, InvariantKey.real((4,), (0, 1, 2), 7), 1)
    assert key == W(4, 7, 2) and m == 4


def test_reduce_key_and_table_lookup(complex_p2):
    t = complex_p2[0]
    assert reduce_key(P2, InvariantKey.complex((2,), (0, 3, 5))) == (N(2), 8)
    assert t.value(InvariantKey.complex((3,), (0, 2, 8))) == 9 * 12
    assert t.value(InvariantKey.complex((2,), (1, 0, 5))) == 0


# -- table invariants --------------------------------------------------------------------

def test_dimension_constraints(complex_p2, real_p2):
    for k in complex_p2[0].keys(COMPLEX):
        if any(k.degree):
            assert complex_dimension_ok(P2, k)
    for k in real_p2[0].keys(REAL):
        if any(k.degree):
            assert real_dimension_ok(P2, k)
            assert k.k + 2 * k.insertions[2] == 3 * k.degree[0] - 1


def test_required_keys_p2():
    assert [k.degree for k in required_keys(P2, COMPLEX, 100, 4)] == [(1,), (2,), (3,), (4,)]
    assert len(required_keys(P2, REAL, 100, 3)) == 2 + 3 + 5


def test_table_json_round_trip(tmp_path, real_p2):
    t = real_p2[0]
    path = tmp_path / "t.json"
    t.save(path)
    back = InvariantTable.load(P2, path)
    assert back == t and back.provenance == t.provenance
    assert all("/" in r["value"] for r in t.to_records())
    with pytest.raises(ValueError):
        InvariantTable.load(PLAIN, path)


def test_key_validation():
    with pytest.raises(StructuralError):
        InvariantKey(COMPLEX, (1,), (0, 0, 2), k=1)
    with pytest.raises(StructuralError):
        InvariantKey(REAL, (1,), (0, 0, 2))
    with pytest.raises(StructuralError):
        InvariantTable(P2).set(InvariantKey.complex((1,), (0, 2)), 1)


# -- properties ------------------------------------------------------------------------

values = st.fractions(min_value=-50, max_value=50, max_denominator=7)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_assemble_extract_round_trip(data):
    E = data.draw(st.integers(1, 3))
    T = 3 * E + 1
    t = InvariantTable(P2)
    for key in required_keys(P2, COMPLEX, T, E) + required_keys(P2, REAL, T, E):
        t.set(key, data.draw(values))
    phi, om = assemble_phi(t, T, E), assemble_omega(t, T, E)
    for key in t.keys(COMPLEX):
        assert extract_invariant(phi, key) == t[key]
    for key in t.keys(REAL):
        assert extract_invariant(om, key) == t[key]


@settings(max_examples=200, deadline=None)
@given(st.lists(values, min_size=3, max_size=3))
def test_phi_phi_is_pushforward(vals):
    t = InvariantTable(PLAIN)
    for d, v in enumerate(vals, start=1):
        t.set(N(d), v)
    phi = assemble_phi(t, 9, 3)
    pushed = Series(phi.ring, {m[:-1] + (2 * m[-1],): c for m, c in phi.terms().items()}, 9, 6)
    assert assemble_phi_phi(t, PLAIN, 9, 6) == pushed
