from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerinv.characters import (
    DirichletCharacter,
    all_characters,
    kronecker_character,
    principal,
    unit_group,
)
from towerinv.errors import InvalidCharacter


def test_unit_group_logs_cover_units():
    for n in (1, 2, 4, 8, 9, 12, 15, 16, 63):
        gens, orders, logs = unit_group(n)
        units = [a for a in range(n) if gcd(a, n) == 1] if n > 1 else [0]
        assert sorted(a for a in range(n) if logs[a] is not None) == units
        size = 1
        for o in orders:
            size *= o
        assert size == len(units)


def test_character_count_matches_totient():
    assert len(all_characters(15)) == 8
    assert len(set(all_characters(16))) == 8


def test_kronecker_minus_four():
    chi = kronecker_character(-4)
    assert chi.conductor == 4 and not chi.even
    assert chi.exps == (None, 0, None, 1)


def test_quadratic_mod_five_is_even():
    chi = kronecker_character(5)
    assert chi.even and chi.conductor == 5 and chi.order == 2


def test_lift_keeps_conductor_and_key():
    chi = kronecker_character(-3)
    lifted = chi.lift(12)
    assert lifted.modulus == 12
    assert lifted.conductor == 3
    assert lifted.key == chi.key
    assert lifted.primitive() == chi


def test_principal_has_conductor_one():
    assert principal(20).conductor == 1
    assert principal(20).is_principal


def test_from_table_rejects_non_multiplicative():
    with pytest.raises(InvalidCharacter):
        DirichletCharacter.from_table(5, 4, [None, 0, 1, 1, 2])


def test_from_table_rejects_nonzero_at_noncoprime():
    with pytest.raises(InvalidCharacter):
        DirichletCharacter.from_table(4, 2, [0, 0, None, 1])


def test_multiplying_different_moduli_fails():
    with pytest.raises(InvalidCharacter):
        kronecker_character(-4) * kronecker_character(5)


moduli = st.integers(min_value=2, max_value=90)


@settings(max_examples=40, deadline=None)
@given(moduli, st.data())
def test_multiplicative_and_parity(n, data):
    chars = all_characters(n)
    chi = chars[data.draw(st.integers(0, len(chars) - 1))]
    for a in range(n):
        for b in range(n):
            ka, kb, kab = chi.value_exp(a), chi.value_exp(b), chi.value_exp(a * b)
            if ka is None or kb is None:
                assert kab is None
            else:
                assert kab == (ka + kb) % chi.order
    assert chi.even == (chi.value_exp(n - 1) == 0)
    assert n % chi.conductor == 0
    # the primitive character induces chi
    prim = chi.primitive()
    for a in range(n):
        if chi.value_exp(a) is not None:
            assert prim.value_exp(a) == chi.value_exp(a)


@settings(max_examples=30, deadline=None)
@given(moduli, st.data())
def test_conjugate_is_inverse(n, data):
    chars = all_characters(n)
    chi = chars[data.draw(st.integers(0, len(chars) - 1))]
    assert (chi * chi.conjugate()).is_principal
