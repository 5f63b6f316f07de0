import json

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Poly, cyclotomic_poly, discriminant, symbols

from towerinv.characters import all_characters, kronecker_character
from towerinv.errors import NotASubfield, SchemaError
from towerinv.fields import (
    build_abelian_field,
    cyclotomic_field,
    field_from_json,
    quadratic_field,
    rational_field,
    real_subfield,
    relative_disc_norm,
    relative_genus,
    roots_of_unity_count,
)

from .conftest import EXACT

x = symbols("x")


def test_rational_field():
    Q = build_abelian_field(1, [])
    assert (Q.degree, Q.abs_disc, Q.r1, Q.r2) == (1, 1, 1, 0)
    assert Q.genus == 0


def test_gaussian_field_matches_resultant_discriminant():
    K = build_abelian_field(4, [kronecker_character(-4)])
    assert (K.degree, K.r1, K.r2) == (2, 0, 1)
    assert K.abs_disc == abs(discriminant(x**2 + 1, x)) == 4


def test_zeta5_matches_cyclotomic_polynomial():
    K = build_abelian_field(5, all_characters(5))
    assert K.degree == 4
    assert K.abs_disc == abs(discriminant(cyclotomic_poly(5, x), x)) == 125


@pytest.mark.parametrize("m", [3, 7, 8, 9, 12, 15, 16, 20, 21, 27])
def test_cyclotomic_discriminants(m):
    K = cyclotomic_field(m)
    poly = Poly(cyclotomic_poly(m, x), x)
    assert K.degree == poly.degree()
    assert K.abs_disc == abs(discriminant(poly))


@pytest.mark.parametrize("d,poly", [(-3, x**2 + x + 1), (5, x**2 - x - 1), (8, x**2 - 2), (-8, x**2 + 2), (13, x**2 - x - 3)])
def test_quadratic_discriminants(d, poly):
    K = quadratic_field(d)
    assert K.abs_disc == abs(discriminant(poly, x)) == abs(d)
    assert (K.r1 == 2) == (d > 0)


def test_relative_genus_examples():
    Qi = quadratic_field(-4)
    assert relative_genus(Qi, Qi) == 0
    assert abs(relative_genus(Qi, rational_field()) - mpmath.log(4) / 2) < EXACT
    L = cyclotomic_field(5)
    K = real_subfield(L)
    assert K.abs_disc == 5
    assert abs(relative_genus(L, K) - mpmath.log(5) / 2) < EXACT
    assert relative_disc_norm(L, K) == 5


def test_relative_genus_needs_subfield():
    with pytest.raises(NotASubfield):
        relative_genus(quadratic_field(5), quadratic_field(-4))


def test_roots_of_unity():
    assert roots_of_unity_count(rational_field()) == 2
    assert roots_of_unity_count(quadratic_field(-4)) == 4
    assert roots_of_unity_count(quadratic_field(5)) == 2
    assert roots_of_unity_count(quadratic_field(-3)) == 6
    assert roots_of_unity_count(cyclotomic_field(5)) == 10
    assert roots_of_unity_count(cyclotomic_field(12)) == 12


def test_equality_ignores_modulus():
    assert build_abelian_field(12, [kronecker_character(-3)]) == quadratic_field(-3)


def test_json_round_trip():
    K = cyclotomic_field(15)
    doc = json.loads(json.dumps(K.to_json()))
    assert field_from_json(doc) == K
    assert doc["modulus"] == "15"


def test_json_images_shorthand():
    K = field_from_json({"modulus": "4", "generators": [{"modulus": "4", "images": [1]}]})
    assert K == quadratic_field(-4)


def test_json_malformed():
    with pytest.raises(SchemaError):
        field_from_json({"generators": []})


def _subfields(m):
    chars = all_characters(m)
    out = []
    for chi in chars:
        out.append(build_abelian_field(m, [chi]))
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 60), st.data())
def test_tower_relation_and_monotonicity(m, data):
    subs = _subfields(m)
    K = subs[data.draw(st.integers(0, len(subs) - 1))]
    L = cyclotomic_field(m)
    index = L.degree // K.degree
    assert L.abs_disc % K.abs_disc**index == 0
    residual = L.genus - index * K.genus - relative_genus(L, K)
    assert abs(residual) <= EXACT * max(1, L.genus)
    assert L.genus >= index * K.genus
    # conductor-discriminant: product over the group
    prod = 1
    for chi in K.group:
        prod *= chi.conductor
    assert prod == K.abs_disc
    assert K.degree == K.r1 + 2 * K.r2
