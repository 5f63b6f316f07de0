import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from towerinv import errors, reconstruct as rc

from .conftest import EXACT


def chain_lattice():
    # r lies in S; B and C separate p from q
    sets = {"U": {"p", "q", "r"}, "A": {"p", "q"}, "B": {"q"}, "C": {"p"}, "O": set()}
    return rc.lattice_from_sets(sets, {"r"}, "U")


def test_z_count_examples():
    lat = chain_lattice()
    assert [rc.z_count(lat, H) for H in ("U", "A", "B", "C", "O")] == [2, 2, 1, 1, 0]


def test_criterion_examples():
    lat = chain_lattice()
    top = rc.criterion1(lat, "U")
    assert top.z_exceeds_one and top.witness is not None
    assert not rc.criterion1(lat, "B").z_exceeds_one
    assert rc.criterion1(lat, "O").z_is_zero


def test_unknown_subgroup():
    with pytest.raises(errors.UnknownSubgroup):
        rc.z_count(chain_lattice(), "X")


def test_inconsistent_lattice():
    # two primes outside S under U but no subgroup separates them
    sets = {"U": {"p", "q"}, "O": set()}
    lat = rc.lattice_from_sets(sets, set(), "U")
    with pytest.raises(errors.InconsistentLattice):
        rc.criterion1(lat, "U")


def test_lattice_validation():
    with pytest.raises(errors.SchemaError):
        rc.lattice_from_sets({"U": {"p", "q"}, "A": {"p"}, "B": {"q", "p"}}, set(), "U")
    with pytest.raises(errors.SchemaError):
        rc.lattice_from_sets({"U": {"p", "q"}, "A": {"p"}, "B": {"q"}}, set(), "U")
    doc = rc.lattice_to_json(chain_lattice())
    doc["intersections"] = [r for r in doc["intersections"] if r[:2] != ["A", "B"]]
    with pytest.raises(errors.SchemaError):
        rc.lattice_from_json(doc)


def test_json_round_trip():
    lat = rc.random_lattice(7)
    again = rc.lattice_from_json(rc.lattice_to_json(lat))
    assert again == lat


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_lattices_agree_and_z_monotone(seed):
    lat = rc.random_lattice(seed)
    for H in lat.labels:
        rc.criterion1(lat, H)
        for K in lat.below(H):
            assert rc.z_count(lat, K) <= rc.z_count(lat, H)


def test_classify_behavior():
    d = rc.ztower_from_truth(5, 2)
    b = rc.classify_behavior(d)
    assert b.has_behavior
    assert abs(b.C - mpmath.log(mpmath.mpf(25) / 24) / 2) < EXACT
    decaying = rc.ZTowerDatum(("a", "b", "c"), (1, 2, 4), tuple(rc.beta_from_norm(2, f) for f in (1, 2, 4)))
    assert not rc.classify_behavior(decaying).has_behavior
    with pytest.raises(errors.InsufficientLevels):
        rc.classify_behavior(rc.ZTowerDatum(("a",), (1,), (mpmath.mpf(1),)))


@pytest.mark.parametrize(
    "C,truth",
    [
        (lambda: mpmath.log(2), (2, 1)),
        (lambda: mpmath.log(mpmath.mpf(9) / 8), (9, 1)),
        (lambda: mpmath.log(mpmath.mpf(4) / 3) / 2, (2, 2)),
        (lambda: rc.beta_from_norm(7, 3), (7, 3)),
    ],
)
def test_norm_from_c_examples(C, truth):
    m = rc.norm_from_c(C())
    assert (m.norm, m.f) == truth
    if truth[1] == 1:
        assert abs(m.x - truth[0]) < 1e-25
    assert abs(rc.beta_from_norm(m.norm, m.f) - C()) < EXACT


def test_norm_from_c_failures():
    with pytest.raises(errors.NoPrimePowerMatch):
        rc.norm_from_c(mpmath.log(mpmath.mpf(6) / 5))
    with pytest.raises(errors.InputError):
        rc.norm_from_c(0)
    with pytest.raises(errors.AmbiguousMatch):
        rc.norm_from_c(rc.beta_from_norm(2, 1), tolerance=0.5)


def test_c_equals_one_search():
    assert rc.c_equals_one_search(32, 4, 4) == []
    with pytest.raises(errors.InputError):
        rc.c_equals_one_search(1, 3, 3)


def test_prime_powers():
    assert rc.prime_powers(20) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]
