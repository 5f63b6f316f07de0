import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from towerinv import errors, towers
from towerinv.fields import quadratic_field

from .conftest import EXACT



@pytest.fixture(scope="module")
def tower34():
    return towers.cyclotomic_tower(3, 4, prime_bound=200)


def one_prime(traj, limit, norm=2, **kw):
    indices = kw.pop("indices", [2**n for n in range(1, len(traj) + 1)])
    return towers.synthetic_tower(indices, [{"label": "P", "norm": norm, "trajectory": traj, "limit": limit}], **kw)


def test_cyclotomic_degrees(tower34):
    assert [lv.field.degree for lv in tower34.levels] == [2, 6, 18, 54]
    assert tower34.strictly_increasing
    t = towers.cyclotomic_tower(5, 2, prime_bound=50)
    assert [lv.index for lv in t.levels] == [4, 20]


def test_cyclotomic_genus_from_disc(tower34):
    # Q(zeta_9): |D| = 3^9
    lv = tower34.levels[1]
    assert abs(lv.genus - 9 * mpmath.log(3) / 2) < EXACT
    assert abs(lv.rel_genus - lv.genus) < EXACT


def test_cyclotomic_rejections():
    with pytest.raises(errors.InputError):
        towers.cyclotomic_tower(2, 4)
    with pytest.raises(errors.InputError):
        towers.cyclotomic_tower(9, 3)
    with pytest.raises(errors.CapExceeded):
        towers.cyclotomic_tower(3, 8)


def test_estimates_on_cyclotomic(tower34):
    mu = towers.estimate(tower34, "mu")
    assert mu.monotone == "decreasing"
    assert mu.levels_used == [1, 2, 3, 4]
    # totally complex levels: r2 / g
    phi_c = towers.estimate(tower34, "phi(C)")
    assert all(v > 0 for v in phi_c.per_level)
    assert towers.estimate(tower34, "psi(R)").per_level == [0, 0, 0, 0]
    assert towers.beta(tower34).limit_estimate == 0


def test_depth_checks(tower34):
    with pytest.raises(errors.InsufficientLevels):
        towers.estimate(tower34, "mu", depth=5)
    with pytest.raises(errors.InsufficientLevels):
        towers.estimate(tower34, "mu", depth=0)
    assert len(towers.estimate(tower34, "mu", depth=2).per_level) == 2


@pytest.mark.parametrize("name", ["nu", "phi(6)", "phi(1)", "psi(x)"])
def test_bad_names(name):
    with pytest.raises(errors.InputError):
        towers.parse_name(name)


def test_synthetic_constant_bs():
    t = one_prime([[2, 1, 2], [2, 1, 2], [2, 1, 2]], [2, 1], log_hr_rule="constant", bs_constant="0.25")
    est = towers.estimate(t, "bs")
    assert est.monotone == "constant"
    assert all(abs(v - mpmath.mpf("0.25")) < EXACT for v in est.per_level)


def test_beta_single_split_prime():
    t = one_prime([[1, 1]] * 3, [1, 1])
    assert abs(towers.beta(t).limit_estimate - mpmath.log(2)) < EXACT


def test_beta_two_primes():
    primes = [
        {"label": "a", "norm": 2, "trajectory": [[1, 1], [1, 1]], "limit": [1, 1]},
        {"label": "b", "norm": 3, "trajectory": [[1, 1], [2, 1]], "limit": [2, 1]},
        {"label": "c", "norm": 5, "trajectory": [[1, 1], [1, 2]], "limit": None},
    ]
    t = towers.synthetic_tower([2, 4], primes)
    expected = mpmath.log(2) + mpmath.log(mpmath.mpf(3) / 2) / 2
    assert abs(towers.beta(t).limit_estimate - expected) < EXACT


def test_beta_undecided():
    t = towers.synthetic_tower([2, 4], [{"norm": 3, "trajectory": [[1, 1], [1, 1]]}])
    with pytest.raises(errors.UndecidableTail):
        towers.beta(t)


def test_beta_summand_value():
    assert abs(towers.beta_summand(3, 2, 1) - mpmath.log(1.5) / 2) < EXACT
    assert abs(towers.beta_summand(2, 1, 2) - mpmath.log(mpmath.mpf(4) / 3) / 2) < EXACT


def test_synthetic_validation():
    with pytest.raises(errors.SchemaError):
        one_prime([[1, 1], [1, 1]], [1, 1], indices=[4, 4])
    with pytest.raises(errors.TransitivityViolated):
        one_prime([[3, 1], [3, 1]], [3, 1], norm=5, indices=[2, 4])
    with pytest.raises(errors.MonotonicityViolated):
        one_prime([[1, 2], [1, 1]], [1, 2], norm=3, indices=[2, 4])
    with pytest.raises(errors.SchemaError):
        # tame ramification with nonzero beta
        one_prime([[2, 1, 1], [2, 1, 1]], [2, 1], norm=3, indices=[2, 4])
    with pytest.raises(errors.SchemaError):
        # wild ramification with beta = 0
        one_prime([[2, 1, 0], [2, 1, 0]], [2, 1], indices=[2, 4])
    with pytest.raises(errors.SchemaError):
        one_prime([[1, 1]], [1, 1], norm=6, indices=[2])


def test_tvz_rhs_rule_passes():
    t = towers.random_tame_tower(3)
    rep = towers.check_tvz(t)
    assert rep.passed
    assert all(r["gap"] < EXACT for r in rep.rows)


def test_tvz_far_tower_fails():
    t = one_prime([[1, 1]] * 3, [1, 1], log_hr_values=[50, 100, 200], base=quadratic_field(-4))
    rep = towers.check_tvz(t)
    assert not rep.passed


def test_tvz_frozen_three_tower():
    t = towers.cyclotomic_tower(3, 5, base_level=1)
    rep = towers.check_tvz(t)
    assert rep.passed
    gaps = [mpmath.nstr(r["gap"], 3) for r in rep.rows]
    assert gaps == ["0.0747", "0.0592", "0.0254", "0.00913"]


def test_rel_identities_base_q():
    # over Q: lambda_rel/mu_rel = beta exactly
    t = towers.synthetic_tower(
        [2, 4, 8],
        [
            {"label": "a", "norm": 2, "trajectory": [[1, 1]] * 3, "limit": [1, 1]},
            {"label": "b", "norm": 3, "trajectory": [[2, 1]] * 3, "limit": [2, 1]},
        ],
    )
    rep = towers.check_rel_identities(t)
    assert rep.passed
    assert abs(rep.gaps["lambda_rel_over_mu_rel"] - rep.gaps["beta"]) < EXACT
    expected = mpmath.log(2) + mpmath.log(1.5) / 2
    assert abs(rep.gaps["beta"] - expected) < EXACT


def test_rel_identities_rejects_cyclotomic(tower34):
    with pytest.raises(errors.HypothesisViolated):
        towers.check_rel_identities(tower34)


def test_rel_identities_unramified():
    t = one_prime([[1, 1]] * 3, [1, 1])
    with pytest.raises(errors.UnramifiedTower):
        towers.check_rel_identities(t)


def test_mu_rel_lower_bound():
    t = towers.random_tame_tower(5)
    bound = towers.mu_rel_lower_bound(t)
    mu_rel = towers.estimate(t, "muRel")
    assert all(v >= bound for v in mu_rel.per_level)
    assert towers.mu_rel_lower_bound(one_prime([[1, 1]] * 2, [1, 1])) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_tame_identities(seed):
    t = towers.random_tame_tower(seed)
    rep = towers.check_rel_identities(t)
    assert rep.passed
    last = t.levels[-1]
    for q in last.phi_counts:
        psi = towers.level_ratio(t, last, f"psi({q})")
        ratio = towers.level_ratio(t, last, f"phiRel({q})") / towers.level_ratio(t, last, "muRel")
        assert abs(psi - ratio) < EXACT
    b = towers.beta(t)
    assert b.monotone in ("decreasing", "constant")
    for row in towers.genus_bridge(t):
        assert row["genus_residual"] < EXACT
        assert row.get("mu_residual", 0) < EXACT


def test_genus_bridge_cyclotomic():
    t = towers.cyclotomic_tower(5, 3, base_level=1, prime_bound=50)
    rows = towers.genus_bridge(t)
    assert len(rows) == 2
    assert all(r["genus_residual"] < EXACT and r["mu_residual"] < EXACT for r in rows)


def test_limit_exchange_example():
    fam = towers.ExchangeFamily(
        mpmath.mpf(0),
        (2, 3),
        full=(((1, 1), (2, 1)), ((1, 2), (2, 2))),
        fixed=(((1, 1), (1, 1)), ((1, 1), (2, 1))),
        full_limit=((1, 2), (2, 2)),
        fixed_limit=((1, 1), (2, 1)),
    )
    rep = towers.check_limit_exchange(fam)
    assert rep.passed
    expected = mpmath.log(2) - towers.beta_summand(2, 1, 2) + towers.beta_summand(3, 2, 1) - towers.beta_summand(3, 2, 2)
    assert abs(rep.gaps["rhs"] - expected) < EXACT


def test_limit_exchange_rejects_growth():
    fam = towers.ExchangeFamily(
        mpmath.mpf(0), (2,), full=(((1, 2),), ((1, 1),)), fixed=(((1, 1),), ((1, 1),)),
        full_limit=((1, 1),), fixed_limit=((1, 1),),
    )
    with pytest.raises(errors.MonotonicityViolated):
        towers.check_limit_exchange(fam)


def test_continuity_example():
    # L_j of degree 2^j; prime of norm 2 splits in L_j, tower adds f = 2
    members = tuple((2**j, ((1, 1),), ((1, 2),), ((1, 2),)) for j in range(3))
    fam = towers.ContinuityFamily((2,), members, ((1, 2),))
    rep = towers.check_beta_continuity(fam)
    assert rep.passed
    assert abs(rep.gaps["limit"] - towers.beta_summand(2, 1, 2)) < EXACT


def test_continuity_transitivity():
    members = (((2, ((1, 1),), ((1, 2),), ((1, 4),))),)
    fam = towers.ContinuityFamily((2,), members, ((1, 2),))
    with pytest.raises(errors.TransitivityViolated):
        towers.check_beta_continuity(fam)
    members = ((2, ((2, 2),), ((1, 1),), None),)
    with pytest.raises(errors.TransitivityViolated):
        towers.check_beta_continuity(towers.ContinuityFamily((2,), members, ((2, 2),)))


@pytest.mark.parametrize("seed", range(10))
def test_random_families(seed):
    assert towers.check_limit_exchange(towers.random_exchange_family(seed)).passed
    assert towers.check_beta_continuity(towers.random_continuity_family(seed)).passed


def test_generators_deterministic():
    a, b = towers.random_tame_tower(11), towers.random_tame_tower(11)
    assert [lv.log_hr for lv in a.levels] == [lv.log_hr for lv in b.levels]
    assert towers.random_exchange_family(4) == towers.random_exchange_family(4)
