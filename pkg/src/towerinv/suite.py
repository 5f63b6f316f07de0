"""The end-to-end check suite run by ``towerinv suite``.

Each check returns a :class:`CheckResult` with a verdict and the measured
quantities as decimal strings.  Nothing time-dependent goes into a result,
so two runs with the same seed render identical reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import mpmath

from . import reconstruct, towers
from .characters import DirichletCharacter, unit_group
from .fields import build_abelian_field, cyclotomic_field, quadratic_field, relative_disc_norm
from .lfunc import log_hr
from .numeric import exact_tolerance, fmt, precision
from .oracles import log_hr_quadratic, log_hr_zeta5
from .splitting import disc_formula, ramification_data


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    detail: str = ""


ACCEPTANCE_TOWER = dict(ell=3, max_level=5, base_level=1)


def class_number_formula(prec=None, tolerance=1e-20):
    """log(hR) from L-values against form counting and continued fractions."""
    with precision(prec):
        worst = mpmath.mpf(0)
        measured = {}
        for D in (-4, -3, 5, 8):
            K = quadratic_field(D)
            a, b = log_hr(K).log_hr, log_hr_quadratic(D)
            err = _rel(a, b)
            worst = max(worst, err)
            measured[K.label] = fmt(err, 6)
        a, (b, _, _) = log_hr(cyclotomic_field(5)).log_hr, log_hr_zeta5()
        err = _rel(a, b)
        worst = max(worst, err)
        measured["Q(zeta_5)"] = fmt(err, 6)
        return CheckResult(1, "class number formula", bool(worst < tolerance), measured)


def _rel(a, b):
    # relative error, measured against 1 when both sides vanish
    return abs(a - b) / max(abs(a), abs(b), 1)


def random_abelian_pair(rng, max_conductor=200):
    """L ⊇ K inside Q(zeta_m), m <= max_conductor, from random character generators."""
    while True:
        m = rng.randint(3, max_conductor)
        gens, orders, _ = unit_group(m)
        if not gens:
            continue
        k = rng.randint(1, min(2, len(gens)))
        chars = [DirichletCharacter.from_images(m, [rng.randrange(o) for o in orders]) for _ in range(k)]
        L = build_abelian_field(m, chars, f"L(m={m})")
        if L.degree == 1 or L.degree > 48:
            continue
        # K generated by powers of the generators of L
        sub = [chi if rng.random() < 0.3 else _power(chi, rng.choice([2, 3, chi.order])) for chi in chars[: rng.randint(0, k)]]
        K = build_abelian_field(m, sub, f"K(m={m})")
        return L, K


def _power(chi, n):
    out = chi
    for _ in range(n - 1):
        out = out * chi
    return out


def discriminant_exponents(seed=0, count=50, max_conductor=200):
    """Solved wild exponents rebuild N D_{L/K} exactly on random abelian pairs."""
    rng = random.Random(seed)
    problems = []
    wild = 0
    for i in range(count):
        L, K = random_abelian_pair(rng, max_conductor)
        ram = ramification_data(L, K)
        for r in ram:
            if r.beta < 0 or (r.beta == 0) != r.tame:
                problems.append(f"pair {i}: p={r.p} beta={r.beta} e={r.e}")
            wild += not r.tame
        norm_disc, _, _ = disc_formula(ram)
        if norm_disc != relative_disc_norm(L, K):
            problems.append(f"pair {i}: product {norm_disc} != {relative_disc_norm(L, K)}")
    return CheckResult(
        2,
        "discriminant exponents",
        not problems,
        {"pairs": str(count), "wild primes": str(wild), "failures": str(len(problems))},
        "; ".join(problems[:5]),
    )


def acceptance_tower(prec=None):
    return towers.cyclotomic_tower(**ACCEPTANCE_TOWER, prec=prec)


def genus_bridge(seed=0, prec=None, corpus=None):
    """g_n = [K_n:K] g_K + g_{n/K} and 1/mu = 1/mu_rel + g_K on every corpus level."""
    with precision(prec):
        tol = exact_tolerance(mpmath.mp.prec)
        if corpus is None:
            corpus = tower_corpus(seed, prec)
        worst = mpmath.mpf(0)
        levels = 0
        for t in corpus:
            for row in towers.genus_bridge(t):
                levels += 1
                worst = max(worst, row["genus_residual"], row.get("mu_residual", 0))
        return CheckResult(3, "genus bridge", bool(worst < tol), {"levels": str(levels), "max residual": fmt(worst, 6)})


def tower_corpus(seed=0, prec=None, synthetic=20):
    out = [
        acceptance_tower(prec),
        towers.cyclotomic_tower(3, 4, prec=prec),
        towers.cyclotomic_tower(5, 3, prec=prec, prime_bound=200),
        towers.cyclotomic_tower(7, 3, base_level=1, prec=prec, prime_bound=200),
    ]
    out += [towers.random_tame_tower(seed * 1000 + s, prec=prec) for s in range(synthetic)]
    return out


def tvz_trend(prec=None, tower=None, threshold=0.5):
    """Brauer-Siegel ratio against the prime-count side on the cyclotomic 3-tower."""
    with precision(prec):
        t = tower or acceptance_tower(prec)
        rep = towers.check_tvz(t, threshold=threshold)
        in_range = all(0 < r["bs"] < 2 for r in rep.rows)
        measured = {"degrees": " ".join(str(lv.field.degree) for lv in t.levels)}
        for r in rep.rows:
            measured[f"n={r['n']}"] = f"bs={fmt(r['bs'], 12)} rhs={fmt(r['rhs'], 12)} gap={fmt(r['gap'], 12)}"
        return CheckResult(4, "tvz trend", bool(rep.passed and in_range), measured, "" if in_range else "bs outside (0, 2)")


def relative_identities(seed=0, count=100, prec=None, tolerance=1e-9):
    """lambda_rel/mu_rel against g_K + beta and the psi-sum on tame synthetic towers."""
    with precision(prec):
        worst_beta = worst_psi = mpmath.mpf(0)
        for s in range(count):
            rep = towers.check_rel_identities(towers.random_tame_tower(seed * 1000 + s), tolerance=tolerance)
            worst_beta = max(worst_beta, rep.gaps["beta_gap"], rep.gaps["bridge_gap"])
            worst_psi = max(worst_psi, rep.gaps["psi_beta_gap"])
        ok = worst_beta < tolerance and worst_psi < tolerance
        return CheckResult(
            5, "relative identities", bool(ok),
            {"towers": str(count), "max beta gap": fmt(worst_beta, 6), "max psi-beta gap": fmt(worst_psi, 6)},
        )


def nested_families(seed=0, count=20, depth=6, prec=None, tolerance=1e-9):
    """Limit exchange and continuity of beta on seeded nested families."""
    with precision(prec):
        worst_ex = worst_cont = mpmath.mpf(0)
        for s in range(count):
            ex = towers.check_limit_exchange(towers.random_exchange_family(seed * 1000 + s, depth), tolerance)
            co = towers.check_beta_continuity(towers.random_continuity_family(seed * 1000 + s, depth), tolerance)
            worst_ex = max(worst_ex, ex.gaps["gap"])
            worst_cont = max(worst_cont, co.gaps["gap"])
        ok = worst_ex < tolerance and worst_cont < tolerance
        return CheckResult(
            6, "nested families", bool(ok),
            {"families": str(count), "max exchange gap": fmt(worst_ex, 6), "max continuity gap": fmt(worst_cont, 6)},
        )


def norm_round_trip(t_bound=64, f_bound=6, c_bound=6, prec=None):
    """Recover (t, f) from beta data; the integer equation has no c >= 2 solution."""
    with precision(prec):
        misses = []
        cases = 0
        for t in reconstruct.prime_powers(t_bound):
            for f in range(1, f_bound + 1):
                cases += 1
                b = reconstruct.classify_behavior(reconstruct.ztower_from_truth(t, f))
                if not b.has_behavior:
                    misses.append((t, f))
                    continue
                m = reconstruct.norm_from_c(b.C)
                if (m.norm, m.f) != (t, f):
                    misses.append((t, f))
        sols = reconstruct.c_equals_one_search(t_bound, f_bound, c_bound)
        return CheckResult(
            7, "norm round trip", not misses and not sols,
            {"cases": str(cases), "misses": str(len(misses)), "c>=2 solutions": str(len(sols))},
        )


def criterion_equivalence(seed=0, count=100):
    """Direct z-count verdict against the separating-pair verdict."""
    from .errors import InconsistentLattice

    disagreements = 0
    checked = 0
    for s in range(count):
        lat = reconstruct.random_lattice(seed * 1000 + s)
        for H in lat.labels:
            checked += 1
            try:
                reconstruct.criterion1(lat, H)
            except InconsistentLattice:
                disagreements += 1
    return CheckResult(
        8, "criterion equivalence", disagreements == 0,
        {"lattices": str(count), "subgroups": str(checked), "disagreements": str(disagreements)},
    )


def run_suite(seed=0, prec=None):
    tower = acceptance_tower(prec)
    return [
        class_number_formula(prec),
        discriminant_exponents(seed),
        genus_bridge(seed, prec),
        tvz_trend(prec, tower),
        relative_identities(seed, prec=prec),
        nested_families(seed, prec=prec),
        norm_round_trip(prec=prec),
        criterion_equivalence(seed),
    ]
