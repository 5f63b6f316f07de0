"""Towers of number fields and their asymptotic invariants.

Two kinds of tower are supported.  Cyclotomic towers Q(zeta_{l^n}) are
computed from scratch: discriminants from conductors, log(hR) from L-values,
splitting from Frobenius.  Synthetic towers are prescribed data (per-level
degree, per-prime (e, f) trajectories, log(hR) values or a generation rule)
used to exercise identities whose inputs cannot be computed for real fields.

Every invariant is estimated from its finite-level ratio; the estimate is the
value at the last usable level, together with the last Cauchy gap.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from sympy import factorint, isprime, primerange

from . import errors
from .fields import AbelianField, cyclotomic_field, rational_field
from .lfunc import log_hr
from .numeric import exact_tolerance, precision
from .splitting import SplitData, ramification_data, split_prime

DEFAULT_CAP = 3000
DEFAULT_PRIME_BOUND = 1000


@dataclass(frozen=True)
class TrackedPrime:
    """A prime of the base field followed through a synthetic tower."""

    label: str
    norm: int
    trajectory: tuple  # ((e, f, beta), ...) one entry per level
    limit: tuple | None  # (e, f) in the whole tower; None = infinite degree


@dataclass(frozen=True)
class LevelData:
    n: int
    index: int
    genus: mpmath.mpf
    rel_genus: mpmath.mpf
    log_hr: mpmath.mpf
    r1: int
    r2: int
    phi_counts: dict  # prime power q -> number of primes of norm q
    split: dict = field(default_factory=dict)  # base prime label -> SplitData over K
    field: AbelianField | None = None

    def count(self, alpha):
        if alpha == "R":
            return self.r1
        if alpha == "C":
            return self.r2
        return self.phi_counts.get(int(alpha), 0)


@dataclass(frozen=True)
class TowerHandle:
    label: str
    kind: str  # "cyclotomic" | "synthetic"
    base_genus: mpmath.mpf
    base_r1: int
    base_r2: int
    levels: tuple
    base_field: AbelianField | None = None
    ell: int | None = None
    primes: tuple = ()  # TrackedPrime for synthetic towers
    almost_normal: bool = True

    @property
    def strictly_increasing(self):
        idx = [lv.index for lv in self.levels]
        return all(a < b for a, b in zip(idx, idx[1:]))


@dataclass
class InvariantEstimate:
    name: str
    per_level: list
    levels_used: list
    limit_estimate: mpmath.mpf
    cauchy_gap: mpmath.mpf
    converged: bool
    monotone: str  # "increasing" | "decreasing" | "constant" | "mixed"


# ---------------------------------------------------------------------------
# construction


def cyclotomic_tower(ell, max_level, base_level=0, prime_bound=DEFAULT_PRIME_BOUND, cap=DEFAULT_CAP, prec=None):
    """Levels Q(zeta_{ell^n}) for base_level < n <= max_level over K = Q(zeta_{ell^base_level})."""
    if ell == 2 or not isprime(ell):
        raise errors.InputError(f"ell must be an odd prime, got {ell}")
    if max_level < 2 or not 0 <= base_level < max_level:
        raise errors.InputError("need max_level >= 2 and 0 <= base_level < max_level")
    if ell**max_level > cap:
        raise errors.CapExceeded(f"{ell}^{max_level} exceeds the conductor cap {cap}")
    with precision(prec):
        K = rational_field() if base_level == 0 else cyclotomic_field(ell**base_level)
        base_split = {p: split_prime(K, p) for p in primerange(2, prime_bound + 1)}
        levels = []
        for n in range(base_level + 1, max_level + 1):
            F = cyclotomic_field(ell**n)
            index = F.degree // K.degree
            ram = ramification_data(F, K)
            rel_genus = log_norm_disc(ram) / 2
            phi, split = {}, {}
            for p, sK in base_split.items():
                s = split_prime(F, p)
                q = p**s.f
                phi[q] = phi.get(q, 0) + s.g
                split[p] = SplitData(p, s.e // sK.e, s.f // sK.f, s.g // sK.g)
            levels.append(
                LevelData(n, index, F.genus, rel_genus, log_hr(F, prec).log_hr, F.r1, F.r2, phi, split, F)
            )
        return TowerHandle(
            label=f"cyclotomic ell={ell} levels {base_level + 1}..{max_level}",
            kind="cyclotomic",
            base_genus=K.genus,
            base_r1=K.r1,
            base_r2=K.r2,
            levels=tuple(levels),
            base_field=K,
            ell=ell,
        )


def log_norm_disc(ram):
    """log N_{K/Q} D_{L/K} from RamExponents, with exponent integrality checked."""
    total = mpmath.mpf(0)
    for r in ram:
        x = r.disc_exponent
        if x.denominator != 1:
            raise errors.NonIntegralExponent(f"exponent {x} at p={r.p}")
        total += int(x) * r.count * mpmath.log(r.norm)
    return total


def synthetic_tower(
    indices,
    primes,
    base=None,
    archimedean="real",
    log_hr_values=None,
    log_hr_rule="rhs",
    noise=0.0,
    seed=0,
    bs_constant=None,
    label="synthetic",
    almost_normal=True,
    prec=None,
):
    """Build a tower from prescribed data.

    ``indices`` are the degrees [K_n:K]; ``primes`` is a list of dicts with
    ``label``, ``norm``, ``trajectory`` (per level ``[e, f]`` or
    ``[e, f, beta]``) and optionally ``limit`` (``[e, f]`` or ``None`` for
    infinite degree; omitting the key leaves the tail undecided).  ``base``
    is an AbelianField or a dict with ``genus``, ``r1``, ``r2``.

    log(hR) per level comes from ``log_hr_values`` when given, otherwise from
    ``log_hr_rule``: ``"rhs"`` makes each level satisfy the finite-level
    Brauer-Siegel right-hand side (plus ``noise * sqrt(g_n)`` Gaussian noise),
    ``"constant"`` sets log(hR) = ``bs_constant`` * g_n.
    """
    with precision(prec):
        if base is None:
            base = rational_field()
        if isinstance(base, AbelianField):
            g_K, r1_K, r2_K, base_field = base.genus, base.r1, base.r2, base
        else:
            g_K, r1_K, r2_K, base_field = mpmath.mpf(base["genus"]), int(base["r1"]), int(base["r2"]), None
        tracked = []
        for i, pd in enumerate(primes):
            norm = int(pd["norm"])
            if norm < 2 or len(factorint(norm)) != 1:
                raise errors.SchemaError(f"prime norm {norm} is not a prime power")
            traj = tuple(
                (int(t[0]), int(t[1]), int(t[2]) if len(t) > 2 else 0) for t in pd["trajectory"]
            )
            if len(traj) != len(indices):
                raise errors.SchemaError(f"prime {pd.get('label', i)}: trajectory length != number of levels")
            if "limit" in pd:
                limit = None if pd["limit"] is None else (int(pd["limit"][0]), int(pd["limit"][1]))
            else:
                limit = "undecided"
            tracked.append(TrackedPrime(str(pd.get("label", f"p{i}")), norm, traj, limit))
        _validate_trajectories(indices, tracked)

        rng = random.Random(seed)
        levels = []
        ln2, ln2pi = mpmath.log(2), mpmath.log(2 * mpmath.pi)
        for n, index in enumerate(indices):
            if n and archimedean == "complex":
                if (index * (r1_K + 2 * r2_K)) % 2:
                    raise errors.SchemaError("complex archimedean behaviour needs even degree")
                r1, r2 = 0, index * (r1_K + 2 * r2_K) // 2
            else:
                r1, r2 = index * r1_K, index * r2_K
            phi, split = {}, {}
            rel_log = mpmath.mpf(0)
            for tp in tracked:
                e, f, beta = tp.trajectory[n]
                g = index // (e * f)
                q = tp.norm**f
                phi[q] = phi.get(q, 0) + g
                split[tp.label] = SplitData(tp.norm, e, f, g)
                # discriminant exponent g f (e - 1 + beta), an integer for Galois data
                rel_log += g * f * (e - 1 + beta) * mpmath.log(tp.norm)
            rel_genus = rel_log / 2
            genus = index * g_K + rel_genus
            if log_hr_values is not None:
                lhr = mpmath.mpf(log_hr_values[n])
            elif log_hr_rule == "constant":
                lhr = mpmath.mpf(bs_constant) * genus
            elif log_hr_rule == "rhs":
                lhr = genus - r1 * ln2 - r2 * ln2pi
                for q, c in sorted(phi.items()):
                    lhr += c * mpmath.log(mpmath.mpf(q) / (q - 1))
                if noise:
                    lhr += mpmath.mpf(noise) * mpmath.sqrt(genus) * mpmath.mpf(rng.gauss(0, 1))
            else:
                raise errors.SchemaError(f"unknown log(hR) rule {log_hr_rule!r}")
            levels.append(LevelData(n, index, genus, rel_genus, lhr, r1, r2, phi, split))
        return TowerHandle(
            label=label,
            kind="synthetic",
            base_genus=g_K,
            base_r1=r1_K,
            base_r2=r2_K,
            levels=tuple(levels),
            base_field=base_field,
            primes=tuple(tracked),
            almost_normal=almost_normal,
        )


def _validate_trajectories(indices, tracked):
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise errors.SchemaError("tower degrees must strictly increase")
    for tp in tracked:
        prev = (1, 1)
        for n, (e, f, beta) in enumerate(tp.trajectory):
            if e < 1 or f < 1 or beta < 0:
                raise errors.SchemaError(f"{tp.label}: bad (e, f, beta) at level {n}")
            if indices[n] % (e * f):
                raise errors.TransitivityViolated(f"{tp.label}: e*f = {e * f} does not divide [K_{n}:K] = {indices[n]}")
            if e % prev[0] or f % prev[1]:
                raise errors.MonotonicityViolated(f"{tp.label}: (e, f) must grow by divisibility along the tower")
            p = next(iter(factorint(tp.norm)))
            if (beta == 0) != (e % p != 0):
                raise errors.SchemaError(f"{tp.label}: beta = 0 must hold exactly for tame ramification")
            prev = (e, f)
        if tp.limit not in (None, "undecided"):
            e, f = tp.limit
            last_e, last_f, _ = tp.trajectory[-1]
            if e % last_e or f % last_f:
                raise errors.MonotonicityViolated(f"{tp.label}: declared limit below the trajectory")


# ---------------------------------------------------------------------------
# estimation

_NAME = re.compile(r"^(phi|phiRel|psi)\((R|C|\d+)\)$")
_SIMPLE = {"mu", "muRel", "bs", "bsRel", "lambda", "lambdaRel", "beta"}


def parse_name(name):
    if name in _SIMPLE:
        return name, None
    m = _NAME.match(name)
    if not m:
        raise errors.InputError(f"unknown invariant {name!r}")
    alpha = m.group(2)
    if alpha not in ("R", "C"):
        fac = factorint(int(alpha))
        if int(alpha) < 2 or len(fac) != 1:
            raise errors.InputError(f"{alpha} is not a prime power")
    return m.group(1), alpha


def level_ratio(tower, level, name):
    """Finite-level value of an invariant, or None where its denominator vanishes."""
    kind, alpha = parse_name(name)
    g, grel, idx = level.genus, level.rel_genus, level.index
    ln2, ln2pi = mpmath.log(2), mpmath.log(2 * mpmath.pi)
    if kind in ("mu", "bs", "lambda", "phi"):
        if g <= 0:
            return None
        if kind == "mu":
            return idx / g
        if kind == "bs":
            return level.log_hr / g
        if kind == "phi":
            return level.count(alpha) / g
        return level.log_hr / g - 1 + level.r1 / g * ln2 + level.r2 / g * ln2pi
    if kind in ("muRel", "bsRel", "lambdaRel", "phiRel"):
        if grel <= 0:
            return None
        if kind == "muRel":
            return idx / grel
        if kind == "bsRel":
            return level.log_hr / grel
        if kind == "phiRel":
            return level.count(alpha) / grel
        return level.log_hr / grel - 1 + level.r1 / grel * ln2 + level.r2 / grel * ln2pi
    if kind == "psi":
        return mpmath.mpf(level.count(alpha)) / idx
    if kind == "beta":
        return level_beta(tower, level)
    raise errors.InputError(name)


def estimate(tower, name, depth=None, tolerance=1e-9, prec=None):
    """Per-level ratios of ``name`` over the first ``depth`` levels."""
    if name == "beta":
        return beta(tower, depth, tolerance, prec)
    parse_name(name)
    depth = check_depth(tower, depth)
    with precision(prec):
        vals, used = [], []
        for level in tower.levels[:depth]:
            v = level_ratio(tower, level, name)
            if v is not None:
                vals.append(v)
                used.append(level.n)
        if not vals:
            if "Rel" in name:
                raise errors.UnramifiedTower(f"no ramified level within depth {depth}")
            raise errors.InsufficientLevels(f"no level with positive genus within depth {depth}")
        return _assemble(name, vals, used, tolerance)


def check_depth(tower, depth):
    if depth is None:
        depth = len(tower.levels)
    if depth < 1 or depth > len(tower.levels):
        raise errors.InsufficientLevels(f"depth {depth} but the tower has {len(tower.levels)} levels")
    return depth


def _assemble(name, vals, used, tolerance):
    gap = abs(vals[-1] - vals[-2]) if len(vals) > 1 else mpmath.inf
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    if not diffs or all(d == 0 for d in diffs):
        mono = "constant"
    elif all(d <= 0 for d in diffs):
        mono = "decreasing"
    elif all(d >= 0 for d in diffs):
        mono = "increasing"
    else:
        mono = "mixed"
    return InvariantEstimate(name, vals, used, vals[-1], gap, bool(gap < tolerance), mono)


def beta_summand(norm, e, f):
    """(1/(e f)) log(N^f / (N^f - 1))."""
    q = mpmath.mpf(norm) ** f
    return -mpmath.log1p(-1 / q) / (e * f)


def level_beta(tower, level):
    """Finite-level value of beta: the sum over tracked base primes at this level."""
    total = mpmath.mpf(0)
    if tower.kind == "synthetic":
        for tp in tower.primes:
            s = level.split[tp.label]
            total += beta_summand(tp.norm, s.e, s.f)
        return total
    K = tower.base_field
    for p, s in sorted(level.split.items()):
        sK = split_prime(K, p)
        total += sK.g * beta_summand(p**sK.f, s.e, s.f)
    return total


def beta(tower, depth=None, tolerance=1e-9, prec=None):
    """beta of the whole tower, with the per-level sums as diagnostics.

    Synthetic towers must declare which primes have finite degree.  For
    cyclotomic towers every prime has infinite degree (l is totally ramified
    with e -> infinity and every other p has f = ord(p mod l^n) -> infinity),
    so beta = 0.
    """
    depth = check_depth(tower, depth)
    with precision(prec):
        if tower.kind == "cyclotomic":
            limit = mpmath.mpf(0)
        elif tower.kind == "synthetic":
            if any(tp.limit == "undecided" for tp in tower.primes):
                raise errors.UndecidableTail("synthetic tower does not declare which primes have finite degree")
            limit = mpmath.mpf(0)
            for tp in tower.primes:
                if tp.limit is not None:
                    limit += beta_summand(tp.norm, *tp.limit)
        else:
            raise errors.UndecidableTail(f"cannot certify finite-degree primes for tower kind {tower.kind!r}")
        vals = [level_beta(tower, lv) for lv in tower.levels[:depth]]
        used = [lv.n for lv in tower.levels[:depth]]
        est = _assemble("beta", vals, used, tolerance)
        est.limit_estimate = limit
        return est


# ---------------------------------------------------------------------------
# identity checks


@dataclass
class CheckReport:
    name: str
    passed: bool
    rows: list  # per-level or per-item dicts
    gaps: dict  # summary gap values
    detail: str = ""


def tvz_sides(tower, level):
    """Brauer-Siegel ratio and the finite-level right-hand side at one level."""
    g = level.genus
    rhs = 1 - level.r1 / g * mpmath.log(2) - level.r2 / g * mpmath.log(2 * mpmath.pi)
    for q, c in sorted(level.phi_counts.items()):
        rhs += c / g * mpmath.log(mpmath.mpf(q) / (q - 1))
    return level.log_hr / g, rhs


def check_tvz(tower, depth=None, threshold=0.5, prec=None):
    """Compare log(hR)/g with the prime-count side level by level.

    Passes when the gap never increases (up to rounding) and the final gap is
    below ``threshold``.
    """
    depth = check_depth(tower, depth)
    with precision(prec):
        rows = []
        for level in tower.levels[:depth]:
            if level.genus <= 0:
                continue
            bs, rhs = tvz_sides(tower, level)
            rows.append({"n": level.n, "bs": bs, "rhs": rhs, "gap": abs(bs - rhs)})
        if not rows:
            raise errors.InsufficientLevels("no level with positive genus")
        eps = exact_tolerance(mpmath.mp.prec)
        gaps = [r["gap"] for r in rows]
        decreasing = all(b <= a + eps * max(1, abs(a)) for a, b in zip(gaps, gaps[1:]))
        final = gaps[-1]
        passed = decreasing and final < threshold
        return CheckReport(
            "tvz", passed, rows, {"final_gap": final, "decreasing": decreasing, "threshold": mpmath.mpf(threshold)}
        )


def mu_rel_lower_bound(tower):
    """Lower bound for mu_rel of a tame synthetic tower, or None if not certified.

    For tame ramification g_{n/K}/[K_n:K] <= (1/2) sum log N over the ramified
    primes, so mu_rel >= 2 / sum log N.
    """
    if tower.kind != "synthetic":
        return None
    ramified = []
    for tp in tower.primes:
        if any(beta for _, _, beta in tp.trajectory):
            return None
        if any(e > 1 for e, _, _ in tp.trajectory):
            ramified.append(tp.norm)
    if not ramified:
        return None
    return 2 / mpmath.fsum(mpmath.log(N) for N in ramified)


def check_rel_identities(tower, depth=None, tolerance=1e-9, prec=None):
    """Relative/absolute bridge, the psi-sum formula and the beta formula at the last level."""
    depth = check_depth(tower, depth)
    with precision(prec):
        if tower.kind == "cyclotomic":
            # wild at l with beta/e unbounded: mu_rel -> 0
            raise errors.HypothesisViolated("cyclotomic l-towers are wildly ramified with mu_rel = 0")
        levels = [lv for lv in tower.levels[:depth] if lv.rel_genus > 0]
        if not levels:
            raise errors.UnramifiedTower("no ramified level")
        last = levels[-1]
        mu_rel = last.index / last.rel_genus
        bound = mu_rel_lower_bound(tower)
        if not (mu_rel > 0 and mpmath.isfinite(mu_rel)) or (bound is None and mu_rel < tolerance):
            raise errors.HypothesisViolated(f"mu_rel estimate {mu_rel} is not in (0, inf)")
        if bound is not None and mu_rel < bound * (1 - exact_tolerance(mpmath.mp.prec)):
            raise errors.HypothesisViolated(f"mu_rel {mu_rel} below the tame lower bound {bound}")
        g_K = tower.base_genus
        factor = 1 + g_K * mu_rel

        bridge = []
        alphas = ["R", "C"] + [str(q) for q in sorted(last.phi_counts)]
        pairs = [("mu", "muRel"), ("bs", "bsRel")] + [(f"phi({a})", f"phiRel({a})") for a in alphas]
        for absolute, relative in pairs:
            a = level_ratio(tower, last, absolute)
            r = level_ratio(tower, last, relative)
            bridge.append({"invariant": absolute, "rel": r, "abs_times_factor": a * factor, "gap": abs(r - a * factor)})
        bridge_gap = max(row["gap"] for row in bridge)

        lam_rel = level_ratio(tower, last, "lambdaRel")
        ratio = lam_rel / mu_rel
        psi_sum = mpmath.mpf(0)
        for q in sorted(last.phi_counts):
            psi_sum += level_ratio(tower, last, f"psi({q})") * mpmath.log(mpmath.mpf(q) / (q - 1))
        psi_gap = abs(ratio - g_K - psi_sum)
        b = beta(tower, depth).limit_estimate
        beta_gap = abs(ratio - g_K - b)
        psi_beta_gap = abs(psi_sum - b)
        passed = bridge_gap < tolerance and psi_gap < tolerance and beta_gap < tolerance
        return CheckReport(
            "rel_identities",
            passed,
            bridge,
            {
                "bridge_gap": bridge_gap,
                "psi_gap": psi_gap,
                "beta_gap": beta_gap,
                "psi_beta_gap": psi_beta_gap,
                "lambda_rel_over_mu_rel": ratio,
                "g_K": g_K,
                "beta": b,
                "mu_rel": mu_rel,
            },
        )


def genus_bridge(tower, prec=None):
    """Per-level residuals of g_n = [K_n:K] g_K + g_{n/K} and 1/mu = 1/mu_rel + g_K."""
    with precision(prec):
        rows = []
        for lv in tower.levels:
            residual = lv.genus - lv.index * tower.base_genus - lv.rel_genus
            row = {"n": lv.n, "genus_residual": abs(residual) / max(abs(lv.genus), 1)}
            if lv.rel_genus > 0 and lv.genus > 0:
                inv_mu = 1 / (lv.index / lv.genus)
                inv_mu_rel = 1 / (lv.index / lv.rel_genus)
                row["mu_residual"] = abs(inv_mu - inv_mu_rel - tower.base_genus) / max(abs(inv_mu), 1)
            rows.append(row)
        return rows


# ---------------------------------------------------------------------------
# nested families


@dataclass(frozen=True)
class ExchangeFamily:
    """Data for one base field L: per n, (e, f) of each prime of L in the
    tower L_n and in its H-fixed part L_n^H, plus the limits in L_inf and L_inf^H.

    Entries are ``(e, f)`` or ``None`` for infinite degree.
    """

    base_genus: mpmath.mpf
    norms: tuple
    full: tuple  # [n][prime]
    fixed: tuple
    full_limit: tuple  # [prime]
    fixed_limit: tuple


def _ratio_via_psi(base_genus, norms, entries):
    """g_L + sum_q psi_q log(q/(q-1)) with psi_q grouped by q."""
    psi = {}
    for N, ef in zip(norms, entries):
        if ef is None:
            continue
        e, f = ef
        q = N**f
        psi[q] = psi.get(q, Fraction(0)) + Fraction(1, e * f)
    total = mpmath.mpf(base_genus)
    for q in sorted(psi):
        w = psi[q]
        total += mpmath.mpf(w.numerator) / w.denominator * mpmath.log(mpmath.mpf(q) / (q - 1))
    return total


def _beta_direct(norms, entries):
    total = mpmath.mpf(0)
    for N, ef in zip(norms, entries):
        if ef is not None:
            total += beta_summand(N, *ef)
    return total


def _check_refinement(seq, label):
    """(e, f) must grow by divisibility; once infinite, always infinite."""
    for j in range(len(seq[0])):
        prev = (1, 1)
        for n, row in enumerate(seq):
            cur = row[j]
            if prev is None:
                if cur is not None:
                    raise errors.MonotonicityViolated(f"{label}: prime {j} regains finite degree at n={n}")
                continue
            if cur is not None and (cur[0] % prev[0] or cur[1] % prev[1]):
                raise errors.MonotonicityViolated(f"{label}: summand of prime {j} increases at n={n}")
            prev = cur


def check_limit_exchange(family, tolerance=1e-9, prec=None):
    """Difference of lambda_rel/mu_rel ratios along n versus the difference of limit betas."""
    with precision(prec):
        _check_refinement(family.full, "full")
        _check_refinement(family.fixed, "fixed")
        for n, (fu, fi) in enumerate(zip(family.full, family.fixed)):
            for j, (a, b) in enumerate(zip(fu, fi)):
                # L_n^H is inside L_n, so its degrees divide those of L_n
                if b is None and a is not None or (a is not None and b is not None and (a[0] % b[0] or a[1] % b[1])):
                    raise errors.MonotonicityViolated(f"fixed part exceeds the full tower at n={n}, prime {j}")
        rows = []
        betas_full, betas_fixed = [], []
        for n, (fu, fi) in enumerate(zip(family.full, family.fixed)):
            lhs = _ratio_via_psi(family.base_genus, family.norms, fi) - _ratio_via_psi(
                family.base_genus, family.norms, fu
            )
            bf, bh = _beta_direct(family.norms, fu), _beta_direct(family.norms, fi)
            betas_full.append(bf)
            betas_fixed.append(bh)
            rows.append({"n": n, "lhs": lhs, "beta_full": bf, "beta_fixed": bh})
        for seq, label in ((betas_full, "full"), (betas_fixed, "fixed")):
            for n in range(1, len(seq)):
                if seq[n] > seq[n - 1]:
                    raise errors.MonotonicityViolated(f"beta of the {label} towers increases at n={n}")
        rhs = _beta_direct(family.norms, family.fixed_limit) - _beta_direct(family.norms, family.full_limit)
        gap = abs(rows[-1]["lhs"] - rhs)
        return CheckReport("limit_exchange", bool(gap < tolerance), rows, {"rhs": rhs, "gap": gap})


@dataclass(frozen=True)
class ContinuityFamily:
    """Increasing family L_j/K with towers LL_j/L_j inside a union LLbar.

    ``members[j]`` is ``(degree, local, tower, absolute)``: [L_j:K], per-prime
    (e, f) in L_j/K, per-prime (e, f) or None in LL_j/L_j, and optionally the
    per-prime absolute (e, f) in LL_j/K for the transitivity check.
    ``union`` gives per-prime (e, f) or None in LLbar/K.
    """

    norms: tuple
    members: tuple
    union: tuple


def check_beta_continuity(family, tolerance=1e-9, prec=None):
    """(1/[L:K]) beta(LL_L/L) along the family versus beta(LLbar/K)."""
    with precision(prec):
        rows = []
        for j, (degree, local, tower, absolute) in enumerate(family.members):
            total = mpmath.mpf(0)
            for i, N in enumerate(family.norms):
                eL, fL = local[i]
                if degree % (eL * fL):
                    raise errors.TransitivityViolated(f"member {j}: e f = {eL * fL} does not divide [L:K] = {degree}")
                count = degree // (eL * fL)
                t = tower[i]
                abs_ef = None if t is None else (eL * t[0], fL * t[1])
                if absolute is not None and absolute[i] != abs_ef:
                    raise errors.TransitivityViolated(f"member {j}, prime {i}: absolute {absolute[i]} != {abs_ef}")
                u = family.union[i]
                if abs_ef is not None and u is not None and (u[0] % abs_ef[0] or u[1] % abs_ef[1]):
                    raise errors.TransitivityViolated(f"member {j}, prime {i}: degree exceeds the union")
                if u is not None and abs_ef is None:
                    raise errors.TransitivityViolated(f"member {j}, prime {i}: infinite below a finite union degree")
                if t is not None:
                    total += count * beta_summand(N**fL, t[0], t[1])
            rows.append({"j": j, "degree": degree, "rescaled_beta": total / degree})
        limit = _beta_direct(family.norms, family.union)
        gap = abs(rows[-1]["rescaled_beta"] - limit)
        return CheckReport("beta_continuity", bool(gap < tolerance), rows, {"limit": limit, "gap": gap})


# ---------------------------------------------------------------------------
# seeded generators


def _base_choices():
    from .fields import cyclotomic_field, quadratic_field

    return [rational_field(), quadratic_field(-4), quadratic_field(-3), quadratic_field(5), cyclotomic_field(5)]


def base_primes(K, bound=30):
    """(label, norm) for each prime of K above rational p <= bound."""
    out = []
    for p in primerange(2, bound + 1):
        s = split_prime(K, p)
        for i in range(s.g):
            out.append((f"{p}.{i}", p**s.f))
    return out


def random_tame_tower(seed, depth=6, noise=0.0, prec=None):
    """A tame synthetic Galois tower with degrees 6^n and stabilising (e, f)."""
    rng = random.Random(seed)
    K = rng.choice(_base_choices())
    pool = base_primes(K)
    chosen = rng.sample(pool, rng.randint(2, min(6, len(pool))))
    indices = [6**n for n in range(depth + 1)]
    primes = []
    for k, (label, norm) in enumerate(chosen):
        p = next(iter(factorint(norm)))
        tame_e = [e for e in (2, 3) if e % p]
        finite = k == 0 or rng.random() < 0.5
        if finite:
            start = rng.randint(1, 2)
            e = tame_e[0] if k == 0 else rng.choice([1] + tame_e)
            f = rng.choice([1, 2, 3])
            if 6 % (e * f):
                f = 1
            traj = [[1, 1] if n < start else [e, f] for n in range(depth + 1)]
            limit = [e, f]
        else:
            if rng.random() < 0.5:
                e = rng.choice([1] + [x for x in tame_e if x == 3])
                traj = [[1, 1]] + [[e, 2**n] for n in range(1, depth + 1)]
            else:
                e = rng.choice([1] + [x for x in tame_e if x == 2])
                traj = [[1, 1]] + [[e, 3**n] for n in range(1, depth + 1)]
            limit = None
        primes.append({"label": label, "norm": norm, "trajectory": traj, "limit": limit})
    return synthetic_tower(
        indices, primes, base=K, archimedean=rng.choice(["real", "complex"]) if K.r1 else "real",
        noise=noise, seed=seed, label=f"tame seed={seed}", prec=prec,
    )


def _divisor_chain(rng, target, steps):
    """Divisibility chain of length ``steps`` ending at ``target``."""
    divisors = [d for d in range(1, target + 1) if target % d == 0]
    chain = [rng.choice(divisors) for _ in range(steps - 1)] + [target]
    for n in range(steps - 2, -1, -1):
        chain[n] = math.gcd(chain[n], chain[n + 1])
    return chain


def random_exchange_family(seed, depth=6, prec=None):
    rng = random.Random(seed)
    with precision(prec):
        K = rng.choice(_base_choices())
        pool = base_primes(K, 20)
        chosen = rng.sample(pool, rng.randint(2, min(5, len(pool))))
        norms = tuple(N for _, N in chosen)
        full = [[None] * len(norms) for _ in range(depth)]
        fixed = [[None] * len(norms) for _ in range(depth)]
        full_limit, fixed_limit = [], []
        for j in range(len(norms)):
            fixed_finite = rng.random() < 0.6
            full_finite = fixed_finite and rng.random() < 0.5
            eH, fH = rng.choice([1, 2]), rng.choice([1, 2, 3])
            eF, fF = eH * rng.choice([1, 2]), fH * rng.choice([1, 2])
            eH_chain, fH_chain = _divisor_chain(rng, eH, depth), _divisor_chain(rng, fH, depth)
            eF_chain, fF_chain = _divisor_chain(rng, eF, depth), _divisor_chain(rng, fF, depth)
            for n in range(depth):
                if fixed_finite:
                    h = (eH_chain[n], fH_chain[n])
                else:
                    h = (eH, fH * 2 ** (n + 1))
                if full_finite:
                    fu = (math.lcm(eF_chain[n], h[0]), math.lcm(fF_chain[n], h[1]))
                else:
                    fu = (2 * h[0], h[1] * 2 ** (n + 1))
                fixed[n][j], full[n][j] = h, fu
            fixed_limit.append((eH, fH) if fixed_finite else None)
            full_limit.append((eF, fF) if full_finite else None)
        return ExchangeFamily(
            K.genus, norms, tuple(map(tuple, full)), tuple(map(tuple, fixed)), tuple(full_limit), tuple(fixed_limit)
        )


def random_continuity_family(seed, depth=6, prec=None):
    rng = random.Random(seed)
    with precision(prec):
        K = rng.choice(_base_choices())
        pool = base_primes(K, 20)
        chosen = rng.sample(pool, rng.randint(2, min(5, len(pool))))
        norms = tuple(N for _, N in chosen)
        union = []
        plans = []
        for _ in norms:
            finite = rng.random() < 0.6
            E, F = rng.choice([1, 2, 4]), rng.choice([1, 2, 4])
            union.append((E, F) if finite else None)
            plans.append((finite, E, F))
        members = []
        for j in range(depth):
            degree = 2**j
            local, tower, absolute = [], [], []
            for finite, E, F in plans:
                # local degrees: divisors of the union degrees that fit in [L:K]
                eL = math.gcd(E, 2 ** rng.randint(0, j))
                fL = math.gcd(F, 2 ** max(0, j - (eL.bit_length() - 1)))
                while degree % (eL * fL):
                    fL //= 2
                if finite:
                    t = (E // eL, F // fL)
                    absolute.append((E, F))
                else:
                    t = (1, 2 ** (j + 6))
                    absolute.append((eL, fL * 2 ** (j + 6)))
                local.append((eL, fL))
                tower.append(t)
            members.append((degree, tuple(local), tuple(tower), tuple(absolute)))
        return ContinuityFamily(norms, tuple(members), tuple(union))
