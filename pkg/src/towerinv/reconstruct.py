"""Decomposition data on synthetic subgroup lattices and norm recovery.

Subgroups are opaque labels with a total intersection table.  Each prime
records whether it lies in S and which subgroups it lies under.  The
generator realises every subgroup as the set of primes lying under it, so
intersection of subgroups is intersection of sets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import mpmath
from sympy import factorint, primerange

from . import errors
from .numeric import precision


@dataclass(frozen=True)
class PrimeRecord:
    label: str
    in_s: bool
    under: frozenset


@dataclass(frozen=True)
class SubgroupLattice:
    labels: tuple
    top: str
    meet: dict  # (a, b) -> a ∩ b, for every ordered pair
    primes: tuple

    def __post_init__(self):
        labels = set(self.labels)
        if self.top not in labels:
            raise errors.UnknownSubgroup(f"top {self.top!r} is not a subgroup label")
        for a in self.labels:
            for b in self.labels:
                c = self.meet.get((a, b))
                if c is None:
                    raise errors.SchemaError(f"intersection of {a!r} and {b!r} missing")
                if c not in labels:
                    raise errors.UnknownSubgroup(f"intersection {c!r} is not a subgroup label")
                if c != self.meet.get((b, a)):
                    raise errors.SchemaError(f"intersection table not symmetric at ({a!r}, {b!r})")
        for p in self.primes:
            if not p.under <= labels:
                raise errors.UnknownSubgroup(f"prime {p.label!r} lies under unknown subgroups")
            for a in self.labels:
                for b in self.labels:
                    if a in p.under and self.contains(b, a) and b not in p.under:
                        raise errors.SchemaError(f"lies-under not monotone for {p.label!r}: {a!r} inside {b!r}")
                    c = self.meet[(a, b)]
                    if c in p.under and not (a in p.under and b in p.under):
                        raise errors.SchemaError(f"lies-under not compatible with intersection for {p.label!r}")

    def contains(self, big, small):
        """small ⊆ big in the lattice order."""
        return self.meet[(big, small)] == small

    def below(self, H):
        self._check(H)
        return [K for K in self.labels if self.contains(H, K)]

    def _check(self, H):
        if H not in self.labels:
            raise errors.UnknownSubgroup(f"unknown subgroup {H!r}")


def z_count(lattice, H):
    """Number of primes outside S lying under H."""
    lattice._check(H)
    return sum(1 for p in lattice.primes if not p.in_s and H in p.under)


@dataclass(frozen=True)
class Criterion:
    z: int
    z_is_zero: bool
    z_exceeds_one: bool
    witness: tuple | None


def criterion1(lattice, H):
    """Decide z(H) > 1 directly and by searching for a separating pair H1, H2 ⊆ H."""
    z = z_count(lattice, H)
    direct = z > 1
    candidates = [K for K in lattice.below(H) if z_count(lattice, K) > 0]
    witness = None
    for a, b in combinations(candidates, 2):
        if z_count(lattice, lattice.meet[(a, b)]) == 0:
            witness = (a, b)
            break
    if direct != (witness is not None):
        raise errors.InconsistentLattice(
            f"z({H}) = {z} but separating pair {'found' if witness else 'not found'}"
        )
    return Criterion(z, z == 0, direct, witness)


def lattice_from_sets(sets, in_s, top):
    """Lattice whose subgroup ``label`` is modelled by the prime set ``sets[label]``.

    ``sets`` must be closed under intersection.
    """
    by_set = {}
    for label, members in sets.items():
        key = frozenset(members)
        if key in by_set:
            raise errors.SchemaError(f"subgroups {by_set[key]!r} and {label!r} have the same prime set")
        by_set[key] = label
    meet = {}
    for a in sets:
        for b in sets:
            s = frozenset(sets[a]) & frozenset(sets[b])
            if s not in by_set:
                raise errors.SchemaError(f"prime sets not closed under intersection at ({a!r}, {b!r})")
            meet[(a, b)] = by_set[s]
    primes = tuple(
        PrimeRecord(p, p in in_s, frozenset(lbl for lbl, s in sets.items() if p in s))
        for p in sorted(set().union(*sets.values()) | set(in_s))
    )
    return SubgroupLattice(tuple(sorted(sets)), top, meet, primes)


def random_lattice(seed, n_primes=None, n_extra=None):
    """Seeded lattice with a dedicated subgroup for each prime and random extra subgroups.

    Dedicated subgroups separate primes: two distinct singletons meet in the
    subgroup under which no prime lies.
    """
    rng = random.Random(seed)
    n_primes = n_primes if n_primes is not None else rng.randint(1, 6)
    n_extra = n_extra if n_extra is not None else rng.randint(0, 6)
    names = [f"p{i}" for i in range(n_primes)]
    in_s = {p for p in names if rng.random() < 0.3}
    family = {frozenset(names), frozenset()}
    family.update(frozenset([p]) for p in names)
    for _ in range(n_extra):
        family.add(frozenset(p for p in names if rng.random() < 0.5))
    changed = True
    while changed:
        changed = False
        for a in list(family):
            for b in list(family):
                if a & b not in family:
                    family.add(a & b)
                    changed = True
    ordered = sorted(family, key=lambda s: (-len(s), sorted(s)))
    sets = {("U" if i == 0 else f"H{i}"): s for i, s in enumerate(ordered)}
    return lattice_from_sets(sets, in_s, "U")


def lattice_from_json(doc):
    try:
        labels = [str(x) for x in doc["subgroups"]]
        meet = {}
        for a, b, c in doc["intersections"]:
            meet[(a, b)] = c
            meet.setdefault((b, a), c)
        for a in labels:
            meet.setdefault((a, a), a)
        primes = tuple(
            PrimeRecord(str(p["label"]), bool(p["inS"]), frozenset(p["under"])) for p in doc["primes"]
        )
        return SubgroupLattice(tuple(labels), str(doc["top"]), meet, primes)
    except (KeyError, TypeError, ValueError) as exc:
        raise errors.SchemaError(f"malformed lattice document: {exc}") from exc


def lattice_to_json(lattice):
    return {
        "schemaVersion": 1,
        "kind": "lattice",
        "top": lattice.top,
        "subgroups": list(lattice.labels),
        "intersections": [[a, b, lattice.meet[(a, b)]] for a in lattice.labels for b in lattice.labels if a <= b],
        "primes": [{"label": p.label, "inS": p.in_s, "under": sorted(p.under)} for p in lattice.primes],
    }


# ---------------------------------------------------------------------------
# beta along a chain of subgroups


def beta_from_norm(t, f_u):
    """(1/f_U) log(t^f_U / (t^f_U - 1))."""
    q = mpmath.mpf(t) ** f_u
    return -mpmath.log1p(-1 / q) / f_u


@dataclass(frozen=True)
class ZTowerDatum:
    levels: tuple
    f_u: tuple
    beta_values: tuple
    truth: tuple | None = None


def ztower_from_truth(t, f, depth=4, prec=None):
    """Datum whose beta values follow from a prime of norm t with residue degree f.

    The first level uses f_U = 1, as if the chain has not yet entered the
    decomposition group; from level 1 on f_U = f.
    """
    with precision(prec):
        f_u = tuple([1] + [f] * (depth - 1))
        values = tuple(beta_from_norm(t, x) for x in f_u)
        return ZTowerDatum(tuple(f"U{i}" for i in range(depth)), f_u, values, (t, f))


@dataclass(frozen=True)
class Behavior:
    has_behavior: bool
    C: mpmath.mpf | None


def classify_behavior(datum, tolerance=1e-12):
    """Eventual constancy of beta from level 1 onwards, with a positive constant."""
    vals = datum.beta_values
    if len(vals) < 2:
        raise errors.InsufficientLevels("need at least two levels")
    tail = vals[1:]
    ref = tail[0]
    stable = all(abs(v - ref) <= tolerance * max(abs(ref), 1e-300) for v in tail)
    if stable and ref > 0:
        return Behavior(True, tail[-1])
    return Behavior(False, None)


@dataclass(frozen=True)
class NormMatch:
    norm: int
    f: int
    x: mpmath.mpf  # e^C / (e^C - 1)


def _prime_power(n):
    if n < 2:
        return False
    return len(factorint(n)) == 1


def norm_from_c(C, tolerance=1e-12, t_bound=10**6, f_bound=20, prec=None):
    """Recover (t, f) with (1/f) log(t^f / (t^f - 1)) = C.

    For each f the equation gives t = (1 / (1 - e^(-f C)))^(1/f); the nearest
    integers are tested exactly for being prime powers and matched to C
    within ``tolerance`` relative.
    """
    with precision(prec):
        C = mpmath.mpf(C)
        if C <= 0:
            raise errors.InputError("C must be positive")
        matches = []
        for f in range(1, f_bound + 1):
            q = 1 / -mpmath.expm1(-f * C)
            approx = mpmath.root(q, f)
            centre = int(mpmath.nint(approx))
            for t in (centre - 1, centre, centre + 1):
                if t < 2 or t > t_bound or not _prime_power(t):
                    continue
                if abs(beta_from_norm(t, f) - C) <= tolerance * C:
                    matches.append((t**f, f, t))
        matches = sorted(set(matches))
        if not matches:
            raise errors.NoPrimePowerMatch(f"no (t, f) with t <= {t_bound}, f <= {f_bound} matches C = {mpmath.nstr(C, 20)}")
        if len(matches) > 1:
            raise errors.AmbiguousMatch(f"candidates {[(t, f) for _, f, t in matches]} all match; tighten the tolerance")
        _, f, t = matches[0]
        return NormMatch(t, f, mpmath.exp(C) / mpmath.expm1(C))


def c_equals_one_search(t_bound, f_bound, c_bound):
    """All integer solutions with c >= 2 of

        t^((c-1) fU fU') (t^fU - 1)^fU' = (t^(c fU') - 1)^fU

    over prime powers t <= t_bound and 1 <= fU, fU' <= f_bound.
    """
    if min(t_bound, f_bound, c_bound) < 2:
        raise errors.InputError("bounds must be at least 2")
    found = []
    ts = [t for t in range(2, t_bound + 1) if _prime_power(t)]
    for t in ts:
        for fu in range(1, f_bound + 1):
            for fv in range(1, f_bound + 1):
                for c in range(2, c_bound + 1):
                    lhs = t ** ((c - 1) * fu * fv) * (t**fu - 1) ** fv
                    rhs = (t ** (c * fv) - 1) ** fu
                    if lhs == rhs:
                        found.append((t, fu, fv, c))
    return found


def prime_powers(bound):
    out = []
    for p in primerange(2, bound + 1):
        q = p
        while q <= bound:
            out.append(q)
            q *= p
    return sorted(out)
