"""Abelian number fields as groups of Dirichlet characters.

A field is identified with its group of primitive characters.  Degree,
signature and discriminant follow from the group alone: the discriminant is
the product of conductors and the field is totally real exactly when every
character is even.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm, prod

import mpmath

from .characters import DirichletCharacter, all_characters, generators_of_full_group, principal
from .errors import InvalidCharacter, NotASubfield


@dataclass(frozen=True, eq=False)
class AbelianField:
    """A subfield of Q(zeta_modulus), given by its character group.

    ``group`` holds the characters modulo ``modulus``; ``characters`` holds the
    primitive characters inducing them, sorted canonically.
    """

    label: str
    modulus: int
    group: tuple

    @cached_property
    def characters(self):
        return tuple(sorted((chi.primitive() for chi in self.group), key=DirichletCharacter.sort_key))

    @cached_property
    def keys(self):
        return frozenset(chi.key for chi in self.group)

    @property
    def degree(self):
        return len(self.group)

    @property
    def r1(self):
        return self.degree if all(chi.even for chi in self.group) else 0

    @property
    def r2(self):
        return (self.degree - self.r1) // 2

    @cached_property
    def abs_disc(self):
        return prod(chi.conductor for chi in self.group)

    @cached_property
    def conductor(self):
        return lcm(1, *(chi.conductor for chi in self.group))

    @property
    def genus(self):
        """Half the log of the absolute discriminant, at the working precision."""
        return mpmath.log(self.abs_disc) / 2

    @cached_property
    def w(self):
        return roots_of_unity_count(self)

    def contains(self, other):
        return other.keys <= self.keys

    def __eq__(self, other):
        return isinstance(other, AbelianField) and self.keys == other.keys

    def __hash__(self):
        return hash(self.keys)

    def __repr__(self):
        return f"AbelianField({self.label!r}, degree={self.degree}, disc={self.abs_disc})"

    def to_json(self):
        gens = _minimal_generators(self)
        return {
            "schemaVersion": 1,
            "kind": "field",
            "label": self.label,
            "modulus": str(self.modulus),
            "generators": [
                {
                    "modulus": str(chi.modulus),
                    "order": str(chi.order),
                    "exponents": [None if k is None else str(k) for k in chi.exps],
                }
                for chi in gens
            ],
        }


def build_abelian_field(modulus, generators, label=None):
    """Field cut out by the character group mod ``modulus`` generated by ``generators``."""
    if modulus < 1:
        raise InvalidCharacter(f"modulus must be positive, got {modulus}")
    one = principal(modulus)
    members = {one}
    frontier = [one]
    gens = []
    for chi in generators:
        if not isinstance(chi, DirichletCharacter):
            raise InvalidCharacter(f"not a character: {chi!r}")
        if chi.modulus != modulus:
            if modulus % chi.modulus:
                raise InvalidCharacter(f"generator modulus {chi.modulus} does not divide {modulus}")
            chi = chi.lift(modulus)
        gens.append(chi)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in members:
                    members.add(b)
                    nxt.append(b)
        frontier = nxt
    group = tuple(sorted(members, key=DirichletCharacter.sort_key))
    return AbelianField(label or f"K(mod {modulus}, deg {len(group)})", modulus, group)


def rational_field():
    return build_abelian_field(1, [], "Q")


def cyclotomic_field(m):
    return build_abelian_field(m, generators_of_full_group(m), f"Q(zeta_{m})")


def quadratic_field(d):
    """Q(sqrt(d)) for a fundamental discriminant ``d``."""
    from .characters import kronecker_character

    chi = kronecker_character(d)
    radicand = d // 4 if d % 4 == 0 else d
    return build_abelian_field(chi.modulus, [chi], f"Q(sqrt({radicand}))")


def subfield(K, predicate, label=None):
    """Subfield whose characters are those of ``K`` satisfying ``predicate``.

    ``predicate`` must select a subgroup; this is checked.
    """
    chosen = [chi for chi in K.group if predicate(chi)]
    F = build_abelian_field(K.modulus, chosen, label)
    if F.degree != len(chosen):
        raise InvalidCharacter("predicate does not select a subgroup")
    return F


def real_subfield(K, label=None):
    return subfield(K, lambda chi: chi.even, label or f"{K.label}^+")


def relative_genus(L, K):
    """g_{L/K} = g_L - [L:K] g_K, half the log of the norm of the relative discriminant."""
    if not L.contains(K):
        raise NotASubfield(f"{K.label} is not contained in {L.label}")
    index = L.degree // K.degree
    return L.genus - index * K.genus


def relative_disc_norm(L, K):
    """|N_{K/Q} D_{L/K}| as an exact integer."""
    if not L.contains(K):
        raise NotASubfield(f"{K.label} is not contained in {L.label}")
    index = L.degree // K.degree
    q, r = divmod(L.abs_disc, K.abs_disc**index)
    if r:
        raise NotASubfield("discriminant tower relation fails")
    return q


def roots_of_unity_count(K):
    """Largest n with Q(zeta_n) inside K.

    Candidates are the divisors of lcm(2, conductor); all lie below the
    2|D_K| search bound.
    """
    top = lcm(2, K.conductor)
    best = 1
    for n in range(1, top + 1):
        if top % n or n <= best:
            continue
        if all(chi.key in K.keys for chi in all_characters(n)):
            best = n
    return best


def _minimal_generators(K):
    """A small generating set, chosen greedily in canonical order."""
    one = principal(K.modulus)
    span = {one}
    gens = []
    for chi in K.group:
        if chi in span:
            continue
        gens.append(chi)
        frontier = list(span)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = a * g
                    if b not in span:
                        span.add(b)
                        nxt.append(b)
            frontier = nxt
    return gens


def field_from_json(doc):
    from .errors import SchemaError

    try:
        modulus = int(doc["modulus"])
        gens = []
        for g in doc.get("generators", []):
            gm = int(g.get("modulus", modulus))
            if "images" in g:
                gens.append(DirichletCharacter.from_images(gm, [int(x) for x in g["images"]]))
            else:
                exps = [None if x is None else int(x) for x in g["exponents"]]
                gens.append(DirichletCharacter.from_table(gm, int(g["order"]), exps))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed field document: {exc}") from exc
    return build_abelian_field(modulus, gens, doc.get("label"))
