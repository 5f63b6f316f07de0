"""Dirichlet characters with exact root-of-unity values.

A character modulo ``n`` is stored as a table ``exps`` of length ``n``:
``exps[a] = k`` means ``chi(a) = exp(2*pi*i*k/order)`` and ``exps[a] is None``
marks residues not coprime to ``n``.  The order is always the exact order of
the character, which makes the representation canonical: two characters mod
the same ``n`` are equal iff their tables are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm

from sympy import factorint, primitive_root

from .errors import InvalidCharacter


@lru_cache(maxsize=None)
def unit_group(n):
    """Generators of ``(Z/n)^x`` with their orders, plus a discrete-log table.

    Returns ``(gens, orders, logs)`` where ``logs[a]`` is the exponent vector of
    ``a`` in the generators (``None`` when ``gcd(a, n) > 1``).
    """
    gens, orders = [], []
    for p, k in sorted(factorint(n).items()):
        q = p**k
        rest = n // q
        if p == 2:
            local = [] if k == 1 else [(q - 1, 2)] if k == 2 else [(q - 1, 2), (5, 2 ** (k - 2))]
        else:
            local = [(primitive_root(q), (p - 1) * p ** (k - 1))]
        for g, o in local:
            # CRT lift: g mod q, 1 mod the cofactor
            if rest == 1:
                lifted = g % n
            else:
                lifted = (g * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % n
            gens.append(lifted)
            orders.append(o)
    logs = [None] * n
    if n == 1:
        logs[0] = ()
        return (), (), tuple(logs)
    for vec in product(*(range(o) for o in orders)):
        a = 1
        for g, v in zip(gens, vec):
            a = a * pow(g, v, n) % n
        logs[a] = vec
    return tuple(gens), tuple(orders), tuple(logs)


def _reduce(modulus, order, exps):
    """Bring (order, exps) to lowest terms so the stored order is exact."""
    d = order
    for k in exps:
        if k is not None:
            d = gcd(d, k)
            if d == 1:
                break
    if d > 1:
        order //= d
        exps = tuple(None if k is None else k // d for k in exps)
    return order, exps


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    order: int
    exps: tuple
    conductor: int = field(init=False, compare=False)
    even: bool = field(init=False, compare=False)

    def __post_init__(self):
        if self.modulus < 1 or len(self.exps) != self.modulus:
            raise InvalidCharacter(f"table length {len(self.exps)} does not match modulus {self.modulus}")
        object.__setattr__(self, "conductor", _conductor(self))
        object.__setattr__(self, "even", self.value_exp(self.modulus - 1) == 0 if self.modulus > 2 else True)

    @classmethod
    def from_table(cls, modulus, order, exps):
        """Build and validate a character from a full exponent table."""
        exps = tuple(None if k is None else int(k) % order for k in exps)
        if len(exps) != modulus:
            raise InvalidCharacter(f"expected {modulus} table entries, got {len(exps)}")
        for a, k in enumerate(exps):
            if (k is None) != (gcd(a, modulus) != 1):
                raise InvalidCharacter(f"value at {a} mod {modulus} must be {'zero' if k is not None else 'a root of unity'}")
        if modulus > 1 and exps[1] != 0:
            raise InvalidCharacter("chi(1) must be 1")
        gens, _, _ = unit_group(modulus)
        for g in gens:
            for a, k in enumerate(exps):
                if k is not None and exps[a * g % modulus] != (k + exps[g]) % order:
                    raise InvalidCharacter(f"not multiplicative at ({a}, {g}) mod {modulus}")
        order, exps = _reduce(modulus, order, exps)
        return cls(modulus, order, exps)

    @classmethod
    def from_images(cls, modulus, images):
        """Character sending the i-th standard generator to ``e(images[i]/ord_i)``."""
        gens, orders, logs = unit_group(modulus)
        if len(images) != len(gens):
            raise InvalidCharacter(f"modulus {modulus} has {len(gens)} generators, got {len(images)} images")
        big = lcm(1, *orders)
        scale = [big // o for o in orders]
        exps = tuple(
            None if vec is None else sum(i * v * s for i, v, s in zip(images, vec, scale)) % big
            for vec in logs
        )
        order, exps = _reduce(modulus, big, exps)
        return cls(modulus, order, exps)

    def value_exp(self, a):
        """Exponent k with chi(a) = e(k/order), or None when chi(a) = 0."""
        return self.exps[a % self.modulus]

    @property
    def is_principal(self):
        return self.order == 1

    def __mul__(self, other):
        if self.modulus != other.modulus:
            raise InvalidCharacter("characters must share a modulus to multiply")
        big = lcm(self.order, other.order)
        s, t = big // self.order, big // other.order
        exps = tuple(None if a is None else (a * s + b * t) % big for a, b in zip(self.exps, other.exps))
        order, exps = _reduce(self.modulus, big, exps)
        return DirichletCharacter(self.modulus, order, exps)

    def conjugate(self):
        exps = tuple(None if k is None else (-k) % self.order for k in self.exps)
        return DirichletCharacter(self.modulus, self.order, exps)

    def primitive(self):
        """The primitive character inducing this one."""
        f = self.conductor
        if f == self.modulus:
            return self
        exps = [None] * f
        for a, k in enumerate(self.exps):
            if k is not None and exps[a % f] is None:
                exps[a % f] = k
        return DirichletCharacter(f, self.order, tuple(exps))

    def lift(self, modulus):
        """The character mod ``modulus`` induced by this one (``modulus`` a multiple)."""
        if modulus % self.modulus:
            raise InvalidCharacter(f"{modulus} is not a multiple of {self.modulus}")
        exps = tuple(
            self.exps[a % self.modulus] if gcd(a, modulus) == 1 else None for a in range(modulus)
        )
        return DirichletCharacter(modulus, self.order, exps)

    @cached_property
    def key(self):
        """Canonical identity of the underlying primitive character."""
        prim = self.primitive()
        return (prim.modulus, prim.order, prim.exps)

    def sort_key(self):
        prim = self.primitive()
        return (prim.modulus, prim.order, tuple(-1 if k is None else k for k in prim.exps))


def _conductor(chi):
    n = chi.modulus
    for d in sorted(_divisors(n)):
        # trivial on the kernel of (Z/n)^x -> (Z/d)^x
        if all(chi.exps[a] == 0 for a in range(1, n, d) if chi.exps[a] is not None):
            return d
    return n


@lru_cache(maxsize=None)
def _divisors(n):
    return tuple(d for d in range(1, n + 1) if n % d == 0)


def principal(modulus):
    return DirichletCharacter.from_images(modulus, [0] * len(unit_group(modulus)[0]))


def all_characters(modulus):
    """Every character mod ``modulus`` in a deterministic order."""
    _, orders, _ = unit_group(modulus)
    return [DirichletCharacter.from_images(modulus, list(img)) for img in product(*(range(o) for o in orders))]


def generators_of_full_group(modulus):
    """One character per standard generator; together they generate all characters mod n."""
    _, orders, _ = unit_group(modulus)
    out = []
    for i in range(len(orders)):
        img = [0] * len(orders)
        img[i] = 1
        out.append(DirichletCharacter.from_images(modulus, img))
    return out


def kronecker_character(d):
    """The quadratic character of a fundamental discriminant ``d``."""
    m = abs(d)
    exps = []
    for a in range(m):
        if gcd(a, m) != 1:
            exps.append(None)
            continue
        v = _kronecker(d, a)
        exps.append(0 if v == 1 else 1)
    return DirichletCharacter.from_table(m, 2, exps)


def _kronecker(d, a):
    # Kronecker symbol (d/a) for a > 0 coprime to d
    from sympy import jacobi_symbol

    result = 1
    while a % 2 == 0:
        a //= 2
        result *= 1 if d % 8 in (1, 7) else -1
    if a > 1:
        result *= jacobi_symbol(d % a, a)
    return result
