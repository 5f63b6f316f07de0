"""Prime decomposition in abelian fields and discriminant exponents.

Splitting is read off the character group: a prime ``p`` is unramified for
exactly the characters whose conductor it does not divide, and the residue
degree is the order of ``p`` (Frobenius) on that subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import mpmath
from sympy import factorint, isprime

from .errors import InconsistentRamification, NonIntegralExponent, NotASubfield


@dataclass(frozen=True)
class SplitData:
    p: int
    e: int
    f: int
    g: int

    @property
    def degree(self):
        return self.e * self.f * self.g


@dataclass(frozen=True)
class RamExponent:
    """Ramification of the primes of K above ``p`` in L/K.

    ``e`` is the relative ramification index, ``beta`` the wild excess, and
    ``disc_exponent = [L:K](1 - 1/e + beta/e)`` the exponent of each prime
    norm in N_{K/Q} D_{L/K}.  ``count`` primes of K of norm ``norm`` lie
    over ``p``.
    """

    p: int
    e: int
    beta: int
    index: int
    norm: int = 0
    count: int = 1

    @property
    def disc_exponent(self):
        return self.index * (1 - Fraction(1, self.e) + Fraction(self.beta, self.e))

    @property
    def tame(self):
        return self.e % self.p != 0


def split_prime(K, p):
    """(e, f, g) of the rational prime ``p`` in ``K``."""
    unram = [chi for chi in K.characters if chi.conductor % p]
    e = K.degree // len(unram)
    f = 1
    for chi in unram:
        k = chi.value_exp(p)
        f = lcm(f, chi.order // gcd(k, chi.order))
    return SplitData(p, e, f, K.degree // (e * f))


def count_phi(K, alpha, prime_bound):
    """Number of places of ``K`` of norm ``alpha``.

    ``alpha`` is a prime power, or the strings ``"R"`` / ``"C"`` for real and
    complex places.  Prime-power queries above ``prime_bound`` are rejected.
    """
    if alpha == "R":
        return K.r1
    if alpha == "C":
        return K.r2
    q = int(alpha)
    fac = factorint(q)
    if q < 2 or len(fac) != 1:
        raise ValueError(f"{alpha!r} is not a prime power")
    ((p, k),) = fac.items()
    if p > prime_bound:
        raise ValueError(f"prime {p} exceeds the prime bound {prime_bound}")
    sd = split_prime(K, p)
    return sd.g if sd.f == k else 0


def disc_formula(ram, g_base=None):
    """Assemble N_{K/Q} D_{L/K} from per-prime exponents.

    Returns ``(norm_disc, rel_genus, genus_per_degree)``.  ``genus_per_degree``
    is g_L/[L:K] = g_K + (1/2) sum (1 - 1/e + beta/e) log Np and is ``None``
    when ``g_base`` is not given.
    """
    total = 1
    half_sum = mpmath.mpf(0)
    for r in ram:
        x = r.disc_exponent
        if x.denominator != 1 or x < 0:
            raise NonIntegralExponent(f"exponent {x} at p={r.p} is not a non-negative integer")
        total *= r.norm ** (int(x) * r.count)
        weight = 1 - Fraction(1, r.e) + Fraction(r.beta, r.e)
        half_sum += r.count * mpmath.mpf(weight.numerator) / weight.denominator * mpmath.log(r.norm) / 2
    rel_genus = mpmath.log(total) / 2
    per_degree = None if g_base is None else g_base + half_sum
    return total, rel_genus, per_degree


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def solve_beta(L, K, p):
    """Solve the wild excess ``beta`` at ``p`` for L/K from discriminant exponents."""
    if not L.contains(K):
        raise NotASubfield(f"{K.label} is not contained in {L.label}")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    index = L.degree // K.degree
    sL, sK = split_prime(L, p), split_prime(K, p)
    e = sL.e // sK.e
    v = _vp(L.abs_disc, p) - index * _vp(K.abs_disc, p)
    # v = g_K f_K [L:K] (e - 1 + beta) / e
    per_prime = Fraction(v, sK.g * sK.f * index)
    beta = per_prime * e - e + 1
    if beta.denominator != 1 or beta < 0:
        raise InconsistentRamification(f"beta={beta} at p={p} for {L.label}/{K.label}")
    beta = int(beta)
    if (beta == 0) != (e % p != 0):
        raise InconsistentRamification(f"tameness mismatch at p={p}: e={e}, beta={beta}")
    return RamExponent(p=p, e=e, beta=beta, index=index, norm=p**sK.f, count=sK.g)


def ramification_data(L, K):
    """RamExponent for every prime of K ramified in L (sorted by p)."""
    primes = sorted(factorint(relative_disc(L, K)).keys())
    return [solve_beta(L, K, p) for p in primes]


def relative_disc(L, K):
    from .fields import relative_disc_norm

    return relative_disc_norm(L, K)


def ramified_primes(K):
    return sorted(factorint(K.abs_disc).keys()) if K.abs_disc > 1 else []
