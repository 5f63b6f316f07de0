"""Elementary class-number and regulator computations.

These use binary quadratic forms and continued fractions only, sharing no
code with the L-function route, so they serve as independent checks of
log(hR).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import mpmath

from .numeric import precision


def class_number_imag(D):
    """h(D) for a negative discriminant by counting reduced primitive forms."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {D}")
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            if b < 0 and (a == c):
                continue
            h += 1
        a += 1
    return h


def _reduced_indefinite(D):
    """Reduced primitive forms: 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b."""
    out = []
    for b in range(1, isqrt(D) + 1):
        if b * b >= D or (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        for m in range(1, -ac + 1):
            if ac % m:
                continue
            if (2 * m + b) ** 2 <= D:
                continue
            if 2 * m - b > 0 and (2 * m - b) ** 2 >= D:
                continue
            for a in (m, -m):
                c = ac // a
                if gcd(gcd(m, b), abs(c)) == 1:
                    out.append((a, b, c))
    return out


def _rho(form, D):
    """One reduction step (a, b, c) -> (c, b', a') with b' = -b mod 2c in the reduced window."""
    a, b, c = form
    r = isqrt(D)
    two_c = 2 * abs(c)
    # choose b' = -b mod 2|c| with r - 2|c| < b' <= r
    bp = (-b) % two_c
    while bp <= r - two_c:
        bp += two_c
    while bp > r:
        bp -= two_c
    cp = (bp * bp - D) // (4 * c)
    return (c, bp, cp)


def narrow_class_number_real(D):
    """Number of cycles of reduced indefinite forms of discriminant D > 0 (narrow class number)."""
    forms = set(_reduced_indefinite(D))
    seen = set()
    cycles = 0
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D)
    return cycles


def fundamental_unit(D):
    """Fundamental unit of the quadratic order of discriminant D > 0.

    Returns ``(x, y, norm)`` with eps = x + y sqrt(D/4) when 4 | D (found
    among the continued-fraction convergents of sqrt(D/4)), otherwise
    eps = x + y sqrt(D) with x, y half-integers (found by increasing y).
    """
    if D % 4 == 0:
        d = D // 4
        # convergents p/q of sqrt(d)
        a0 = isqrt(d)
        m, den, a = 0, 1, a0
        p_prev, p = 1, a0
        q_prev, q = 0, 1
        while True:
            norm = p * p - d * q * q
            if norm in (1, -1):
                return p, q, norm
            m = den * a - m
            den = (d - m * m) // den
            a = (a0 + m) // den
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
    # D = 1 mod 4: units (u + v sqrt D)/2 with u^2 - D v^2 = +-4; search v upward
    v = 1
    while True:
        for sign in (-4, 4):
            u2 = D * v * v + sign
            u = isqrt(u2) if u2 > 0 else -1
            if u > 0 and u * u == u2:
                return Fraction(u, 2), Fraction(v, 2), sign // 4
        v += 1


def log_fundamental_unit(D, prec=None):
    with precision(prec):
        x, y, _ = fundamental_unit(D)
        if D % 4 == 0:
            return mpmath.log(x + y * mpmath.sqrt(D // 4))
        return mpmath.log(mpmath.mpf(x.numerator) / x.denominator + mpmath.mpf(y.numerator) / y.denominator * mpmath.sqrt(D))


def class_number_real(D):
    """h(D) for a positive fundamental discriminant: narrow h, halved when N(eps) = +1."""
    h_plus = narrow_class_number_real(D)
    _, _, norm = fundamental_unit(D)
    return h_plus if norm == -1 else h_plus // 2


def log_hr_quadratic(D, prec=None):
    """log(h R) for the quadratic field of fundamental discriminant D."""
    with precision(prec):
        if D < 0:
            return mpmath.log(class_number_imag(D))
        return mpmath.log(class_number_real(D)) + mpmath.log(log_fundamental_unit(D))


def log_hr_zeta5(prec=None):
    """log(h R) for Q(zeta_5) from elementary pieces.

    h = h^- h^+ with h^- = Q w prod over odd chi of (-B_{1,chi}/2) (Q = 1 for
    prime-power cyclotomic fields, w = 10) and h^+ the class number of
    Q(sqrt 5).  The unit index is 1, so R = 2 R^+ with R^+ = log of the golden
    ratio (the factor 2 = [K:K^+] scales the log embedding of a real unit).
    """
    from .characters import all_characters

    with precision(prec):
        # Gaussian rationals as (re, im) pairs; the odd characters mod 5 have order 4
        units = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        prod = (Fraction(1), Fraction(0))
        for chi in all_characters(5):
            if chi.even:
                continue
            re = sum(Fraction(units[chi.exps[a] * (4 // chi.order) % 4][0] * a, 5) for a in range(1, 5))
            im = sum(Fraction(units[chi.exps[a] * (4 // chi.order) % 4][1] * a, 5) for a in range(1, 5))
            x, y = -re / 2, -im / 2
            prod = (prod[0] * x - prod[1] * y, prod[0] * y + prod[1] * x)
        if prod[1] != 0:
            raise ArithmeticError("relative class number is not real")
        h_minus = 10 * prod[0]
        if h_minus.denominator != 1:
            raise ArithmeticError("relative class number is not an integer")
        h_minus = int(h_minus)
        h_plus = class_number_real(5)
        R = 2 * log_fundamental_unit(5)
        return mpmath.log(h_minus * h_plus) + mpmath.log(R), h_minus, h_plus


def leibniz_quarter_pi(terms=10**5):
    """Partial sum of 1 - 1/3 + 1/5 - ... and the alternating-series error bound."""
    total = 0.0
    for k in range(terms):
        total += (-1) ** k / (2 * k + 1)
    return total, 1 / (2 * terms + 1)
