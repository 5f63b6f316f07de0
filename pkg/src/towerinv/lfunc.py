"""L(1, chi) by finite closed forms and log(h R) by the residue formula.

For a primitive character of conductor m:

* odd:  |L(1, chi)| = pi / m^(3/2) * |sum_a conj(chi)(a) * a|
* even: |L(1, chi)| = 1 / sqrt(m) * |sum_a conj(chi)(a) * log sin(pi a / m)|

Both follow from the Gauss-sum expansion with |tau(chi)| = sqrt(m).  The
product over non-principal characters is the residue of the Dedekind zeta
function at s = 1, which turns into log(h R) after removing the archimedean
and torsion factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .errors import NumericalInconsistency, PrincipalCharacter, ZeroGenus
from .numeric import DEFAULT_PREC, precision

MAX_PREC = 1024


@dataclass(frozen=True)
class LValue:
    character: object
    value: mpmath.mpf
    log_value: mpmath.mpf


@dataclass(frozen=True)
class ClassRegData:
    field: object
    log_residue: mpmath.mpf
    log_hr: mpmath.mpf


@lru_cache(maxsize=64)
def _roots(order, prec):
    with mpmath.workprec(prec):
        return tuple(mpmath.expjpi(mpmath.mpf(2 * k) / order) for k in range(order))


@lru_cache(maxsize=256)
def _log_sines(m, prec):
    with mpmath.workprec(prec):
        return tuple(mpmath.log(mpmath.sinpi(mpmath.mpf(a) / m)) if a else None for a in range(m))


def _closed_form(chi, prec):
    m = chi.modulus
    with mpmath.workprec(prec + 20):
        roots = _roots(chi.order, prec + 20)
        total = mpmath.mpc(0)
        if chi.even:
            weights = _log_sines(m, prec + 20)
            for a in range(1, m):
                k = chi.exps[a]
                if k is not None:
                    total += roots[-k % chi.order] * weights[a]
            value = abs(total) / mpmath.sqrt(m)
        else:
            for a in range(1, m):
                k = chi.exps[a]
                if k is not None:
                    total += roots[-k % chi.order] * a
            value = mpmath.pi * abs(total) / mpmath.mpf(m) ** 1.5
    return value


def l_one(chi, prec=None):
    """|L(1, chi)| for a primitive non-principal character.

    The closed form is evaluated at the working width and again with 64 guard
    bits; if the two disagree beyond 2^-(prec-28) relative, the mantissa is
    doubled and the comparison repeated.
    """
    if chi.is_principal:
        raise PrincipalCharacter("L(1, chi) has a pole for the principal character")
    chi = chi.primitive()
    prec = prec or DEFAULT_PREC
    work = prec
    while True:
        a = _closed_form(chi, work)
        b = _closed_form(chi, work + 64)
        with mpmath.workprec(work + 64):
            ok = abs(a - b) <= abs(b) * mpmath.mpf(2) ** -(prec - 28)
        if ok or work >= MAX_PREC:
            break
        work *= 2
    with mpmath.workprec(prec):
        value = +b
        return LValue(chi, value, mpmath.log(value))


def l_one_series(chi, terms=10**6):
    """Partial sum of sum chi(n)/n with a rigorous bound on the neglected tail.

    Returns ``(abs_partial, tail_bound)``.  By Abel summation the tail past N is
    at most 2 * max|S(x)| / (N + 1), S the character sum over a period prefix.
    The partial sum is formed in double precision by pairwise summation, so its
    rounding error is below (log2 N + 2) * eps * sum |chi(n)/n| <= (log2 N + 2)
    * eps * (ln N + 1); that amount is added to the bound.
    """
    import numpy as np

    if chi.is_principal:
        raise PrincipalCharacter("series diverges for the principal character")
    m = chi.modulus
    vals = np.zeros(m, dtype=complex)
    for a, k in enumerate(chi.exps):
        if k is not None:
            vals[a] = np.exp(2j * np.pi * k / chi.order)
    n = np.arange(1, terms + 1)
    partial = np.sum(vals[n % m] / n)
    prefix = np.cumsum(vals[np.arange(m)])
    max_s = float(np.max(np.abs(prefix)))
    tail = 2 * max_s / (terms + 1)
    eps = np.finfo(float).eps
    rounding = (math.log2(terms) + 2) * eps * (math.log(terms) + 1) * 2
    return float(abs(partial)), tail + rounding


def log_hr(K, prec=None):
    """log(h_K R_K) from the analytic class number formula."""
    prec = prec or DEFAULT_PREC
    with precision(prec):
        if K.degree == 1:
            zero = mpmath.mpf(0)
            return ClassRegData(K, zero, zero)
        # deterministic reduction order: characters are stored sorted
        log_residue = mpmath.mpf(0)
        for chi in K.characters:
            if not chi.is_principal:
                log_residue += l_one(chi, prec).log_value
        value = (
            mpmath.log(K.w)
            + K.genus
            - K.r1 * mpmath.log(2)
            - K.r2 * mpmath.log(2 * mpmath.pi)
            + log_residue
        )
        if K.r1 + K.r2 == 1:
            # unit rank 0: R = 1 and h >= 1, so only rounding may push this below 0
            if value < -mpmath.mpf(2) ** -(mpmath.mp.prec - 28) * max(1, K.genus):
                raise NumericalInconsistency(f"log(hR) = {value} < 0 for {K.label} with unit rank 0")
        return ClassRegData(K, log_residue, value)


def bs_numerator(K, prec=None):
    """log(h_K R_K) / g_K, the per-field Brauer-Siegel ratio."""
    if K.abs_disc == 1:
        raise ZeroGenus("g_K = 0 for the rational field")
    with precision(prec):
        return log_hr(K).log_hr / K.genus
