"""High-precision real arithmetic settings.

All transcendental work goes through :mod:`mpmath`.  The working precision is
a binary mantissa width; the default is 128 bits.  ``exact_tolerance`` is the
relative tolerance used for identities that hold exactly in the reals.
"""

from contextlib import contextmanager

import mpmath

DEFAULT_PREC = 128


def exact_tolerance(prec=DEFAULT_PREC):
    # 2^-100 at 128 bits; keep the same 28-bit margin at other widths
    return mpmath.mpf(2) ** -(prec - 28)


@contextmanager
def precision(prec=None):
    """Run a block at ``prec`` bits (the default width when ``None``)."""
    with mpmath.workprec(prec or DEFAULT_PREC):
        yield


def mpf(x):
    return mpmath.mpf(x)


def close(a, b, rel, abs_floor=None):
    """Relative closeness with an absolute floor for values near zero.

    ``abs_floor`` defaults to ``rel`` so that comparisons against an exact
    zero degrade to an absolute test at the same scale.
    """
    if abs_floor is None:
        abs_floor = rel
    diff = abs(mpmath.mpf(a) - mpmath.mpf(b))
    scale = max(abs(mpmath.mpf(a)), abs(mpmath.mpf(b)))
    return diff <= max(rel * scale, abs_floor)


def fmt(x, digits=30):
    """Locale-free decimal rendering with ``digits`` significant digits."""
    if isinstance(x, int):
        return str(x)
    x = mpmath.mpf(x)
    if mpmath.isinf(x) or mpmath.isnan(x):
        return str(x)
    return mpmath.nstr(x, digits, min_fixed=-6, max_fixed=12, strip_zeros=False)
