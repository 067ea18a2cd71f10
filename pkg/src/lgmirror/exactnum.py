"""Exact rational arithmetic helpers.

All values in this package are exact rationals.  gmpy2.mpq is used when
available (noticeably faster on the larger WDVV solves); fractions.Fraction
is the drop-in fallback.  Both types share the operations we rely on:
construction from (p, q), `.numerator`/`.denominator`, hashing, ordering,
and `str()` rendering as "p/q" (or "p" for integers).
"""

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as QQ

Q0 = QQ(0)
Q1 = QQ(1)
HALF = QQ(1, 2)


def qfloor(x):
    return x.numerator // x.denominator


def qfrac(x):
    """Fractional part in [0, 1), exact."""
    return x - qfloor(x)


def is_integer(x):
    return x.denominator == 1


def qstr(x):
    """Canonical string form: 'p/q' reduced, 'p' when integral."""
    return str(QQ(x))


def bernoulli2(x):
    """Second Bernoulli polynomial B_2(x) = x^2 - x + 1/6."""
    return x * x - x + QQ(1, 6)
