"""Exact rational coefficient domain.

gmpy2.mpq is used when available (much faster big-rational arithmetic);
fractions.Fraction is a drop-in fallback.  Both keep gcd(|num|, den) = 1
and den >= 1, so the normalization invariants hold for free.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq, mpz as _mpz, gcd as qgcd, lcm as qlcm

    def Q(num=0, den=1):
        return _mpq(num, den)

    def is_rational(v) -> bool:
        return isinstance(v, (_mpq, Fraction, int)) or isinstance(v, type(_mpz(0)))

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from math import gcd as qgcd, lcm as qlcm

    def Q(num=0, den=1):
        return Fraction(num, den)

    def is_rational(v) -> bool:
        return isinstance(v, (Fraction, int))

    HAVE_GMPY2 = False

QZERO = Q(0)
QONE = Q(1)


def as_q(v):
    """Coerce ints, Fractions, mpqs and 'p/q' strings to the coefficient type."""
    if isinstance(v, str):
        if "/" in v:
            p, q = v.split("/")
            return Q(int(p), int(q))
        return Q(int(v))
    if isinstance(v, Fraction):
        return Q(v.numerator, v.denominator)
    return Q(v)


def q_str(v) -> str:
    """Serialize as 'p/q' (always with an explicit denominator)."""
    return f"{v.numerator}/{v.denominator}"


def to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))
