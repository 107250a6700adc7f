"""Rational functions kept as numerator over a multiset of linear factors.

Everything the ladder and the symmetry factors produce has a denominator
that is a product of linear forms (in a, b, c and in x), so cancellation is
trial division by known irreducible factors and no polynomial gcd is needed.
Factors are primitive with positive graded-lex leading coefficient; the
scalars lost to that normalization are folded into the numerator.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import moebius
from .multipoly import MultiPoly
from .ratfield import RatFunc, _compose_x

_ONE = MultiPoly.one()


@dataclass(frozen=True)
class FactoredRF:
    num: MultiPoly
    den: dict  # MultiPoly (irreducible, primitive, positive lead) -> int > 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_ratfunc(self) -> RatFunc:
        num, den_factors = reduce_factored(self.num, self.den)
        den = _ONE
        for factor, mult in den_factors.items():
            den = den * factor ** mult
        cont = den.content()
        if cont != 1:
            num = num.scale(1 / cont)
            den = den.scale(1 / cont)
        return RatFunc(num, den, _normalized=True)


def make_factored(num: MultiPoly, factors) -> FactoredRF:
    """Build from (factor, exponent) pairs, normalizing factors to primitive
    positive form; scalar contents move into the numerator."""
    den: dict[MultiPoly, int] = {}
    scale = None
    for poly, mult in factors:
        if mult == 0 or poly == _ONE:
            continue
        cont, prim = poly.primitive()
        if cont != 1:
            piece = cont ** mult
            scale = piece if scale is None else scale * piece
        if prim != _ONE:
            den[prim] = den.get(prim, 0) + mult
    if scale is not None:
        num = num.scale(1 / scale)
    return FactoredRF(num, den)


def reduce_factored(num: MultiPoly, den: dict):
    """Cancel denominator factors dividing the numerator."""
    if num.is_zero():
        return num, {}
    out = {}
    for factor, mult in den.items():
        while mult > 0:
            q = num.divide_exact(factor)
            if q is None:
                break
            num = q
            mult -= 1
        if mult:
            out[factor] = mult
    return num, out


def substitute_factored(fr: FactoredRF, params, xmap: int) -> FactoredRF:
    """Apply a,b,c -> affine forms and x -> Moebius map, keeping the factored
    shape: each linear factor substitutes to a linear factor times a power of
    the map's denominator line (rx + s), which is again x or x - 1."""
    p, q, r, s = moebius.MATRICES[xmap]
    lin_num = MultiPoly({(0, 0, 0, 1): p, (0, 0, 0, 0): q})
    lin_den = MultiPoly({(0, 0, 0, 1): r, (0, 0, 0, 0): s})

    replacements = {}
    if params is not None:
        for var, row in enumerate(params):
            ca, cb, cc, c1 = (int(v) for v in row)
            terms = {}
            if ca:
                terms[(1, 0, 0, 0)] = ca
            if cb:
                terms[(0, 1, 0, 0)] = cb
            if cc:
                terms[(0, 0, 1, 0)] = cc
            if c1:
                terms[(0, 0, 0, 0)] = c1
            replacements[var] = MultiPoly(terms)

    def sub_abc(poly: MultiPoly) -> MultiPoly:
        return poly.substitute_polys(replacements) if replacements else poly

    num = sub_abc(fr.num)
    lin_den_power = 0  # net (rx+s) exponent pushed to the denominator
    if xmap != moebius.IDENTITY:
        dn = max(num.degree(3), 0)
        num = _compose_x(num, lin_num, lin_den, dn)
        lin_den_power = dn

    new_factors: list[tuple[MultiPoly, int]] = []
    for factor, mult in fr.den.items():
        sub = sub_abc(factor)
        if xmap != moebius.IDENTITY:
            df = max(sub.degree(3), 0)
            sub = _compose_x(sub, lin_num, lin_den, df)
            lin_den_power -= df * mult
        new_factors.append((sub, mult))
    if lin_den_power > 0:
        new_factors.append((lin_den, lin_den_power))
    elif lin_den_power < 0:
        num = num * lin_den ** (-lin_den_power)
    return make_factored(num, new_factors)


def factored_equal(left: FactoredRF, right: FactoredRF,
                   extra_num=None, extra_den=None, negate: bool = False
                   ) -> bool:
    """Exact check of left == (+-) right * prod(extra_num)/prod(extra_den).

    The extras are (factor, exponent) lists (exponents may repeat factors);
    common denominator factors cancel first so cross-multiplication only
    ever multiplies the big numerators by a handful of linear forms.
    """
    if left.is_zero() or right.is_zero():
        if extra_num is not None and any(f.is_zero() for f, e in extra_num):
            return left.is_zero()
        return left.is_zero() and right.is_zero()
    lden = dict(left.den)
    rden = dict(right.den)
    scale = None
    if extra_num:
        for poly, mult in extra_num:
            cont, prim = poly.primitive()
            if cont != 1:
                piece = cont ** mult
                scale = piece if scale is None else scale * piece
            if prim != _ONE:
                lden[prim] = lden.get(prim, 0) + mult
    if extra_den:
        for poly, mult in extra_den:
            cont, prim = poly.primitive()
            if cont != 1:
                piece = cont ** mult
                scale = (1 / piece) if scale is None else scale / piece
            if prim != _ONE:
                rden[prim] = rden.get(prim, 0) + mult
    # cancel the shared part
    for factor in list(lden):
        if factor in rden:
            common = min(lden[factor], rden[factor])
            lden[factor] -= common
            rden[factor] -= common
            if not lden[factor]:
                del lden[factor]
            if not rden[factor]:
                del rden[factor]
    lhs = left.num
    for factor, mult in rden.items():
        for _ in range(mult):
            lhs = lhs * factor
    rhs = right.num
    for factor, mult in lden.items():
        for _ in range(mult):
            rhs = rhs * factor
    if scale is not None:
        rhs = rhs.scale(scale)
    if negate:
        rhs = -rhs
    return lhs == rhs
